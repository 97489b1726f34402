//! Simulation study: random instance generation, algorithm comparison
//! against exact optima or upper bounds, and table output.

mod generator;
mod report;
mod runner;

pub use generator::{generate_instance, GenConfig, DEFAULT_HORIZON};
pub use report::{emit_results, parse_csv, CsvRecord, OutputFormat};
pub use runner::{
    aggregate, lp_variable_count, run_experiment, run_trials, zero_charge_bound, Algorithm,
    Denominator, ExperimentGrid, OraclePolicy, ResultRow, TrialRecord,
};

/// Mixes a list of words into one 64-bit seed (splitmix64 finalizer).
pub(crate) fn mix_seed(parts: &[u64]) -> u64 {
    let mut h = 0x243F_6A88_85A3_08D3u64;
    for &p in parts {
        h ^= p;
        h = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}
