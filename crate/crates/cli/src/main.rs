use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use valet_core::approx::{boosted_rr, greedy_schedule, randomized_rounding, DEFAULT_REPEATS};
use valet_core::exact::{
    brute_force_opt, solve_constant_m, solve_homogeneous, solve_single_vehicle, solve_zero_charge,
    BruteForceLimits,
};
use valet_core::experiment::{
    emit_results, run_experiment, Algorithm, ExperimentGrid, OraclePolicy, OutputFormat,
};
use valet_core::io::{load_instance, load_tdm, save_instance, save_schedule};
use valet_core::lp::lp_upper_bound;
use valet_core::reduction::{reduce_to_valet, verify_reduction};
use valet_core::{Error, Schedule};

#[derive(Parser)]
#[command(
    name = "valet",
    version,
    about = "Schedule EV discharges at grid stations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write the schedule as JSON.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rounding runs for `brr`.
        #[arg(long, default_value_t = DEFAULT_REPEATS)]
        repeats: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the simulation grid and write per-cell mean ratios.
    Bench {
        /// Station counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Vehicle-to-station ratios, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        ratio: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file; `-` writes to stdout.
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Solve LPs above the variable cap instead of falling back to a weaker bound.
        #[arg(long)]
        allow_large_lp: bool,
    },
    /// Build the scheduling instance for a 3D-matching input.
    Reduce {
        #[arg(long)]
        tdm: PathBuf,
        #[arg(long = "M")]
        big_m: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that the 3D-matching answer equals full-reward achievability.
    VerifyReduction {
        #[arg(long)]
        tdm: PathBuf,
        #[arg(long = "M")]
        big_m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Greedy,
    Rr,
    Brr,
    ZeroCharge,
    Single,
    ConstM,
    Homog,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if path == Path::new("-") {
        std::io::stdout()
            .write_all(bytes)
            .context("writing to stdout")
    } else {
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
    }
}

fn solve(inst_path: &Path, algo: Algo, seed: u64, repeats: usize) -> anyhow::Result<Schedule> {
    let inst = load_instance(&read(inst_path)?)?;
    let sched = match algo {
        Algo::Greedy => greedy_schedule(&inst)?,
        Algo::Rr => randomized_rounding(&inst, &lp_upper_bound(&inst)?, seed)?,
        Algo::Brr => boosted_rr(&inst, &lp_upper_bound(&inst)?, repeats, seed)?,
        Algo::ZeroCharge => solve_zero_charge(&inst)?,
        Algo::Single => solve_single_vehicle(&inst)?,
        Algo::ConstM => solve_constant_m(&inst)?,
        Algo::Homog => solve_homogeneous(&inst)?,
        Algo::Brute => brute_force_opt(&inst, BruteForceLimits::default())?,
    };
    Ok(sched)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Solve {
            instance,
            algo,
            seed,
            repeats,
            out,
        } => {
            let sched = solve(&instance, algo, seed, repeats)?;
            write(&out, &save_schedule(&sched)?)?;
            eprintln!(
                "{} discharges, total reward {}",
                sched.len(),
                sched.total_reward
            );
        }
        Command::Bench {
            n,
            ratio,
            trials,
            seed,
            format,
            out,
            allow_large_lp,
        } => {
            let grid = ExperimentGrid::new(n, ratio, trials, seed);
            let policy = OraclePolicy {
                allow_large_lp,
                ..OraclePolicy::default()
            };
            let rows = run_experiment(&grid, &Algorithm::ALL, &policy)?;
            let failures: usize = rows.iter().map(|r| r.failures).sum();
            if failures > 0 {
                eprintln!(
                    "warning: {failures} algorithm runs failed and are excluded from the means"
                );
            }
            let format = match format {
                Format::Csv => OutputFormat::Csv,
                Format::Md => OutputFormat::Markdown,
            };
            write(&out, &emit_results(&rows, format)?)?;
        }
        Command::Reduce { tdm, big_m, out } => {
            let tdm = load_tdm(&read(&tdm)?)?;
            write(&out, &save_instance(&reduce_to_valet(&tdm, big_m)?)?)?;
        }
        Command::VerifyReduction { tdm, big_m } => {
            let tdm = load_tdm(&read(&tdm)?)?;
            let check = verify_reduction(&tdm, big_m)?;
            println!(
                "{{\"matching_exists\": {}, \"full_reward_achievable\": {}}}",
                check.matching_exists, check.full_reward_achievable
            );
            if check.matching_exists != check.full_reward_achievable {
                bail!(Error::Solver("reduction equivalence does not hold".into()));
            }
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidInstance(_)
            | Error::IndexOutOfRange { .. }
            | Error::Precondition(_)
            | Error::LimitExceeded { .. },
        ) => 2,
        Some(Error::Solver(_) | Error::NonIntegral { .. } | Error::Packing { .. }) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
