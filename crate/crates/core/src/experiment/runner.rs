use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{greedy_schedule, Rounder};
use crate::error::{Error, Result};
use crate::exact::{
    brute_force_opt, solve_constant_m_with, solve_single_vehicle, solve_zero_charge,
    BruteForceLimits, ConstMLimits,
};
use crate::experiment::generator::{generate_instance, GenConfig, DEFAULT_HORIZON};
use crate::experiment::mix_seed;
use crate::lp::{build_lp_relaxation, solve_lp, FractionalSolution};
use crate::model::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "G")]
    Greedy,
    #[serde(rename = "RR")]
    RandomizedRounding,
    #[serde(rename = "BRR")]
    BoostedRandomizedRounding,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Greedy,
        Algorithm::RandomizedRounding,
        Algorithm::BoostedRandomizedRounding,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Greedy => "G",
            Algorithm::RandomizedRounding => "RR",
            Algorithm::BoostedRandomizedRounding => "BRR",
        }
    }

    fn needs_lp(self) -> bool {
        !matches!(self, Algorithm::Greedy)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// What a ratio was measured against. Ordered from strongest to weakest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Denominator {
    /// The exact optimum.
    #[serde(rename = "exact")]
    Exact,
    /// The LP relaxation optimum.
    #[serde(rename = "lp")]
    LpBound,
    /// The optimum with recharge constraints dropped.
    #[serde(rename = "relaxed")]
    RelaxedBound,
}

impl fmt::Display for Denominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Denominator::Exact => "exact",
            Denominator::LpBound => "lp",
            Denominator::RelaxedBound => "relaxed",
        })
    }
}

/// Decides how each trial's denominator is computed and which LPs may be solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePolicy {
    pub brute_force: BruteForceLimits,
    /// Largest fleet for which the constant-`m` DP provides the optimum.
    pub exact_dp: ConstMLimits,
    pub lp_variable_cap: usize,
    pub allow_large_lp: bool,
    pub repeats: usize,
}

impl Default for OraclePolicy {
    fn default() -> Self {
        Self {
            brute_force: BruteForceLimits::default(),
            exact_dp: ConstMLimits {
                max_vehicles: 5,
                max_table_entries: 4_000_000,
            },
            lp_variable_cap: 50_000,
            allow_large_lp: false,
            repeats: crate::approx::DEFAULT_REPEATS,
        }
    }
}

impl OraclePolicy {
    fn lp_allowed(&self, variables: usize) -> bool {
        self.allow_large_lp || variables <= self.lp_variable_cap
    }

    /// Exact optimum if some exact method applies within its caps.
    fn exact_optimum(&self, inst: &Instance) -> Option<Result<f64>> {
        let solved = if self.brute_force.admits(inst) {
            brute_force_opt(inst, self.brute_force)
        } else if inst.num_vehicles() == 1 {
            solve_single_vehicle(inst)
        } else if inst.vehicles.iter().all(|v| v.charge_time == 0) {
            solve_zero_charge(inst)
        } else if self.exact_dp.table_entries(inst).is_ok() {
            solve_constant_m_with(inst, self.exact_dp)
        } else {
            return None;
        };
        Some(solved.map(|s| s.total_reward))
    }
}

/// Upper bound from dropping every recharge constraint: at each time the
/// available vehicles take the best positive rewards.
pub fn zero_charge_bound(inst: &Instance) -> f64 {
    inst.times()
        .map(|t| {
            let available = inst.vehicles.iter().filter(|v| v.is_available(t)).count();
            let mut rewards: Vec<f64> = (0..inst.stations)
                .map(|j| inst.reward(j, t))
                .filter(|&p| p > 0.0)
                .collect();
            rewards.sort_by(|a, b| b.total_cmp(a));
            rewards.iter().take(available).sum::<f64>()
        })
        .sum()
}

/// Number of LP variables `build_lp_relaxation` would create.
pub fn lp_variable_count(inst: &Instance) -> usize {
    let positive: Vec<usize> = inst
        .times()
        .map(|t| {
            (0..inst.stations)
                .filter(|&j| inst.reward(j, t) > 0.0)
                .count()
        })
        .collect();
    inst.vehicles
        .iter()
        .flat_map(|v| v.availability.iter().map(|&t| positive[t - 1]))
        .sum()
}

/// Cells `stations x ratios`, each run for `trials` trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentGrid {
    pub stations: Vec<usize>,
    pub ratios: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub horizon: usize,
}

impl ExperimentGrid {
    pub fn new(stations: Vec<usize>, ratios: Vec<usize>, trials: usize, seed: u64) -> Self {
        Self {
            stations,
            ratios,
            trials,
            seed,
            horizon: DEFAULT_HORIZON,
        }
    }

    fn cells(&self) -> Vec<GenConfig> {
        let mut cells = Vec::new();
        for &ratio in &self.ratios {
            for &stations in &self.stations {
                cells.push(GenConfig {
                    stations,
                    ratio,
                    horizon: self.horizon,
                    seed: self.seed,
                    trials: self.trials,
                });
            }
        }
        cells
    }
}

/// Outcome of one algorithm on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub stations: usize,
    pub ratio: usize,
    pub trial: usize,
    pub algorithm: Algorithm,
    pub denominator: Denominator,
    pub denominator_value: f64,
    /// `Err` holds the failure message.
    pub reward: std::result::Result<f64, String>,
    pub elapsed_ms: f64,
}

impl TrialRecord {
    /// Reward over denominator; a zero denominator counts as ratio 1.
    pub fn empirical_ratio(&self) -> Option<f64> {
        let reward = *self.reward.as_ref().ok()?;
        Some(if self.denominator_value <= 1e-12 {
            1.0
        } else {
            reward / self.denominator_value
        })
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

fn run_one(
    cfg: &GenConfig,
    trial: usize,
    algorithms: &[Algorithm],
    policy: &OraclePolicy,
) -> Result<Vec<TrialRecord>> {
    let inst = generate_instance(cfg, trial)?;
    let rounding_seed = mix_seed(&[cfg.trial_key(trial), 0x5252]);

    let wants_lp = algorithms.iter().any(|a| a.needs_lp());
    let lp_vars = lp_variable_count(&inst);
    let lp_ok = policy.lp_allowed(lp_vars);
    let mut lp: Option<std::result::Result<FractionalSolution, String>> = None;
    let solve_once = |lp: &mut Option<_>| {
        if lp.is_none() {
            *lp = Some(if lp_ok {
                solve_lp(&build_lp_relaxation(&inst)).map_err(|e| e.to_string())
            } else {
                Err(format!(
                    "LP has {lp_vars} variables, over the cap of {}",
                    policy.lp_variable_cap
                ))
            });
        }
    };

    let (denominator, denominator_value) = match policy.exact_optimum(&inst) {
        Some(v) => (Denominator::Exact, v?),
        None if lp_ok => {
            solve_once(&mut lp);
            match lp.as_ref().unwrap() {
                Ok(sol) => (Denominator::LpBound, sol.objective),
                Err(msg) => return Err(Error::Solver(msg.clone())),
            }
        }
        None => (Denominator::RelaxedBound, zero_charge_bound(&inst)),
    };
    if wants_lp {
        solve_once(&mut lp);
    }

    let mut records = Vec::new();
    let rounder = match lp.as_ref() {
        Some(Ok(sol)) => Some(Rounder::new(&inst, sol).map_err(|e| e.to_string())),
        Some(Err(msg)) => Some(Err(msg.clone())),
        None => None,
    };
    for &algorithm in algorithms {
        let (reward, elapsed_ms) = timed(|| -> std::result::Result<f64, String> {
            match algorithm {
                Algorithm::Greedy => greedy_schedule(&inst)
                    .map(|s| s.total_reward)
                    .map_err(|e| e.to_string()),
                Algorithm::RandomizedRounding | Algorithm::BoostedRandomizedRounding => {
                    let rounder = rounder.as_ref().unwrap().as_ref().map_err(Clone::clone)?;
                    let repeats = if algorithm == Algorithm::RandomizedRounding {
                        1
                    } else {
                        policy.repeats
                    };
                    rounder
                        .round_boosted(repeats, rounding_seed)
                        .map(|s| s.total_reward)
                        .map_err(|e| e.to_string())
                }
            }
        });
        records.push(TrialRecord {
            stations: cfg.stations,
            ratio: cfg.ratio,
            trial,
            algorithm,
            denominator,
            denominator_value,
            reward,
            elapsed_ms,
        });
    }
    Ok(records)
}

/// Runs every trial of every cell. Trials run in parallel; records come
/// back sorted by `(R, n, trial, algorithm)`.
pub fn run_trials(
    grid: &ExperimentGrid,
    algorithms: &[Algorithm],
    policy: &OraclePolicy,
) -> Result<Vec<TrialRecord>> {
    let cells = grid.cells();
    for cfg in &cells {
        cfg.validate()?;
    }
    let jobs: Vec<(GenConfig, usize)> = cells
        .iter()
        .flat_map(|cfg| (0..cfg.trials).map(move |t| (*cfg, t)))
        .collect();
    let mut records: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|(cfg, trial)| {
            run_one(cfg, *trial, algorithms, policy).unwrap_or_else(|e| {
                // The trial could not even be set up: every algorithm fails.
                algorithms
                    .iter()
                    .map(|&algorithm| TrialRecord {
                        stations: cfg.stations,
                        ratio: cfg.ratio,
                        trial: *trial,
                        algorithm,
                        denominator: Denominator::RelaxedBound,
                        denominator_value: f64::NAN,
                        reward: Err(e.to_string()),
                        elapsed_ms: 0.0,
                    })
                    .collect()
            })
        })
        .flatten()
        .collect();
    records.sort_by_key(|r| (r.ratio, r.stations, r.trial, r.algorithm));
    Ok(records)
}

/// Per-cell, per-algorithm summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub ratio: usize,
    pub stations: usize,
    pub algorithm: Algorithm,
    /// Mean empirical ratio over successful trials.
    pub mean_ratio: Option<f64>,
    /// Weakest denominator used by any trial of the cell.
    pub denominator: Denominator,
    /// Successful trials.
    pub trials: usize,
    pub failures: usize,
    pub mean_ms: f64,
    pub max_ms: f64,
}

/// Averages trial records into rows sorted by `(R, n, algorithm)`.
pub fn aggregate(records: &[TrialRecord]) -> Vec<ResultRow> {
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.ratio, r.stations, r.algorithm, r.trial));
    let mut rows = Vec::new();
    for group in sorted
        .chunk_by(|a, b| (a.ratio, a.stations, a.algorithm) == (b.ratio, b.stations, b.algorithm))
    {
        let ratios: Vec<f64> = group.iter().filter_map(|r| r.empirical_ratio()).collect();
        let times: Vec<f64> = group.iter().map(|r| r.elapsed_ms).collect();
        rows.push(ResultRow {
            ratio: group[0].ratio,
            stations: group[0].stations,
            algorithm: group[0].algorithm,
            mean_ratio: (!ratios.is_empty())
                .then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
            denominator: group.iter().map(|r| r.denominator).max().unwrap(),
            trials: ratios.len(),
            failures: group.len() - ratios.len(),
            mean_ms: times.iter().sum::<f64>() / times.len() as f64,
            max_ms: times.iter().copied().fold(0.0, f64::max),
        });
    }
    rows
}

pub fn run_experiment(
    grid: &ExperimentGrid,
    algorithms: &[Algorithm],
    policy: &OraclePolicy,
) -> Result<Vec<ResultRow>> {
    Ok(aggregate(&run_trials(grid, algorithms, policy)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Vehicle;

    #[test]
    fn relaxed_bound_takes_top_rewards() {
        let inst = Instance::new(
            2,
            3,
            vec![vec![5.0, 1.0], vec![7.0, -1.0], vec![2.0, 3.0]],
            vec![Vehicle::new([1, 2], 4), Vehicle::new([1], 4)],
        )
        .unwrap();
        assert_eq!(zero_charge_bound(&inst), 12.0 + 3.0);
    }

    #[test]
    fn variable_count_matches_model() {
        let cfg = GenConfig::new(4, 2, 3, 1);
        let inst = generate_instance(&cfg, 0).unwrap();
        assert_eq!(
            lp_variable_count(&inst),
            build_lp_relaxation(&inst).num_variables()
        );
    }

    #[test]
    fn single_cell_rows() {
        let grid = ExperimentGrid::new(vec![1], vec![1], 3, 7);
        let rows = run_experiment(&grid, &Algorithm::ALL, &OraclePolicy::default()).unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            assert_eq!(row.denominator, Denominator::Exact);
            assert_eq!(row.trials, 3);
            assert_eq!(row.failures, 0);
        }
    }

    #[test]
    fn lp_cap_records_failures_and_continues() {
        let grid = ExperimentGrid::new(vec![3], vec![2], 2, 1);
        let policy = OraclePolicy {
            lp_variable_cap: 0,
            ..Default::default()
        };
        let rows = run_experiment(&grid, &Algorithm::ALL, &policy).unwrap();
        let greedy = rows
            .iter()
            .find(|r| r.algorithm == Algorithm::Greedy)
            .unwrap();
        assert_eq!(greedy.trials, 2);
        let rr = rows
            .iter()
            .find(|r| r.algorithm == Algorithm::RandomizedRounding)
            .unwrap();
        assert_eq!((rr.trials, rr.failures), (0, 2));
        assert!(rr.mean_ratio.is_none());
    }
}
