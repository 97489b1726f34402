use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::mix_seed;
use crate::model::{Instance, Vehicle};

pub const DEFAULT_HORIZON: usize = 24;

const MAX_CHARGE_TIME: usize = 6;
const SHORT_INTERVAL_MAX: usize = 8;
const MAX_REWARD: f64 = 100.0;
const BAND: f64 = 25.0;
const STEP_DOWN: f64 = 0.7;
const STEP_UP: f64 = 1.3;

/// One cell of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    /// Number of stations `n`.
    pub stations: usize,
    /// Vehicles per station `R`; the instance has `R * n` vehicles.
    pub ratio: usize,
    pub horizon: usize,
    pub seed: u64,
    pub trials: usize,
}

impl GenConfig {
    pub fn new(stations: usize, ratio: usize, seed: u64, trials: usize) -> Self {
        Self {
            stations,
            ratio,
            horizon: DEFAULT_HORIZON,
            seed,
            trials,
        }
    }

    pub fn vehicles(&self) -> usize {
        self.stations * self.ratio
    }

    pub fn validate(&self) -> Result<()> {
        if self.stations == 0 || self.ratio == 0 || self.trials == 0 || self.horizon == 0 {
            return Err(Error::Precondition(format!(
                "stations, ratio, trials and horizon must be positive: {self:?}"
            )));
        }
        Ok(())
    }

    pub(crate) fn trial_key(&self, trial: usize) -> u64 {
        mix_seed(&[
            self.seed,
            self.stations as u64,
            self.ratio as u64,
            trial as u64,
        ])
    }
}

fn availability(rng: &mut ChaCha8Rng, horizon: usize) -> Vec<usize> {
    let (count, max_len) = if rng.gen_bool(0.5) {
        (1, horizon)
    } else {
        (3, SHORT_INTERVAL_MAX.min(horizon))
    };
    let mut times = Vec::new();
    for _ in 0..count {
        let len = rng.gen_range(1..=max_len);
        let start = rng.gen_range(1..=horizon);
        // Intervals running past the horizon are cut at T.
        times.extend(start..=(start + len - 1).min(horizon));
    }
    times
}

/// Admissible range of the next reward given the first and previous one.
pub(crate) fn reward_band(first: f64, prev: f64) -> (f64, f64) {
    let lo = f64::max(f64::max(STEP_DOWN * prev, first - BAND), 0.0);
    let hi = f64::min(f64::min(STEP_UP * prev, first + BAND), MAX_REWARD);
    (lo, hi)
}

fn reward_row(rng: &mut ChaCha8Rng, horizon: usize) -> Vec<f64> {
    let first = rng.gen_range(0.0..=MAX_REWARD);
    let mut row = Vec::with_capacity(horizon);
    row.push(first);
    for _ in 1..horizon {
        let prev = *row.last().unwrap();
        let (lo, hi) = reward_band(first, prev);
        row.push(if hi > lo { rng.gen_range(lo..=hi) } else { lo });
    }
    row
}

/// Random instance for trial `trial` of cell `cfg`; deterministic in
/// `(seed, n, R, trial)`.
pub fn generate_instance(cfg: &GenConfig, trial: usize) -> Result<Instance> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.trial_key(trial));
    let vehicles = (0..cfg.vehicles())
        .map(|_| {
            let charge_time = rng.gen_range(1..=MAX_CHARGE_TIME);
            Vehicle::new(availability(&mut rng, cfg.horizon), charge_time)
        })
        .collect();
    let rewards = (0..cfg.stations)
        .map(|_| reward_row(&mut rng, cfg.horizon))
        .collect();
    Instance::new(cfg.horizon, cfg.stations, rewards, vehicles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_ranges() {
        for trial in 0..20 {
            let inst = generate_instance(&GenConfig::new(5, 2, 11, 1), trial).unwrap();
            assert_eq!(inst.horizon, 24);
            assert_eq!(inst.num_vehicles(), 10);
            for v in &inst.vehicles {
                assert!((1..=6).contains(&v.charge_time));
                assert!(!v.availability.is_empty());
                assert!(v.availability.iter().all(|t| (1..=24).contains(t)));
            }
            for row in &inst.rewards {
                assert!(row.iter().all(|p| (0.0..=100.0).contains(p)));
            }
        }
    }

    #[test]
    fn band_after_fifty() {
        assert_eq!(reward_band(50.0, 50.0), (35.0, 65.0));
        assert_eq!(reward_band(90.0, 80.0), (65.0, 100.0));
        assert_eq!(reward_band(10.0, 2.0), (1.4, 2.6));
    }

    #[test]
    fn reward_walk_respects_bands() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let row = reward_row(&mut rng, 24);
            let first = row[0];
            for w in row.windows(2) {
                assert!(w[1] >= STEP_DOWN * w[0] - 1e-9 && w[1] <= STEP_UP * w[0] + 1e-9);
                assert!((w[1] - first).abs() <= BAND + 1e-9);
            }
        }
    }

    #[test]
    fn deterministic_per_trial() {
        let cfg = GenConfig::new(3, 2, 99, 4);
        assert_eq!(
            generate_instance(&cfg, 2).unwrap(),
            generate_instance(&cfg, 2).unwrap()
        );
        assert_ne!(
            generate_instance(&cfg, 2).unwrap(),
            generate_instance(&cfg, 3).unwrap()
        );
    }

    #[test]
    fn rejects_empty_cells() {
        assert!(generate_instance(&GenConfig::new(0, 1, 0, 1), 0).is_err());
    }
}
