use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::IMPROVEMENT;
use crate::model::{Assignment, Instance, Schedule};

/// Size limits for the exhaustive oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimits {
    pub max_vehicles: usize,
    pub max_stations: usize,
    pub max_horizon: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        Self {
            max_vehicles: 4,
            max_stations: 3,
            max_horizon: 10,
        }
    }
}

impl BruteForceLimits {
    pub fn admits(&self, inst: &Instance) -> bool {
        self.check(inst).is_ok()
    }

    fn check(&self, inst: &Instance) -> Result<()> {
        let checks = [
            ("vehicle count", inst.num_vehicles(), self.max_vehicles),
            ("station count", inst.stations, self.max_stations),
            ("horizon", inst.horizon, self.max_horizon),
        ];
        for (what, actual, limit) in checks {
            if actual > limit {
                return Err(Error::LimitExceeded {
                    what,
                    actual,
                    limit,
                });
            }
        }
        Ok(())
    }
}

type Choice = Vec<(usize, usize)>;

struct Search<'a> {
    inst: &'a Instance,
    memo: HashMap<(usize, Vec<usize>), (f64, Choice)>,
}

impl Search<'_> {
    /// Best reward collectable from `t` on, given remaining recharge slots.
    fn best(&mut self, t: usize, counters: &[usize]) -> f64 {
        if t > self.inst.horizon {
            return 0.0;
        }
        if let Some((v, _)) = self.memo.get(&(t, counters.to_vec())) {
            return *v;
        }
        let eligible: Vec<usize> = (0..counters.len())
            .filter(|&i| counters[i] == 0 && self.inst.vehicles[i].is_available(t))
            .collect();
        let stations: Vec<usize> = (0..self.inst.stations)
            .filter(|&j| self.inst.reward(j, t) > 0.0)
            .collect();

        let mut choices = Vec::new();
        injections(
            &eligible,
            &stations,
            &mut vec![false; stations.len()],
            &mut Vec::new(),
            &mut choices,
        );

        let mut best_value = f64::NEG_INFINITY;
        let mut best_choice = Vec::new();
        for choice in choices {
            let gain: f64 = choice.iter().map(|&(_, j)| self.inst.reward(j, t)).sum();
            let next: Vec<usize> = counters
                .iter()
                .enumerate()
                .map(|(i, &r)| {
                    if choice.iter().any(|&(v, _)| v == i) {
                        self.inst.vehicles[i].charge_time
                    } else {
                        r.saturating_sub(1)
                    }
                })
                .collect();
            let value = gain + self.best(t + 1, &next);
            if value > best_value + IMPROVEMENT {
                best_value = value;
                best_choice = choice;
            }
        }
        self.memo
            .insert((t, counters.to_vec()), (best_value, best_choice));
        best_value
    }
}

/// Every partial injective map from `vehicles` into `stations`, starting
/// with the empty one.
fn injections(
    vehicles: &[usize],
    stations: &[usize],
    used: &mut Vec<bool>,
    current: &mut Choice,
    out: &mut Vec<Choice>,
) {
    let Some((&v, rest)) = vehicles.split_first() else {
        out.push(current.clone());
        return;
    };
    injections(rest, stations, used, current, out);
    for k in 0..stations.len() {
        if !used[k] {
            used[k] = true;
            current.push((v, stations[k]));
            injections(rest, stations, used, current, out);
            current.pop();
            used[k] = false;
        }
    }
}

/// Maximum-reward schedule by exhaustive search over the joint choices at
/// every time step, memoized on the per-vehicle recharge counters.
pub fn brute_force_opt(inst: &Instance, limits: BruteForceLimits) -> Result<Schedule> {
    inst.ensure_valid()?;
    limits.check(inst)?;

    let mut search = Search {
        inst,
        memo: HashMap::new(),
    };
    let mut counters = vec![0; inst.num_vehicles()];
    search.best(1, &counters);

    let mut assignments = Vec::new();
    for t in inst.times() {
        let (_, choice) = &search.memo[&(t, counters.clone())];
        for &(i, j) in choice {
            assignments.push(Assignment::new(i, j, t));
        }
        for (i, r) in counters.iter_mut().enumerate() {
            *r = if choice.iter().any(|&(v, _)| v == i) {
                inst.vehicles[i].charge_time
            } else {
                r.saturating_sub(1)
            };
        }
    }
    Schedule::new(assignments, inst)
}
