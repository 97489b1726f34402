use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{positive_stations_desc, IMPROVEMENT};
use crate::model::{Assignment, Instance, Schedule};

/// Caps for the homogeneous DP, whose state space is the set of ways to
/// split `m` vehicles over `C + 1` recharge buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomogeneousLimits {
    pub max_charge_time: usize,
    pub max_states: usize,
}

impl Default for HomogeneousLimits {
    fn default() -> Self {
        Self {
            max_charge_time: 8,
            max_states: 2_000_000,
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Checks that all vehicles share availability and charge time.
fn common_charge_time(inst: &Instance) -> Result<usize> {
    let first = &inst.vehicles[0];
    for (i, v) in inst.vehicles.iter().enumerate().skip(1) {
        if v.availability != first.availability {
            return Err(Error::Precondition(format!(
                "vehicle {i} availability differs from vehicle 0"
            )));
        }
        if v.charge_time != first.charge_time {
            return Err(Error::Precondition(format!(
                "vehicle {i} charge time {} differs from {}",
                v.charge_time, first.charge_time
            )));
        }
    }
    Ok(first.charge_time)
}

struct Dp<'a> {
    inst: &'a Instance,
    rewards: Vec<Vec<f64>>,
    memo: HashMap<(usize, Vec<usize>), (f64, usize)>,
}

impl Dp<'_> {
    fn shift(counts: &[usize], k: usize) -> Vec<usize> {
        if counts.len() == 1 {
            return counts.to_vec();
        }
        let mut next = Vec::with_capacity(counts.len());
        next.push(counts[0] + counts[1] - k);
        next.extend_from_slice(&counts[2..]);
        next.push(k);
        next
    }

    fn best(&mut self, t: usize, counts: &[usize]) -> f64 {
        if t > self.inst.horizon {
            return 0.0;
        }
        if let Some(&(v, _)) = self.memo.get(&(t, counts.to_vec())) {
            return v;
        }
        let available = self.inst.vehicles[0].is_available(t);
        let max_k = if available {
            counts[0].min(self.rewards[t - 1].len())
        } else {
            0
        };

        let mut best = f64::NEG_INFINITY;
        let mut best_k = 0;
        let mut gain = 0.0;
        for k in 0..=max_k {
            if k > 0 {
                gain += self.rewards[t - 1][k - 1];
            }
            let v = gain + self.best(t + 1, &Self::shift(counts, k));
            if v > best + IMPROVEMENT {
                best = v;
                best_k = k;
            }
        }
        self.memo.insert((t, counts.to_vec()), (best, best_k));
        best
    }
}

pub fn solve_homogeneous(inst: &Instance) -> Result<Schedule> {
    solve_homogeneous_with(inst, HomogeneousLimits::default())
}

/// DP over `(t, r_0..r_C)` where `r_l` counts vehicles that become
/// available in `l` slots. Discharging `k` vehicles at `t` takes the `k`
/// best positive rewards; identities are assigned afterwards round-robin.
pub fn solve_homogeneous_with(inst: &Instance, limits: HomogeneousLimits) -> Result<Schedule> {
    inst.ensure_valid()?;
    let c = common_charge_time(inst)?;
    if c > limits.max_charge_time {
        return Err(Error::LimitExceeded {
            what: "charge time",
            actual: c,
            limit: limits.max_charge_time,
        });
    }
    let m = inst.num_vehicles();
    let states = binomial(m + c, c);
    if states > limits.max_states {
        return Err(Error::LimitExceeded {
            what: "DP state count",
            actual: states,
            limit: limits.max_states,
        });
    }

    let ranked: Vec<Vec<(usize, f64)>> = inst
        .times()
        .map(|t| positive_stations_desc(inst, t))
        .collect();
    let mut dp = Dp {
        inst,
        rewards: ranked
            .iter()
            .map(|r| r.iter().map(|&(_, p)| p).collect())
            .collect(),
        memo: HashMap::new(),
    };
    let mut counts = vec![0; c + 1];
    counts[0] = m;
    dp.best(1, &counts);

    let mut free_at = vec![1usize; m];
    let mut cursor = 0;
    let mut assignments = Vec::new();
    for t in inst.times() {
        let (_, k) = dp.memo[&(t, counts.clone())];
        let start = cursor;
        let mut picked = 0;
        let mut scanned = 0;
        while picked < k && scanned < m {
            let i = (start + scanned) % m;
            scanned += 1;
            if free_at[i] <= t {
                assignments.push(Assignment::new(i, ranked[t - 1][picked].0, t));
                free_at[i] = t + c + 1;
                picked += 1;
                cursor = (i + 1) % m;
            }
        }
        if picked != k {
            return Err(Error::Solver(format!(
                "homogeneous DP wants {k} discharges at t = {t} but only {picked} vehicles are free"
            )));
        }
        counts = Dp::shift(&counts, k);
    }
    Schedule::new(assignments, inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_feasible, Vehicle};

    #[test]
    fn two_vehicles_alternate() {
        let inst = Instance::new(
            3,
            1,
            vec![vec![5.0, 4.0, 3.0]],
            vec![Vehicle::new(1..=3, 1), Vehicle::new(1..=3, 1)],
        )
        .unwrap();
        let s = solve_homogeneous(&inst).unwrap();
        assert_eq!(s.total_reward, 12.0);
        assert!(is_feasible(&s.assignments, &inst).unwrap().is_feasible());
    }

    #[test]
    fn unavailable_slot_only_shifts() {
        assert_eq!(Dp::shift(&[2, 1, 0], 0), vec![3, 0, 0]);
        assert_eq!(Dp::shift(&[3, 0, 0], 2), vec![1, 0, 2]);
        assert_eq!(Dp::shift(&[4], 3), vec![4]);

        let inst = Instance::new(
            3,
            1,
            vec![vec![5.0, 100.0, 3.0]],
            vec![Vehicle::new([1, 3], 1), Vehicle::new([1, 3], 1)],
        )
        .unwrap();
        let s = solve_homogeneous(&inst).unwrap();
        assert_eq!(s.total_reward, 8.0);
    }

    #[test]
    fn reconstruction_uses_every_free_vehicle() {
        let inst = Instance::new(
            4,
            2,
            vec![vec![2.0, 2.0, 2.0, -1.0], vec![-1.0, 8.0, 2.0, 4.0]],
            vec![Vehicle::new([1, 2, 3], 1); 3],
        )
        .unwrap();
        let s = solve_homogeneous(&inst).unwrap();
        assert_eq!(s.total_reward, 14.0);
        assert!(is_feasible(&s.assignments, &inst).unwrap().is_feasible());
    }

    #[test]
    fn zero_charge_time() {
        let inst = Instance::new(
            2,
            2,
            vec![vec![5.0, 1.0], vec![2.0, 3.0]],
            vec![Vehicle::new([1, 2], 0)],
        )
        .unwrap();
        assert_eq!(solve_homogeneous(&inst).unwrap().total_reward, 8.0);
    }

    #[test]
    fn rejects_heterogeneous() {
        let inst = Instance::new(
            2,
            1,
            vec![vec![1.0, 1.0]],
            vec![Vehicle::new([1, 2], 0), Vehicle::new([1, 2], 1)],
        )
        .unwrap();
        assert!(matches!(
            solve_homogeneous(&inst),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(26, 6), 230_230);
        assert_eq!(binomial(3, 0), 1);
    }
}
