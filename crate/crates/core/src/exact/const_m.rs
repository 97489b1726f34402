use crate::error::{Error, Result};
use crate::exact::{positive_stations_desc, IMPROVEMENT};
use crate::model::{Assignment, Instance, Schedule};

/// Caps for the constant-`m` DP, whose table has `T * prod(C_i + 1)` entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstMLimits {
    pub max_vehicles: usize,
    pub max_table_entries: usize,
}

impl Default for ConstMLimits {
    fn default() -> Self {
        Self {
            max_vehicles: 4,
            max_table_entries: 1 << 24,
        }
    }
}

impl ConstMLimits {
    /// Table size for `inst`, or a refusal if it breaks a cap.
    pub fn table_entries(&self, inst: &Instance) -> Result<usize> {
        let m = inst.num_vehicles();
        let cap = self.max_vehicles.min(16);
        if m > cap {
            return Err(Error::LimitExceeded {
                what: "vehicle count",
                actual: m,
                limit: cap,
            });
        }
        let entries = inst
            .vehicles
            .iter()
            .try_fold(inst.horizon, |acc, v| acc.checked_mul(v.charge_time + 1))
            .unwrap_or(usize::MAX);
        if entries > self.max_table_entries {
            return Err(Error::LimitExceeded {
                what: "DP table size",
                actual: entries,
                limit: self.max_table_entries,
            });
        }
        Ok(entries)
    }
}

pub fn solve_constant_m(inst: &Instance) -> Result<Schedule> {
    solve_constant_m_with(inst, ConstMLimits::default())
}

/// Backward DP over `(t, r_1..r_m)` where `r_i` is the number of slots
/// vehicle `i` still needs before it can discharge again.
///
/// At each state the DP tries every subset of eligible vehicles (counter
/// zero and available at `t`); a subset of size `k` collects the `k` best
/// positive rewards at `t`, since eligible vehicles are interchangeable
/// with respect to station choice.
pub fn solve_constant_m_with(inst: &Instance, limits: ConstMLimits) -> Result<Schedule> {
    inst.ensure_valid()?;
    limits.table_entries(inst)?;

    let m = inst.num_vehicles();
    let horizon = inst.horizon;
    let radix: Vec<usize> = inst.vehicles.iter().map(|v| v.charge_time + 1).collect();
    let mut stride = vec![1usize; m];
    for i in 1..m {
        stride[i] = stride[i - 1] * radix[i - 1];
    }
    let states = stride[m - 1] * radix[m - 1];

    // Per state: mask of zero counters, and the index after one idle step.
    let mut zero_mask = vec![0u32; states];
    let mut idle_next = vec![0usize; states];
    for s in 0..states {
        let mut next = 0;
        for i in 0..m {
            let r = (s / stride[i]) % radix[i];
            if r == 0 {
                zero_mask[s] |= 1 << i;
            } else {
                next += (r - 1) * stride[i];
            }
        }
        idle_next[s] = next;
    }
    let reset: Vec<usize> = (0..m)
        .map(|i| inst.vehicles[i].charge_time * stride[i])
        .collect();

    let mut next_value = vec![0.0f64; states];
    let mut value = vec![0.0f64; states];
    // choice[(t - 1) * states + s] is the subset discharged at (t, s).
    let mut choice = vec![0u16; horizon * states];

    for t in (1..=horizon).rev() {
        let avail_mask: u32 = (0..m)
            .filter(|&i| inst.vehicles[i].is_available(t))
            .fold(0, |acc, i| acc | (1 << i));
        let rewards = positive_stations_desc(inst, t);
        let mut prefix = vec![0.0];
        for (_, p) in &rewards {
            prefix.push(prefix.last().unwrap() + p);
        }

        for s in 0..states {
            let eligible = zero_mask[s] & avail_mask;
            let mut best = next_value[idle_next[s]];
            let mut best_set = 0u32;
            // Ascending submask enumeration; the empty set was taken above.
            let mut sub = 0u32.wrapping_sub(eligible) & eligible;
            while sub != 0 {
                let k = sub.count_ones() as usize;
                if k < prefix.len() {
                    let mut target = idle_next[s];
                    let mut bits = sub;
                    while bits != 0 {
                        let i = bits.trailing_zeros() as usize;
                        target += reset[i];
                        bits &= bits - 1;
                    }
                    let v = prefix[k] + next_value[target];
                    if v > best + IMPROVEMENT {
                        best = v;
                        best_set = sub;
                    }
                }
                if sub == eligible {
                    break;
                }
                sub = (sub.wrapping_sub(eligible)) & eligible;
            }
            value[s] = best;
            choice[(t - 1) * states + s] = best_set as u16;
        }
        std::mem::swap(&mut value, &mut next_value);
    }

    let mut assignments = Vec::new();
    let mut s = 0usize;
    for t in 1..=horizon {
        let set = choice[(t - 1) * states + s] as u32;
        let rewards = positive_stations_desc(inst, t);
        let mut target = idle_next[s];
        let mut bits = set;
        let mut rank = 0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            assignments.push(Assignment::new(i, rewards[rank].0, t));
            rank += 1;
            target += reset[i];
            bits &= bits - 1;
        }
        s = target;
    }
    Schedule::new(assignments, inst)
}
