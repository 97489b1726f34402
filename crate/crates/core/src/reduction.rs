//! Reduction from 3-dimensional matching to discharge scheduling.
//!
//! Every hyperedge `(a, b, c)` becomes a vehicle available at
//! `{a, 2M + b, 4M + c}` and `{M, 3M}` with charge time `M + k`. Station 0
//! pays 1 on the three node blocks `[1, k]`, `[2M+1, 2M+k]`, `[4M+1, 4M+k]`;
//! `|E| - k` filler stations pay 1 at `M` and `3M`. All rewards can be
//! collected exactly when a perfect matching exists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{brute_force_opt, BruteForceLimits};
use crate::model::{Instance, Vehicle};

/// Node sets `A`, `B`, `C` of size `k`, nodes numbered `1..=k` in input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeDMInstance {
    pub k: usize,
    pub edges: Vec<[usize; 3]>,
}

impl ThreeDMInstance {
    pub fn new(k: usize, edges: Vec<[usize; 3]>) -> Result<Self> {
        let tdm = Self { k, edges };
        tdm.validate()?;
        Ok(tdm)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        if let Some(e) = self
            .edges
            .iter()
            .find(|e| e.iter().any(|&v| v == 0 || v > self.k))
        {
            return Err(Error::Precondition(format!(
                "edge {e:?} has a node outside 1..={}",
                self.k
            )));
        }
        Ok(())
    }

    /// Number of unit rewards in the constructed instance: `3k + 2(|E| - k)`.
    pub fn reward_units(&self) -> usize {
        3 * self.k + 2 * self.edges.len().saturating_sub(self.k)
    }
}

/// Caps for the exhaustive checks.
pub const MAX_VERIFY_K: usize = 3;
pub const MAX_VERIFY_EDGES: usize = 6;
pub const MAX_VERIFY_M: usize = 16;
pub const MAX_SOLVE_K: usize = 8;

/// Builds the scheduling instance for `tdm` with separation parameter `big_m`.
pub fn reduce_to_valet(tdm: &ThreeDMInstance, big_m: usize) -> Result<Instance> {
    tdm.validate()?;
    let k = tdm.k;
    if big_m < 2 * k {
        return Err(Error::Precondition(format!(
            "M = {big_m} must be at least 2k = {}",
            2 * k
        )));
    }
    if tdm.edges.len() < k {
        return Err(Error::Precondition(format!(
            "{} edges cannot cover {k} nodes per side",
            tdm.edges.len()
        )));
    }

    let horizon = 4 * big_m + k;
    let extra = tdm.edges.len() - k;
    let mut rewards = vec![vec![0.0; horizon]; 1 + extra];
    for offset in [0, 2 * big_m, 4 * big_m] {
        for t in offset + 1..=offset + k {
            rewards[0][t - 1] = 1.0;
        }
    }
    for row in rewards.iter_mut().skip(1) {
        row[big_m - 1] = 1.0;
        row[3 * big_m - 1] = 1.0;
    }

    let charge_time = big_m + k;
    let vehicles = tdm
        .edges
        .iter()
        .map(|&[a, b, c]| {
            Vehicle::new(
                [a, 2 * big_m + b, 4 * big_m + c, big_m, 3 * big_m],
                charge_time,
            )
        })
        .collect();
    Instance::new(horizon, 1 + extra, rewards, vehicles)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A perfect matching (indices into `edges`), found by trying every
/// `k`-subset of edges in lexicographic order.
pub fn solve_3dm(tdm: &ThreeDMInstance) -> Result<Option<Vec<usize>>> {
    tdm.validate()?;
    if tdm.k > MAX_SOLVE_K {
        return Err(Error::LimitExceeded {
            what: "3DM k",
            actual: tdm.k,
            limit: MAX_SOLVE_K,
        });
    }
    let (k, n) = (tdm.k, tdm.edges.len());
    if n < k {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut seen = vec![[false; 3]; k + 1];
        let disjoint = idx.iter().all(|&e| {
            tdm.edges[e]
                .iter()
                .enumerate()
                .all(|(side, &node)| !std::mem::replace(&mut seen[node][side], true))
        });
        if disjoint {
            return Ok(Some(idx));
        }
        if !next_combination(&mut idx, n) {
            return Ok(None);
        }
    }
}

/// Both sides of the reduction's equivalence, computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionCheck {
    pub matching_exists: bool,
    pub full_reward_achievable: bool,
}

/// Decides the 3DM instance by exhaustive search and, separately, whether
/// the exact scheduling optimum of the reduced instance collects every
/// unit reward.
pub fn verify_reduction(tdm: &ThreeDMInstance, big_m: usize) -> Result<ReductionCheck> {
    tdm.validate()?;
    let checks = [
        ("3DM k", tdm.k, MAX_VERIFY_K),
        ("3DM edge count", tdm.edges.len(), MAX_VERIFY_EDGES),
        ("M", big_m, MAX_VERIFY_M),
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

    let matching_exists = solve_3dm(tdm)?.is_some();
    if tdm.edges.len() < tdm.k {
        // No construction exists, and fewer than k edges cannot cover the nodes.
        return Ok(ReductionCheck {
            matching_exists,
            full_reward_achievable: false,
        });
    }
    let inst = reduce_to_valet(tdm, big_m)?;
    let limits = BruteForceLimits {
        max_vehicles: inst.num_vehicles(),
        max_stations: inst.stations,
        max_horizon: inst.horizon,
    };
    let opt = brute_force_opt(&inst, limits)?;
    let full_reward_achievable = opt.total_reward >= tdm.reward_units() as f64 - 1e-9;
    Ok(ReductionCheck {
        matching_exists,
        full_reward_achievable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_feasible, Assignment};

    /// Hypergraph with k = 2: edges (1,1,2) and (2,2,1) form a
    /// perfect matching, (2,1,2) is the third edge.
    pub(crate) fn two_node_example() -> ThreeDMInstance {
        ThreeDMInstance::new(2, vec![[1, 1, 2], [2, 2, 1], [2, 1, 2]]).unwrap()
    }

    #[test]
    fn two_node_example_construction() {
        let inst = reduce_to_valet(&two_node_example(), 4).unwrap();
        assert_eq!(inst.horizon, 18);
        assert_eq!(inst.stations, 2);
        let ones = |j: usize| -> Vec<usize> {
            inst.times().filter(|&t| inst.reward(j, t) == 1.0).collect()
        };
        assert_eq!(ones(0), vec![1, 2, 9, 10, 17, 18]);
        assert_eq!(ones(1), vec![4, 12]);
        assert!(inst.vehicles.iter().all(|v| v.charge_time == 6));
        // Edge (2,2,1).
        assert_eq!(inst.vehicles[1].availability, vec![2, 4, 10, 12, 17]);
    }

    #[test]
    fn smallest_instance() {
        let tdm = ThreeDMInstance::new(1, vec![[1, 1, 1]]).unwrap();
        let inst = reduce_to_valet(&tdm, 2).unwrap();
        assert_eq!(inst.horizon, 9);
        assert_eq!(inst.stations, 1);
        assert_eq!(inst.vehicles[0].availability, vec![1, 2, 5, 6, 9]);
        assert_eq!(inst.vehicles[0].charge_time, 3);
        assert_eq!(
            verify_reduction(&tdm, 2).unwrap(),
            ReductionCheck {
                matching_exists: true,
                full_reward_achievable: true
            }
        );
    }

    #[test]
    fn ill_posed_parameters() {
        assert!(reduce_to_valet(&two_node_example(), 3).is_err());
        let short = ThreeDMInstance::new(2, vec![[1, 1, 1]]).unwrap();
        assert!(reduce_to_valet(&short, 4).is_err());
        assert!(ThreeDMInstance::new(2, vec![[1, 3, 1]]).is_err());
    }

    #[test]
    fn circled_solution_is_feasible() {
        let inst = reduce_to_valet(&two_node_example(), 4).unwrap();
        let circled = vec![
            Assignment::new(0, 0, 1),
            Assignment::new(0, 0, 9),
            Assignment::new(0, 0, 18),
            Assignment::new(1, 0, 2),
            Assignment::new(1, 0, 10),
            Assignment::new(1, 0, 17),
            Assignment::new(2, 1, 4),
            Assignment::new(2, 1, 12),
        ];
        assert!(is_feasible(&circled, &inst).unwrap().is_feasible());
        let reward = crate::model::schedule_reward(&circled, &inst).unwrap();
        assert_eq!(reward, two_node_example().reward_units() as f64);
    }

    #[test]
    fn two_node_example_verifies() {
        let check = verify_reduction(&two_node_example(), 4).unwrap();
        assert!(check.matching_exists && check.full_reward_achievable);
        assert_eq!(solve_3dm(&two_node_example()).unwrap(), Some(vec![0, 1]));
    }

    #[test]
    fn shared_a_node_has_no_matching() {
        let tdm = ThreeDMInstance::new(2, vec![[1, 1, 1], [1, 2, 2], [1, 1, 2]]).unwrap();
        assert_eq!(
            verify_reduction(&tdm, 4).unwrap(),
            ReductionCheck {
                matching_exists: false,
                full_reward_achievable: false
            }
        );
    }

    #[test]
    fn degenerate_edge_sets() {
        assert_eq!(
            solve_3dm(&ThreeDMInstance::new(2, vec![]).unwrap()).unwrap(),
            None
        );
        let dup = ThreeDMInstance::new(2, vec![[1, 2, 1]; 3]).unwrap();
        assert_eq!(solve_3dm(&dup).unwrap(), None);
    }

    #[test]
    fn verification_caps() {
        let big = ThreeDMInstance::new(4, vec![[1, 1, 1]; 4]).unwrap();
        assert!(matches!(
            verify_reduction(&big, 8),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn combinations_in_order() {
        let mut idx = vec![0, 1];
        let mut all = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            all.push(idx.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![2, 3]);
    }
}
