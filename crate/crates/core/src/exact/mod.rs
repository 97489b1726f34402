//! Exact solvers: an exhaustive oracle and the polynomial special cases
//! (zero charging time, one vehicle, a constant number of vehicles,
//! homogeneous vehicles).

mod brute;
mod const_m;
mod homogeneous;
pub mod matching;
mod single;
mod zero_charge;

pub use brute::{brute_force_opt, BruteForceLimits};
pub use const_m::{solve_constant_m, solve_constant_m_with, ConstMLimits};
pub use homogeneous::{solve_homogeneous, solve_homogeneous_with, HomogeneousLimits};
pub use single::{collapse_stations, solve_single_vehicle, solve_single_vehicle_lp};
pub use zero_charge::solve_zero_charge;

use crate::model::Instance;

/// Stations with a strictly positive reward at `t`, best first; ties go to
/// the lower station index.
pub(crate) fn positive_stations_desc(inst: &Instance, t: usize) -> Vec<(usize, f64)> {
    let mut s: Vec<(usize, f64)> = (0..inst.stations)
        .map(|j| (j, inst.reward(j, t)))
        .filter(|&(_, p)| p > 0.0)
        .collect();
    s.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    s
}

/// Improvement threshold used when comparing candidate values, so that
/// ties resolve to the first candidate in enumeration order.
pub(crate) const IMPROVEMENT: f64 = 1e-12;
