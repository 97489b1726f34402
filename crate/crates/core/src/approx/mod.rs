//! Approximation algorithms: the greedy 1/3-approximation and LP-based
//! randomized rounding with its boosted variant.

mod greedy;
mod packing;
mod rounding;

pub use greedy::{greedy_schedule, greedy_schedule_with, VehicleRewards};
pub use packing::{pack_rectangles, sample_line, Packing, Slice};
pub use rounding::{boosted_rr, randomized_rounding, sample_selections, Rounder, DEFAULT_REPEATS};
