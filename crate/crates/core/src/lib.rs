//! Scheduling discharging electric vehicles at stations over a discrete
//! horizon to maximise collected reward.
//!
//! Vehicles and stations are indexed from 0, time slots from 1 to `T`.
//! Exact solvers live in [`exact`], the LP relaxation in [`lp`], greedy and
//! randomized rounding in [`approx`], the hardness construction in
//! [`reduction`] and the simulation harness in [`experiment`].

pub mod approx;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod io;
pub mod lp;
pub mod model;
pub mod reduction;

pub use error::{Error, Location, Result, ValidationReport, Violation};
pub use model::{
    is_feasible, prune_availability, schedule_reward, validate_instance, Assignment, Conflict,
    Feasibility, Instance, PruneOptions, Schedule, Vehicle,
};
pub use reduction::ThreeDMInstance;
