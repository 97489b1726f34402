//! Problem instances, schedules and their feasibility rules.
//!
//! Vehicles and stations are addressed by 0-based indices into their
//! vectors. Times are 1-based: a horizon of `T` covers slots `1..=T`, and
//! `rewards[j][t - 1]` is the reward for discharging at station `j` at time `t`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Location, Result, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vehicle {
    /// Sorted, duplicate-free set of times at which the vehicle may discharge.
    pub availability: Vec<usize>,
    /// Slots needed to recharge after a discharge.
    pub charge_time: usize,
}

impl Vehicle {
    pub fn new(availability: impl IntoIterator<Item = usize>, charge_time: usize) -> Self {
        let mut availability: Vec<usize> = availability.into_iter().collect();
        availability.sort_unstable();
        availability.dedup();
        Self {
            availability,
            charge_time,
        }
    }

    pub fn is_available(&self, t: usize) -> bool {
        self.availability.binary_search(&t).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub horizon: usize,
    pub stations: usize,
    /// `stations x horizon` reward matrix.
    pub rewards: Vec<Vec<f64>>,
    pub vehicles: Vec<Vehicle>,
}

impl Instance {
    /// Builds an instance and checks every invariant.
    pub fn new(
        horizon: usize,
        stations: usize,
        rewards: Vec<Vec<f64>>,
        vehicles: Vec<Vehicle>,
    ) -> Result<Self> {
        let inst = Self {
            horizon,
            stations,
            rewards,
            vehicles,
        };
        validate_instance(&inst).map_err(Error::InvalidInstance)?;
        Ok(inst)
    }

    /// Reward at station `j` (0-based) and time `t` (1-based).
    #[inline]
    pub fn reward(&self, station: usize, time: usize) -> f64 {
        self.rewards[station][time - 1]
    }

    pub fn num_vehicles(&self) -> usize {
        self.vehicles.len()
    }

    pub fn times(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.horizon
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        validate_instance(self).map_err(Error::InvalidInstance)
    }
}

/// Checks all structural invariants of an instance, collecting every
/// violation rather than stopping at the first.
pub fn validate_instance(inst: &Instance) -> std::result::Result<(), ValidationReport> {
    let mut report = ValidationReport::default();
    let mut push =
        |location, reason: String| report.violations.push(Violation { location, reason });

    if inst.horizon == 0 {
        push(Location::Instance, "horizon must be at least 1".into());
    }
    if inst.stations == 0 {
        push(
            Location::Instance,
            "at least one station is required".into(),
        );
    }
    if inst.vehicles.is_empty() {
        push(
            Location::Instance,
            "at least one vehicle is required".into(),
        );
    }
    if inst.rewards.len() != inst.stations {
        push(
            Location::Instance,
            format!(
                "rewards shape: {} rows for {} stations",
                inst.rewards.len(),
                inst.stations
            ),
        );
    }
    for (j, row) in inst.rewards.iter().enumerate() {
        if row.len() != inst.horizon {
            push(
                Location::Station(j),
                format!(
                    "rewards shape: {} columns for horizon {}",
                    row.len(),
                    inst.horizon
                ),
            );
        }
        if let Some(t) = row.iter().position(|p| !p.is_finite()) {
            push(
                Location::Station(j),
                format!("non-finite reward at time {}", t + 1),
            );
        }
    }
    for (i, v) in inst.vehicles.iter().enumerate() {
        if let Some(&t) = v.availability.iter().find(|&&t| t == 0 || t > inst.horizon) {
            push(
                Location::Vehicle(i),
                format!("time outside 1..T: {t} (T = {})", inst.horizon),
            );
        }
        if v.availability.windows(2).any(|w| w[0] >= w[1]) {
            push(
                Location::Vehicle(i),
                "availability is not strictly increasing".into(),
            );
        }
    }

    if report.is_empty() {
        Ok(())
    } else {
        Err(report)
    }
}

/// Discharge of `vehicle` at `station` during slot `time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Assignment {
    pub vehicle: usize,
    pub station: usize,
    pub time: usize,
}

impl Assignment {
    pub fn new(vehicle: usize, station: usize, time: usize) -> Self {
        Self {
            vehicle,
            station,
            time,
        }
    }
}

/// A set of assignments together with its cached total reward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub assignments: Vec<Assignment>,
    pub total_reward: f64,
}

impl Schedule {
    pub fn empty() -> Self {
        Self {
            assignments: Vec::new(),
            total_reward: 0.0,
        }
    }

    /// Sorts and deduplicates `assignments` and computes the total reward.
    /// Only index ranges are checked here; see [`is_feasible`].
    pub fn new(mut assignments: Vec<Assignment>, inst: &Instance) -> Result<Self> {
        check_indices(&assignments, inst)?;
        assignments.sort_unstable();
        assignments.dedup();
        let total_reward = sum_sorted(&assignments, inst);
        Ok(Self {
            assignments,
            total_reward,
        })
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

/// The first broken feasibility rule found in a set of assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conflict {
    /// Vehicle discharged outside its availability.
    Unavailable { vehicle: usize, time: usize },
    /// Two vehicles share a station in the same slot.
    StationClash {
        station: usize,
        time: usize,
        vehicles: (usize, usize),
    },
    /// One vehicle at two stations in the same slot.
    VehicleClash { vehicle: usize, time: usize },
    /// Second discharge falls inside the recharge window of the first.
    RechargeWindow {
        vehicle: usize,
        first: usize,
        second: usize,
    },
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Conflict::Unavailable { vehicle, time } => {
                write!(f, "vehicle {vehicle} is not available at time {time}")
            }
            Conflict::StationClash {
                station,
                time,
                vehicles: (a, b),
            } => write!(
                f,
                "station {station} at time {time} used by vehicles {a} and {b}"
            ),
            Conflict::VehicleClash { vehicle, time } => {
                write!(f, "vehicle {vehicle} assigned twice at time {time}")
            }
            Conflict::RechargeWindow {
                vehicle,
                first,
                second,
            } => write!(
                f,
                "vehicle {vehicle} discharged at {second} while recharging from {first}"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible(Conflict),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

fn check_indices(assignments: &[Assignment], inst: &Instance) -> Result<()> {
    for a in assignments {
        if a.vehicle >= inst.num_vehicles() {
            return Err(Error::IndexOutOfRange {
                what: "vehicle",
                index: a.vehicle,
                limit: inst.num_vehicles(),
            });
        }
        if a.station >= inst.stations {
            return Err(Error::IndexOutOfRange {
                what: "station",
                index: a.station,
                limit: inst.stations,
            });
        }
        if a.time == 0 || a.time > inst.horizon {
            return Err(Error::IndexOutOfRange {
                what: "time",
                index: a.time,
                limit: inst.horizon,
            });
        }
    }
    Ok(())
}

/// Checks station uniqueness, vehicle uniqueness per slot, the recharge
/// gap and availability. Returns the first conflict found.
pub fn is_feasible(assignments: &[Assignment], inst: &Instance) -> Result<Feasibility> {
    check_indices(assignments, inst)?;

    for a in assignments {
        if !inst.vehicles[a.vehicle].is_available(a.time) {
            return Ok(Feasibility::Infeasible(Conflict::Unavailable {
                vehicle: a.vehicle,
                time: a.time,
            }));
        }
    }

    let mut by_slot: Vec<&Assignment> = assignments.iter().collect();
    by_slot.sort_unstable_by_key(|a| (a.station, a.time, a.vehicle));
    for w in by_slot.windows(2) {
        if (w[0].station, w[0].time) == (w[1].station, w[1].time) {
            return Ok(Feasibility::Infeasible(Conflict::StationClash {
                station: w[0].station,
                time: w[0].time,
                vehicles: (w[0].vehicle, w[1].vehicle),
            }));
        }
    }

    let mut by_vehicle: Vec<&Assignment> = assignments.iter().collect();
    by_vehicle.sort_unstable_by_key(|a| (a.vehicle, a.time, a.station));
    for w in by_vehicle.windows(2) {
        if w[0].vehicle != w[1].vehicle {
            continue;
        }
        if w[0].time == w[1].time {
            return Ok(Feasibility::Infeasible(Conflict::VehicleClash {
                vehicle: w[0].vehicle,
                time: w[0].time,
            }));
        }
        // Sorted by time, so checking neighbours covers every pair.
        if w[1].time <= w[0].time + inst.vehicles[w[0].vehicle].charge_time {
            return Ok(Feasibility::Infeasible(Conflict::RechargeWindow {
                vehicle: w[0].vehicle,
                first: w[0].time,
                second: w[1].time,
            }));
        }
    }

    Ok(Feasibility::Feasible)
}

/// Total reward of a set of assignments, negative rewards included.
///
/// The sum is taken in sorted assignment order so the result does not
/// depend on the order of the input.
pub fn schedule_reward(assignments: &[Assignment], inst: &Instance) -> Result<f64> {
    check_indices(assignments, inst)?;
    let mut sorted = assignments.to_vec();
    sorted.sort_unstable();
    Ok(sum_sorted(&sorted, inst))
}

fn sum_sorted(sorted: &[Assignment], inst: &Instance) -> f64 {
    sorted.iter().map(|a| inst.reward(a.station, a.time)).sum()
}

/// Availability pruning applied before scheduling.
#[derive(Debug, Clone, Default)]
pub struct PruneOptions {
    /// Drop the last `C_i` available slots so the vehicle is returned charged.
    pub return_full: bool,
    /// Leading available slots to drop per vehicle, for vehicles arriving
    /// with a partially charged battery. Empty means zero for every vehicle.
    pub arrival_deficit: Vec<usize>,
}

/// Removes the first `arrival_deficit[i]` and, with `return_full`, the last
/// `C_i` elements of every availability set. Availability may become empty.
pub fn prune_availability(inst: &Instance, opts: &PruneOptions) -> Result<Instance> {
    if !opts.arrival_deficit.is_empty() && opts.arrival_deficit.len() != inst.num_vehicles() {
        return Err(Error::Precondition(format!(
            "{} arrival deficits for {} vehicles",
            opts.arrival_deficit.len(),
            inst.num_vehicles()
        )));
    }
    let mut out = inst.clone();
    for (i, v) in out.vehicles.iter_mut().enumerate() {
        let head = opts.arrival_deficit.get(i).copied().unwrap_or(0);
        let tail = if opts.return_full { v.charge_time } else { 0 };
        let len = v.availability.len();
        let end = len.saturating_sub(tail);
        let start = head.min(end);
        v.availability = v.availability[start..end].to_vec();
    }
    Ok(out)
}
