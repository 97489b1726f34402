//! JSON documents for instances, schedules and 3D-matching inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Location, Result, ValidationReport, Violation};
use crate::model::{validate_instance, Instance, Schedule, Vehicle};
use crate::reduction::ThreeDMInstance;

// Signed on the wire so that negative values surface as validation errors
// instead of opaque type errors.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    horizon: i64,
    stations: i64,
    rewards: Vec<Vec<f64>>,
    vehicles: Vec<VehicleDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VehicleDoc {
    availability: Vec<i64>,
    charge_time: i64,
}

fn unsigned(report: &mut ValidationReport, value: i64, location: Location, what: &str) -> usize {
    if value < 0 {
        report.violations.push(Violation {
            location,
            reason: format!("{what} must be nonnegative, got {value}"),
        });
        0
    } else {
        value as usize
    }
}

pub fn load_instance(bytes: &[u8]) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_slice(bytes)?;
    let mut report = ValidationReport::default();

    let horizon = unsigned(&mut report, doc.horizon, Location::Instance, "horizon");
    let stations = unsigned(&mut report, doc.stations, Location::Instance, "stations");
    let mut vehicles = Vec::with_capacity(doc.vehicles.len());
    for (i, v) in doc.vehicles.into_iter().enumerate() {
        let charge_time = unsigned(
            &mut report,
            v.charge_time,
            Location::Vehicle(i),
            "charge_time",
        );
        let mut availability = Vec::with_capacity(v.availability.len());
        for t in v.availability {
            if t <= 0 {
                report.violations.push(Violation {
                    location: Location::Vehicle(i),
                    reason: format!("time outside 1..T: {t}"),
                });
            } else {
                availability.push(t as usize);
            }
        }
        vehicles.push(Vehicle::new(availability, charge_time));
    }

    let inst = Instance {
        horizon,
        stations,
        rewards: doc.rewards,
        vehicles,
    };
    if let Err(more) = validate_instance(&inst) {
        report.violations.extend(more.violations);
    }
    if report.is_empty() {
        Ok(inst)
    } else {
        Err(Error::InvalidInstance(report))
    }
}

pub fn save_instance(inst: &Instance) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec_pretty(inst)?)
}

pub fn load_schedule(bytes: &[u8]) -> Result<Schedule> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn save_schedule(sched: &Schedule) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec_pretty(sched)?)
}

pub fn load_tdm(bytes: &[u8]) -> Result<ThreeDMInstance> {
    let tdm: ThreeDMInstance = serde_json::from_slice(bytes)?;
    tdm.validate()?;
    Ok(tdm)
}

pub fn save_tdm(tdm: &ThreeDMInstance) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec_pretty(tdm)?)
}
