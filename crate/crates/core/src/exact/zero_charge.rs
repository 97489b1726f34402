use crate::error::{Error, Result};
use crate::exact::matching::max_weight_matching;
use crate::model::{Assignment, Instance, Schedule};

/// Optimal schedule when every charging time is zero.
///
/// Without recharge constraints the vehicle/station graph splits into one
/// independent bipartite matching per time slot.
pub fn solve_zero_charge(inst: &Instance) -> Result<Schedule> {
    inst.ensure_valid()?;
    if let Some(i) = inst.vehicles.iter().position(|v| v.charge_time > 0) {
        return Err(Error::Precondition(format!(
            "vehicle {i} has charge time {}, zero required",
            inst.vehicles[i].charge_time
        )));
    }

    let mut assignments = Vec::new();
    for t in inst.times() {
        let vehicles: Vec<usize> = (0..inst.num_vehicles())
            .filter(|&i| inst.vehicles[i].is_available(t))
            .collect();
        let stations: Vec<usize> = (0..inst.stations)
            .filter(|&j| inst.reward(j, t) > 0.0)
            .collect();
        if vehicles.is_empty() || stations.is_empty() {
            continue;
        }
        let weights: Vec<Vec<f64>> = vehicles
            .iter()
            .map(|_| stations.iter().map(|&j| inst.reward(j, t)).collect())
            .collect();
        for (row, col) in max_weight_matching(&weights).into_iter().enumerate() {
            if let Some(col) = col {
                assignments.push(Assignment::new(vehicles[row], stations[col], t));
            }
        }
    }
    Schedule::new(assignments, inst)
}
