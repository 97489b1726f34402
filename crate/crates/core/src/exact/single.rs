use crate::error::{Error, Result};
use crate::exact::IMPROVEMENT;
use crate::lp::{build_lp_relaxation, round_integral, solve_lp, DEFAULT_TOLERANCE};
use crate::model::{Assignment, Instance, Schedule};

fn require_single(inst: &Instance) -> Result<()> {
    inst.ensure_valid()?;
    if inst.num_vehicles() != 1 {
        return Err(Error::Precondition(format!(
            "exactly one vehicle required, got {}",
            inst.num_vehicles()
        )));
    }
    Ok(())
}

/// Reduces an instance to a single station by keeping, at every time, the
/// best reward (lowest station index on ties). Also returns the chosen
/// original station for each time, indexed by `t - 1`.
pub fn collapse_stations(inst: &Instance) -> (Instance, Vec<usize>) {
    let best: Vec<(usize, f64)> = inst
        .times()
        .map(|t| {
            (0..inst.stations).map(|j| (j, inst.reward(j, t))).fold(
                (0, f64::NEG_INFINITY),
                |acc, c| if c.1 > acc.1 { c } else { acc },
            )
        })
        .collect();
    let collapsed = Instance {
        horizon: inst.horizon,
        stations: 1,
        rewards: vec![best.iter().map(|b| b.1).collect()],
        vehicles: inst.vehicles.clone(),
    };
    (collapsed, best.into_iter().map(|b| b.0).collect())
}

/// Optimal schedule for one vehicle by a DP over time: at each available
/// slot either skip it or discharge and jump past the recharge window.
pub fn solve_single_vehicle(inst: &Instance) -> Result<Schedule> {
    require_single(inst)?;
    let (collapsed, station_of) = collapse_stations(inst);
    let v = &inst.vehicles[0];
    let horizon = inst.horizon;

    // best[t] for t in 1..=T+1, plus slack so t + C + 1 never overflows the table.
    let mut best = vec![0.0; horizon + 2];
    let mut take = vec![false; horizon + 2];
    for t in (1..=horizon).rev() {
        let skip = best[t + 1];
        best[t] = skip;
        let p = collapsed.reward(0, t);
        if p > 0.0 && v.is_available(t) {
            let after = (t + v.charge_time + 1).min(horizon + 1);
            let value = p + best[after];
            if value > skip + IMPROVEMENT {
                best[t] = value;
                take[t] = true;
            }
        }
    }

    let mut assignments = Vec::new();
    let mut t = 1;
    while t <= horizon {
        if take[t] {
            assignments.push(Assignment::new(0, station_of[t - 1], t));
            t += v.charge_time + 1;
        } else {
            t += 1;
        }
    }
    Schedule::new(assignments, inst)
}

/// The LP route: collapse stations, solve the relaxation and read off the
/// (integral) optimum. Fails if the LP optimum is not integral.
pub fn solve_single_vehicle_lp(inst: &Instance) -> Result<Schedule> {
    require_single(inst)?;
    let (collapsed, station_of) = collapse_stations(inst);
    let sol = solve_lp(&build_lp_relaxation(&collapsed))?;
    let on_collapsed = round_integral(&sol, &collapsed, DEFAULT_TOLERANCE)?;
    let assignments = on_collapsed
        .assignments
        .iter()
        .map(|a| Assignment::new(0, station_of[a.time - 1], a.time))
        .collect();
    Schedule::new(assignments, inst)
}
