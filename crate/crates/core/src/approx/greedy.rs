use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, Schedule};

/// Vehicle-dependent rewards `p[i][j][t]`, overriding the station/time
/// rewards of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleRewards {
    vehicles: usize,
    stations: usize,
    horizon: usize,
    values: Vec<f64>,
}

impl VehicleRewards {
    /// Tabulates `f(vehicle, station, time)` for every triple.
    pub fn from_fn(
        vehicles: usize,
        stations: usize,
        horizon: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(vehicles * stations * horizon);
        for i in 0..vehicles {
            for j in 0..stations {
                for t in 1..=horizon {
                    values.push(f(i, j, t));
                }
            }
        }
        Self {
            vehicles,
            stations,
            horizon,
            values,
        }
    }

    /// The overlay equal to the instance's own station/time rewards.
    pub fn from_instance(inst: &Instance) -> Self {
        Self::from_fn(
            inst.num_vehicles(),
            inst.stations,
            inst.horizon,
            |_, j, t| inst.reward(j, t),
        )
    }

    #[inline]
    pub fn get(&self, vehicle: usize, station: usize, time: usize) -> f64 {
        self.values[(vehicle * self.stations + station) * self.horizon + time - 1]
    }
}

/// Tracks committed discharges for conflict checks.
struct Commitments<'a> {
    inst: &'a Instance,
    station_busy: Vec<bool>,
    vehicle_busy: Vec<Vec<bool>>,
    chosen: Vec<Assignment>,
}

impl<'a> Commitments<'a> {
    fn new(inst: &'a Instance) -> Self {
        Self {
            inst,
            station_busy: vec![false; inst.stations * inst.horizon],
            vehicle_busy: vec![vec![false; inst.horizon + 1]; inst.num_vehicles()],
            chosen: Vec::new(),
        }
    }

    fn station_free(&self, j: usize, t: usize) -> bool {
        !self.station_busy[j * self.inst.horizon + t - 1]
    }

    /// No committed discharge of `i` within `C_i` slots of `t` on either side.
    fn vehicle_free(&self, i: usize, t: usize) -> bool {
        let c = self.inst.vehicles[i].charge_time;
        let lo = t.saturating_sub(c).max(1);
        let hi = (t + c).min(self.inst.horizon);
        !self.vehicle_busy[i][lo..=hi].iter().any(|&b| b)
    }

    fn commit(&mut self, i: usize, j: usize, t: usize) {
        self.station_busy[j * self.inst.horizon + t - 1] = true;
        self.vehicle_busy[i][t] = true;
        self.chosen.push(Assignment::new(i, j, t));
    }
}

/// Greedy schedule on station/time rewards.
///
/// Repeatedly commits the highest-reward triple still compatible with
/// everything committed so far (ties: smallest `(t, j, i)`). Only strictly
/// positive rewards are considered. Because every vehicle earns the same
/// reward at a given `(j, t)`, pairs are ranked once and each pair goes to
/// the lowest-index vehicle that can still take it.
pub fn greedy_schedule(inst: &Instance) -> Result<Schedule> {
    inst.ensure_valid()?;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for t in inst.times() {
        for j in 0..inst.stations {
            let p = inst.reward(j, t);
            if p > 0.0 {
                pairs.push((p, t, j));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut by_time: Vec<Vec<usize>> = vec![Vec::new(); inst.horizon + 1];
    for (i, v) in inst.vehicles.iter().enumerate() {
        for &t in &v.availability {
            by_time[t].push(i);
        }
    }

    let mut state = Commitments::new(inst);
    for (_, t, j) in pairs {
        if let Some(&i) = by_time[t].iter().find(|&&i| state.vehicle_free(i, t)) {
            state.commit(i, j, t);
        }
    }
    Schedule::new(state.chosen, inst)
}

/// Greedy schedule with vehicle-dependent rewards. The returned schedule's
/// `total_reward` is measured with `rewards`.
pub fn greedy_schedule_with(inst: &Instance, rewards: &VehicleRewards) -> Result<Schedule> {
    inst.ensure_valid()?;
    if (rewards.vehicles, rewards.stations, rewards.horizon)
        != (inst.num_vehicles(), inst.stations, inst.horizon)
    {
        return Err(Error::Precondition(
            "vehicle reward table does not match the instance shape".into(),
        ));
    }

    let mut triples: Vec<(f64, usize, usize, usize)> = Vec::new();
    for (i, v) in inst.vehicles.iter().enumerate() {
        for &t in &v.availability {
            for j in 0..inst.stations {
                let p = rewards.get(i, j, t);
                if p > 0.0 {
                    triples.push((p, t, j, i));
                }
            }
        }
    }
    triples.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let mut state = Commitments::new(inst);
    for (_, t, j, i) in triples {
        if state.station_free(j, t) && state.vehicle_free(i, t) {
            state.commit(i, j, t);
        }
    }
    let mut sched = Schedule::new(state.chosen, inst)?;
    sched.total_reward = sched
        .assignments
        .iter()
        .map(|a| rewards.get(a.vehicle, a.station, a.time))
        .sum();
    Ok(sched)
}
