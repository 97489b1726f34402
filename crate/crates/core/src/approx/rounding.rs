use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::packing::{pack_rectangles, sample_line, Packing};
use crate::error::{Error, Result};
use crate::lp::FractionalSolution;
use crate::model::{Assignment, Instance, Schedule};

pub const DEFAULT_REPEATS: usize = 10;

/// Per-vehicle packings of one fractional solution, reusable across seeds.
#[derive(Debug, Clone)]
pub struct Rounder<'a> {
    inst: &'a Instance,
    packings: Vec<Packing>,
}

/// Random stream of `vehicle` under `seed`.
fn vehicle_rng(seed: u64, vehicle: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(vehicle as u64);
    rng
}

/// Seed of the `repeat`-th run of the boosted variant; run 0 uses `seed`.
fn repeat_seed(seed: u64, repeat: usize) -> u64 {
    seed.wrapping_add((repeat as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

impl<'a> Rounder<'a> {
    pub fn new(inst: &'a Instance, sol: &FractionalSolution) -> Result<Self> {
        inst.ensure_valid()?;
        for &(a, x) in &sol.values {
            let valid = a.vehicle < inst.num_vehicles()
                && a.station < inst.stations
                && inst.vehicles[a.vehicle].is_available(a.time);
            if !valid || !x.is_finite() || x < 0.0 {
                return Err(Error::Precondition(format!(
                    "fractional value {x} on invalid triple {a:?}"
                )));
            }
        }
        let packings = inst
            .vehicles
            .iter()
            .enumerate()
            .map(|(i, v)| pack_rectangles(&sol.vehicle_values(i), v.charge_time, inst.horizon))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { inst, packings })
    }

    pub fn packing(&self, vehicle: usize) -> &Packing {
        &self.packings[vehicle]
    }

    /// Pairs crossed by each vehicle's sampled line, before station
    /// conflicts between vehicles are resolved.
    pub fn selections(&self, seed: u64) -> Vec<Vec<(usize, usize)>> {
        self.packings
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let y: f64 = vehicle_rng(seed, i).gen();
                sample_line(p, y)
            })
            .collect()
    }

    /// One rounding run. When several vehicles land on the same
    /// `(station, time)`, the lowest vehicle index keeps it.
    pub fn round(&self, seed: u64) -> Result<Schedule> {
        let mut taken = vec![false; self.inst.stations * self.inst.horizon];
        let mut assignments = Vec::new();
        for (i, picks) in self.selections(seed).into_iter().enumerate() {
            for (j, t) in picks {
                let slot = &mut taken[j * self.inst.horizon + t - 1];
                if !*slot {
                    *slot = true;
                    assignments.push(Assignment::new(i, j, t));
                }
            }
        }
        Schedule::new(assignments, self.inst)
    }

    /// Best of `repeats` runs; the first run uses `seed` itself, ties keep
    /// the earlier run.
    pub fn round_boosted(&self, repeats: usize, seed: u64) -> Result<Schedule> {
        if repeats == 0 {
            return Err(Error::Precondition("repeats must be at least 1".into()));
        }
        let mut best = self.round(seed)?;
        for r in 1..repeats {
            let s = self.round(repeat_seed(seed, r))?;
            if s.total_reward > best.total_reward {
                best = s;
            }
        }
        Ok(best)
    }
}

pub fn sample_selections(
    inst: &Instance,
    sol: &FractionalSolution,
    seed: u64,
) -> Result<Vec<Vec<(usize, usize)>>> {
    Ok(Rounder::new(inst, sol)?.selections(seed))
}

/// Randomized rounding of an LP solution: pack each vehicle's values into
/// the unit strip, cut it with a uniformly random horizontal line, then
/// drop station conflicts.
pub fn randomized_rounding(
    inst: &Instance,
    sol: &FractionalSolution,
    seed: u64,
) -> Result<Schedule> {
    Rounder::new(inst, sol)?.round(seed)
}

pub fn boosted_rr(
    inst: &Instance,
    sol: &FractionalSolution,
    repeats: usize,
    seed: u64,
) -> Result<Schedule> {
    Rounder::new(inst, sol)?.round_boosted(repeats, seed)
}
