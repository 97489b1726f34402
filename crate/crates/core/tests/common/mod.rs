#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use valet_core::{Assignment, Instance, Vehicle};

/// Shape of a random test instance.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_vehicles: usize,
    pub max_stations: usize,
    pub max_horizon: usize,
    pub max_charge: usize,
    /// Integer rewards in `-2..=9` (many ties) instead of reals in `[-1, 10)`.
    pub integer_rewards: bool,
}

pub fn random_rewards<R: Rng>(
    rng: &mut R,
    stations: usize,
    horizon: usize,
    integer: bool,
) -> Vec<Vec<f64>> {
    (0..stations)
        .map(|_| {
            (0..horizon)
                .map(|_| {
                    if integer {
                        rng.gen_range(-2..=9) as f64
                    } else {
                        rng.gen_range(-1.0..10.0)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn random_availability<R: Rng>(rng: &mut R, horizon: usize) -> Vec<usize> {
    let density: f64 = rng.gen_range(0.3..1.0);
    (1..=horizon).filter(|_| rng.gen_bool(density)).collect()
}

pub fn random_instance<R: Rng>(rng: &mut R, shape: Shape) -> Instance {
    let m = rng.gen_range(1..=shape.max_vehicles);
    let n = rng.gen_range(1..=shape.max_stations);
    let horizon = rng.gen_range(1..=shape.max_horizon);
    let vehicles = (0..m)
        .map(|_| {
            Vehicle::new(
                random_availability(rng, horizon),
                rng.gen_range(0..=shape.max_charge),
            )
        })
        .collect();
    Instance::new(
        horizon,
        n,
        random_rewards(rng, n, horizon, shape.integer_rewards),
        vehicles,
    )
    .unwrap()
}

/// Every vehicle shares one availability set and charge time.
pub fn random_homogeneous<R: Rng>(rng: &mut R, shape: Shape) -> Instance {
    let mut inst = random_instance(rng, shape);
    let first = inst.vehicles[0].clone();
    for v in &mut inst.vehicles {
        *v = first.clone();
    }
    inst
}

pub fn zero_charge<R: Rng>(rng: &mut R, shape: Shape) -> Instance {
    let mut inst = random_instance(rng, shape);
    for v in &mut inst.vehicles {
        v.charge_time = 0;
    }
    inst
}

/// Optimum by enumerating every subset of candidate triples. Independent of
/// all library solvers; only usable when there are at most ~20 candidates.
pub fn naive_opt(inst: &Instance) -> f64 {
    let mut cands = Vec::new();
    for (i, v) in inst.vehicles.iter().enumerate() {
        for &t in &v.availability {
            for j in 0..inst.stations {
                if inst.reward(j, t) > 0.0 {
                    cands.push(Assignment::new(i, j, t));
                }
            }
        }
    }
    assert!(
        cands.len() <= 22,
        "too many candidates for subset enumeration"
    );
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << cands.len()) {
        let chosen: Vec<Assignment> = (0..cands.len())
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| cands[b])
            .collect();
        if naive_feasible(&chosen, inst) {
            best = best.max(chosen.iter().map(|a| inst.reward(a.station, a.time)).sum());
        }
    }
    best
}

/// Pairwise check of the scheduling rules, written from scratch.
pub fn naive_feasible(s: &[Assignment], inst: &Instance) -> bool {
    for (x, a) in s.iter().enumerate() {
        if !inst.vehicles[a.vehicle].availability.contains(&a.time) {
            return false;
        }
        for b in &s[x + 1..] {
            if a.station == b.station && a.time == b.time {
                return false;
            }
            if a.vehicle == b.vehicle {
                let (early, late) = if a.time <= b.time { (a, b) } else { (b, a) };
                if late.time <= early.time + inst.vehicles[a.vehicle].charge_time {
                    return false;
                }
            }
        }
    }
    true
}

pub fn shuffled<T: Clone, R: Rng>(rng: &mut R, items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}
