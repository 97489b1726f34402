mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_homogeneous, random_instance, zero_charge, Shape};
use valet_core::exact::{
    solve_constant_m, solve_homogeneous, solve_single_vehicle, solve_single_vehicle_lp,
    solve_zero_charge,
};
use valet_core::experiment::{generate_instance, GenConfig};
use valet_core::io::{load_instance, load_tdm, save_instance, save_tdm};
use valet_core::reduction::{reduce_to_valet, solve_3dm, ThreeDMInstance};
use valet_core::{is_feasible, Assignment, Conflict, Error, Feasibility, Instance};

const MEDIUM: Shape = Shape {
    max_vehicles: 4,
    max_stations: 4,
    max_horizon: 10,
    max_charge: 3,
    integer_rewards: false,
};

#[test]
fn specialised_solvers_agree_with_the_general_dp() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..150 {
        let inst = zero_charge(&mut rng, MEDIUM);
        let general = solve_constant_m(&inst).unwrap().total_reward;
        assert!((solve_zero_charge(&inst).unwrap().total_reward - general).abs() < 1e-9);

        let inst = random_homogeneous(&mut rng, MEDIUM);
        let general = solve_constant_m(&inst).unwrap().total_reward;
        let s = solve_homogeneous(&inst).unwrap();
        assert!(is_feasible(&s.assignments, &inst).unwrap().is_feasible());
        assert!((s.total_reward - general).abs() < 1e-9);

        let inst = random_instance(
            &mut rng,
            Shape {
                max_vehicles: 1,
                max_horizon: 20,
                ..MEDIUM
            },
        );
        let dp = solve_single_vehicle(&inst).unwrap().total_reward;
        assert!((solve_single_vehicle_lp(&inst).unwrap().total_reward - dp).abs() < 1e-9);
        assert!((solve_constant_m(&inst).unwrap().total_reward - dp).abs() < 1e-9);
    }
}

/// Which pairs of a reduction vehicle's five slots can both be used.
#[test]
fn reduction_slots_respect_the_recharge_window() {
    for k in 1..=3 {
        for big_m in [2 * k, 2 * k + 1, 3 * k + 2] {
            let tdm = ThreeDMInstance::new(k, vec![[1, k, 1]; k]).unwrap();
            let inst = reduce_to_valet(&tdm, big_m).unwrap();
            let v = &inst.vehicles[0];
            let (a, b, c) = (1, 2 * big_m + k, 4 * big_m + 1);
            let (m1, m3) = (big_m, 3 * big_m);
            assert_eq!(v.availability, {
                let mut s = vec![a, m1, b, m3, c];
                s.sort();
                s
            });
            let compatible = |t1: usize, t2: usize| {
                let pair = [Assignment::new(0, 0, t1), Assignment::new(0, 0, t2)];
                is_feasible(&pair, &inst).unwrap().is_feasible()
            };
            for (x, y) in [(a, b), (b, c), (a, c), (m1, m3), (a, m3), (m1, c)] {
                assert!(compatible(x, y), "k={k} M={big_m}: {x},{y} should fit");
            }
            for (x, y) in [(a, m1), (m1, b), (b, m3), (m3, c)] {
                assert!(!compatible(x, y), "k={k} M={big_m}: {x},{y} should clash");
            }
        }
    }
}

#[test]
fn reduction_census() {
    let tdm = ThreeDMInstance::new(
        3,
        vec![[1, 2, 3], [2, 3, 1], [3, 1, 2], [1, 1, 1], [2, 2, 2]],
    )
    .unwrap();
    let inst = reduce_to_valet(&tdm, 7).unwrap();
    assert_eq!(inst.horizon, 4 * 7 + 3);
    assert_eq!(inst.num_vehicles(), 5);
    assert_eq!(inst.stations, 1 + 2);
    let units: f64 = inst.rewards.iter().flatten().sum();
    assert_eq!(units, tdm.reward_units() as f64);
    assert_eq!(tdm.reward_units(), 9 + 4);
    assert!(inst
        .vehicles
        .iter()
        .all(|v| v.charge_time == 10 && v.availability.len() == 5));
    assert_eq!(solve_3dm(&tdm).unwrap(), Some(vec![0, 1, 2]));
}

#[test]
fn generator_statistics() {
    let cfg = GenConfig::new(10, 4, 5, 60);
    let mut counts = [0usize; 6];
    let mut vehicles = 0usize;
    let mut contiguous = 0usize;
    for trial in 0..cfg.trials {
        let inst = generate_instance(&cfg, trial).unwrap();
        assert_eq!(inst.num_vehicles(), 40);
        for v in &inst.vehicles {
            counts[v.charge_time - 1] += 1;
            vehicles += 1;
            assert!(!v.availability.is_empty());
            let a = &v.availability;
            if a.last().unwrap() - a[0] + 1 == a.len() {
                contiguous += 1;
            }
        }
        for row in &inst.rewards {
            assert!(row.iter().all(|p| (0.0..=100.0).contains(p)));
        }
    }
    // Charge times uniform on 1..=6: chi-square with 5 degrees of freedom,
    // 20.52 is the 0.1% critical value.
    let expected = vehicles as f64 / 6.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < 20.52, "chi-square {chi2}, counts {counts:?}");
    // Half the vehicles get a single interval; some three-interval unions
    // are contiguous too.
    let frac = contiguous as f64 / vehicles as f64;
    assert!(frac >= 0.48, "contiguous fraction {frac}");
}

#[test]
fn generator_is_reproducible_and_cell_specific() {
    let cfg = GenConfig::new(5, 2, 42, 3);
    assert_eq!(
        generate_instance(&cfg, 1).unwrap(),
        generate_instance(&cfg, 1).unwrap()
    );
    assert_ne!(
        generate_instance(&cfg, 1).unwrap(),
        generate_instance(&cfg, 2).unwrap()
    );
    let other = GenConfig::new(5, 2, 43, 3);
    assert_ne!(
        generate_instance(&cfg, 1).unwrap(),
        generate_instance(&other, 1).unwrap()
    );
}

#[test]
fn documents_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("valet-core-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(8), MEDIUM);
    let path = dir.join("inst.json");
    std::fs::write(&path, save_instance(&inst).unwrap()).unwrap();
    assert_eq!(load_instance(&std::fs::read(&path).unwrap()).unwrap(), inst);

    let tdm = ThreeDMInstance::new(2, vec![[1, 2, 1], [2, 1, 2]]).unwrap();
    assert_eq!(load_tdm(&save_tdm(&tdm).unwrap()).unwrap(), tdm);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invalid_input_is_reported_not_panicked() {
    let bad = br#"{"horizon": 3, "stations": 1, "rewards": [[1, 2]], "vehicles": [{"availability": [4], "charge_time": 1}]}"#;
    match load_instance(bad) {
        Err(Error::InvalidInstance(report)) => assert_eq!(report.violations.len(), 2),
        other => panic!("expected validation error, got {other:?}"),
    }
    let inst = Instance::new(
        2,
        1,
        vec![vec![1.0, 1.0]],
        vec![valet_core::Vehicle::new([1, 2], 1)],
    )
    .unwrap();
    let clash = [Assignment::new(0, 0, 1), Assignment::new(0, 0, 2)];
    assert!(matches!(
        is_feasible(&clash, &inst).unwrap(),
        Feasibility::Infeasible(Conflict::RechargeWindow { .. })
    ));
    assert!(matches!(
        is_feasible(&[Assignment::new(3, 0, 1)], &inst),
        Err(Error::IndexOutOfRange { .. })
    ));
}

#[test]
fn matching_uses_positive_edges_at_most_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let rows = rng.gen_range(1..5);
        let cols = rng.gen_range(1..5);
        let w: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-3.0..5.0)).collect())
            .collect();
        let m = valet_core::exact::matching::max_weight_matching(&w);
        let mut used = vec![false; cols];
        for (r, c) in m.iter().enumerate() {
            if let Some(c) = *c {
                assert!(!used[c] && w[r][c] > 0.0);
                used[c] = true;
            }
        }
    }
}
