mod common;

use lric_walk::dynamics::{
    double_dot_rhs, evolve, evolve_trajectory, DensityMatrix, DoubleDot, Rk4, WalkConfig,
};
use lric_walk::mixing::tv_distance;
use lric_walk::perturbation::ModeTable;
use lric_walk::{build_lric, C64};

use common::max_diff;

#[test]
fn shifted_start_is_a_rotated_trajectory() {
    let g = build_lric(8, 3).unwrap();
    let cfg = WalkConfig::new(0.01, 20.0).with_stride(50);
    let base = evolve(&g, &cfg, &DensityMatrix::localized(8, 0).unwrap()).unwrap();
    for s in [1, 3, 6] {
        let shifted = evolve(&g, &cfg, &DensityMatrix::localized(8, s).unwrap()).unwrap();
        for i in 0..base.len() {
            let rotated: Vec<f64> = (0..8).map(|j| base.dist(i)[(j + 8 - s) % 8]).collect();
            assert!(max_diff(shifted.dist(i), &rotated) < 1e-10);
        }
    }
}

#[test]
fn purity_decreases_under_dephasing() {
    let g = build_lric(9, 2).unwrap();
    let cfg = WalkConfig::new(0.05, 60.0).with_stride(100);
    let traj = evolve_trajectory(&g, &cfg, &DensityMatrix::localized(9, 0).unwrap(), true).unwrap();
    let purities: Vec<f64> = traj
        .states
        .iter()
        .map(|s| s.to_density().unwrap().purity())
        .collect();
    assert!(purities.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(*purities.last().unwrap() < 0.5);
    let coherent = evolve_trajectory(
        &g,
        &WalkConfig::new(0.0, 10.0),
        &DensityMatrix::localized(9, 0).unwrap(),
        false,
    )
    .unwrap();
    assert!((coherent.final_state.purity() - 1.0).abs() < 1e-10);
}

#[test]
fn maximally_mixed_state_is_stationary() {
    let g = build_lric(7, 3).unwrap();
    let cfg = WalkConfig::new(0.3, 5.0).with_stride(100);
    let s = evolve(&g, &cfg, &DensityMatrix::maximally_mixed(7)).unwrap();
    for (_, p) in s.iter() {
        assert!(tv_distance(p).unwrap() < 1e-14);
    }
}

#[test]
fn walk_settles_well_past_the_bound_time() {
    let g = build_lric(8, 3).unwrap();
    let cfg = WalkConfig::new(0.01, 4000.0).with_stride(1_000_000);
    let s = evolve(&g, &cfg, &DensityMatrix::localized(8, 0).unwrap()).unwrap();
    assert!(tv_distance(s.dist(s.len() - 1)).unwrap() < 0.01);
}

fn max_first_order_gap(gamma: f64) -> f64 {
    let g = build_lric(12, 5).unwrap();
    let cfg = WalkConfig::new(gamma, 40.0).with_stride(200);
    let oracle = evolve(&g, &cfg, &DensityMatrix::localized(12, 0).unwrap()).unwrap();
    let table = ModeTable::new(&g, gamma).unwrap();
    oracle
        .iter()
        .map(|(t, p)| max_diff(p, &table.distribution(t)))
        .fold(0.0, f64::max)
}

#[test]
fn first_order_error_is_linear_in_gamma() {
    let coarse = max_first_order_gap(1e-4);
    let fine = max_first_order_gap(1e-5);
    assert!(coarse < 5e-4, "{coarse}");
    let ratio = coarse / fine;
    assert!((5.0..=20.0).contains(&ratio), "ratio {ratio}");
}

fn integrate_double_dot(omega0: f64, gamma: f64, t_end: f64, dt: f64) -> Vec<(f64, DoubleDot)> {
    let steps = (t_end / dt).round() as usize;
    let mut y = vec![
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    ];
    let mut rk = Rk4::new(4);
    let mut out = Vec::with_capacity(steps);
    for i in 1..=steps {
        rk.step(&mut y, dt, |s, d| {
            let r = double_dot_rhs(omega0, 0.0, gamma, &[[s[0], s[1]], [s[2], s[3]]]);
            d.copy_from_slice(&[r[0][0], r[0][1], r[1][0], r[1][1]]);
        });
        out.push((i as f64 * dt, [[y[0], y[1]], [y[2], y[3]]]));
    }
    out
}

#[test]
fn strong_monitoring_freezes_the_double_dot() {
    let omega0 = 1.0;
    let mut previous = f64::INFINITY;
    let mut populations = Vec::new();
    for gamma in [25.0, 100.0, 400.0] {
        let traj = integrate_double_dot(omega0, gamma, 5.0, 1e-4);
        let coherence = traj.iter().map(|(_, r)| r[0][1].norm()).fold(0.0, f64::max);
        assert!(
            coherence <= 2.0 * omega0 / gamma,
            "gamma {gamma}: {coherence}"
        );
        assert!(coherence < previous);
        previous = coherence;
        let (_, last) = traj.last().unwrap();
        assert!((last[0][0] + last[1][1] - 1.0).norm() < 1e-12);
        populations.push(last[0][0].re);
    }
    assert!(populations.windows(2).all(|w| w[1] > w[0]));
    assert!(populations[2] > 0.9);
}
