mod common;

use approx::assert_abs_diff_eq;
use lric_walk::spectral::{classical_transition_probability, quantum_transition_probability};
use lric_walk::{build_lric, Convention, C64};

use common::{expm, laplacian, to_complex};

#[test]
fn quantum_probability_matches_matrix_exponential() {
    let g = build_lric(8, 3).unwrap();
    let h = to_complex(&laplacian(8, 3));
    for t in [0.3, 1.0, 4.7] {
        let u = expm(&(h.clone() * C64::new(0.0, -t)));
        for j in 0..8 {
            let p = quantum_transition_probability(&g, Convention::Laplacian, 2, j, t).unwrap();
            assert_abs_diff_eq!(p, u[(j, 2)].norm_sqr(), epsilon = 1e-10);
        }
    }
}

#[test]
fn dimensionless_convention_runs_at_quarter_speed() {
    let g = build_lric(9, 4).unwrap();
    let h = to_complex(&laplacian(9, 4));
    let u = expm(&(h * C64::new(0.0, -0.5)));
    for j in 0..9 {
        let p = quantum_transition_probability(&g, Convention::Dimensionless, 0, j, 2.0).unwrap();
        assert_abs_diff_eq!(p, u[(j, 0)].norm_sqr(), epsilon = 1e-10);
    }
}

#[test]
fn classical_probability_matches_matrix_exponential() {
    let g = build_lric(8, 3).unwrap();
    let p = expm(&(to_complex(&laplacian(8, 3)) * C64::new(0.5, 0.0)));
    for j in 0..8 {
        let c = classical_transition_probability(&g, 1, j, 0.5).unwrap();
        assert_abs_diff_eq!(c, p[(j, 1)].re, epsilon = 1e-10);
    }
}
