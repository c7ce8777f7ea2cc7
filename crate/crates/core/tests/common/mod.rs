//! Test-only reference routines, kept independent of the library's own
//! numerical paths.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = a.nrows();
    let norm: f64 = (0..dim)
        .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / C64::new(2f64.powi(squarings as i32), 0.0);
    let mut result = DMatrix::<C64>::identity(dim, dim);
    let mut term = DMatrix::<C64>::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        result += &term;
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Adjacency-based Laplacian `A - 4 I` of the cycle with chords at distance `m`.
pub fn laplacian(n: usize, m: usize) -> DMatrix<f64> {
    let mut h = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        h[(j, j)] = -4.0;
        for o in [1, n - 1, m, n - m] {
            h[(j, (j + o) % n)] = 1.0;
        }
    }
    h
}

pub fn to_complex(h: &DMatrix<f64>) -> DMatrix<C64> {
    h.map(|x| C64::new(x, 0.0))
}

/// Largest entry-wise difference between two equal-length slices.
pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
