//! Bloch-state solution of the coherent walk and the classical random walk.
//!
//! Every `G(n, m)` Hamiltonian is circulant, so it is diagonalized by the
//! Bloch states `Φ_θ(j) = e^{-iθj}/√n` with `θ = 2πk/n`. Periodicity forces
//! `e^{-iθn} = 1`, which fixes that momentum grid.

use std::f64::consts::PI;

use crate::graph::{Convention, LricGraph};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMode {
    pub index: usize,
    pub theta: f64,
    pub energy: f64,
}

#[inline]
pub fn theta(n: usize, k: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index >= n {
        Err(Error::IndexOutOfRange { index, n })
    } else {
        Ok(())
    }
}

/// `E = -4 + 2cos θ + 2cos mθ`, the Bloch energy in the Laplacian
/// normalization.
pub fn bloch_energy(n: usize, m: usize, k: usize) -> Result<f64> {
    check_index(k, n)?;
    Ok(energy_unchecked(n, m, k, Convention::Laplacian))
}

fn energy_unchecked(n: usize, m: usize, k: usize, convention: Convention) -> f64 {
    let t = theta(n, k);
    let hop = 2.0 * t.cos() + 2.0 * (m as f64 * t).cos();
    convention.diagonal() + convention.hopping() * hop
}

pub fn mode_energy(g: &LricGraph, k: usize, convention: Convention) -> Result<f64> {
    check_index(k, g.n())?;
    Ok(energy_unchecked(g.n(), g.m(), k, convention))
}

pub fn bloch_modes(g: &LricGraph) -> Vec<BlochMode> {
    (0..g.n())
        .map(|k| BlochMode {
            index: k,
            theta: theta(g.n(), k),
            energy: energy_unchecked(g.n(), g.m(), k, Convention::Laplacian),
        })
        .collect()
}

pub fn bloch_state(n: usize, k: usize) -> Result<Vec<C64>> {
    check_index(k, n)?;
    let norm = 1.0 / (n as f64).sqrt();
    let t = theta(n, k);
    Ok((0..n)
        .map(|j| C64::from_polar(norm, -t * j as f64))
        .collect())
}

/// Transition amplitude `<k| e^{-iHt} |j>` as a Bloch sum.
pub fn quantum_amplitude(g: &LricGraph, convention: Convention, k: usize, j: usize, t: f64) -> C64 {
    let n = g.n();
    let d = (k + n - j % n) % n;
    let sum: C64 = (0..n)
        .map(|q| {
            let e = energy_unchecked(n, g.m(), q, convention);
            C64::from_polar(1.0, -t * e - theta(n, q) * d as f64)
        })
        .sum();
    sum / n as f64
}

/// `π_{k,j}(t) = |<k| e^{-iHt} |j>|²`.
pub fn quantum_transition_probability(
    g: &LricGraph,
    convention: Convention,
    k: usize,
    j: usize,
    t: f64,
) -> Result<f64> {
    check_index(k, g.n())?;
    check_index(j, g.n())?;
    if t < 0.0 {
        return Err(Error::param("time must be non-negative"));
    }
    Ok(quantum_amplitude(g, convention, k, j, t).norm_sqr())
}

/// Node distribution at time `t` for a walker started at `start`.
pub fn quantum_distribution(
    g: &LricGraph,
    convention: Convention,
    start: usize,
    t: f64,
) -> Vec<f64> {
    (0..g.n())
        .map(|k| quantum_amplitude(g, convention, k, start, t).norm_sqr())
        .collect()
}

/// Classical continuous-time random walk, generated by the transfer matrix
/// with `-4` on the diagonal: `P_{k,j}(t) = Σ_θ e^{tE_θ} <k|Φ_θ><Φ_θ|j>`.
///
/// `E_θ <= 0`, so this is a decaying stochastic semigroup converging to
/// `1/n`.
pub fn classical_transition_probability(g: &LricGraph, k: usize, j: usize, t: f64) -> Result<f64> {
    let n = g.n();
    check_index(k, n)?;
    check_index(j, n)?;
    if t < 0.0 {
        return Err(Error::param("time must be non-negative"));
    }
    let d = (k + n - j) % n;
    let sum: f64 = (0..n)
        .map(|q| {
            let e = energy_unchecked(n, g.m(), q, Convention::Laplacian);
            (t * e).exp() * (theta(n, q) * d as f64).cos()
        })
        .sum();
    Ok(sum / n as f64)
}
