//! Exact propagation over long horizons.
//!
//! The master-equation generator is assembled densely by applying the
//! stencil to every matrix unit, then exponentiated once per sample stride.
//! Repeated application of `exp(G Δ)` is exact up to round-off, which fixed-step
//! integration cannot match over `t ~ 1/Γ` horizons with `Γ ≪ 1`.

use nalgebra::DMatrix;

use crate::dynamics::{DensityMatrix, MasterEquation};
use crate::graph::LricGraph;
use crate::series::{ProbabilitySeries, SeriesMeta, Source};
use crate::{Error, Result, C64};

/// Largest `n` for which the dense `n² x n²` generator is built.
pub const PROPAGATOR_MAX_N: usize = 40;

/// Dense generator acting on row-major `vec(ρ)`.
pub fn generator_matrix(g: &LricGraph, gamma: f64) -> Result<DMatrix<C64>> {
    let n = g.n();
    if n > PROPAGATOR_MAX_N {
        return Err(Error::TooLarge {
            what: "dense master-equation generator",
            n,
            limit: PROPAGATOR_MAX_N,
        });
    }
    let dim = n * n;
    let eq = MasterEquation::new(g, gamma);
    let mut gen = DMatrix::zeros(dim, dim);
    let mut unit = vec![C64::new(0.0, 0.0); dim];
    let mut col = vec![C64::new(0.0, 0.0); dim];
    for c in 0..dim {
        unit[c] = C64::new(1.0, 0.0);
        eq.apply(&unit, &mut col);
        unit[c] = C64::new(0.0, 0.0);
        for (r, v) in col.iter().enumerate() {
            gen[(r, c)] = *v;
        }
    }
    Ok(gen)
}

#[derive(Debug, Clone)]
pub struct Propagator {
    dim: usize,
    step: f64,
    /// Row-major `exp(G step)`.
    matrix: Vec<C64>,
}

impl Propagator {
    pub fn new(g: &LricGraph, gamma: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::param(format!(
                "propagator step must be positive, got {step}"
            )));
        }
        let gen = generator_matrix(g, gamma)?;
        let dim = gen.nrows();
        let exp = (gen * C64::new(step, 0.0)).exp();
        let matrix = (0..dim * dim).map(|i| exp[(i / dim, i % dim)]).collect();
        Ok(Propagator { dim, step, matrix })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn apply(&self, x: &[C64], out: &mut [C64]) {
        let dim = self.dim;
        for (r, o) in out.iter_mut().enumerate().take(dim) {
            let row = &self.matrix[r * dim..(r + 1) * dim];
            let (mut re, mut im) = (0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                re += a.re * b.re - a.im * b.im;
                im += a.re * b.im + a.im * b.re;
            }
            *o = C64::new(re, im);
        }
    }

    pub fn advance(&self, rho: &mut DensityMatrix, scratch: &mut Vec<C64>) {
        scratch.resize(self.dim, C64::new(0.0, 0.0));
        self.apply(rho.as_slice(), scratch);
        rho.as_mut_slice().copy_from_slice(scratch);
    }
}

/// Populations at `t0 + i * stride` for `i = 0..=count`, starting from
/// `rho0` at time zero.
pub fn evolve_exact_grid(
    g: &LricGraph,
    gamma: f64,
    rho0: &DensityMatrix,
    t0: f64,
    stride: f64,
    count: usize,
) -> Result<ProbabilitySeries> {
    let n = g.n();
    if rho0.n() != n {
        return Err(Error::param("initial state dimension does not match graph"));
    }
    if !(gamma >= 0.0) {
        return Err(Error::param("gamma must be >= 0"));
    }
    if !(t0 >= 0.0) {
        return Err(Error::param("start time must be >= 0"));
    }
    rho0.validate(1e-9)?;
    let mut rho = rho0.clone();
    let mut scratch = Vec::new();
    if t0 > 0.0 {
        Propagator::new(g, gamma, t0)?.advance(&mut rho, &mut scratch);
    }
    let prop = Propagator::new(g, gamma, stride)?;
    let mut series = ProbabilitySeries::new(SeriesMeta {
        n,
        m: g.m(),
        gamma,
        source: Source::Oracle,
    });
    series.push(t0, rho.diagonal());
    for i in 1..=count {
        prop.advance(&mut rho, &mut scratch);
        series.push(t0 + i as f64 * stride, rho.diagonal());
    }
    Ok(series)
}

/// Populations on the grid `0, stride, 2 stride, ...` up to at least `t_max`.
pub fn evolve_exact(
    g: &LricGraph,
    gamma: f64,
    rho0: &DensityMatrix,
    stride: f64,
    t_max: f64,
) -> Result<ProbabilitySeries> {
    if !(stride > 0.0) || !(t_max >= 0.0) {
        return Err(Error::param(
            "stride must be positive and t_max non-negative",
        ));
    }
    let count = (t_max / stride - 1e-9).ceil().max(0.0) as usize;
    evolve_exact_grid(g, gamma, rho0, 0.0, stride, count)
}
