//! Fixed-step classical Runge-Kutta evolution of the master equation.

use log::warn;

use crate::dynamics::density::{RhoSnapshot, POSITIVITY_FAIL, POSITIVITY_WARN};
use crate::dynamics::{DensityMatrix, MasterEquation};
use crate::graph::LricGraph;
use crate::series::{ProbabilitySeries, SeriesMeta, Source};
use crate::{Error, Result, C64};

/// Trace or Hermiticity drift beyond this aborts an integration.
pub const INSTABILITY_THRESHOLD: f64 = 1e-6;

/// Classical fourth-order Runge-Kutta stepper with reusable scratch space.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); dim];
        Rk4 {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    /// Advances `y` by `h` under the autonomous system `y' = f(y)`.
    pub fn step<F>(&mut self, y: &mut [C64], h: f64, mut f: F)
    where
        F: FnMut(&[C64], &mut [C64]),
    {
        let Rk4 {
            k1,
            k2,
            k3,
            k4,
            tmp,
        } = self;
        f(y, k1);
        for ((t, &yi), &k) in tmp.iter_mut().zip(y.iter()).zip(k1.iter()) {
            *t = yi + k * (0.5 * h);
        }
        f(tmp, k2);
        for ((t, &yi), &k) in tmp.iter_mut().zip(y.iter()).zip(k2.iter()) {
            *t = yi + k * (0.5 * h);
        }
        f(tmp, k3);
        for ((t, &yi), &k) in tmp.iter_mut().zip(y.iter()).zip(k3.iter()) {
            *t = yi + k * h;
        }
        f(tmp, k4);
        let w = h / 6.0;
        for i in 0..y.len() {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    pub gamma: f64,
    pub epsilon: f64,
    pub t_max: f64,
    pub dt: f64,
    /// Number of integrator steps between emitted samples.
    pub sample_stride: usize,
}

impl WalkConfig {
    pub const DEFAULT_EPSILON: f64 = 0.01;
    pub const MAX_DT: f64 = 0.1;

    pub fn new(gamma: f64, t_max: f64) -> Self {
        WalkConfig {
            gamma,
            epsilon: Self::DEFAULT_EPSILON,
            t_max,
            dt: Self::default_dt(gamma),
            sample_stride: 1,
        }
    }

    /// `min(1e-2, 0.1 / max(1, Γ))`.
    pub fn default_dt(gamma: f64) -> f64 {
        (1e-2f64).min(0.1 / gamma.max(1.0))
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::param(format!(
                "gamma must be finite and >= 0, got {}",
                self.gamma
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::param(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.dt > 0.0 && self.dt <= Self::MAX_DT) {
            return Err(Error::param(format!(
                "dt must lie in (0, {}], got {}",
                Self::MAX_DT,
                self.dt
            )));
        }
        if !(self.t_max >= self.dt && self.t_max.is_finite()) {
            return Err(Error::param(format!(
                "t_max = {} must be finite and at least dt",
                self.t_max
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::param("sample stride must be at least 1"));
        }
        Ok(())
    }
}

/// Worst-case invariant violations seen on the sample grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    pub min_population: f64,
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub series: ProbabilitySeries,
    pub states: Vec<RhoSnapshot>,
    pub final_state: DensityMatrix,
    pub diagnostics: Diagnostics,
}

/// Integrates from `rho0` and returns the node populations on the sample grid.
pub fn evolve(g: &LricGraph, cfg: &WalkConfig, rho0: &DensityMatrix) -> Result<ProbabilitySeries> {
    evolve_trajectory(g, cfg, rho0, false).map(|t| t.series)
}

/// Like [`evolve`], optionally keeping the full density matrix at every
/// sample.
pub fn evolve_trajectory(
    g: &LricGraph,
    cfg: &WalkConfig,
    rho0: &DensityMatrix,
    keep_states: bool,
) -> Result<Trajectory> {
    cfg.validate()?;
    let n = g.n();
    if rho0.n() != n {
        return Err(Error::param(format!(
            "initial state has dimension {}, graph has {n} nodes",
            rho0.n()
        )));
    }
    rho0.validate(1e-9)?;

    let eq = MasterEquation::new(g, cfg.gamma);
    let mut rk = Rk4::new(n * n);
    let mut state = rho0.clone();
    let trace0 = state.trace();

    let steps = ((cfg.t_max / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
    let meta = SeriesMeta {
        n,
        m: g.m(),
        gamma: cfg.gamma,
        source: Source::Oracle,
    };
    let mut series = ProbabilitySeries::new(meta);
    let mut states = Vec::new();
    let mut diag = Diagnostics {
        min_population: f64::INFINITY,
        ..Default::default()
    };

    let mut record = |t: f64, rho: &DensityMatrix, diag: &mut Diagnostics| -> Result<()> {
        let drift = (rho.trace() - trace0).norm();
        let herm = rho.hermiticity_error();
        let pops = rho.diagonal();
        let min = pops.iter().copied().fold(f64::INFINITY, f64::min);
        diag.max_trace_drift = diag.max_trace_drift.max(drift);
        diag.max_hermiticity_error = diag.max_hermiticity_error.max(herm);
        diag.min_population = diag.min_population.min(min);
        let unstable = |quantity, value| Error::Unstable {
            t,
            quantity,
            value,
            dt: cfg.dt,
        };
        if !(drift <= INSTABILITY_THRESHOLD) {
            return Err(unstable("trace drift", drift));
        }
        if !(herm <= INSTABILITY_THRESHOLD) {
            return Err(unstable("hermiticity error", herm));
        }
        if !(min >= -POSITIVITY_FAIL) {
            return Err(unstable("negative population", min));
        }
        if min < -POSITIVITY_WARN {
            warn!("population {min:e} below zero at t = {t}; consider a smaller dt");
        }
        series.push(t, pops);
        if keep_states {
            states.push(rho.to_snapshot(t));
        }
        Ok(())
    };

    record(0.0, &state, &mut diag)?;
    for step in 1..=steps {
        let last = step == steps;
        let h = if last {
            cfg.t_max - (steps - 1) as f64 * cfg.dt
        } else {
            cfg.dt
        };
        rk.step(state.as_mut_slice(), h, |y, out| eq.apply(y, out));
        if last {
            record(cfg.t_max, &state, &mut diag)?;
        } else if step % cfg.sample_stride == 0 {
            record(step as f64 * cfg.dt, &state, &mut diag)?;
        }
    }
    diag.steps = steps;

    Ok(Trajectory {
        series,
        states,
        final_state: state,
        diagnostics: diag,
    })
}
