//! Total-variation mixing times and their analytic bounds.
//!
//! Distances use the unhalved convention `Σ_j |p_j - 1/n|`. The mixing time
//! of a sampled series is the earliest grid time after which every later
//! sample stays within `ε` of uniform.

use std::f64::consts::PI;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve, evolve_exact, DensityMatrix, WalkConfig, PROPAGATOR_MAX_N};
use crate::graph::LricGraph;
use crate::perturbation::ModeTable;
use crate::phase::i_pow;
use crate::series::ProbabilitySeries;
use crate::{Error, Result, C64};

pub const DEFAULT_EPSILON: f64 = 0.01;
const NORMALIZATION_SLACK: f64 = 1e-6;

/// `Σ_j |p_j - 1/n|`.
pub fn tv_distance(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::EmptySeries);
    }
    let total: f64 = p.iter().sum();
    if !((total - 1.0).abs() <= NORMALIZATION_SLACK) {
        return Err(Error::NotNormalized(total));
    }
    let u = 1.0 / p.len() as f64;
    Ok(p.iter().map(|x| (x - u).abs()).sum())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )))
    }
}

/// Earliest sample time after which the distance never exceeds `epsilon`
/// again within the horizon, or `None` if the last sample is still above it.
pub fn mixing_time(series: &ProbabilitySeries, epsilon: f64) -> Result<Option<f64>> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    check_epsilon(epsilon)?;
    let mut entry = None;
    for (t, p) in series.iter() {
        if tv_distance(p)? <= epsilon {
            entry.get_or_insert(t);
        } else {
            entry = None;
        }
    }
    Ok(entry)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(m: usize) -> Self {
        if m % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

fn check_bound_args(n: usize, min_n: usize, gamma: f64, epsilon: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::param(format!(
            "gamma must be positive for mixing, got {gamma}"
        )));
    }
    if n < min_n {
        return Err(Error::param(format!("bound needs n >= {min_n}, got {n}")));
    }
    check_epsilon(epsilon)
}

/// Odd-`m` upper bound `(1/Γ) ln(n/ε) (1 + 2/(n-2))`.
pub fn mixing_bound_odd(n: usize, gamma: f64, epsilon: f64) -> Result<f64> {
    check_bound_args(n, 3, gamma, epsilon)?;
    let nf = n as f64;
    Ok((nf / epsilon).ln() / gamma * (1.0 + 2.0 / (nf - 2.0)))
}

/// Even-`m` upper bound `(1/Γ) (1 + 1/(n-1)) ln(n/ε)`.
pub fn mixing_bound_even(n: usize, gamma: f64, epsilon: f64) -> Result<f64> {
    check_bound_args(n, 2, gamma, epsilon)?;
    let nf = n as f64;
    Ok((1.0 + 1.0 / (nf - 1.0)) * (nf / epsilon).ln() / gamma)
}

/// Parity-appropriate upper bound for `g`.
pub fn mixing_bound(g: &LricGraph, gamma: f64, epsilon: f64) -> Result<f64> {
    match Parity::of(g.m()) {
        Parity::Odd => mixing_bound_odd(g.n(), gamma, epsilon),
        Parity::Even => mixing_bound_even(g.n(), gamma, epsilon),
    }
}

/// The trivial lower bound.
pub fn mixing_bound_lower() -> f64 {
    0.0
}

/// `ln(n/ε) / r`, where `r` is the slowest first-order decay rate of the
/// populated modes. Degenerate clusters of size `d` decay at `Γ(n-d)/n`, so
/// this reduces to the parity bounds when clusters have at most two (odd)
/// or one (even) member.
pub fn mixing_bound_spectral(g: &LricGraph, gamma: f64, epsilon: f64) -> Result<f64> {
    check_bound_args(g.n(), 3, gamma, epsilon)?;
    // The decay rates scale linearly with Γ, so build the table at a small
    // reference rate to stay inside the perturbative guard.
    let reference = 1e-3 / g.n() as f64;
    let rate = ModeTable::new(g, reference)?.slowest_decay_rate() / reference * gamma;
    Ok((g.n() as f64 / epsilon).ln() / rate)
}

/// Coherent mode sum `M_j(t)` used to rewrite the first-order populations.
///
/// Odd: `(1/n) Σ_k exp[i t sin(2πk/n) + i^m t sin(2πkm/n)] e^{2πikj/n}`.
///
/// Even: `(1/n²) Σ_{k,l} exp[i (t/2)(sin(2πk/n) + sin(2πl/n))
/// - i^{m+1} (t/2)(cos(2πkm/n) - cos(2πlm/n))] e^{2πi(k+l)j/n}`.
pub fn m_function(n: usize, m: usize, j: usize, t: f64, parity: Parity) -> C64 {
    let nf = n as f64;
    let angle = |k: usize| 2.0 * PI * k as f64 / nf;
    let wave = |k: usize| C64::from_polar(1.0, 2.0 * PI * ((k * j) % n) as f64 / nf);
    let im = C64::new(0.0, 1.0);
    match parity {
        Parity::Odd => {
            let chord = i_pow(m as i64);
            let sum: C64 = (0..n)
                .map(|k| {
                    let a = angle(k);
                    let mk = angle((k * m) % n);
                    (im * t * a.sin() + chord * t * mk.sin()).exp() * wave(k)
                })
                .sum();
            sum / nf
        }
        Parity::Even => {
            let chord = i_pow(m as i64 + 1);
            let single: Vec<(f64, f64)> = (0..n)
                .map(|k| (angle(k).sin(), angle((k * m) % n).cos()))
                .collect();
            let mut sum = C64::new(0.0, 0.0);
            for k in 0..n {
                for l in 0..n {
                    let (sk, ck) = single[k];
                    let (sl, cl) = single[l];
                    let exponent = im * (t / 2.0) * (sk + sl) - chord * (t / 2.0) * (ck - cl);
                    sum += exponent.exp() * wave(k + l);
                }
            }
            sum / (nf * nf)
        }
    }
}

/// Right-hand side of the odd-`m` rewrite
/// `|P_j - 1/n| = e^{-Γ(n-2)t/n} |M_j(t/2)² - 1/n + (e^{-Γt/n} - 1)/n · (M_{2j}(t) - (2 - n mod 2)/n)|`.
pub fn odd_deviation_rewrite(n: usize, m: usize, gamma: f64, j: usize, t: f64) -> f64 {
    let nf = n as f64;
    let half = m_function(n, m, j, t / 2.0, Parity::Odd);
    let double = m_function(n, m, (2 * j) % n, t, Parity::Odd);
    let zero_modes = (2 - n % 2) as f64 / nf;
    let inner =
        half * half - 1.0 / nf + ((-gamma * t / nf).exp() - 1.0) / nf * (double - zero_modes);
    (-gamma * (nf - 2.0) * t / nf).exp() * inner.norm()
}

/// Which brute-force integrator produces the series for [`analyze_mixing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Oracle {
    /// Dense exponential of the generator, applied once per sample.
    Exact,
    /// Fixed-step RK4 with the given step.
    Rk4 { dt: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingOptions {
    pub oracle: Oracle,
    /// Horizon as a multiple of the larger of the parity and spectral bounds.
    pub horizon_factor: f64,
    /// First sampling stride; defaults to `bound / 4000` clamped to `[0.01, 2]`.
    pub initial_stride: Option<f64>,
    /// Stop refining once successive estimates differ by less than this
    /// relative amount.
    pub refine_tol: f64,
    pub max_refinements: usize,
}

impl Default for MixingOptions {
    fn default() -> Self {
        MixingOptions {
            oracle: Oracle::Exact,
            horizon_factor: 3.0,
            initial_stride: None,
            refine_tol: 0.01,
            max_refinements: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub graph: GraphSpec,
    pub gamma: f64,
    pub parity: Parity,
    pub epsilon: f64,
    /// `None` when the distance had not settled below `ε` by the horizon.
    pub t_mix_empirical: Option<f64>,
    pub bound_upper: f64,
    pub bound_lower: f64,
    /// Bound from the slowest populated decay rate.
    pub bound_spectral: f64,
    pub satisfied: bool,
    /// Sampling stride of the final estimate.
    pub grid_resolution: f64,
    pub horizon: f64,
}

fn sample(
    g: &LricGraph,
    gamma: f64,
    stride: f64,
    horizon: f64,
    oracle: Oracle,
) -> Result<ProbabilitySeries> {
    let rho0 = DensityMatrix::localized(g.n(), 0)?;
    match oracle {
        Oracle::Exact => evolve_exact(g, gamma, &rho0, stride, horizon),
        Oracle::Rk4 { dt } => {
            let per_sample = (stride / dt).round().max(1.0) as usize;
            let cfg = WalkConfig::new(gamma, horizon)
                .with_dt(dt)
                .with_stride(per_sample);
            evolve(g, &cfg, &rho0)
        }
    }
}

/// Empirical mixing time from the oracle, refined by halving the sampling
/// stride, together with the analytic bounds.
pub fn analyze_mixing(
    g: &LricGraph,
    gamma: f64,
    epsilon: f64,
    opts: &MixingOptions,
) -> Result<MixingReport> {
    let bound_upper = mixing_bound(g, gamma, epsilon)?;
    let bound_spectral = mixing_bound_spectral(g, gamma, epsilon)?;
    if opts.oracle == Oracle::Exact && g.n() > PROPAGATOR_MAX_N {
        return Err(Error::TooLarge {
            what: "exact propagator",
            n: g.n(),
            limit: PROPAGATOR_MAX_N,
        });
    }
    if !(opts.horizon_factor >= 1.0) {
        return Err(Error::param("horizon factor must be at least 1"));
    }
    let horizon = opts.horizon_factor * bound_upper.max(bound_spectral);
    let mut stride = opts
        .initial_stride
        .unwrap_or_else(|| (bound_upper / 4000.0).clamp(0.01, 2.0));
    if !(stride > 0.0) {
        return Err(Error::param("sampling stride must be positive"));
    }

    let mut estimate = mixing_time(&sample(g, gamma, stride, horizon, opts.oracle)?, epsilon)?;
    let mut resolution = stride;
    for _ in 0..opts.max_refinements {
        stride /= 2.0;
        let next = mixing_time(&sample(g, gamma, stride, horizon, opts.oracle)?, epsilon)?;
        let settled = match (estimate, next) {
            (Some(a), Some(b)) => (a - b).abs() <= opts.refine_tol * b.max(resolution),
            (None, None) => true,
            _ => false,
        };
        estimate = next;
        resolution = stride;
        if settled {
            break;
        }
    }
    if estimate.is_none() {
        warn!("G({g}) gamma={gamma}: distance still above {epsilon} at horizon {horizon}");
    }
    info!("G({g}) gamma={gamma} eps={epsilon}: t_mix={estimate:?} bound={bound_upper}");

    Ok(MixingReport {
        graph: GraphSpec { n: g.n(), m: g.m() },
        gamma,
        parity: Parity::of(g.m()),
        epsilon,
        t_mix_empirical: estimate,
        bound_upper,
        bound_lower: mixing_bound_lower(),
        bound_spectral,
        satisfied: estimate.is_some_and(|t| t <= bound_upper),
        grid_resolution: resolution,
        horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_lric;
    use crate::perturbation::closed_form_probability;
    use crate::series::{SeriesMeta, Source};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn meta(n: usize) -> SeriesMeta {
        SeriesMeta {
            n,
            m: 2,
            gamma: 0.0,
            source: Source::Oracle,
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(tv_distance(&[0.125; 8]).unwrap(), 0.0);
        let mut delta = vec![0.0; 8];
        delta[0] = 1.0;
        assert_abs_diff_eq!(tv_distance(&delta).unwrap(), 1.75, epsilon = 1e-15);
        assert!(matches!(
            tv_distance(&[0.5, 0.6]),
            Err(Error::NotNormalized(_))
        ));
        assert!(tv_distance(&[]).is_err());
    }

    #[test]
    fn sup_tail_convention() {
        let mut s = ProbabilitySeries::new(meta(2));
        for (t, p) in [
            (0.0, 1.0),
            (1.0, 0.5),
            (2.0, 0.6),
            (3.0, 0.502),
            (4.0, 0.501),
        ] {
            s.push(t, vec![p, 1.0 - p]);
        }
        assert_eq!(mixing_time(&s, 0.01).unwrap(), Some(3.0));
        assert_eq!(mixing_time(&s, 0.5).unwrap(), Some(1.0));
        assert_eq!(mixing_time(&s, 0.001).unwrap(), None);
        assert!(mixing_time(&ProbabilitySeries::new(meta(2)), 0.01).is_err());

        let mut uniform = ProbabilitySeries::new(meta(4));
        for t in 0..5 {
            uniform.push(t as f64, vec![0.25; 4]);
        }
        assert_eq!(mixing_time(&uniform, 0.01).unwrap(), Some(0.0));
    }

    #[test]
    fn bound_values() {
        assert_abs_diff_eq!(
            mixing_bound_odd(10, 1e-3, 0.01).unwrap(),
            8634.694098727,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            mixing_bound_even(10, 1e-3, 0.01).unwrap(),
            7675.283643313,
            epsilon = 1e-6
        );
        let a = build_lric(11, 3).unwrap();
        let b = build_lric(11, 5).unwrap();
        assert_eq!(
            mixing_bound(&a, 1e-3, 0.01).unwrap(),
            mixing_bound(&b, 1e-3, 0.01).unwrap()
        );
        assert_eq!(
            mixing_bound_odd(10, 2e-3, 0.01).unwrap() * 2.0,
            mixing_bound_odd(10, 1e-3, 0.01).unwrap()
        );
        assert!(mixing_bound_odd(10, 0.0, 0.01).is_err());
        assert!(mixing_bound_even(10, 0.0, 0.01).is_err());
        let plain = (1e6f64 / 0.01).ln() / 1e-3;
        let big = mixing_bound_even(1_000_000, 1e-3, 0.01).unwrap();
        assert!(big > plain && big < plain * 1.00001);
    }

    #[test]
    fn spectral_bound_matches_parity_bound_without_large_clusters() {
        let g = build_lric(12, 3).unwrap();
        assert_abs_diff_eq!(
            mixing_bound_spectral(&g, 1e-3, 0.01).unwrap(),
            mixing_bound(&g, 1e-3, 0.01).unwrap(),
            epsilon = 1e-6
        );
        let g = build_lric(10, 3).unwrap();
        assert!(
            mixing_bound_spectral(&g, 1e-3, 0.01).unwrap() > mixing_bound(&g, 1e-3, 0.01).unwrap()
        );
    }

    #[test]
    fn m_function_properties() {
        for (n, m) in [(10, 3), (9, 4), (12, 2)] {
            let parity = Parity::of(m);
            for j in 0..n {
                let v = m_function(n, m, j, 0.0, parity);
                assert_abs_diff_eq!(
                    (v - if j == 0 { 1.0 } else { 0.0 }).norm(),
                    0.0,
                    epsilon = 1e-14
                );
                for t in [0.3, 2.0, 17.0, 250.0] {
                    assert!(m_function(n, m, j, t, parity).norm() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn odd_rewrite_reproduces_closed_form() {
        let g = build_lric(10, 3).unwrap();
        for t in [0.0, 1.0, 7.5, 60.0, 900.0] {
            for j in 0..10 {
                let p = closed_form_probability(&g, 1e-4, j, t).unwrap();
                let rhs = odd_deviation_rewrite(10, 3, 1e-4, j, t);
                assert_abs_diff_eq!((p - 0.1).abs(), rhs, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn coherent_walk_never_mixes() {
        let g = build_lric(8, 3).unwrap();
        let rho = DensityMatrix::localized(8, 0).unwrap();
        let s = evolve_exact(&g, 0.0, &rho, 0.5, 500.0).unwrap();
        assert_eq!(mixing_time(&s, 0.01).unwrap(), None);
    }

    proptest! {
        #[test]
        fn mixing_time_monotone_in_epsilon(
            steps in proptest::collection::vec(0.0f64..0.5, 1..40),
            e1 in 0.001f64..0.9,
            e2 in 0.001f64..0.9,
        ) {
            let mut s = ProbabilitySeries::new(meta(2));
            for (i, d) in steps.iter().enumerate() {
                s.push(i as f64, vec![0.5 + d / 2.0, 0.5 - d / 2.0]);
            }
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            let a = mixing_time(&s, lo).unwrap();
            let b = mixing_time(&s, hi).unwrap();
            match (a, b) {
                (Some(a), Some(b)) => prop_assert!(b <= a),
                (Some(_), None) => prop_assert!(false, "larger epsilon not reached"),
                _ => {}
            }
        }
    }
}
