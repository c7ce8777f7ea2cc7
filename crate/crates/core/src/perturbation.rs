//! First-order small-decoherence solution of the dephased walk.
//!
//! In the phase-rotated coordinates `S_{j,k} = i^{k-j} ρ_{j,k}` the coherent
//! generator `L` is diagonal in the Fourier modes
//! `V^{(k,l)}_{(μ,ν)} = e^{2πi(kμ + lν)/n} / n` with eigenvalues
//!
//! ```text
//! odd m:  λ = i sin(π(k+l)/n) cos(π(k-l)/n) + i^m     sin(πm(k+l)/n) cos(πm(k-l)/n)
//! even m: λ = i sin(π(k+l)/n) cos(π(k-l)/n) + i^(m+1) sin(πm(k+l)/n) sin(πm(k-l)/n)
//! ```
//!
//! Dephasing `U` couples two modes only when their `k + l` agree (mod `n`),
//! with matrix elements `-Γ(n-1)/n` on the diagonal and `Γ/n` off it. The
//! walker starts on node 0, which loads every mode with the same weight
//! `1/n²`, so within a degenerate cluster of size `d` only the symmetric
//! combination is populated and it acquires the first-order shift
//! `-Γ(n-d)/n`. Isolated modes (`d = 1`) give `-Γ(n-1)/n`, swap pairs
//! (`d = 2`) give `-Γ(n-2)/n`, and the `k + l ≡ 0` cluster (`d = n`) is the
//! stationary `1/n` background. Then
//!
//! ```text
//! P_j(t) = 1/n + Σ_{k+l≢0} e^{2πi(k+l)j/n} e^{t(λ_{k,l} + λ̃_{k,l})} / n²
//! ```
//!
//! Two expansions of this sum are provided:
//!
//! * [`Expansion::Periodic`] (the default) evaluates `λ` at the momenta
//!   `(k - n/4, l + n/4)`, the images of the periodic density-matrix modes
//!   under the phase rotation, and sizes every degenerate cluster
//!   numerically. It is valid for every `n`.
//! * [`Expansion::ClosedForm`] keeps integer momenta and the two fixed
//!   corrections (`-Γ(n-1)/n` for `k = l`, `-Γ(n-2)/n` otherwise for odd
//!   `m`; `-Γ(n-1)/n` throughout for even `m`). It coincides with the
//!   periodic expansion only when `4 | n` and no cluster exceeds two modes.
//!
//! The odd-`m` eigenvalue uses `cos(πm(k-l)/n)` in its second term; the
//! variant with `sin(πm(k+l)/n) sin(πm(k-l)/n)` fails the eigenrelation
//! `L V = λ V` (see [`eigenrelation_residual`]).

use std::f64::consts::PI;

use log::warn;
use nalgebra::SymmetricEigen;

use crate::dynamics::superoperator_l;
use crate::graph::LricGraph;
use crate::phase::i_pow;
use crate::series::{ProbabilitySeries, SeriesMeta, Source};
use crate::{Error, Result, C64};

/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Above this `Γn` a warning is logged; above 1 evaluation is refused.
pub const REGIME_WARN: f64 = 0.1;

/// Form of the `m`-term in the odd-`m` eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddTerm {
    /// `i^m sin(πm(k+l)/n) cos(πm(k-l)/n)`; satisfies the eigenrelation.
    CosCos,
    /// `i^m sin(πm(k+l)/n) sin(πm(k-l)/n)`; kept for comparison only.
    SinSin,
}

/// Eigenvalue of `L` at real momenta `(kappa, ell)`.
pub fn l_eigenvalue_variant(n: usize, m: usize, kappa: f64, ell: f64, odd: OddTerm) -> C64 {
    let (nf, mf) = (n as f64, m as f64);
    let sum = PI * (kappa + ell) / nf;
    let diff = PI * (kappa - ell) / nf;
    let first = C64::new(0.0, sum.sin() * diff.cos());
    let second = if m % 2 == 1 {
        let tail = match odd {
            OddTerm::CosCos => (mf * diff).cos(),
            OddTerm::SinSin => (mf * diff).sin(),
        };
        i_pow(m as i64) * ((mf * sum).sin() * tail)
    } else {
        i_pow(m as i64 + 1) * ((mf * sum).sin() * (mf * diff).sin())
    };
    first + second
}

pub fn l_eigenvalue_at(n: usize, m: usize, kappa: f64, ell: f64) -> C64 {
    l_eigenvalue_variant(n, m, kappa, ell, OddTerm::CosCos)
}

/// `λ_{k,l}` at integer momenta.
pub fn l_eigenvalue(n: usize, m: usize, k: usize, l: usize) -> Result<C64> {
    check(n, k, l)?;
    Ok(l_eigenvalue_at(n, m, k as f64, l as f64))
}

/// `V^{(k,l)}`, indexed row-major by `(μ, ν)`.
pub fn l_eigenvector(n: usize, k: usize, l: usize) -> Result<Vec<C64>> {
    check(n, k, l)?;
    let scale = 1.0 / n as f64;
    Ok((0..n * n)
        .map(|i| {
            let (mu, nu) = (i / n, i % n);
            let phase = 2.0 * PI * ((k * mu + l * nu) % n) as f64 / n as f64;
            C64::from_polar(scale, phase)
        })
        .collect())
}

fn check(n: usize, k: usize, l: usize) -> Result<()> {
    for index in [k, l] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegeneracyClass {
    /// `k = l`.
    Diagonal,
    /// `k ≠ l` with `λ_{k,l} = λ_{l,k}`.
    Swap,
    /// `k + l ≡ 0 (mod n)`: part of the stationary background.
    Excluded,
    Generic,
}

/// Classifies integer mode `(k, l)`.
pub fn classify(g: &LricGraph, k: usize, l: usize) -> Result<DegeneracyClass> {
    let n = g.n();
    check(n, k, l)?;
    Ok(if (k + l).is_multiple_of(n) {
        DegeneracyClass::Excluded
    } else if k == l {
        DegeneracyClass::Diagonal
    } else if (l_eigenvalue(n, g.m(), k, l)? - l_eigenvalue(n, g.m(), l, k)?).norm()
        < DEGENERACY_TOL
    {
        DegeneracyClass::Swap
    } else {
        DegeneracyClass::Generic
    })
}

/// The two fixed first-order shifts: `-Γ(n-1)/n` for `k = l` and
/// `-Γ(n-2)/n` for `k ≠ l`. Modes with `k + l ≡ 0` are rejected.
pub fn first_order_correction(n: usize, gamma: f64, k: usize, l: usize) -> Result<f64> {
    check(n, k, l)?;
    if (k + l).is_multiple_of(n) {
        return Err(Error::ExcludedMode { k, l });
    }
    let nf = n as f64;
    Ok(if k == l {
        -gamma * (nf - 1.0) / nf
    } else {
        -gamma * (nf - 2.0) / nf
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    /// Fourier indices of the mode; `k + l` fixes its spatial frequency.
    pub k: usize,
    pub l: usize,
    pub lambda: C64,
    pub correction: f64,
    pub class: DegeneracyClass,
    /// Number of modes sharing both `k + l (mod n)` and `λ`.
    pub multiplicity: usize,
}

impl SpectralPair {
    /// `λ + λ̃`, the exponent of this mode.
    pub fn rate(&self) -> C64 {
        self.lambda + self.correction
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expansion {
    Periodic,
    ClosedForm,
}

/// Precomputed mode sum for one `(n, m, Γ)`.
#[derive(Debug, Clone)]
pub struct ModeTable {
    graph: LricGraph,
    gamma: f64,
    expansion: Expansion,
    modes: Vec<SpectralPair>,
}

fn check_regime(n: usize, gamma: f64) -> Result<()> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::param(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )));
    }
    let gn = gamma * n as f64;
    if gn > 1.0 {
        return Err(Error::OutsidePerturbativeRegime(gn));
    }
    if gn > REGIME_WARN {
        warn!("gamma * n = {gn} is not small; first-order results are approximate");
    }
    Ok(())
}

impl ModeTable {
    pub fn new(g: &LricGraph, gamma: f64) -> Result<Self> {
        Self::with_expansion(g, gamma, Expansion::Periodic)
    }

    pub fn closed_form(g: &LricGraph, gamma: f64) -> Result<Self> {
        Self::with_expansion(g, gamma, Expansion::ClosedForm)
    }

    pub fn with_expansion(g: &LricGraph, gamma: f64, expansion: Expansion) -> Result<Self> {
        let (n, m) = (g.n(), g.m());
        check_regime(n, gamma)?;
        let nf = n as f64;
        let shift = match expansion {
            Expansion::Periodic => nf / 4.0,
            Expansion::ClosedForm => 0.0,
        };
        let lambda = |k: usize, l: usize| l_eigenvalue_at(n, m, k as f64 - shift, l as f64 + shift);

        let mut modes = Vec::with_capacity(n * n - n);
        for s in 1..n {
            let cluster: Vec<(usize, usize, C64)> = (0..n)
                .map(|k| {
                    let l = (s + n - k) % n;
                    (k, l, lambda(k, l))
                })
                .collect();
            for &(k, l, lam) in &cluster {
                let multiplicity = cluster
                    .iter()
                    .filter(|(_, _, other)| (other - lam).norm() < DEGENERACY_TOL)
                    .count();
                let (class, correction) = match expansion {
                    Expansion::Periodic => {
                        let (ks, ls) = (k as f64 - shift, l as f64 + shift);
                        let class = if (ks - ls).rem_euclid(nf).abs() < 1e-12 {
                            DegeneracyClass::Diagonal
                        } else if n % 2 == 0
                            && (l_eigenvalue_at(n, m, ls, ks) - lam).norm() < DEGENERACY_TOL
                        {
                            DegeneracyClass::Swap
                        } else {
                            DegeneracyClass::Generic
                        };
                        (class, -gamma * (nf - multiplicity as f64) / nf)
                    }
                    Expansion::ClosedForm => {
                        let class = classify(g, k, l)?;
                        let correction = if m % 2 == 1 {
                            first_order_correction(n, gamma, k, l)?
                        } else {
                            -gamma * (nf - 1.0) / nf
                        };
                        (class, correction)
                    }
                };
                modes.push(SpectralPair {
                    k,
                    l,
                    lambda: lam,
                    correction,
                    class,
                    multiplicity,
                });
            }
        }
        Ok(ModeTable {
            graph: *g,
            gamma,
            expansion,
            modes,
        })
    }

    pub fn graph(&self) -> &LricGraph {
        &self.graph
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn expansion(&self) -> Expansion {
        self.expansion
    }

    /// All modes with `k + l ≢ 0 (mod n)`.
    pub fn modes(&self) -> &[SpectralPair] {
        &self.modes
    }

    /// Complex mode sum; its imaginary part vanishes by the `(k,l) ↔ (-l,-k)`
    /// pairing.
    pub fn deviation_complex(&self, j: usize, t: f64) -> C64 {
        let n = self.graph.n();
        let nf = n as f64;
        let sum: C64 = self
            .modes
            .iter()
            .map(|p| {
                let s = (p.k + p.l) % n;
                let phase = 2.0 * PI * ((s * j) % n) as f64 / nf;
                (p.rate() * t).exp() * C64::from_polar(1.0, phase)
            })
            .sum();
        sum / (nf * nf)
    }

    pub fn probability(&self, j: usize, t: f64) -> f64 {
        let n = self.graph.n();
        let dev = self.deviation_complex(j % n, t);
        debug_assert!(dev.im.abs() < 1e-10, "imaginary residue {}", dev.im);
        1.0 / n as f64 + dev.re
    }

    /// `P_j(t)` for every node, in `O(n²)`.
    pub fn distribution(&self, t: f64) -> Vec<f64> {
        let n = self.graph.n();
        let nf = n as f64;
        let mut by_class = vec![C64::new(0.0, 0.0); n];
        for p in &self.modes {
            by_class[(p.k + p.l) % n] += (p.rate() * t).exp();
        }
        (0..n)
            .map(|j| {
                let sum: C64 = by_class
                    .iter()
                    .enumerate()
                    .map(|(s, a)| a * C64::from_polar(1.0, 2.0 * PI * ((s * j) % n) as f64 / nf))
                    .sum();
                debug_assert!(sum.im.abs() / (nf * nf) < 1e-10);
                1.0 / nf + sum.re / (nf * nf)
            })
            .collect()
    }

    pub fn series(&self, times: &[f64]) -> ProbabilitySeries {
        let mut s = ProbabilitySeries::new(SeriesMeta {
            n: self.graph.n(),
            m: self.graph.m(),
            gamma: self.gamma,
            source: Source::Analytic,
        });
        for &t in times {
            s.push(t, self.distribution(t));
        }
        s
    }

    /// Smallest populated decay rate, `Γ (n - d_max) / n`.
    pub fn slowest_decay_rate(&self) -> f64 {
        self.modes
            .iter()
            .map(|p| -p.correction)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.modes.iter().map(|p| p.multiplicity).max().unwrap_or(1)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "time must be finite and >= 0, got {t}"
        )))
    }
}

/// First-order `P_j(t)` for a walker started on node 0.
pub fn analytic_probability(g: &LricGraph, gamma: f64, j: usize, t: f64) -> Result<f64> {
    check_time(t)?;
    if j >= g.n() {
        return Err(Error::IndexOutOfRange { index: j, n: g.n() });
    }
    Ok(ModeTable::new(g, gamma)?.probability(j, t))
}

/// `P_j(t)` from the closed form with integer momenta and fixed corrections.
pub fn closed_form_probability(g: &LricGraph, gamma: f64, j: usize, t: f64) -> Result<f64> {
    check_time(t)?;
    if j >= g.n() {
        return Err(Error::IndexOutOfRange { index: j, n: g.n() });
    }
    Ok(ModeTable::closed_form(g, gamma)?.probability(j, t))
}

/// Numerical spectrum of the dense `L` superoperator. `L` is checked to be
/// anti-Hermitian, so `iL` is diagonalized with a Hermitian solver.
pub fn superoperator_spectrum(g: &LricGraph) -> Result<Vec<C64>> {
    let l = superoperator_l(g)?;
    let skew = (&l + l.adjoint()).camax();
    if skew > 1e-14 {
        return Err(Error::param(format!(
            "L is not anti-Hermitian (|L + L†| = {skew:e})"
        )));
    }
    let h = l * C64::new(0.0, 1.0);
    let eig = SymmetricEigen::new(h);
    Ok(eig.eigenvalues.iter().map(|&e| C64::new(0.0, -e)).collect())
}

/// `max_{k,l} ‖L V^{(k,l)} - λ_{k,l} V^{(k,l)}‖_∞` for the given odd-term
/// variant.
pub fn eigenrelation_residual(g: &LricGraph, odd: OddTerm) -> Result<f64> {
    let n = g.n();
    let l = superoperator_l(g)?;
    let mut worst = 0.0f64;
    for k in 0..n {
        for ll in 0..n {
            let v = nalgebra::DVector::from_vec(l_eigenvector(n, k, ll)?);
            let lam = l_eigenvalue_variant(n, g.m(), k as f64, ll as f64, odd);
            worst = worst.max((&l * &v - v * lam).camax());
        }
    }
    Ok(worst)
}

/// Sorts complex values by imaginary then real part, for multiset
/// comparison of purely imaginary spectra.
pub fn sort_spectrum(values: &mut [C64]) {
    values.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
}

/// `λ_{k,l}` for all `k, l`, sorted.
pub fn analytic_spectrum(g: &LricGraph) -> Vec<C64> {
    let n = g.n();
    let mut v: Vec<C64> = (0..n * n)
        .map(|i| l_eigenvalue_at(n, g.m(), (i / n) as f64, (i % n) as f64))
        .collect();
    sort_spectrum(&mut v);
    v
}
