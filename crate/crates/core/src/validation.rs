//! Self-checks comparing every closed form against the brute-force oracles.
//!
//! The quick suite uses small graphs and short horizons and is expected to
//! pass. The full suite adds the mixing-time bound comparisons at desk-scale
//! horizons; those are reported as they come out, including the graphs
//! whose degenerate mode clusters mix slower than the parity bounds allow.

use log::info;
use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::dynamics::{evolve, evolve_exact, DensityMatrix, WalkConfig};
use crate::graph::{build_lric, Convention, LricGraph};
use crate::mixing::{
    analyze_mixing, mixing_bound_even, mixing_bound_odd, odd_deviation_rewrite, tv_distance,
    MixingOptions,
};
use crate::perturbation::{
    analytic_spectrum, closed_form_probability, eigenrelation_residual, sort_spectrum,
    superoperator_spectrum, ModeTable, OddTerm,
};
use crate::spectral::{bloch_modes, quantum_distribution};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured value against its tolerance.
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: impl Into<String>, passed: bool, detail: String) {
        let check = Check {
            name: name.into(),
            passed,
            detail,
        };
        info!(
            "{} {}: {}",
            if passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
        self.checks.push(check);
    }

    fn within(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.record(name, value <= tol, format!("{value:.3e} (tol {tol:.0e})"));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}: {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }
}

fn valid_graphs(ns: &[usize]) -> Vec<LricGraph> {
    ns.iter()
        .flat_map(|&n| (2..=(n - 1) / 2).map(move |m| build_lric(n, m)))
        .filter_map(|g| g.ok())
        .collect()
}

fn spectrum_error(g: &LricGraph) -> f64 {
    let mut numeric: Vec<f64> = SymmetricEigen::new(g.hamiltonian(Convention::Laplacian))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    let mut analytic: Vec<f64> = bloch_modes(g).iter().map(|b| b.energy).collect();
    numeric.sort_by(f64::total_cmp);
    analytic.sort_by(f64::total_cmp);
    numeric
        .iter()
        .zip(&analytic)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn superoperator_error(g: &LricGraph) -> Result<f64> {
    let mut numeric = superoperator_spectrum(g)?;
    sort_spectrum(&mut numeric);
    Ok(numeric
        .iter()
        .zip(analytic_spectrum(g))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

fn max_series_gap(g: &LricGraph, gamma: f64, stride: f64, horizon: f64) -> Result<f64> {
    let oracle = evolve_exact(
        g,
        gamma,
        &DensityMatrix::localized(g.n(), 0)?,
        stride,
        horizon,
    )?;
    let table = ModeTable::new(g, gamma)?;
    let mut worst = 0.0f64;
    for (t, p) in oracle.iter() {
        for (a, b) in p.iter().zip(table.distribution(t)) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

pub fn run(suite: Suite) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();

    for g in valid_graphs(&[5, 6, 8, 10, 12]) {
        report.within(format!("bloch spectrum G({g})"), spectrum_error(&g), 1e-12);
    }

    for (n, m) in [(5, 2), (6, 2), (7, 3), (8, 3)] {
        let g = build_lric(n, m)?;
        report.within(
            format!("superoperator spectrum G({g})"),
            superoperator_error(&g)?,
            1e-10,
        );
        report.within(
            format!("eigenrelation cos-cos G({g})"),
            eigenrelation_residual(&g, OddTerm::CosCos)?,
            1e-10,
        );
    }
    let g83 = build_lric(8, 3)?;
    let sin_sin = eigenrelation_residual(&g83, OddTerm::SinSin)?;
    report.record(
        "eigenrelation sin-sin G(8,3) is violated",
        sin_sin > 1e-3,
        format!("residual {sin_sin:.3e}"),
    );

    let coherent = evolve(
        &g83,
        &WalkConfig::new(0.0, 5.0),
        &DensityMatrix::localized(8, 0)?,
    )?;
    let mut gap = 0.0f64;
    for (t, p) in coherent.iter() {
        let exact = quantum_distribution(&g83, Convention::Dimensionless, 0, t);
        gap = p
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(gap, f64::max);
    }
    report.within("coherent limit G(8,3) t<=5", gap, 1e-8);

    for (n, m) in [(8, 3), (10, 3), (10, 2)] {
        let g = build_lric(n, m)?;
        let horizon = if suite == Suite::Quick {
            3000.0
        } else {
            1.2 * 8634.7
        };
        report.within(
            format!("first-order populations G({g}) gamma=1e-4"),
            max_series_gap(&g, 1e-4, 25.0, horizon)?,
            5e-3,
        );
    }

    let g103 = build_lric(10, 3)?;
    let mut rewrite = 0.0f64;
    for t in [0.0, 3.0, 40.0, 500.0, 4000.0] {
        for j in 0..10 {
            let p = closed_form_probability(&g103, 1e-4, j, t)?;
            rewrite =
                rewrite.max(((p - 0.1).abs() - odd_deviation_rewrite(10, 3, 1e-4, j, t)).abs());
        }
    }
    report.within("odd rewrite identity n=10 m=3", rewrite, 1e-9);

    let odd = mixing_bound_odd(10, 1e-3, 0.01)?;
    let even = mixing_bound_even(10, 1e-3, 0.01)?;
    report.record(
        "even bound below odd bound n=10",
        even < odd,
        format!("{even:.4} < {odd:.4}"),
    );

    let settled = evolve_exact(&g83, 0.01, &DensityMatrix::localized(8, 0)?, 4000.0, 4000.0)?;
    report.within(
        "uniform convergence G(8,3) gamma=0.01 t=4000",
        tv_distance(settled.dist(settled.len() - 1))?,
        1e-4,
    );

    if suite == Suite::Full {
        let opts = MixingOptions::default();
        for g in valid_graphs(&[8, 10, 12]) {
            let r = analyze_mixing(&g, 1e-3, 0.01, &opts)?;
            let t = r.t_mix_empirical.unwrap_or(f64::INFINITY);
            report.record(
                format!("mixing bound G({g}) gamma=1e-3"),
                r.satisfied,
                format!("t_mix {t:.1} vs bound {:.1}", r.bound_upper),
            );
            report.record(
                format!("cluster-aware bound G({g}) gamma=1e-3"),
                t <= r.bound_spectral,
                format!("t_mix {t:.1} vs bound {:.1}", r.bound_spectral),
            );
        }
    }
    Ok(report)
}
