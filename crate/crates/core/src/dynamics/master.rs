//! Dephasing master equation on `G(n, m)`.
//!
//! ```text
//! dρ_{j,k}/dt = (i/4) [ -Σ_o ρ_{j+o,k} + Σ_o ρ_{j,k+o} ] - Γ (1 - δ_{j,k}) ρ_{j,k}
//! ```
//!
//! with `o ∈ {+1, -1, +m, -m}` and all indices mod `n`. The coherent part is
//! `-i[H, ρ]` for the dimensionless Hamiltonian (hopping `1/4`); a constant
//! diagonal in `H` commutes with `ρ` and drops out.

use crate::dynamics::DensityMatrix;
use crate::graph::LricGraph;
use crate::C64;

/// Matrix-free evaluator of the master-equation generator.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    n: usize,
    m: usize,
    gamma: f64,
    cols: Vec<[usize; 4]>,
}

impl MasterEquation {
    pub fn new(g: &LricGraph, gamma: f64) -> Self {
        let cols = (0..g.n()).map(|k| g.neighbors(k)).collect();
        MasterEquation {
            n: g.n(),
            m: g.m(),
            gamma,
            cols,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Writes `dρ/dt` for row-major `rho` into `out`.
    pub fn apply(&self, rho: &[C64], out: &mut [C64]) {
        let n = self.n;
        debug_assert_eq!(rho.len(), n * n);
        debug_assert_eq!(out.len(), n * n);
        for j in 0..n {
            let row = |r: usize| &rho[r * n..(r + 1) * n];
            let [a, b, c, d] = self.cols[j];
            let (ra, rb, rc, rd) = (row(a), row(b), row(c), row(d));
            let own = row(j);
            let o = &mut out[j * n..(j + 1) * n];
            for k in 0..n {
                let [p, q, r, s] = self.cols[k];
                let diff = (own[p] + own[q] + own[r] + own[s]) - (ra[k] + rb[k] + rc[k] + rd[k]);
                let coherent = C64::new(-0.25 * diff.im, 0.25 * diff.re);
                o[k] = if k == j {
                    coherent
                } else {
                    coherent - own[k] * self.gamma
                };
            }
        }
    }

    pub fn rhs(&self, rho: &DensityMatrix) -> DensityMatrix {
        let mut out = vec![C64::new(0.0, 0.0); self.n * self.n];
        self.apply(rho.as_slice(), &mut out);
        DensityMatrix::from_raw(self.n, out)
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// `dρ/dt` for the state `rho` on graph `g` with dephasing rate `gamma`.
pub fn master_rhs(g: &LricGraph, gamma: f64, rho: &DensityMatrix) -> DensityMatrix {
    MasterEquation::new(g, gamma).rhs(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Convention;
    use crate::{build_lric, C64};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn random_hermitian(n: usize, seed: u64) -> DensityMatrix {
        // small LCG keeps the test free of RNG dependencies
        let mut s = seed;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut rho = DensityMatrix::zeros(n);
        for j in 0..n {
            rho.set(j, j, C64::new(next().abs(), 0.0));
            for k in j + 1..n {
                let v = C64::new(next(), next()) * 0.1;
                rho.set(j, k, v);
                rho.set(k, j, v.conj());
            }
        }
        let tr = rho.trace().re;
        for v in rho.as_mut_slice() {
            *v /= tr;
        }
        rho
    }

    fn commutator_rhs(g: &LricGraph, conv: Convention, rho: &DensityMatrix) -> DensityMatrix {
        let n = g.n();
        let h = g.hamiltonian(conv).map(|x| C64::new(x, 0.0));
        let r = DMatrix::from_fn(n, n, |j, k| rho.get(j, k));
        let d = (&h * &r - &r * &h) * C64::new(0.0, -1.0);
        DensityMatrix::from_raw(n, (0..n * n).map(|i| d[(i / n, i % n)]).collect())
    }

    #[test]
    fn maximally_mixed_is_stationary() {
        let g = build_lric(9, 4).unwrap();
        let d = master_rhs(&g, 0.3, &DensityMatrix::maximally_mixed(9));
        assert!(d.as_slice().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn coherent_part_is_the_commutator() {
        let g = build_lric(8, 3).unwrap();
        let rho = DensityMatrix::localized(8, 0).unwrap();
        let d = master_rhs(&g, 0.0, &rho);
        let c = commutator_rhs(&g, Convention::Dimensionless, &rho);
        assert!(d.max_abs_diff(&c) < 1e-14);
    }

    #[test]
    fn laplacian_diagonal_drops_out() {
        let g = build_lric(10, 3).unwrap();
        let rho = random_hermitian(10, 7);
        let a = commutator_rhs(&g, Convention::Dimensionless, &rho);
        let h4 = g.hamiltonian(Convention::Laplacian) / 4.0;
        let n = 10;
        let h = h4.map(|x| C64::new(x, 0.0));
        let r = DMatrix::from_fn(n, n, |j, k| rho.get(j, k));
        let d = (&h * &r - &r * &h) * C64::new(0.0, -1.0);
        for j in 0..n {
            for k in 0..n {
                assert_abs_diff_eq!((a.get(j, k) - d[(j, k)]).norm(), 0.0, epsilon = 1e-15);
            }
        }
        assert!(master_rhs(&g, 0.0, &rho).max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn dephasing_damps_only_coherences() {
        let g = build_lric(7, 2).unwrap();
        let rho = random_hermitian(7, 3);
        let with = master_rhs(&g, 0.2, &rho);
        let without = master_rhs(&g, 0.0, &rho);
        for j in 0..7 {
            for k in 0..7 {
                let expected = if j == k {
                    C64::new(0.0, 0.0)
                } else {
                    -rho.get(j, k) * 0.2
                };
                assert_abs_diff_eq!(
                    (with.get(j, k) - without.get(j, k) - expected).norm(),
                    0.0,
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn derivative_is_traceless_and_hermitian() {
        for (n, m, seed) in [(5, 2, 1), (8, 3, 2), (12, 5, 3)] {
            let g = build_lric(n, m).unwrap();
            let d = master_rhs(&g, 0.05, &random_hermitian(n, seed));
            assert!(d.trace().norm() < 1e-15);
            assert!(d.hermiticity_error() < 1e-15);
        }
    }
}
