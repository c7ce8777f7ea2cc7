//! Phase-rotated coordinates `S_{j,k} = i^{k-j} ρ_{j,k}` and the dense
//! superoperators acting on them.
//!
//! In `S` coordinates the coherent generator `L` is a translation-invariant
//! stencil whose Fourier modes are its eigenvectors. Note that the phase
//! `i^{k-j}` only respects the periodic identification `j ~ j + n` when
//! `4 | n`; for other sizes the periodic stencil below describes the cycle
//! with a twisted boundary, and agrees with the master equation away from
//! the wrap-around only.

use nalgebra::DMatrix;

use crate::dynamics::DensityMatrix;
use crate::graph::LricGraph;
use crate::phase::i_pow;
use crate::{Error, Result, C64};

/// Largest `n` for which dense `n² x n²` superoperators are built.
pub const SUPEROPERATOR_MAX_N: usize = 128;

pub fn s_transform(rho: &DensityMatrix) -> DMatrix<C64> {
    let n = rho.n();
    DMatrix::from_fn(n, n, |j, k| i_pow(k as i64 - j as i64) * rho.get(j, k))
}

pub fn inverse_s_transform(s: &DMatrix<C64>) -> DensityMatrix {
    let n = s.nrows();
    let data = (0..n * n)
        .map(|i| {
            let (j, k) = (i / n, i % n);
            i_pow(j as i64 - k as i64) * s[(j, k)]
        })
        .collect();
    DensityMatrix::from_raw(n, data)
}

/// Time derivative in `S` coordinates, periodic in both indices.
pub fn s_picture_rhs(g: &LricGraph, gamma: f64, s: &DMatrix<C64>) -> DMatrix<C64> {
    let n = g.n();
    let m = g.m() as i64;
    let a = i_pow(1 - m);
    let b = i_pow(1 + m);
    let at = |j: usize, k: usize, dj: i64, dk: i64| {
        let nj = (j as i64 + dj).rem_euclid(n as i64) as usize;
        let nk = (k as i64 + dk).rem_euclid(n as i64) as usize;
        s[(nj, nk)]
    };
    DMatrix::from_fn(n, n, |j, k| {
        let stencil = -at(j, k, -1, 0) + at(j, k, 1, 0)
            - a * at(j, k, -m, 0)
            - b * at(j, k, m, 0)
            - at(j, k, 0, -1)
            + at(j, k, 0, 1)
            + b * at(j, k, 0, -m)
            + a * at(j, k, 0, m);
        let damp = if j == k { 0.0 } else { gamma };
        stencil * 0.25 - s[(j, k)] * damp
    })
}

fn guard(n: usize) -> Result<()> {
    if n > SUPEROPERATOR_MAX_N {
        Err(Error::TooLarge {
            what: "superoperator",
            n,
            limit: SUPEROPERATOR_MAX_N,
        })
    } else {
        Ok(())
    }
}

/// Coherent superoperator on row-major `vec(S)`: row `(α, β)`, column
/// `(μ, ν)`, so that `d vec(S)/dt = L vec(S)`.
pub fn superoperator_l(g: &LricGraph) -> Result<DMatrix<C64>> {
    let n = g.n();
    guard(n)?;
    let m = g.m();
    let dim = n * n;
    let idx = |a: usize, b: usize| a * n + b;
    let up = |x: usize, d: usize| (x + d) % n;
    let down = |x: usize, d: usize| (x + n - d) % n;
    let quarter = |c: C64| c * 0.25;
    let one = C64::new(1.0, 0.0);
    let a = i_pow(1 - m as i64);
    let b = i_pow(1 + m as i64);
    let mut l = DMatrix::zeros(dim, dim);
    for alpha in 0..n {
        for beta in 0..n {
            let row = idx(alpha, beta);
            // δ_{α,μ+1}: μ = α-1, and so on through the eight stencil terms
            l[(row, idx(down(alpha, 1), beta))] -= quarter(one);
            l[(row, idx(up(alpha, 1), beta))] += quarter(one);
            l[(row, idx(down(alpha, m), beta))] -= quarter(a);
            l[(row, idx(up(alpha, m), beta))] -= quarter(b);
            l[(row, idx(alpha, down(beta, 1)))] -= quarter(one);
            l[(row, idx(alpha, up(beta, 1)))] += quarter(one);
            l[(row, idx(alpha, down(beta, m)))] += quarter(b);
            l[(row, idx(alpha, up(beta, m)))] += quarter(a);
        }
    }
    Ok(l)
}

/// Dephasing superoperator: diagonal, `-Γ` on coherences and `0` on
/// populations.
pub fn superoperator_u(n: usize, gamma: f64) -> Result<DMatrix<C64>> {
    guard(n)?;
    let dim = n * n;
    let mut u = DMatrix::zeros(dim, dim);
    for alpha in 0..n {
        for beta in 0..n {
            if alpha != beta {
                u[(alpha * n + beta, alpha * n + beta)] = C64::new(-gamma, 0.0);
            }
        }
    }
    Ok(u)
}

pub fn vectorize(s: &DMatrix<C64>) -> nalgebra::DVector<C64> {
    let n = s.nrows();
    nalgebra::DVector::from_fn(n * n, |i, _| s[(i / n, i % n)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_lric;
    use crate::dynamics::master_rhs;

    fn hermitian_state(n: usize) -> DensityMatrix {
        let mut rho = DensityMatrix::maximally_mixed(n);
        for j in 0..n {
            for k in j + 1..n {
                let v = C64::new(
                    0.01 * ((j * 7 + k * 3) % 5) as f64,
                    0.013 * ((j + 2 * k) % 3) as f64,
                );
                rho.set(j, k, v);
                rho.set(k, j, v.conj());
            }
        }
        rho
    }

    #[test]
    fn transform_phases() {
        let mut rho = DensityMatrix::maximally_mixed(5);
        let c = C64::new(0.02, 0.03);
        rho.set(0, 2, c);
        rho.set(2, 0, c.conj());
        let s = s_transform(&rho);
        assert_eq!(s[(0, 2)], -c);
        for j in 0..5 {
            assert_eq!(s[(j, j)], rho.get(j, j));
        }
        assert_eq!(inverse_s_transform(&s), rho);
    }

    #[test]
    fn u_entries() {
        let u = superoperator_u(4, 0.3).unwrap();
        for a in 0..4 {
            assert_eq!(u[(a * 4 + a, a * 4 + a)], C64::new(0.0, 0.0));
        }
        assert_eq!(u[(1, 1)], C64::new(-0.3, 0.0));
        assert_eq!(u[(1, 2)], C64::new(0.0, 0.0));
    }

    #[test]
    fn superoperators_match_s_stencil() {
        for (n, m) in [(6, 2), (7, 3), (8, 3)] {
            let g = build_lric(n, m).unwrap();
            let s = s_transform(&hermitian_state(n));
            let lu = superoperator_l(&g).unwrap() + superoperator_u(n, 0.04).unwrap();
            let lhs = lu * vectorize(&s);
            let rhs = vectorize(&s_picture_rhs(&g, 0.04, &s));
            assert!((lhs - rhs).camax() < 1e-12);
        }
    }

    #[test]
    fn conjugation_exact_when_four_divides_n() {
        for (n, m) in [(8, 3), (12, 5), (12, 2)] {
            let g = build_lric(n, m).unwrap();
            let rho = hermitian_state(n);
            let via_rho = s_transform(&master_rhs(&g, 0.02, &rho));
            let via_s = s_picture_rhs(&g, 0.02, &s_transform(&rho));
            assert!((via_rho - via_s).camax() < 1e-15);
        }
    }

    #[test]
    fn conjugation_breaks_at_the_seam_otherwise() {
        let g = build_lric(6, 2).unwrap();
        let rho = hermitian_state(6);
        let via_rho = s_transform(&master_rhs(&g, 0.02, &rho));
        let via_s = s_picture_rhs(&g, 0.02, &s_transform(&rho));
        assert!((via_rho - via_s).camax() > 1e-3);
    }

    #[test]
    fn size_guard() {
        assert!(superoperator_u(129, 0.1).is_err());
    }
}
