use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Slack below zero tolerated on diagonal entries before warning.
pub const POSITIVITY_WARN: f64 = 1e-9;
/// Slack below zero on diagonal entries treated as a failed integration.
pub const POSITIVITY_FAIL: f64 = 1e-6;

/// Dense `n x n` density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    pub fn zeros(n: usize) -> Self {
        DensityMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    /// `|s><s|`, the walker localized on node `s`.
    pub fn localized(n: usize, s: usize) -> Result<Self> {
        if s >= n {
            return Err(Error::IndexOutOfRange { index: s, n });
        }
        let mut rho = Self::zeros(n);
        rho.data[s * n + s] = C64::new(1.0, 0.0);
        Ok(rho)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let mut rho = Self::zeros(n);
        for j in 0..n {
            rho.data[j * n + j] = C64::new(1.0 / n as f64, 0.0);
        }
        rho
    }

    /// Wraps raw row-major entries; checks shape, Hermiticity and trace.
    pub fn from_entries(n: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::param(format!(
                "expected {} entries for a {n}x{n} density matrix, got {}",
                n * n,
                data.len()
            )));
        }
        let rho = DensityMatrix { n, data };
        rho.validate(1e-9)?;
        Ok(rho)
    }

    /// Wraps entries without validation; for derivatives and intermediate
    /// stages that are not states.
    pub fn from_raw(n: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), n * n);
        DensityMatrix { n, data }
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tol {
            return Err(Error::param(format!(
                "density matrix not Hermitian (error {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::param(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        if let Some(min) = self.diagonal().into_iter().reduce(f64::min) {
            if min < -POSITIVITY_FAIL {
                return Err(Error::param(format!("negative population {min:e}")));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.data[j * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, j: usize, k: usize, v: C64) {
        self.data[j * self.n + k] = v;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_raw(self) -> Vec<C64> {
        self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|j| self.get(j, j)).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.get(j, j).re).collect()
    }

    /// `max |ρ_{jk} - conj(ρ_{kj})|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j..n {
                worst = worst.max((self.get(j, k) - self.get(k, j).conj()).norm());
            }
        }
        worst
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `ρ'_{j,k} = ρ_{j-s,k-s}`: the same state translated by `s` nodes.
    pub fn translated(&self, s: usize) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for j in 0..n {
            for k in 0..n {
                out.set((j + s) % n, (k + s) % n, self.get(j, k));
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn to_snapshot(&self, t: f64) -> RhoSnapshot {
        let n = self.n;
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|j| (0..n).map(|k| f(&self.get(j, k))).collect())
                .collect()
        };
        RhoSnapshot {
            t,
            re: rows(|c| c.re),
            im: rows(|c| c.im),
        }
    }
}

/// JSON form of one sample of a density-matrix trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoSnapshot {
    pub t: f64,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl RhoSnapshot {
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let n = self.re.len();
        if self.im.len() != n || self.re.iter().chain(&self.im).any(|r| r.len() != n) {
            return Err(Error::param("snapshot is not square"));
        }
        let data = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| C64::new(self.re[j][k], self.im[j][k]))
            .collect();
        Ok(DensityMatrix::from_raw(n, data))
    }
}
