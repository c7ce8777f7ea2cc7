//! Long-range interacting cycles `G(n, m)`.
//!
//! The graph is stored implicitly as `(n, m)`: node `j` is bonded to
//! `j ± 1` and `j ± m` (mod `n`). Requiring `2 <= m <= (n - 1) / 2` keeps
//! those four neighbours distinct, so every node has degree exactly four.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MIN_NODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct LricGraph {
    n: usize,
    m: usize,
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    m: usize,
}

impl TryFrom<RawGraph> for LricGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        LricGraph::new(raw.n, raw.m)
    }
}

/// Normalization of the walk Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Diagonal `-4`, unit hopping at offsets `±1, ±m`.
    Laplacian,
    /// Zero diagonal, hopping `1/4`; the clock used by the master equation.
    Dimensionless,
}

impl Convention {
    pub fn diagonal(self) -> f64 {
        match self {
            Convention::Laplacian => -4.0,
            Convention::Dimensionless => 0.0,
        }
    }

    pub fn hopping(self) -> f64 {
        match self {
            Convention::Laplacian => 1.0,
            Convention::Dimensionless => 0.25,
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laplacian" => Ok(Convention::Laplacian),
            "dimensionless" => Ok(Convention::Dimensionless),
            other => Err(Error::param(format!(
                "unknown convention '{other}' (expected 'laplacian' or 'dimensionless')"
            ))),
        }
    }
}

impl LricGraph {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidGraph { n, m, reason };
        if n < MIN_NODES {
            return Err(invalid(format!("need at least {MIN_NODES} nodes")));
        }
        if m < 2 {
            return Err(invalid("distance parameter must be at least 2".into()));
        }
        if m > (n - 1) / 2 {
            return Err(invalid(format!(
                "m must be at most {} so that j+m and j-m are distinct non-adjacent nodes",
                (n - 1) / 2
            )));
        }
        Ok(LricGraph { n, m })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Neighbours of `j` in the order `j+1, j-1, j+m, j-m`.
    pub fn neighbors(&self, j: usize) -> [usize; 4] {
        let n = self.n;
        let j = j % n;
        [
            (j + 1) % n,
            (j + n - 1) % n,
            (j + self.m) % n,
            (j + n - self.m) % n,
        ]
    }

    pub fn degree(&self, j: usize) -> usize {
        let mut nb = self.neighbors(j);
        nb.sort_unstable();
        let mut distinct = 1;
        for w in nb.windows(2) {
            if w[0] != w[1] {
                distinct += 1;
            }
        }
        distinct
    }

    /// Unordered bonds `(a, b)` with `a < b`, sorted. There are `2n` of them.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|j| {
                let [p1, _, pm, _] = self.neighbors(j);
                [(j.min(p1), j.max(p1)), (j.min(pm), j.max(pm))]
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).contains(&(b % self.n))
    }

    /// Real symmetric circulant Hamiltonian in the requested normalization.
    pub fn hamiltonian(&self, convention: Convention) -> DMatrix<f64> {
        let n = self.n;
        let mut h = DMatrix::zeros(n, n);
        for j in 0..n {
            h[(j, j)] = convention.diagonal();
            for nb in self.neighbors(j) {
                h[(j, nb)] = convention.hopping();
            }
        }
        h
    }
}

/// Validated constructor; same as [`LricGraph::new`].
pub fn build_lric(n: usize, m: usize) -> Result<LricGraph> {
    LricGraph::new(n, m)
}

pub fn hamiltonian_matrix(g: &LricGraph, convention: Convention) -> DMatrix<f64> {
    g.hamiltonian(convention)
}

impl fmt::Display for LricGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.n, self.m)
    }
}

/// Parses the command-line form `"N,m"`.
impl FromStr for LricGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("graph spec '{s}' is not of the form N,m"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let n = a.trim().parse::<usize>().map_err(|_| bad())?;
        let m = b.trim().parse::<usize>().map_err(|_| bad())?;
        LricGraph::new(n, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted(mut v: [usize; 4]) -> [usize; 4] {
        v.sort_unstable();
        v
    }

    #[test]
    fn g83_neighbours() {
        let g = build_lric(8, 3).unwrap();
        assert_eq!(sorted(g.neighbors(0)), [1, 3, 5, 7]);
    }

    #[test]
    fn g62_neighbours() {
        let g = build_lric(6, 2).unwrap();
        assert_eq!(sorted(g.neighbors(0)), [1, 2, 4, 5]);
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(matches!(build_lric(8, 4), Err(Error::InvalidGraph { .. })));
        assert!(build_lric(8, 1).is_err());
        assert!(build_lric(4, 2).is_err());
        assert!(build_lric(10, 5).is_err());
        assert!(build_lric(5, 2).is_ok());
        assert!(build_lric(9, 4).is_ok());
    }

    #[test]
    fn hamiltonian_rows() {
        let g = build_lric(8, 3).unwrap();
        let h = g.hamiltonian(Convention::Laplacian);
        let row: Vec<f64> = h.row(0).iter().copied().collect();
        assert_eq!(row, vec![-4., 1., 0., 1., 0., 1., 0., 1.]);
        let h = g.hamiltonian(Convention::Dimensionless);
        let row: Vec<f64> = h.row(0).iter().copied().collect();
        assert_eq!(row, vec![0., 0.25, 0., 0.25, 0., 0.25, 0., 0.25]);
    }

    #[test]
    fn parse_and_display() {
        let g: LricGraph = "8,3".parse().unwrap();
        assert_eq!(g, build_lric(8, 3).unwrap());
        assert_eq!(g.to_string(), "8,3");
        assert!("8;3".parse::<LricGraph>().is_err());
        assert!("8,4".parse::<LricGraph>().is_err());
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":8,"m":3}"#);
        let back: LricGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<LricGraph>(r#"{"n":8,"m":4}"#).is_err());
    }

    fn valid_graph() -> impl Strategy<Value = LricGraph> {
        (5usize..40)
            .prop_flat_map(|n| (Just(n), 2..=(n - 1) / 2))
            .prop_map(|(n, m)| LricGraph::new(n, m).unwrap())
    }

    proptest! {
        #[test]
        fn structure_invariants(g in valid_graph()) {
            let n = g.n();
            prop_assert_eq!(g.edges().len(), 2 * n);
            for j in 0..n {
                prop_assert_eq!(g.degree(j), 4);
            }
            for conv in [Convention::Laplacian, Convention::Dimensionless] {
                let h = g.hamiltonian(conv);
                let target = if conv == Convention::Laplacian { 0.0 } else { 1.0 };
                for i in 0..n {
                    prop_assert_eq!(h.row(i).sum(), target);
                    for j in 0..n {
                        prop_assert_eq!(h[(i, j)], h[(j, i)]);
                        prop_assert_eq!(h[(i, j)], h[(0, (j + n - i) % n)]);
                    }
                }
            }
        }
    }
}
