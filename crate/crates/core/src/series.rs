//! Time-indexed node distributions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Normalization tolerance for a stored distribution.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Oracle,
    Analytic,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Oracle => "oracle",
            Source::Analytic => "analytic",
        })
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Source::Oracle),
            "analytic" => Ok(Source::Analytic),
            other => Err(Error::param(format!("unknown series source '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub source: Source,
}

/// `P_j(t)` sampled on an increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySeries {
    meta: SeriesMeta,
    times: Vec<f64>,
    dist: Vec<Vec<f64>>,
}

impl ProbabilitySeries {
    pub fn new(meta: SeriesMeta) -> Self {
        ProbabilitySeries {
            meta,
            times: Vec::new(),
            dist: Vec::new(),
        }
    }

    /// Appends a sample. Panics if the distribution has the wrong length;
    /// use [`ProbabilitySeries::try_push`] for untrusted input.
    pub fn push(&mut self, t: f64, p: Vec<f64>) {
        assert_eq!(p.len(), self.meta.n, "distribution length");
        self.times.push(t);
        self.dist.push(p);
    }

    pub fn try_push(&mut self, t: f64, p: Vec<f64>) -> Result<()> {
        if p.len() != self.meta.n {
            return Err(Error::param(format!(
                "distribution has {} entries, expected {}",
                p.len(),
                self.meta.n
            )));
        }
        if !t.is_finite() || p.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("non-finite value in series"));
        }
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::param(format!(
                    "times must increase ({t} after {last})"
                )));
            }
        }
        self.push(t, p);
        Ok(())
    }

    pub fn meta(&self) -> &SeriesMeta {
        &self.meta
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn dist(&self, i: usize) -> &[f64] {
        &self.dist[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.times
            .iter()
            .copied()
            .zip(self.dist.iter().map(Vec::as_slice))
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> Option<f64> {
        self.times.last().copied()
    }

    /// Checks normalization and non-negativity of every sample.
    pub fn validate(&self) -> Result<()> {
        for (t, p) in self.iter() {
            let sum: f64 = p.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::NotNormalized(sum));
            }
            if let Some(bad) = p.iter().find(|&&x| x < -NORMALIZATION_TOL) {
                return Err(Error::param(format!(
                    "negative probability {bad:e} at t = {t}"
                )));
            }
        }
        Ok(())
    }
}
