//! Parameter sweeps over `(n, m, Γ, ε)` grids.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use log::info;
use rayon::prelude::*;
use serde::Deserialize;

use crate::graph::{build_lric, LricGraph};
use crate::io::fmt_f64;
use crate::mixing::{analyze_mixing, MixingOptions, DEFAULT_EPSILON};
use crate::{Error, Result};

/// Sweep configuration, read from JSON.
///
/// Jobs are the cross product of `n × m × gamma × epsilon` plus every
/// explicit `[n, m]` pair in `graphs` crossed with `gamma × epsilon`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub m: Vec<usize>,
    #[serde(default)]
    pub graphs: Vec<(usize, usize)>,
    pub gamma: Vec<f64>,
    #[serde(default = "default_epsilons")]
    pub epsilon: Vec<f64>,
    /// Drop cross-product pairs that do not form a valid graph instead of
    /// rejecting the whole grid.
    #[serde(default)]
    pub skip_invalid: bool,
}

fn default_epsilons() -> Vec<f64> {
    vec![DEFAULT_EPSILON]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepJob {
    pub graph: LricGraph,
    pub gamma: f64,
    pub epsilon: f64,
}

impl SweepJob {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.graph
            .cmp(&other.graph)
            .then(self.gamma.total_cmp(&other.gamma))
            .then(self.epsilon.total_cmp(&other.epsilon))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub job: SweepJob,
    pub t_mix: Option<f64>,
    pub bound: f64,
    pub satisfied: bool,
}

impl SweepGrid {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Sorted, deduplicated job list.
    pub fn jobs(&self) -> Result<Vec<SweepJob>> {
        let mut pairs = Vec::new();
        for &n in &self.n {
            for &m in &self.m {
                match build_lric(n, m) {
                    Ok(g) => pairs.push(g),
                    Err(_) if self.skip_invalid => {}
                    Err(e) => return Err(e),
                }
            }
        }
        for &(n, m) in &self.graphs {
            pairs.push(build_lric(n, m)?);
        }
        if pairs.is_empty() {
            return Err(Error::param("sweep grid contains no graphs"));
        }
        if self.gamma.is_empty() || self.epsilon.is_empty() {
            return Err(Error::param(
                "sweep grid needs at least one gamma and one epsilon",
            ));
        }
        let mut jobs = Vec::new();
        for &graph in &pairs {
            for &gamma in &self.gamma {
                for &epsilon in &self.epsilon {
                    jobs.push(SweepJob {
                        graph,
                        gamma,
                        epsilon,
                    });
                }
            }
        }
        jobs.sort_by(SweepJob::key_cmp);
        jobs.dedup_by(|a, b| a.key_cmp(b) == Ordering::Equal);
        Ok(jobs)
    }
}

/// Runs every job on a pool of `parallelism` threads; rows come back in job
/// order regardless of scheduling.
pub fn run_sweep(
    jobs: &[SweepJob],
    parallelism: usize,
    opts: &MixingOptions,
) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let report = analyze_mixing(&job.graph, job.gamma, job.epsilon, opts)?;
                info!(
                    "finished G({}) gamma={} eps={}",
                    job.graph, job.gamma, job.epsilon
                );
                Ok(SweepRow {
                    job: *job,
                    t_mix: report.t_mix_empirical,
                    bound: report.bound_upper,
                    satisfied: report.satisfied,
                })
            })
            .collect()
    })
}

pub fn render_rows(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,m,gamma,epsilon,t_mix,bound,satisfied\n");
    for r in rows {
        let t_mix = r.t_mix.map_or_else(|| "not-reached".to_string(), fmt_f64);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.job.graph.n(),
            r.job.graph.m(),
            fmt_f64(r.job.gamma),
            fmt_f64(r.job.epsilon),
            t_mix,
            fmt_f64(r.bound),
            r.satisfied
        );
    }
    out
}
