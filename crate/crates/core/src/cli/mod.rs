//! Command-line front end.
//!
//! Every command is a pure function of its flags (and, for `sweep`, the grid
//! file), so repeated runs produce byte-identical output. Relative output
//! paths are resolved against `$LRIC_WALK_OUT_DIR` when it is set.
//!
//! Exit codes: 0 on success, 1 when a validation check or computation
//! fails, 2 on usage errors (bad flags, invalid graphs, out-of-range
//! parameters).

mod sweep;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dynamics::{evolve_exact_grid, evolve_trajectory, DensityMatrix, WalkConfig};
use crate::graph::{Convention, LricGraph};
use crate::io::{fmt_f64, render_series, write_json, write_text};
use crate::mixing::{analyze_mixing, MixingOptions, Oracle, DEFAULT_EPSILON};
use crate::perturbation::ModeTable;
use crate::spectral::{bloch_modes, quantum_distribution};
use crate::validation::{self, Suite};
use crate::{Error, Result};

pub use sweep::{render_rows, run_sweep, SweepGrid, SweepJob, SweepRow};

/// Environment variable naming the directory for relative output paths.
pub const OUT_DIR_ENV: &str = "LRIC_WALK_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "lric-walk",
    version,
    about = "Quantum walks on long-range interacting cycles"
)]
pub struct Cli {
    /// Accepted for harness compatibility; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bloch energies of G(N,m): CSV k,theta,energy.
    Spectrum {
        #[arg(long)]
        graph: LricGraph,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherent walk from the spectral solution: CSV t,j,probability.
    Coherent {
        #[arg(long)]
        graph: LricGraph,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// `laplacian` (unit hopping) or `dimensionless` (hopping 1/4).
        #[arg(long, default_value = "laplacian")]
        convention: Convention,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the dephasing master equation: CSV t,j,p.
    Evolve {
        #[arg(long)]
        graph: LricGraph,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        t_max: f64,
        /// RK4 step; defaults to min(1e-2, 0.1/max(1, gamma)).
        #[arg(long)]
        dt: Option<f64>,
        /// Integrator steps between samples.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the density matrix at every sample as JSON.
        #[arg(long)]
        dump_rho: Option<PathBuf>,
    },
    /// First-order populations: CSV t,j,p_analytic[,p_oracle,abs_diff].
    Analytic {
        #[arg(long)]
        graph: LricGraph,
        #[arg(long)]
        gamma: f64,
        /// `T0,T1,STEPS`: STEPS+1 evenly spaced times.
        #[arg(long, value_parser = parse_t_grid)]
        t_grid: TGrid,
        /// Compare against the exact propagator.
        #[arg(long)]
        with_oracle: bool,
        /// Use integer momenta with the two fixed corrections.
        #[arg(long)]
        closed_form: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical mixing time and analytic bounds: JSON report.
    Mixing {
        #[command(flatten)]
        job: MixingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mixing times over a parameter grid: CSV n,m,gamma,epsilon,t_mix,bound,satisfied.
    Sweep {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
    },
    /// Run the self-check suite.
    Validate {
        /// Small graphs and short horizons only.
        #[arg(long)]
        quick: bool,
        /// Write the check list as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct MixingArgs {
    #[arg(long)]
    graph: LricGraph,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Use RK4 with this step instead of the exact propagator.
    #[arg(long)]
    rk4_dt: Option<f64>,
    /// Sampling stride of the first pass.
    #[arg(long)]
    stride: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

impl TGrid {
    pub fn times(&self) -> Vec<f64> {
        if self.steps == 0 {
            return vec![self.t0];
        }
        let h = (self.t1 - self.t0) / self.steps as f64;
        (0..=self.steps).map(|i| self.t0 + h * i as f64).collect()
    }
}

fn parse_t_grid(s: &str) -> std::result::Result<TGrid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected T0,T1,STEPS, got '{s}'"));
    };
    let t0: f64 = a.parse().map_err(|_| format!("bad T0 '{a}'"))?;
    let t1: f64 = b.parse().map_err(|_| format!("bad T1 '{b}'"))?;
    let steps: usize = c.parse().map_err(|_| format!("bad STEPS '{c}'"))?;
    if !(t0 >= 0.0 && t1 >= t0 && t1.is_finite()) {
        return Err(format!("need 0 <= T0 <= T1, got {t0}, {t1}"));
    }
    Ok(TGrid { t0, t1, steps })
}

/// Resolves a relative output path against [`OUT_DIR_ENV`].
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_text(&resolve_output(p), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: serde::Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    match out {
        Some(p) => write_json(&resolve_output(p), value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidGraph { .. }
        | Error::IndexOutOfRange { .. }
        | Error::InvalidParameter(_)
        | Error::OutsidePerturbativeRegime(_)
        | Error::TooLarge { .. }
        | Error::ExcludedMode { .. } => 2,
        _ => 1,
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Spectrum { graph, out } => {
            let mut text = String::from("k,theta,energy\n");
            for b in bloch_modes(&graph) {
                let _ = writeln!(
                    text,
                    "{},{},{}",
                    b.index,
                    fmt_f64(b.theta),
                    fmt_f64(b.energy)
                );
            }
            emit(&out, &text)?;
        }
        Command::Coherent {
            graph,
            t0,
            t1,
            steps,
            start,
            convention,
            out,
        } => {
            let grid =
                parse_t_grid(&format!("{t0},{t1},{steps}")).map_err(Error::InvalidParameter)?;
            if start >= graph.n() {
                return Err(Error::IndexOutOfRange {
                    index: start,
                    n: graph.n(),
                });
            }
            let mut text = String::from("t,j,probability\n");
            for t in grid.times() {
                for (j, p) in quantum_distribution(&graph, convention, start, t)
                    .iter()
                    .enumerate()
                {
                    let _ = writeln!(text, "{},{j},{}", fmt_f64(t), fmt_f64(*p));
                }
            }
            emit(&out, &text)?;
        }
        Command::Evolve {
            graph,
            gamma,
            t_max,
            dt,
            stride,
            start,
            out,
            dump_rho,
        } => {
            let cfg = WalkConfig::new(gamma, t_max)
                .with_dt(dt.unwrap_or_else(|| WalkConfig::default_dt(gamma)))
                .with_stride(stride);
            let rho0 = DensityMatrix::localized(graph.n(), start)?;
            let traj = evolve_trajectory(&graph, &cfg, &rho0, dump_rho.is_some())?;
            emit(&out, &render_series(&traj.series))?;
            if let Some(path) = dump_rho {
                write_json(&resolve_output(&path), &traj.states)?;
            }
        }
        Command::Analytic {
            graph,
            gamma,
            t_grid,
            with_oracle,
            closed_form,
            out,
        } => {
            let table = if closed_form {
                ModeTable::closed_form(&graph, gamma)?
            } else {
                ModeTable::new(&graph, gamma)?
            };
            let times = t_grid.times();
            let oracle = if with_oracle {
                Some(oracle_on_grid(&graph, gamma, &t_grid)?)
            } else {
                None
            };
            let mut text = String::from(if with_oracle {
                "t,j,p_analytic,p_oracle,abs_diff\n"
            } else {
                "t,j,p_analytic\n"
            });
            for (i, &t) in times.iter().enumerate() {
                for (j, p) in table.distribution(t).iter().enumerate() {
                    let _ = write!(text, "{},{j},{}", fmt_f64(t), fmt_f64(*p));
                    if let Some(o) = &oracle {
                        let q = o[i][j];
                        let _ = write!(text, ",{},{}", fmt_f64(q), fmt_f64((p - q).abs()));
                    }
                    text.push('\n');
                }
            }
            emit(&out, &text)?;
        }
        Command::Mixing { job, out } => {
            let opts = MixingOptions {
                oracle: job.rk4_dt.map_or(Oracle::Exact, |dt| Oracle::Rk4 { dt }),
                initial_stride: job.stride,
                ..MixingOptions::default()
            };
            let report = analyze_mixing(&job.graph, job.gamma, job.epsilon, &opts)?;
            emit_json(&out, &report)?;
        }
        Command::Sweep {
            grid,
            out,
            parallelism,
        } => {
            let jobs = SweepGrid::from_file(&grid)?.jobs()?;
            let rows = run_sweep(&jobs, parallelism, &MixingOptions::default())?;
            emit(&out, &render_rows(&rows))?;
        }
        Command::Validate { quick, out } => {
            let report = validation::run(if quick { Suite::Quick } else { Suite::Full })?;
            print!("{}", report.render());
            if let Some(p) = &out {
                write_json(&resolve_output(p), &report)?;
            }
            return Ok(if report.all_passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Exact-propagator populations at each grid time, as rows.
fn oracle_on_grid(graph: &LricGraph, gamma: f64, grid: &TGrid) -> Result<Vec<Vec<f64>>> {
    let rho0 = DensityMatrix::localized(graph.n(), 0)?;
    let times = grid.times();
    if grid.steps == 0 || grid.t1 == grid.t0 {
        let s = evolve_exact_grid(graph, gamma, &rho0, grid.t0, 1.0, 0)?;
        return Ok(vec![s.dist(0).to_vec(); times.len()]);
    }
    let stride = (grid.t1 - grid.t0) / grid.steps as f64;
    let s = evolve_exact_grid(graph, gamma, &rho0, grid.t0, stride, grid.steps)?;
    Ok((0..s.len()).map(|i| s.dist(i).to_vec()).collect())
}
