//! Continuous-time quantum walks on long-range interacting cycles.
//!
//! A long-range interacting cycle `G(n, m)` is the `n`-cycle with extra bonds
//! joining every pair of nodes at cyclic distance `m`, so each node has four
//! neighbours at offsets `±1, ±m`. The crate provides
//!
//! - the graph and its two Hamiltonian normalizations ([`graph`]),
//! - the closed-form Bloch solution of the coherent walk and the classical
//!   random walk ([`spectral`]),
//! - a brute-force integrator for the dephasing master equation, used as the
//!   reference for everything else ([`dynamics`]),
//! - the first-order small-decoherence solution ([`perturbation`]),
//! - total-variation mixing times and the analytic upper bounds ([`mixing`]),
//! - CSV/JSON file formats and the command-line front end ([`io`], [`cli`]).

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod io;
pub mod mixing;
pub mod perturbation;
pub mod phase;
pub mod series;
pub mod spectral;
pub mod validation;

pub use error::{Error, Result};
pub use graph::{build_lric, Convention, LricGraph};
pub use series::{ProbabilitySeries, SeriesMeta, Source};

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;
