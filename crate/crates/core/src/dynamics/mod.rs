//! Brute-force evolution of the dephased walk.
//!
//! Everything here works directly with the `n x n` density matrix and makes
//! no use of the Fourier structure, so it serves as the reference for the
//! closed-form results in [`crate::perturbation`] and [`crate::mixing`].

mod density;
mod detector;
mod integrate;
mod master;
mod propagator;
mod superop;

pub use density::{DensityMatrix, RhoSnapshot, POSITIVITY_FAIL, POSITIVITY_WARN};
pub use detector::{decoherence_rate_from_detector, double_dot_rhs, DetectorParams, DoubleDot};
pub use integrate::{
    evolve, evolve_trajectory, Diagnostics, Rk4, Trajectory, WalkConfig, INSTABILITY_THRESHOLD,
};
pub use master::{master_rhs, MasterEquation};
pub use propagator::{
    evolve_exact, evolve_exact_grid, generator_matrix, Propagator, PROPAGATOR_MAX_N,
};
pub use superop::{
    inverse_s_transform, s_picture_rhs, s_transform, superoperator_l, superoperator_u, vectorize,
    SUPEROPERATOR_MAX_N,
};
