//! Point-contact detector: dephasing rate and the two-dot rate equations.

use std::f64::consts::PI;

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    /// Detector current with the monitored dot empty.
    pub i1: f64,
    /// Detector current with the monitored dot occupied.
    pub i2: f64,
    /// Bias voltage across the point contact.
    pub v: f64,
    /// Elementary charge.
    pub e: f64,
}

impl DetectorParams {
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
}

/// `Γ = (√(I₁/e) - √(I₂/e))² V / 2π`.
pub fn decoherence_rate_from_detector(p: &DetectorParams) -> Result<f64> {
    if [p.i1, p.i2, p.v]
        .iter()
        .any(|x| !(*x >= 0.0) || !x.is_finite())
    {
        return Err(Error::param(
            "detector currents and bias must be finite and non-negative",
        ));
    }
    if !(p.e > 0.0) {
        return Err(Error::param("elementary charge must be positive"));
    }
    let d = (p.i1 / p.e).sqrt() - (p.i2 / p.e).sqrt();
    Ok(d * d * p.v / (2.0 * PI))
}

/// Two-dot reduced density matrix, `[[ρ00, ρ01], [ρ10, ρ11]]`.
pub type DoubleDot = [[C64; 2]; 2];

/// Bloch-type rate equations for a monitored double dot with coupling
/// `omega0`, level detuning `eps` and dephasing `gamma`.
pub fn double_dot_rhs(omega0: f64, eps: f64, gamma: f64, rho: &DoubleDot) -> DoubleDot {
    let i = C64::new(0.0, 1.0);
    let [[r00, r01], [r10, r11]] = *rho;
    let d00 = i * omega0 * (r01 - r10);
    let d11 = i * omega0 * (r10 - r01);
    let d01 = i * eps * r01 + i * omega0 * (r00 - r11) - r01 * (gamma / 2.0);
    [[d00, d01], [d01.conj(), d11]]
}
