//! Conversion from laboratory units to the dimensionless coupling `α`.

use crate::error::{ChainError, Result};

/// Reduced Planck constant in J s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Proton mass in kg (CODATA 2018).
pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;

/// `α = ħ / (m a c)` for sound velocity `c` (m/s), lattice constant `a` (m)
/// and atomic mass `m` (kg).
pub fn alpha_from_si(sound_velocity: f64, lattice_constant: f64, mass: f64) -> Result<f64> {
    for (name, v) in [
        ("c", sound_velocity),
        ("a", lattice_constant),
        ("mass", mass),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(ChainError::param(name, format!("must be > 0, got {v}")));
        }
    }
    Ok(HBAR / (mass * lattice_constant * sound_velocity))
}

/// Same, with the mass given as a nucleon number times the proton mass.
pub fn alpha_from_nucleons(
    sound_velocity: f64,
    lattice_constant: f64,
    nucleons: f64,
) -> Result<f64> {
    alpha_from_si(sound_velocity, lattice_constant, nucleons * PROTON_MASS)
}
