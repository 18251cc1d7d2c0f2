//! Quantum and thermal fluctuations of the pinned one-dimensional harmonic
//! chain, computed exactly at finite N.
//!
//! The chain has N equal masses joined by equal springs, with atom 1 tied to
//! the origin and atom N free. All quantities are dimensionless: lengths in
//! lattice constants `a`, frequencies in units of `ω_s = sqrt(λ/m)`, and
//! temperatures either as `η = k_B T/(ħ ω_s)` or `η_cl = k_B T/(m c²) = α η`,
//! with `α = ħ/(m a c)` the quantum coupling.
//!
//! * [`spectrum`] – coupling matrix, analytic normal modes, dense oracle.
//! * [`fluctuations`] – per-site and pair mean-square displacements.
//! * [`observables`] – density, structure factor, Bragg exponents,
//!   Mössbauer line, dimensional order classifier, fits.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fluctuations;
pub mod observables;
pub mod spectrum;
pub mod sum;
pub mod units;

pub use error::{ChainError, Result};
pub use fluctuations::{
    asymptotic_linear_law, asymptotic_log_law, bose_occupation, fit_log_law_constant,
    fluctuation_profile, mode_weights, oscillator_variance, pair_variance_matrix, site_variance,
    site_variances, FluctuationProfile, PairMethod, PairVarianceMatrix, Regime, PAIR_EXACT_MAX,
};
pub use observables::{
    bragg_analysis, density_profile, fit_log_slope, fit_power_law, moessbauer_recoilless,
    order_classification, structure_factor, structure_factor_classical_infinite,
    structure_factor_rigid, BraggAnalysis, Curve, CurveMeta, FluctuationKind, OrderClass,
    StructureFactor, StructureMethod,
};
pub use spectrum::{
    coupling_matrix, dense_eigensolve, eigenvector, eigenvector_component, inverse_column,
    mode_set, ChainParams, CouplingMatrix, DenseEigen, Dispersion, ModeSet,
};
