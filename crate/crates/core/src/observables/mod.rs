//! Experimental observables built on the fluctuation data.

mod bragg;
mod curve;
mod density;
mod fit;
mod grid;
mod order;
mod structure;

pub use bragg::{
    beta_exponent, bragg_analysis, moessbauer_profile, moessbauer_recoilless, BraggAnalysis,
};
pub use curve::{Curve, CurveMeta};
pub use density::{density_profile, peak_to_valley_contrast};
pub use fit::{
    fit_log_slope, fit_lorentzian, fit_power_law, LinearFit, LorentzianFit, PowerLawFit,
};
pub use grid::{bragg_point_grid, geometric_offsets, uniform_grid};
pub use order::{order_classification, FluctuationKind, OrderClass};
pub use structure::{
    structure_factor, structure_factor_classical_infinite, structure_factor_rigid, StructureFactor,
    StructureMethod,
};
