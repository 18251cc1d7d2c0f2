//! Bragg-peak exponents and the Mössbauer zero-phonon line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};
use crate::fluctuations::{fluctuation_profile, site_variance, Regime};
use crate::spectrum::ChainParams;

use super::curve::{Curve, CurveMeta};

/// `β(q) = (α/2π)(qa)²`.
pub fn beta_exponent(alpha: f64, qa: f64) -> f64 {
    alpha / (2.0 * PI) * qa * qa
}

/// Zero-temperature power laws of the Bragg peak at `qa = 2πν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BraggAnalysis {
    pub nu: i64,
    pub beta: f64,
    /// The infinite-chain peak diverges when `β ≤ 1`.
    pub divergent: bool,
    /// `S_N(Q_ν) ~ N^(1−β)`, for divergent peaks.
    pub n_scaling_exponent: Option<f64>,
    /// `S(Q_ν + q̃) ~ |q̃a|^(β−1)`, for divergent peaks.
    pub shape_exponent: Option<f64>,
}

pub fn bragg_analysis(alpha: f64, nu: i64) -> Result<BraggAnalysis> {
    if nu == 0 {
        return Err(ChainError::param(
            "nu",
            "the forward peak nu = 0 has no Bragg exponent",
        ));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(ChainError::param(
            "alpha",
            format!("must be > 0, got {alpha}"),
        ));
    }
    let beta = 2.0 * PI * alpha * (nu * nu) as f64;
    let divergent = beta <= 1.0;
    Ok(BraggAnalysis {
        nu,
        beta,
        divergent,
        n_scaling_exponent: divergent.then_some(1.0 - beta),
        shape_exponent: divergent.then_some(beta - 1.0),
    })
}

fn zero_temperature(params: &ChainParams) -> Result<()> {
    if params.eta != 0.0 {
        return Err(ChainError::param(
            "eta",
            format!(
                "the zero-phonon probability is defined at T = 0, got eta = {}",
                params.eta
            ),
        ));
    }
    Ok(())
}

/// `p_l = exp(−(qa)² ⟨û_l²⟩_0/a²)`.
pub fn moessbauer_recoilless(params: &ChainParams, qa: f64, l: usize) -> Result<f64> {
    zero_temperature(params)?;
    let v = site_variance(params, &Regime::QuantumZeroT, l)?;
    Ok((-qa * qa * v).exp())
}

/// `p_l` for every site `l = 1..=N`.
pub fn moessbauer_profile(params: &ChainParams, qa: f64) -> Result<Curve> {
    zero_temperature(params)?;
    let profile = fluctuation_profile(params, &Regime::QuantumZeroT)?;
    let xs = (1..=params.n_atoms).map(|l| l as f64).collect();
    let ys = profile
        .values
        .iter()
        .map(|v| (-qa * qa * v).exp())
        .collect();
    Curve::new(
        xs,
        ys,
        CurveMeta::new("l", "p0")
            .with_params(*params)
            .with_regime(Regime::QuantumZeroT),
    )
}
