//! Static structure factor
//! `S_N(q) = (1/N) Σ_{n,l} cos(qa(n−l)) exp(−(qa)² D_{nl}/2)`.
//!
//! `D` is symmetric, so the imaginary parts of the phase factors cancel
//! pairwise and only the lower triangle is summed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};
use crate::fluctuations::{pair_variance_matrix, PairMethod, PairVarianceMatrix, Regime};
use crate::spectrum::ChainParams;
use crate::sum::{compensated_sum, CompensatedSum};

use super::curve::{check_grid, Curve, CurveMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureMethod {
    ExactPair,
    BulkApprox,
}

impl StructureMethod {
    fn pair_method(self) -> PairMethod {
        match self {
            StructureMethod::ExactPair => PairMethod::ExactMode,
            StructureMethod::BulkApprox => PairMethod::BulkApprox,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StructureMethod::ExactPair => "exact_pair",
            StructureMethod::BulkApprox => "bulk_approx",
        }
    }
}

/// Evaluator holding the pair matrix so many wavenumbers can share it.
#[derive(Debug, Clone)]
pub struct StructureFactor {
    pairs: PairVarianceMatrix,
}

impl StructureFactor {
    pub fn new(params: &ChainParams, regime: &Regime, method: StructureMethod) -> Result<Self> {
        Ok(Self::from_pairs(pair_variance_matrix(
            params,
            regime,
            method.pair_method(),
        )?))
    }

    pub fn from_pairs(pairs: PairVarianceMatrix) -> Self {
        Self { pairs }
    }

    pub fn pairs(&self) -> &PairVarianceMatrix {
        &self.pairs
    }

    /// `S_N` at one wavenumber `qa`.
    pub fn at(&self, qa: f64) -> f64 {
        let size = self.pairs.size();
        let half_q2 = -0.5 * qa * qa;
        let phases: Vec<f64> = (0..size).map(|m| (qa * m as f64).cos()).collect();

        let value = if let Some(by_distance) = self.pairs.by_distance() {
            // (1/N) Σ_{n,l} G(n−l) = G(0) + 2 Σ_m (1 − m/N) G_e(m)
            let inv = 1.0 / size as f64;
            let tail =
                compensated_sum((1..size).map(|m| {
                    (1.0 - m as f64 * inv) * phases[m] * (half_q2 * by_distance[m]).exp()
                }));
            1.0 + 2.0 * tail
        } else {
            let rows: Vec<f64> = (2..=size)
                .into_par_iter()
                .map(|n| {
                    let row = self.pairs.dense_row(n).expect("dense storage");
                    row[..n - 1]
                        .iter()
                        .enumerate()
                        .map(|(l, &d)| phases[n - 1 - l] * (half_q2 * d).exp())
                        .collect::<CompensatedSum>()
                        .value()
                })
                .collect();
            (size as f64 + 2.0 * compensated_sum(rows)) / size as f64
        };
        debug_assert!(
            value >= -1e-9 * size as f64,
            "negative structure factor {value} at qa = {qa}"
        );
        value
    }

    pub fn curve(&self, q_grid: &[f64], meta: CurveMeta) -> Result<Curve> {
        check_grid(q_grid)?;
        let ys = q_grid.par_iter().map(|&q| self.at(q)).collect();
        Curve::new(q_grid.to_vec(), ys, meta)
    }
}

pub fn structure_factor(
    params: &ChainParams,
    regime: &Regime,
    q_grid: &[f64],
    method: StructureMethod,
) -> Result<Curve> {
    check_grid(q_grid)?;
    let evaluator = StructureFactor::new(params, regime, method)?;
    let meta = CurveMeta::new("qa", "s")
        .with_params(*params)
        .with_regime(*regime)
        .with_method(method.label());
    evaluator.curve(q_grid, meta)
}

/// Offset of `qa` from the nearest Bragg point `2πν`.
fn bragg_offset(qa: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    qa - two_pi * (qa / two_pi).round()
}

/// `(1/N) [sin(qaN/2) / sin(qa/2)]²`; exactly `N` within `1e-8` of a Bragg point.
pub fn structure_factor_rigid(n_atoms: usize, qa: f64) -> f64 {
    let size = n_atoms as f64;
    let delta = bragg_offset(qa);
    if delta.abs() < 1e-8 {
        return size;
    }
    // sin(qa N/2)² = sin(δN/2)² and sin(qa/2)² = sin(δ/2)²
    let ratio = (0.5 * delta * size).sin() / (0.5 * delta).sin();
    ratio * ratio / size
}

/// Infinite classical chain,
/// `sinh(x) / (cosh(x) − cos(qa))` with `x = η_cl (qa)²/2`.
///
/// Evaluated as `−expm1(−2x) / (expm1(−x)² + 4 e^{−x} sin²(qa/2))`, which
/// is the same ratio multiplied through by `2e^{−x}` and stays accurate both
/// for `x → 0` and for `x` beyond the range of `sinh`.
pub fn structure_factor_classical_infinite(eta_cl: f64, qa: f64) -> Result<f64> {
    if qa == 0.0 || !qa.is_finite() {
        return Err(ChainError::param(
            "qa",
            "forward scattering (qa = 0) has no infinite-chain limit",
        ));
    }
    if !(eta_cl > 0.0) || !eta_cl.is_finite() {
        return Err(ChainError::param(
            "eta_cl",
            format!("must be > 0, got {eta_cl}"),
        ));
    }
    let x = 0.5 * eta_cl * qa * qa;
    let s = (0.5 * qa).sin();
    let em1 = (-x).exp_m1();
    Ok(-(-2.0 * x).exp_m1() / (em1 * em1 + 4.0 * (-x).exp() * s * s))
}
