//! Average one-particle density `⟨ρ(x)⟩ a = Σ_n N(x/a; n, ⟨û_n²⟩/a²)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{ChainError, Result};
use crate::fluctuations::{site_variances, Regime};
use crate::spectrum::ChainParams;
use crate::sum::{compensated_sum, CompensatedSum};

use super::curve::{check_grid, Curve, CurveMeta};

/// Sites further than this many standard deviations from every grid point
/// are dropped (relative weight below e^-50).
const GAUSS_CUTOFF_SIGMAS: f64 = 10.0;

/// Only the sites whose Gaussians reach the grid are evaluated, so a narrow
/// window at the end of a very long chain costs O(window · N).
pub fn density_profile(params: &ChainParams, regime: &Regime, x_grid: &[f64]) -> Result<Curve> {
    params.validate()?;
    check_grid(x_grid)?;
    let size = params.n_atoms as i64;
    let (x_min, x_max) = (x_grid[0], x_grid[x_grid.len() - 1]);

    let clamp = |v: i64| v.clamp(1, size);
    let mut lo = clamp(x_min.floor() as i64 - 1);
    let mut hi = clamp(x_max.ceil() as i64 + 1);
    let mut variances: BTreeMap<usize, f64> = BTreeMap::new();
    loop {
        let missing: Vec<usize> = (lo..=hi)
            .map(|n| n as usize)
            .filter(|n| !variances.contains_key(n))
            .collect();
        if !missing.is_empty() {
            let values = site_variances(params, regime, &missing)?;
            variances.extend(missing.into_iter().zip(values));
        }
        let v_max = variances.values().copied().fold(0.0, f64::max);
        let reach = (GAUSS_CUTOFF_SIGMAS * v_max.sqrt()).ceil() as i64 + 1;
        let new_lo = clamp(x_min.floor() as i64 - reach).min(lo);
        let new_hi = clamp(x_max.ceil() as i64 + reach).max(hi);
        if new_lo == lo && new_hi == hi {
            break;
        }
        lo = new_lo;
        hi = new_hi;
    }
    if let Some((&n, &v)) = variances.iter().find(|(_, &v)| !(v > 0.0)) {
        return Err(ChainError::param(
            "regime",
            format!("density needs positive site variances, site {n} has {v}"),
        ));
    }

    let sites: Vec<(f64, f64, f64)> = variances
        .iter()
        .map(|(&n, &v)| (n as f64, 0.5 / v, 1.0 / (2.0 * PI * v).sqrt()))
        .collect();
    let ys = x_grid
        .par_iter()
        .map(|&x| {
            sites
                .iter()
                .map(|&(center, inv_two_var, norm)| {
                    norm * (-(x - center).powi(2) * inv_two_var).exp()
                })
                .collect::<CompensatedSum>()
                .value()
        })
        .collect();
    Curve::new(
        x_grid.to_vec(),
        ys,
        CurveMeta::new("x_over_a", "rho_times_a")
            .with_params(*params)
            .with_regime(*regime),
    )
}

/// `(max − min) / mean` of the sampled values.
pub fn peak_to_valley_contrast(curve: &Curve) -> f64 {
    let ys = curve.ys();
    let max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = compensated_sum(ys.iter().copied()) / ys.len() as f64;
    (max - min) / mean
}
