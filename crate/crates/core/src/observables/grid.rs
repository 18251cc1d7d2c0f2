//! Wavenumber grids.
//!
//! The default grid is uniform in `qa`. Bragg points `qa = 2πν` are inserted
//! exactly so peak heights are point values, and refinement windows add
//! geometrically spaced offsets down to the `2π/N` peak width.

use std::f64::consts::PI;

use crate::error::{ChainError, Result};

/// `points` values from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(ChainError::EmptyGrid);
    }
    if !(min.is_finite() && max.is_finite()) || (points > 1 && min >= max) {
        return Err(ChainError::param(
            "grid",
            format!("need finite min < max, got [{min}, {max}]"),
        ));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                max
            } else {
                min + step * i as f64
            }
        })
        .collect())
}

/// `count` geometrically spaced values from `lo` to `hi` inclusive.
pub fn geometric_offsets(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(lo > 0.0) || !(hi > lo) {
        return Err(ChainError::param(
            "offsets",
            format!("need count >= 2 and 0 < lo < hi, got {count} in [{lo}, {hi}]"),
        ));
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect())
}

/// Merges `base` with every Bragg point `2πν` (ν ≠ 0) in `[min, max]` and with
/// optional refinement offsets placed on both sides of each peak. Values
/// within `1e-12` of a Bragg point collapse onto it.
pub fn bragg_point_grid(base: &[f64], min: f64, max: f64, offsets: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = base.to_vec();
    let first = (min / (2.0 * PI)).ceil() as i64;
    let last = (max / (2.0 * PI)).floor() as i64;
    let mut peaks = Vec::new();
    for nu in first..=last {
        if nu == 0 {
            continue;
        }
        let q = 2.0 * PI * nu as f64;
        peaks.push(q);
        out.push(q);
        for &d in offsets {
            for candidate in [q - d, q + d] {
                if candidate >= min && candidate <= max {
                    out.push(candidate);
                }
            }
        }
    }
    for x in out.iter_mut() {
        if let Some(&p) = peaks.iter().find(|&&p| (*x - p).abs() < 1e-12) {
            *x = p;
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}
