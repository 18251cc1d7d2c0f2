//! Ordinary least-squares fits used to read exponents off sampled curves.

use crate::error::{ChainError, Result};
use crate::sum::compensated_sum;

use super::curve::Curve;

const MIN_POINTS: usize = 4;

/// `y ≈ slope · x + intercept` in the fitted coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub points: usize,
}

/// `y ≈ prefactor · x^exponent`; the residual is measured in `ln y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub rms_residual: f64,
    pub points: usize,
}

/// `y ≈ peak · Γ² / (Γ² + (x − center)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianFit {
    pub half_width: f64,
    pub peak: f64,
    pub rms_residual: f64,
}

fn ols(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < MIN_POINTS {
        return Err(ChainError::InsufficientPoints {
            needed: MIN_POINTS,
            found: points.len(),
        });
    }
    let count = points.len() as f64;
    let mean_x = compensated_sum(points.iter().map(|p| p.0)) / count;
    let mean_y = compensated_sum(points.iter().map(|p| p.1)) / count;
    let sxx = compensated_sum(points.iter().map(|p| (p.0 - mean_x).powi(2)));
    let sxy = compensated_sum(points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)));
    if sxx == 0.0 {
        return Err(ChainError::param("x", "all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss = compensated_sum(
        points
            .iter()
            .map(|&(x, y)| (y - slope * x - intercept).powi(2)),
    );
    Ok(LinearFit {
        slope,
        intercept,
        rms_residual: (ss / count).sqrt(),
        points: points.len(),
    })
}

fn log_x(curve: &Curve, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>> {
    curve
        .window(lo, hi)
        .map(|(x, y)| {
            if x > 0.0 {
                Ok((x.ln(), y))
            } else {
                Err(ChainError::NonPositive { x, value: x })
            }
        })
        .collect()
}

/// Fit `y = slope · ln x + intercept` over `lo <= x <= hi`.
pub fn fit_log_slope(curve: &Curve, range: (f64, f64)) -> Result<LinearFit> {
    ols(&log_x(curve, range.0, range.1)?)
}

/// Fit `ln y = exponent · ln x + ln prefactor` over `lo <= x <= hi`.
pub fn fit_power_law(curve: &Curve, range: (f64, f64)) -> Result<PowerLawFit> {
    let pts = log_x(curve, range.0, range.1)?
        .into_iter()
        .map(|(lx, y)| {
            if y > 0.0 {
                Ok((lx, y.ln()))
            } else {
                Err(ChainError::NonPositive {
                    x: lx.exp(),
                    value: y,
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = ols(&pts)?;
    Ok(PowerLawFit {
        exponent: fit.slope,
        prefactor: fit.intercept.exp(),
        rms_residual: fit.rms_residual,
        points: fit.points,
    })
}

/// Lorentzian around `center` from points with `|x − center| <= half_window`,
/// via the linear relation between `1/y` and `(x − center)²`.
pub fn fit_lorentzian(curve: &Curve, center: f64, half_window: f64) -> Result<LorentzianFit> {
    let pts = curve
        .window(center - half_window, center + half_window)
        .map(|(x, y)| {
            if y > 0.0 {
                Ok(((x - center).powi(2), 1.0 / y))
            } else {
                Err(ChainError::NonPositive { x, value: y })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = ols(&pts)?;
    if !(fit.slope > 0.0 && fit.intercept > 0.0) {
        return Err(ChainError::param(
            "curve",
            "data is not peaked around the given center",
        ));
    }
    Ok(LorentzianFit {
        half_width: (fit.intercept / fit.slope).sqrt(),
        peak: 1.0 / fit.intercept,
        rms_residual: fit.rms_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::curve::CurveMeta;

    fn curve(f: impl Fn(f64) -> f64, xs: Vec<f64>) -> Curve {
        let ys = xs.iter().map(|&x| f(x)).collect();
        Curve::new(xs, ys, CurveMeta::new("x", "y")).unwrap()
    }

    #[test]
    fn exact_power_law() {
        let c = curve(
            |x| 3.0 * x.powf(-0.5),
            (1..=50).map(|i| i as f64 * 0.7).collect(),
        );
        let fit = fit_power_law(&c, (0.0, 100.0)).unwrap();
        assert!((fit.exponent + 0.5).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-12);
        assert!(fit.rms_residual < 1e-12);
    }

    #[test]
    fn exact_log_slope() {
        let c = curve(
            |x| 2.0 + x.ln() / (2.0 * std::f64::consts::PI),
            (1..=100).map(f64::from).collect(),
        );
        let fit = fit_log_slope(&c, (1.0, 100.0)).unwrap();
        assert!((fit.slope - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
        assert!((fit.intercept - 2.0).abs() < 1e-13);
    }

    #[test]
    fn lorentzian_recovers_width() {
        let c = curve(
            |x| 5.0 * 0.04 / (0.04 + (x - 1.0).powi(2)),
            (0..200).map(|i| 0.5 + 0.005 * i as f64).collect(),
        );
        let fit = fit_lorentzian(&c, 1.0, 0.1).unwrap();
        assert!((fit.half_width - 0.2).abs() < 1e-12);
        assert!((fit.peak - 5.0).abs() < 1e-11);
    }

    #[test]
    fn fit_errors() {
        let c = curve(|x| x, vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            fit_log_slope(&c, (0.0, 10.0)),
            Err(ChainError::InsufficientPoints { .. })
        ));
        let c = curve(|x| x - 3.0, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(matches!(
            fit_power_law(&c, (0.0, 10.0)),
            Err(ChainError::NonPositive { .. })
        ));
        let c = curve(|x| x, vec![-1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(matches!(
            fit_log_slope(&c, (-5.0, 10.0)),
            Err(ChainError::NonPositive { .. })
        ));
    }
}
