use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};
use crate::fluctuations::Regime;
use crate::spectrum::ChainParams;

/// Provenance attached to a sampled observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub x_label: String,
    pub y_label: String,
    pub params: Option<ChainParams>,
    pub regime: Option<Regime>,
    pub method: Option<String>,
}

impl CurveMeta {
    pub fn new(x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self {
            x_label: x_label.into(),
            y_label: y_label.into(),
            params: None,
            regime: None,
            method: None,
        }
    }

    pub fn with_params(mut self, params: ChainParams) -> Self {
        self.params = Some(params);
        self
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = Some(regime);
        self
    }

    pub fn with_method(mut self, method: impl Into<String>) -> Self {
        self.method = Some(method.into());
        self
    }
}

/// Observable sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    pub meta: CurveMeta,
}

impl Curve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, meta: CurveMeta) -> Result<Self> {
        check_grid(&xs)?;
        if xs.len() != ys.len() {
            return Err(ChainError::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
            return Err(ChainError::NonFinite(i));
        }
        Ok(Self { xs, ys, meta })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Points with `lo <= x <= hi`.
    pub fn window(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points().filter(move |&(x, _)| x >= lo && x <= hi)
    }
}

/// Non-empty, finite and strictly increasing.
pub(crate) fn check_grid(xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(ChainError::EmptyGrid);
    }
    if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
        return Err(ChainError::NonFinite(i));
    }
    if let Some(i) = xs.windows(2).position(|w| w[0] >= w[1]) {
        return Err(ChainError::UnsortedGrid(i + 1));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_curves() {
        let meta = || CurveMeta::new("x", "y");
        assert_eq!(
            Curve::new(vec![], vec![], meta()),
            Err(ChainError::EmptyGrid)
        );
        assert_eq!(
            Curve::new(vec![0.0, 0.0], vec![1.0, 1.0], meta()),
            Err(ChainError::UnsortedGrid(1))
        );
        assert!(matches!(
            Curve::new(vec![0.0, 1.0], vec![1.0], meta()),
            Err(ChainError::LengthMismatch { .. })
        ));
        assert_eq!(
            Curve::new(vec![0.0, 1.0], vec![1.0, f64::INFINITY], meta()),
            Err(ChainError::NonFinite(1))
        );
        assert!(Curve::new(vec![0.0, 1.0], vec![1.0, 2.0], meta()).is_ok());
    }
}
