//! Long-range order of a d-dimensional harmonic crystal.
//!
//! The displacement variance is controlled by the small-k integral
//! `∫ k^(d−1) w(k) dk` with `w ~ 1/k²` for thermal and `w ~ 1/k` for
//! zero-temperature quantum fluctuations.

use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FluctuationKind {
    ThermalClassical,
    QuantumZeroT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderClass {
    LongRangeOrder,
    LogDivergence,
    LinearDivergence,
}

impl OrderClass {
    pub fn name(self) -> &'static str {
        match self {
            OrderClass::LongRangeOrder => "LongRangeOrder",
            OrderClass::LogDivergence => "LogDivergence",
            OrderClass::LinearDivergence => "LinearDivergence",
        }
    }
}

pub fn order_classification(dimension: u32, kind: FluctuationKind) -> Result<OrderClass> {
    if !(1..=3).contains(&dimension) {
        return Err(ChainError::param(
            "d",
            format!("dimension must be 1, 2 or 3, got {dimension}"),
        ));
    }
    let d = dimension as i32;
    let exponent = match kind {
        FluctuationKind::ThermalClassical => d - 3,
        FluctuationKind::QuantumZeroT => d - 2,
    };
    Ok(match exponent {
        -2 => OrderClass::LinearDivergence,
        -1 => OrderClass::LogDivergence,
        _ => OrderClass::LongRangeOrder,
    })
}
