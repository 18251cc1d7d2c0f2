//! Fixtures shared by the kernel benchmarks.

use std::f64::consts::PI;

use hchain_core::observables::uniform_grid;
use hchain_core::{ChainParams, Regime};

/// Chain sizes swept by the O(N²) and O(N³) kernels.
pub const SIZES: [usize; 3] = [250, 500, 1000];

/// Zero-temperature chain with the coupling used for Bragg-peak studies.
pub fn quantum_chain(n: usize) -> (ChainParams, Regime) {
    (ChainParams::new(n, 0.02), Regime::QuantumZeroT)
}

/// Warm quantum chain, exercising the Bose occupation branch.
pub fn thermal_chain(n: usize) -> (ChainParams, Regime) {
    let params = ChainParams::new(n, 0.02).with_eta(0.05);
    (params, Regime::quantum(&params))
}

/// `points` wavenumbers spanning the first two Bragg peaks.
pub fn q_grid(points: usize) -> Vec<f64> {
    uniform_grid(0.5, 3.0 * PI, points).expect("valid grid")
}
