//! Normal modes of the chain pinned at its left end.
//!
//! Atom 1 is tied to the origin by a spring of the same strength as the
//! inter-atomic springs and atom N is free. In dimensionless form the
//! potential is `(1/2) u^T C u` with `C` tridiagonal, its eigenvalues are
//! `4 sin²(k̃_j/2)` and its eigenvectors are sampled sines that vanish at the
//! ghost site 0 and repeat at the ghost site N+1.
//!
//! Lengths are measured in lattice constants, frequencies in units of the
//! single-spring frequency and energies in units of its quantum.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};

/// Largest matrix the dense eigensolver accepts.
pub const DENSE_EIGEN_MAX: usize = 4096;

/// Phonon dispersion used in mode sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dispersion {
    /// `ω_j² = pin + 4 sin²(k̃_j/2)`
    #[default]
    Exact,
    /// `ω_j² = pin + k̃_j²`, the long-wavelength form.
    Linearized,
}

/// Dimensionless description of the chain.
///
/// `alpha` is the ratio `ħ/(m a c)` (twice the single-oscillator zero-point
/// variance in units of `a²`), `eta` the temperature `k_B T/(ħ ω_s)` and
/// `pin_ratio` the on-site spring `λ_loc/λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub n_atoms: usize,
    pub alpha: f64,
    pub eta: f64,
    pub pin_ratio: f64,
    pub dispersion: Dispersion,
}

impl ChainParams {
    /// Unpinned chain at zero temperature with the exact dispersion.
    pub fn new(n_atoms: usize, alpha: f64) -> Self {
        Self {
            n_atoms,
            alpha,
            eta: 0.0,
            pin_ratio: 0.0,
            dispersion: Dispersion::Exact,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_pin_ratio(mut self, pin_ratio: f64) -> Self {
        self.pin_ratio = pin_ratio;
        self
    }

    pub fn with_dispersion(mut self, dispersion: Dispersion) -> Self {
        self.dispersion = dispersion;
        self
    }

    /// Classical temperature `k_B T/(m c²) = α η`.
    pub fn eta_cl(&self) -> f64 {
        self.alpha * self.eta
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(ChainError::param("n_atoms", "must be at least 1"));
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("eta", self.eta),
            ("pin_ratio", self.pin_ratio),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(ChainError::param(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(())
    }

    fn check_mode(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n_atoms {
            return Err(ChainError::IndexOutOfRange {
                what: "mode",
                index: j as i64,
                min: 1,
                max: self.n_atoms as i64,
            });
        }
        Ok(())
    }
}

/// Wavenumber of mode `j` (1-based) for a chain of `n_atoms`.
#[inline]
pub fn k_tilde(n_atoms: usize, j: usize) -> f64 {
    (j as f64 - 0.5) * PI / (n_atoms as f64 + 0.5)
}

/// Eigenvector normalisation `sqrt(2/(N+1/2))`.
#[inline]
pub fn mode_norm(n_atoms: usize) -> f64 {
    (2.0 / (n_atoms as f64 + 0.5)).sqrt()
}

/// Squared frequency of a mode with wavenumber `k` before pinning.
#[inline]
fn bare_omega_sq(k: f64, dispersion: Dispersion) -> f64 {
    match dispersion {
        Dispersion::Exact => {
            let s = (0.5 * k).sin();
            4.0 * s * s
        }
        Dispersion::Linearized => k * k,
    }
}

/// The N analytic normal modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSet {
    pub k_tilde: Vec<f64>,
    /// `(ω_j/ω_s)²`, computed as the bare value plus `pin_ratio`.
    pub omega_sq: Vec<f64>,
    pub omega_ratio: Vec<f64>,
    pub norm: f64,
}

impl ModeSet {
    pub fn len(&self) -> usize {
        self.k_tilde.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_tilde.is_empty()
    }
}

pub fn mode_set(params: &ChainParams) -> Result<ModeSet> {
    params.validate()?;
    let n = params.n_atoms;
    let k_tilde: Vec<f64> = (1..=n).map(|j| k_tilde(n, j)).collect();
    let omega_sq: Vec<f64> = k_tilde
        .iter()
        .map(|&k| bare_omega_sq(k, params.dispersion) + params.pin_ratio)
        .collect();
    let omega_ratio = omega_sq.iter().map(|w2| w2.sqrt()).collect();
    Ok(ModeSet {
        k_tilde,
        omega_sq,
        omega_ratio,
        norm: mode_norm(n),
    })
}

/// Component `ξ_n^(j) = A_N sin(k̃_j n)`.
///
/// `n` may be one of the ghost sites 0 or N+1 used to state the boundary
/// conditions.
pub fn eigenvector_component(params: &ChainParams, j: usize, n: usize) -> Result<f64> {
    params.validate()?;
    params.check_mode(j)?;
    let size = params.n_atoms;
    if n > size + 1 {
        return Err(ChainError::IndexOutOfRange {
            what: "site",
            index: n as i64,
            min: 0,
            max: size as i64 + 1,
        });
    }
    Ok(mode_norm(size) * (k_tilde(size, j) * n as f64).sin())
}

/// Full eigenvector `(ξ_1^(j), ..., ξ_N^(j))`.
pub fn eigenvector(params: &ChainParams, j: usize) -> Result<Vec<f64>> {
    params.validate()?;
    params.check_mode(j)?;
    let size = params.n_atoms;
    let norm = mode_norm(size);
    let k = k_tilde(size, j);
    Ok((1..=size).map(|n| norm * (k * n as f64).sin()).collect())
}

/// Tridiagonal coupling matrix, optionally shifted by the on-site spring.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pin_ratio: f64,
    diagonal: Vec<f64>,
}

impl CouplingMatrix {
    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn pin_ratio(&self) -> f64 {
        self.pin_ratio
    }

    /// Entry `C_{nm}` with 1-based indices.
    pub fn get(&self, n: usize, m: usize) -> f64 {
        let size = self.size();
        assert!((1..=size).contains(&n) && (1..=size).contains(&m));
        if n == m {
            self.diagonal[n - 1]
        } else if n.abs_diff(m) == 1 {
            -1.0
        } else {
            0.0
        }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// `C v` using the tridiagonal structure.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let size = self.size();
        assert_eq!(v.len(), size);
        (0..size)
            .map(|i| {
                let mut acc = self.diagonal[i] * v[i];
                if i > 0 {
                    acc -= v[i - 1];
                }
                if i + 1 < size {
                    acc -= v[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let size = self.size();
        DMatrix::from_fn(size, size, |r, c| self.get(r + 1, c + 1))
    }
}

pub fn coupling_matrix(params: &ChainParams) -> Result<CouplingMatrix> {
    params.validate()?;
    let size = params.n_atoms;
    let diagonal = (1..=size)
        .map(|n| if n < size { 2.0 } else { 1.0 } + params.pin_ratio)
        .collect();
    Ok(CouplingMatrix {
        pin_ratio: params.pin_ratio,
        diagonal,
    })
}

/// Column `n` of `C⁻¹` for the unpinned chain: `(1, 2, ..., n, n, ..., n)`.
pub fn inverse_column(params: &ChainParams, n: usize) -> Result<Vec<f64>> {
    params.validate()?;
    if params.pin_ratio > 0.0 {
        return Err(ChainError::PinnedInverse(params.pin_ratio));
    }
    let size = params.n_atoms;
    if n == 0 || n > size {
        return Err(ChainError::IndexOutOfRange {
            what: "site",
            index: n as i64,
            min: 1,
            max: size as i64,
        });
    }
    Ok((1..=size).map(|i| i.min(n) as f64).collect())
}

/// Eigen-decomposition of a dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct DenseEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` belongs to `eigenvalues[i]`.
    pub eigenvectors: DMatrix<f64>,
}

/// Validation oracle for the analytic modes.
pub fn dense_eigensolve(matrix: &DMatrix<f64>) -> Result<DenseEigen> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        return Err(ChainError::NotSquare { rows, cols });
    }
    if rows > DENSE_EIGEN_MAX {
        return Err(ChainError::CostGuard {
            what: "dense eigensolve",
            size: rows,
            limit: DENSE_EIGEN_MAX,
        });
    }
    let scale = matrix.amax().max(1.0);
    let asymmetry = (matrix - matrix.transpose()).amax();
    if asymmetry > 1e-14 * scale {
        return Err(ChainError::NotSymmetric { asymmetry });
    }

    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(rows, rows, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(DenseEigen {
        eigenvalues,
        eigenvectors,
    })
}

impl CouplingMatrix {
    pub fn eigensolve(&self) -> Result<DenseEigen> {
        dense_eigensolve(&self.to_dense())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn single_atom_is_unit_oscillator() {
        let modes = mode_set(&ChainParams::new(1, 0.0)).unwrap();
        assert_abs_diff_eq!(modes.k_tilde[0], PI / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(modes.omega_sq[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn two_atoms_match_characteristic_polynomial() {
        // det([[2-x,-1],[-1,1-x]]) = x² - 3x + 1
        let modes = mode_set(&ChainParams::new(2, 0.0)).unwrap();
        let r5 = 5f64.sqrt();
        assert_abs_diff_eq!(modes.omega_sq[0], (3.0 - r5) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(modes.omega_sq[1], (3.0 + r5) / 2.0, epsilon = 1e-14);

        let pinned = mode_set(&ChainParams::new(2, 0.0).with_pin_ratio(1.0)).unwrap();
        for (p, b) in pinned.omega_sq.iter().zip(&modes.omega_sq) {
            assert_eq!(*p, b + 1.0);
        }
    }

    #[test]
    fn boundary_ghost_sites() {
        let p = ChainParams::new(7, 0.1);
        for j in 1..=7 {
            assert_abs_diff_eq!(
                eigenvector_component(&p, j, 0).unwrap(),
                0.0,
                epsilon = 1e-16
            );
            let last = eigenvector_component(&p, j, 7).unwrap();
            let ghost = eigenvector_component(&p, j, 8).unwrap();
            assert_abs_diff_eq!(last, ghost, epsilon = 1e-14);
        }
        assert!(matches!(
            eigenvector_component(&p, 0, 1),
            Err(ChainError::IndexOutOfRange { what: "mode", .. })
        ));
        assert!(matches!(
            eigenvector_component(&p, 8, 1),
            Err(ChainError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            eigenvector_component(&p, 1, 9),
            Err(ChainError::IndexOutOfRange { what: "site", .. })
        ));
    }

    #[test]
    fn small_coupling_matrices() {
        let c2 = coupling_matrix(&ChainParams::new(2, 0.0))
            .unwrap()
            .to_dense();
        assert_eq!(c2, DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 1.0]));
        let c1 = coupling_matrix(&ChainParams::new(1, 0.0))
            .unwrap()
            .to_dense();
        assert_eq!(c1, DMatrix::from_element(1, 1, 1.0));
    }

    #[test]
    fn analytic_eigenvectors_satisfy_eigen_equation() {
        for size in [1, 2, 3, 10, 64, 500] {
            let p = ChainParams::new(size, 0.0);
            let c = coupling_matrix(&p).unwrap();
            let modes = mode_set(&p).unwrap();
            for j in 1..=size {
                let v = eigenvector(&p, j).unwrap();
                let cv = c.apply(&v);
                for (a, b) in cv.iter().zip(&v) {
                    assert!(
                        (a - modes.omega_sq[j - 1] * b).abs() < 1e-12,
                        "N={size} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvectors_match_dense_solver_up_to_sign() {
        let p = ChainParams::new(8, 0.0);
        let eig = coupling_matrix(&p).unwrap().eigensolve().unwrap();
        // 4 sin²(k̃/2) is increasing in j, so ascending order lines up.
        for j in 1..=8 {
            let analytic = eigenvector(&p, j).unwrap();
            let col = eig.eigenvectors.column(j - 1);
            let sign = if col[0] * analytic[0] < 0.0 {
                -1.0
            } else {
                1.0
            };
            for n in 0..8 {
                assert_abs_diff_eq!(sign * col[n], analytic[n], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn inverse_columns() {
        let p = ChainParams::new(4, 0.0);
        assert_eq!(inverse_column(&p, 2).unwrap(), vec![1.0, 2.0, 2.0, 2.0]);

        let p = ChainParams::new(8, 0.0);
        let c = coupling_matrix(&p).unwrap();
        let inv = c.to_dense().try_inverse().unwrap();
        for n in 1..=8 {
            let b = inverse_column(&p, n).unwrap();
            assert_eq!(b[n - 1], n as f64);
            let mut e = vec![0.0; 8];
            e[n - 1] = 1.0;
            assert_eq!(c.apply(&b), e);
            for i in 0..8 {
                assert_abs_diff_eq!(inv[(i, n - 1)], b[i], epsilon = 1e-10);
            }
        }
        assert_eq!(
            inverse_column(&p.with_pin_ratio(0.5), 1),
            Err(ChainError::PinnedInverse(0.5))
        );
        assert!(inverse_column(&p, 9).is_err());
    }

    #[test]
    fn dense_solver_basics() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 1.0]);
        let eig = dense_eigensolve(&m).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 0.381_966_011_250_105_1, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvalues[1], 2.618_033_988_749_895, epsilon = 1e-12);

        let eye = dense_eigensolve(&DMatrix::identity(5, 5)).unwrap();
        assert!(eye.eigenvalues.iter().all(|&x| (x - 1.0).abs() < 1e-15));

        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            dense_eigensolve(&skew),
            Err(ChainError::NotSymmetric { .. })
        ));
        let rect = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(
            dense_eigensolve(&rect),
            Err(ChainError::NotSquare { .. })
        ));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(mode_set(&ChainParams::new(0, 0.1)).is_err());
        assert!(mode_set(&ChainParams::new(3, -0.1)).is_err());
        assert!(mode_set(&ChainParams::new(3, 0.1).with_eta(f64::NAN)).is_err());
        assert!(mode_set(&ChainParams::new(3, 0.1).with_pin_ratio(-1.0)).is_err());
    }

    #[test]
    fn eta_cl_is_alpha_times_eta() {
        let p = ChainParams::new(3, 0.02).with_eta(0.05);
        assert_eq!(p.eta_cl(), 0.02 * 0.05);
    }

    proptest! {
        #[test]
        fn dense_eigenvalues_match_analytic(size in 1usize..=64) {
            let p = ChainParams::new(size, 0.0);
            let modes = mode_set(&p).unwrap();
            let eig = coupling_matrix(&p).unwrap().eigensolve().unwrap();
            for (a, b) in eig.eigenvalues.iter().zip(&modes.omega_sq) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn analytic_eigenvectors_orthonormal(size in 1usize..=64) {
            let p = ChainParams::new(size, 0.0);
            let vecs: Vec<Vec<f64>> = (1..=size).map(|j| eigenvector(&p, j).unwrap()).collect();
            for a in 0..size {
                for b in a..size {
                    let dot: f64 = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| x * y).sum();
                    let expected = if a == b { 1.0 } else { 0.0 };
                    prop_assert!((dot - expected).abs() < 1e-10);
                }
            }
        }

        #[test]
        fn pinning_shifts_squared_frequencies(size in 1usize..200, pin in 0.0f64..5.0) {
            let base = mode_set(&ChainParams::new(size, 0.0)).unwrap();
            let pinned = mode_set(&ChainParams::new(size, 0.0).with_pin_ratio(pin)).unwrap();
            prop_assert_eq!(&base.k_tilde, &pinned.k_tilde);
            for (b, p) in base.omega_sq.iter().zip(&pinned.omega_sq) {
                prop_assert_eq!(*p, b + pin);
            }
        }

        #[test]
        fn linearized_dispersion_is_stiffer(size in 1usize..300, pin in 0.0f64..2.0) {
            let p = ChainParams::new(size, 0.0).with_pin_ratio(pin);
            let exact = mode_set(&p).unwrap();
            let lin = mode_set(&p.with_dispersion(Dispersion::Linearized)).unwrap();
            for (l, e) in lin.omega_ratio.iter().zip(&exact.omega_ratio) {
                prop_assert!(l >= e);
            }
        }

        #[test]
        fn wavenumbers_increase_inside_band(size in 1usize..2000) {
            let modes = mode_set(&ChainParams::new(size, 0.0)).unwrap();
            prop_assert!(modes.k_tilde[0] > 0.0);
            prop_assert!(*modes.k_tilde.last().unwrap() < PI);
            prop_assert!(modes.k_tilde.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(modes.omega_ratio.iter().all(|&w| w > 0.0));
        }
    }
}
