//! Mean-square displacements of the chain atoms.
//!
//! Every regime reduces to a weighted mode sum
//! `⟨û_n²⟩/a² = Σ_j w_j (ξ_n^(j))²` with a per-mode weight:
//!
//! | regime          | `w_j`                          |
//! |-----------------|--------------------------------|
//! | zero temperature| `α / (2 ω_j)`                  |
//! | finite `η`      | `α (1 + 2 n_B(ω_j)) / (2 ω_j)` |
//! | classical       | `η_cl / ω_j²`                  |
//!
//! with `ω_j` in units of `ω_s`. Pair fluctuations replace `(ξ_n)²` by
//! `(ξ_n − ξ_l)²` in the same sum.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};
use crate::spectrum::{mode_set, ChainParams};
use crate::sum::CompensatedSum;

/// Largest chain for which the exact pair matrix is built.
pub const PAIR_EXACT_MAX: usize = 4096;

/// Statistical regime of the mode occupations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    QuantumZeroT,
    /// Quantum statistics at temperature `η = k_B T/(ħ ω_s)`.
    FiniteT {
        eta: f64,
    },
    /// Equipartition in every mode at `η_cl = k_B T/(m c²)`; independent of `α`.
    Classical {
        eta_cl: f64,
    },
}

impl Regime {
    /// Quantum regime implied by `params.eta` (zero temperature when `eta == 0`).
    pub fn quantum(params: &ChainParams) -> Self {
        if params.eta == 0.0 {
            Regime::QuantumZeroT
        } else {
            Regime::FiniteT { eta: params.eta }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Regime::QuantumZeroT => Ok(()),
            Regime::FiniteT { eta } if eta.is_finite() && eta >= 0.0 => Ok(()),
            Regime::FiniteT { eta } => Err(ChainError::param(
                "eta",
                format!("must be finite and >= 0, got {eta}"),
            )),
            Regime::Classical { eta_cl } if eta_cl.is_finite() && eta_cl >= 0.0 => Ok(()),
            Regime::Classical { eta_cl } => Err(ChainError::param(
                "eta_cl",
                format!("must be finite and >= 0, got {eta_cl}"),
            )),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::QuantumZeroT => "quantum_zero_t",
            Regime::FiniteT { .. } => "finite_t",
            Regime::Classical { .. } => "classical",
        }
    }
}

/// Bose occupation `1/(exp(ω/η) − 1)`; exactly zero at `η = 0`.
pub fn bose_occupation(omega_ratio: f64, eta: f64) -> Result<f64> {
    if !(omega_ratio > 0.0) || !omega_ratio.is_finite() {
        return Err(ChainError::param(
            "omega_ratio",
            format!("must be > 0, got {omega_ratio}"),
        ));
    }
    if !(eta >= 0.0) {
        return Err(ChainError::param("eta", format!("must be >= 0, got {eta}")));
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega_ratio / eta).exp_m1())
}

/// `⟨x̂²⟩` of a single oscillator in units of its zero-point value:
/// `1 + 2 n_B = coth(1/(2η))`.
pub fn oscillator_variance(eta: f64) -> f64 {
    debug_assert!(eta >= 0.0);
    if eta > 0.0 {
        1.0 + 2.0 / eta.recip().exp_m1()
    } else {
        1.0
    }
}

/// Per-mode weights `w_j` of the variance sum.
pub fn mode_weights(params: &ChainParams, regime: &Regime) -> Result<Vec<f64>> {
    regime.validate()?;
    let modes = mode_set(params)?;
    let alpha = params.alpha;
    modes
        .omega_ratio
        .iter()
        .zip(&modes.omega_sq)
        .map(|(&w, &w2)| match *regime {
            Regime::QuantumZeroT => Ok(0.5 * alpha / w),
            Regime::FiniteT { eta } => {
                let occupation = bose_occupation(w, eta)?;
                Ok(0.5 * alpha * (1.0 + 2.0 * occupation) / w)
            }
            Regime::Classical { eta_cl } => Ok(eta_cl / w2),
        })
        .collect()
}

fn check_site(params: &ChainParams, n: usize) -> Result<()> {
    if n == 0 || n > params.n_atoms {
        return Err(ChainError::IndexOutOfRange {
            what: "site",
            index: n as i64,
            min: 1,
            max: params.n_atoms as i64,
        });
    }
    Ok(())
}

/// Mode sum `Σ_j c_j sin²(k̃_j n)` with `c_j = A_N² w_j` already folded in.
fn weighted_sine_sum(k_tilde: &[f64], coeffs: &[f64], n: usize) -> f64 {
    let x = n as f64;
    k_tilde
        .iter()
        .zip(coeffs)
        .map(|(&k, &c)| {
            let s = (k * x).sin();
            c * s * s
        })
        .collect::<CompensatedSum>()
        .value()
}

struct SineTable {
    k_tilde: Vec<f64>,
    coeffs: Vec<f64>,
}

impl SineTable {
    fn new(params: &ChainParams, regime: &Regime) -> Result<Self> {
        let weights = mode_weights(params, regime)?;
        let modes = mode_set(params)?;
        let norm_sq = modes.norm * modes.norm;
        Ok(Self {
            k_tilde: modes.k_tilde,
            coeffs: weights.into_iter().map(|w| w * norm_sq).collect(),
        })
    }

    fn variance(&self, n: usize) -> f64 {
        weighted_sine_sum(&self.k_tilde, &self.coeffs, n)
    }
}

/// `⟨û_n²⟩/a²` for 1-based site `n`.
pub fn site_variance(params: &ChainParams, regime: &Regime, n: usize) -> Result<f64> {
    params.validate()?;
    check_site(params, n)?;
    Ok(SineTable::new(params, regime)?.variance(n))
}

/// Variances for an arbitrary set of sites, in the order given.
pub fn site_variances(params: &ChainParams, regime: &Regime, sites: &[usize]) -> Result<Vec<f64>> {
    params.validate()?;
    for &n in sites {
        check_site(params, n)?;
    }
    let table = SineTable::new(params, regime)?;
    Ok(sites.par_iter().map(|&n| table.variance(n)).collect())
}

/// Per-site variances `⟨û_n²⟩/a²` for `n = 1..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationProfile {
    pub params: ChainParams,
    pub regime: Regime,
    /// `values[n - 1]` belongs to site `n`.
    pub values: Vec<f64>,
}

impl FluctuationProfile {
    /// Variance at 1-based site `n`.
    pub fn at(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn fluctuation_profile(params: &ChainParams, regime: &Regime) -> Result<FluctuationProfile> {
    params.validate()?;
    let table = SineTable::new(params, regime)?;
    let values = (1..=params.n_atoms)
        .into_par_iter()
        .map(|n| table.variance(n))
        .collect();
    Ok(FluctuationProfile {
        params: *params,
        regime: *regime,
        values,
    })
}

/// How pair fluctuations are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMethod {
    /// Full mode sum over `(ξ_n − ξ_l)²`.
    ExactMode,
    /// Translation-invariant approximation `D_{nl} ≈ ⟨û²_{|n−l|}⟩`.
    ///
    /// Exact in the classical regime. At zero temperature the true pair
    /// variance grows as `(α/π) ln|n−l|`, twice the logarithmic slope of the
    /// site variance, so this underestimates `D` for distant pairs.
    BulkApprox,
}

#[derive(Debug, Clone, PartialEq)]
enum PairStorage {
    /// Row-major N×N.
    Dense(Vec<f64>),
    /// `D` as a function of `|n − l|`; entry 0 is the diagonal.
    Toeplitz(Vec<f64>),
}

/// `D_{nl} = ⟨(û_n − û_l)²⟩/a²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairVarianceMatrix {
    size: usize,
    method: PairMethod,
    storage: PairStorage,
}

impl PairVarianceMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn method(&self) -> PairMethod {
        self.method
    }

    /// Entry for 1-based sites.
    #[inline]
    pub fn get(&self, n: usize, l: usize) -> f64 {
        debug_assert!((1..=self.size).contains(&n) && (1..=self.size).contains(&l));
        match &self.storage {
            PairStorage::Dense(data) => data[(n - 1) * self.size + (l - 1)],
            PairStorage::Toeplitz(by_distance) => by_distance[n.abs_diff(l)],
        }
    }

    /// Row `n` (1-based) as a slice, for dense storage.
    pub(crate) fn dense_row(&self, n: usize) -> Option<&[f64]> {
        match &self.storage {
            PairStorage::Dense(data) => Some(&data[(n - 1) * self.size..n * self.size]),
            PairStorage::Toeplitz(_) => None,
        }
    }

    /// `D` by distance when the matrix depends only on `|n − l|`.
    pub(crate) fn by_distance(&self) -> Option<&[f64]> {
        match &self.storage {
            PairStorage::Toeplitz(v) => Some(v),
            PairStorage::Dense(_) => None,
        }
    }
}

/// Squared Euclidean distance of two table rows, accumulated in four fixed
/// lanes. All terms are non-negative so no compensation is needed.
#[inline]
fn row_distance_sq(a: &[f64], b: &[f64]) -> f64 {
    let mut lanes = [0.0f64; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let (rest_a, rest_b) = (chunks_a.remainder(), chunks_b.remainder());
    for (ca, cb) in chunks_a.zip(chunks_b) {
        for i in 0..4 {
            let d = ca[i] - cb[i];
            lanes[i] += d * d;
        }
    }
    let mut tail = 0.0;
    for (x, y) in rest_a.iter().zip(rest_b) {
        let d = x - y;
        tail += d * d;
    }
    (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) + tail
}

pub fn pair_variance_matrix(
    params: &ChainParams,
    regime: &Regime,
    method: PairMethod,
) -> Result<PairVarianceMatrix> {
    params.validate()?;
    let size = params.n_atoms;
    match method {
        PairMethod::ExactMode => {
            if size > PAIR_EXACT_MAX {
                return Err(ChainError::CostGuard {
                    what: "exact pair matrix",
                    size,
                    limit: PAIR_EXACT_MAX,
                });
            }
            let weights = mode_weights(params, regime)?;
            let modes = mode_set(params)?;
            // M_{nj} = sqrt(w_j) ξ_n^(j)
            let scale: Vec<f64> = weights.iter().map(|w| w.sqrt() * modes.norm).collect();
            let mut table = vec![0.0; size * size];
            table
                .par_chunks_mut(size)
                .enumerate()
                .for_each(|(row, out)| {
                    let x = (row + 1) as f64;
                    for ((slot, &k), &s) in out.iter_mut().zip(&modes.k_tilde).zip(&scale) {
                        *slot = s * (k * x).sin();
                    }
                });

            let mut data = vec![0.0; size * size];
            data.par_chunks_mut(size).enumerate().for_each(|(n, out)| {
                let row_n = &table[n * size..(n + 1) * size];
                for (l, slot) in out.iter_mut().enumerate().take(n) {
                    *slot = row_distance_sq(row_n, &table[l * size..(l + 1) * size]);
                }
            });
            for n in 0..size {
                for l in n + 1..size {
                    data[n * size + l] = data[l * size + n];
                }
            }
            Ok(PairVarianceMatrix {
                size,
                method,
                storage: PairStorage::Dense(data),
            })
        }
        PairMethod::BulkApprox => {
            let profile = fluctuation_profile(params, regime)?;
            let mut by_distance = Vec::with_capacity(size);
            by_distance.push(0.0);
            by_distance.extend_from_slice(&profile.values[..size - 1]);
            Ok(PairVarianceMatrix {
                size,
                method,
                storage: PairStorage::Toeplitz(by_distance),
            })
        }
    }
}

/// `η_cl (n − 1/π²)`: large-n classical variance with the linearized dispersion.
pub fn asymptotic_linear_law(eta_cl: f64, n: f64) -> f64 {
    eta_cl * (n - 1.0 / (PI * PI))
}

/// `α (c_0 + ln(n)/(2π))`: large-n zero-temperature variance. `c_0` has no
/// closed form and must come from [`fit_log_law_constant`].
pub fn asymptotic_log_law(alpha: f64, c0: f64, n: f64) -> f64 {
    alpha * (c0 + n.ln() / (2.0 * PI))
}

/// Least-squares `c_0` for a fixed slope `1/(2π)` over sites `n_min..=n_max`.
pub fn fit_log_law_constant(
    profile: &FluctuationProfile,
    n_min: usize,
    n_max: usize,
) -> Result<f64> {
    let alpha = profile.params.alpha;
    if !(alpha > 0.0) {
        return Err(ChainError::param("alpha", "log law needs alpha > 0"));
    }
    if n_min == 0 || n_max > profile.len() || n_min > n_max {
        return Err(ChainError::IndexOutOfRange {
            what: "fit range end",
            index: n_max as i64,
            min: n_min.max(1) as i64,
            max: profile.len() as i64,
        });
    }
    let count = (n_max - n_min + 1) as f64;
    let total: CompensatedSum = (n_min..=n_max)
        .map(|n| profile.at(n) / alpha - (n as f64).ln() / (2.0 * PI))
        .collect();
    Ok(total.value() / count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{eigenvector, Dispersion};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn bose_function_values() {
        assert_eq!(bose_occupation(3.0, 0.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert_relative_eq!(
            bose_occupation(1.0, 1.0).unwrap(),
            1.0 / (e - 1.0),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            bose_occupation(1.0, 1.0).unwrap(),
            0.581_976_706_869_326_4,
            max_relative = 1e-12
        );
        // high-temperature limit 1 + 2 n_B -> 2 η/ω
        let x = 1.0 + 2.0 * bose_occupation(0.01, 1.0).unwrap();
        assert!((x / 200.0 - 1.0).abs() < 1e-4);
        assert!(bose_occupation(0.0, 1.0).is_err());
        assert!(bose_occupation(-1.0, 1.0).is_err());
    }

    #[test]
    fn bose_identity_with_coth() {
        for &(w, eta) in &[(0.3, 0.01), (1.0, 1.0), (2.0, 50.0), (1e-6, 1.0)] {
            let lhs = 1.0 + 2.0 * bose_occupation(w, eta).unwrap();
            let rhs = 1.0 / (w / (2.0 * eta)).tanh();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn oscillator_crossover() {
        assert_eq!(oscillator_variance(0.0), 1.0);
        assert_relative_eq!(
            oscillator_variance(0.5),
            1.313_035_285_499_331_3,
            max_relative = 1e-13
        );
        assert!((oscillator_variance(1000.0) / 2000.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_atom_zero_point() {
        let p = ChainParams::new(1, 0.04);
        let v = site_variance(&p, &Regime::QuantumZeroT, 1).unwrap();
        assert_relative_eq!(v, 0.02, max_relative = 1e-14);
    }

    #[test]
    fn classical_profile_is_linear() {
        for size in [1, 2, 17, 300] {
            let p = ChainParams::new(size, 0.0);
            let prof = fluctuation_profile(&p, &Regime::Classical { eta_cl: 0.01 }).unwrap();
            for n in 1..=size {
                assert_relative_eq!(prof.at(n), 0.01 * n as f64, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn zero_alpha_quantum_vanishes() {
        let p = ChainParams::new(10, 0.0);
        assert_eq!(site_variance(&p, &Regime::QuantumZeroT, 5).unwrap(), 0.0);
    }

    #[test]
    fn site_range_checked() {
        let p = ChainParams::new(10, 0.1);
        assert!(site_variance(&p, &Regime::QuantumZeroT, 0).is_err());
        assert!(site_variance(&p, &Regime::QuantumZeroT, 11).is_err());
        assert!(site_variances(&p, &Regime::QuantumZeroT, &[1, 11]).is_err());
    }

    #[test]
    fn finite_t_tends_to_zero_t() {
        let p = ChainParams::new(1000, 1.0);
        let zero = fluctuation_profile(&p, &Regime::QuantumZeroT).unwrap();
        let cold = fluctuation_profile(&p, &Regime::FiniteT { eta: 1e-6 }).unwrap();
        for (a, b) in zero.values.iter().zip(&cold.values) {
            assert!((a - b).abs() < 1e-8);
        }
        let explicit = fluctuation_profile(&p, &Regime::FiniteT { eta: 0.0 }).unwrap();
        assert_eq!(explicit.values, zero.values);
    }

    #[test]
    fn hot_chain_approaches_classical() {
        // coth(x) - 1/x <= x/3 bounds the quantum remainder by α/(6η)
        let alpha = 0.02;
        let eta = 5000.0;
        let p = ChainParams::new(100, alpha);
        let hot = fluctuation_profile(&p, &Regime::FiniteT { eta }).unwrap();
        let eta_cl = alpha * eta;
        for n in 1..=100 {
            let cl = eta_cl * n as f64;
            assert!((hot.at(n) - cl).abs() <= alpha / (6.0 * eta) + 0.01 * cl);
        }
    }

    #[test]
    fn pinned_profile_saturates() {
        let regime = Regime::QuantumZeroT;
        let a =
            fluctuation_profile(&ChainParams::new(500, 0.1).with_pin_ratio(0.1), &regime).unwrap();
        let b =
            fluctuation_profile(&ChainParams::new(1000, 0.1).with_pin_ratio(0.1), &regime).unwrap();
        assert!((a.at(500) - b.at(1000)).abs() < 1e-9 * b.at(1000));
    }

    #[test]
    fn profile_monotone_up_to_half() {
        for regime in [
            Regime::QuantumZeroT,
            Regime::FiniteT { eta: 0.01 },
            Regime::Classical { eta_cl: 1e-3 },
        ] {
            let prof = fluctuation_profile(&ChainParams::new(400, 0.02), &regime).unwrap();
            assert!(prof.values.iter().all(|&v| v > 0.0));
            assert!(
                prof.values[..200].windows(2).all(|w| w[0] <= w[1]),
                "{regime:?}"
            );
        }
    }

    #[test]
    fn pair_matrix_properties() {
        let p = ChainParams::new(40, 0.05);
        let d =
            pair_variance_matrix(&p, &Regime::FiniteT { eta: 0.3 }, PairMethod::ExactMode).unwrap();
        for n in 1..=40 {
            assert_eq!(d.get(n, n), 0.0);
            for l in 1..=40 {
                assert!(d.get(n, l) >= 0.0);
                assert_eq!(d.get(n, l), d.get(l, n));
            }
        }
    }

    #[test]
    fn pair_matrix_against_direct_mode_sum() {
        let p = ChainParams::new(12, 0.1).with_dispersion(Dispersion::Linearized);
        let regime = Regime::FiniteT { eta: 0.7 };
        let d = pair_variance_matrix(&p, &regime, PairMethod::ExactMode).unwrap();
        let w = mode_weights(&p, &regime).unwrap();
        let vecs: Vec<Vec<f64>> = (1..=12).map(|j| eigenvector(&p, j).unwrap()).collect();
        for n in 1..=12 {
            for l in 1..=12 {
                let direct: f64 = (0..12)
                    .map(|j| w[j] * (vecs[j][n - 1] - vecs[j][l - 1]).powi(2))
                    .sum();
                assert!((direct - d.get(n, l)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn classical_pair_matrix_is_distance() {
        let p = ChainParams::new(60, 0.0);
        let d = pair_variance_matrix(
            &p,
            &Regime::Classical { eta_cl: 0.003 },
            PairMethod::ExactMode,
        )
        .unwrap();
        for n in 1..=60 {
            for l in 1..=60 {
                assert!((d.get(n, l) - 0.003 * n.abs_diff(l) as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bulk_approximation_cross_check() {
        let p = ChainParams::new(200, 0.02);
        let regime = Regime::QuantumZeroT;
        let exact = pair_variance_matrix(&p, &regime, PairMethod::ExactMode).unwrap();
        let bulk = pair_variance_matrix(&p, &regime, PairMethod::BulkApprox).unwrap();
        let profile = fluctuation_profile(&p, &regime).unwrap();
        assert_eq!(bulk.get(150, 100), profile.at(50));
        assert_eq!(bulk.get(7, 7), 0.0);
        // Away from the ends the phase average of (ξ_{l+m} − ξ_l)² is
        // 2 A² sin²(k̃m/2), so D_{l+m,l} ≈ 2 ⟨û²_{m/2}⟩.
        let half = site_variance(&p, &regime, 25).unwrap();
        let rel = exact.get(150, 100) / (2.0 * half) - 1.0;
        assert!(rel.abs() < 0.02, "relative deviation {rel}");
    }

    #[test]
    fn bulk_approximation_exact_for_classical() {
        let p = ChainParams::new(80, 0.0);
        let regime = Regime::Classical { eta_cl: 0.01 };
        let exact = pair_variance_matrix(&p, &regime, PairMethod::ExactMode).unwrap();
        let bulk = pair_variance_matrix(&p, &regime, PairMethod::BulkApprox).unwrap();
        for (n, l) in [(1, 80), (40, 41), (13, 70)] {
            assert!((exact.get(n, l) - bulk.get(n, l)).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_pair_cost_guard() {
        let p = ChainParams::new(PAIR_EXACT_MAX + 1, 0.01);
        assert!(matches!(
            pair_variance_matrix(&p, &Regime::QuantumZeroT, PairMethod::ExactMode),
            Err(ChainError::CostGuard { .. })
        ));
    }

    #[test]
    fn linear_law_value() {
        assert_relative_eq!(
            asymptotic_linear_law(0.01, 10.0),
            0.098_986_788_163_576_6,
            max_relative = 1e-12
        );
    }

    #[test]
    fn log_law_fit_residuals() {
        let size = 1000;
        let p = ChainParams::new(size, 0.02);
        let prof = fluctuation_profile(&p, &Regime::QuantumZeroT).unwrap();
        let c0 = fit_log_law_constant(&prof, 10, size / 3).unwrap();
        for n in 10..=size / 3 {
            let law = asymptotic_log_law(p.alpha, c0, n as f64);
            assert!((law / prof.at(n) - 1.0).abs() < 0.01, "n={n}");
        }
    }

    proptest! {
        #[test]
        fn classical_site_variance_any_size(size in 1usize..400, frac in 0.0f64..1.0, eta_cl in 1e-4f64..1.0) {
            let n = 1 + ((size - 1) as f64 * frac) as usize;
            let v = site_variance(&ChainParams::new(size, 0.0), &Regime::Classical { eta_cl }, n).unwrap();
            prop_assert!((v / (eta_cl * n as f64) - 1.0).abs() < 1e-10);
        }
    }
}
