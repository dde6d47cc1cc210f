//! Collapsing measurements.
//!
//! For a two-branch superposition the collapsing measurement (CM) is the
//! projective measurement `{E+, E−}` on the branch span with equiprobable
//! outcomes. It is fixed uniquely by projectivity and `tr(E±|ψ⟩⟨ψ|) = ½`, and it
//! coincides with the Helstrom measurement: `|φ⟩⟨φ| − U|φ⟩⟨φ|U† = λ(E− − E+)` with
//! `λ = √(1 − z²)`.
//!
//! On the `N`-mode branches the same construction with `z → z^N` gives the
//! collapsed outcomes `Ω±`. Everything outside the span (the third element
//! `E3 = I − E+ − E−`) is implicit.
//!
//! For `m > 2` linearly independent branches the measurement is built as the
//! square-root measurement of the Gram matrix and the three CM conditions
//! (orthonormality, equiprobability, permutation covariance) are checked
//! afterwards; see [`mary_cm`].

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::Serialize;

use crate::effective_states::{check_overlap, overlap_power, BranchPair, TwoBranchState};
use crate::error::{Error, Result};

/// Coefficients `(on Φ0, on Φ1)` of the `+` and `−` outcomes for branch overlap `w`.
///
/// The `−` outcome is the one leaning towards `Φ0`; its `Φ0` coefficient is positive.
pub(crate) fn outcome_coefficients(w: f64) -> ([f64; 2], [f64; 2]) {
    let a = (1.0 - w).sqrt();
    let b = (1.0 + w).sqrt();
    let d = 2.0 * (1.0 - w * w).sqrt();
    let plus = [(a - b) / d, (a + b) / d];
    let minus = [(a + b) / d, (a - b) / d];
    (plus, minus)
}

/// The single-mode CM `E± = |ξ±⟩⟨ξ±|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CmPair {
    z: f64,
    /// `ξ+` as coefficients on `(|φ⟩, U|φ⟩)`.
    plus_coeffs: [f64; 2],
    /// `ξ−` as coefficients on `(|φ⟩, U|φ⟩)`.
    minus_coeffs: [f64; 2],
}

impl CmPair {
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn plus_coefficients(&self) -> [f64; 2] {
        self.plus_coeffs
    }

    pub fn minus_coefficients(&self) -> [f64; 2] {
        self.minus_coeffs
    }

    fn frame(&self, c: [f64; 2]) -> [f64; 2] {
        let s = (1.0 - self.z * self.z).sqrt();
        [c[0] + c[1] * self.z, c[1] * s]
    }

    /// `ξ+` in the orthonormal single-mode frame.
    pub fn xi_plus(&self) -> [f64; 2] {
        self.frame(self.plus_coeffs)
    }

    /// `ξ−` in the orthonormal single-mode frame.
    pub fn xi_minus(&self) -> [f64; 2] {
        self.frame(self.minus_coeffs)
    }

    pub fn projector_plus(&self) -> Matrix2<f64> {
        outer(self.xi_plus())
    }

    pub fn projector_minus(&self) -> Matrix2<f64> {
        outer(self.xi_minus())
    }

    /// `E− − E+`, the single-mode term of the CM generator.
    pub fn generator(&self) -> Matrix2<f64> {
        self.projector_minus() - self.projector_plus()
    }

    /// `⟨φ|ξ+⟩`.
    pub fn phi_overlap_plus(&self) -> f64 {
        self.xi_plus()[0]
    }

    /// `⟨Uφ|ξ+⟩`.
    pub fn uphi_overlap_plus(&self) -> f64 {
        let s = (1.0 - self.z * self.z).sqrt();
        let x = self.xi_plus();
        self.z * x[0] + s * x[1]
    }

    /// Largest entry of `|φ⟩⟨φ| − U|φ⟩⟨φ|U† − √(1 − z²)(E− − E+)` in absolute value.
    pub fn spectral_residual(&self) -> f64 {
        let s = (1.0 - self.z * self.z).sqrt();
        let diff = outer([1.0, 0.0]) - outer([self.z, s]);
        (diff - self.generator() * s).amax()
    }
}

fn outer(v: [f64; 2]) -> Matrix2<f64> {
    Matrix2::new(v[0] * v[0], v[0] * v[1], v[1] * v[0], v[1] * v[1])
}

/// The single-mode collapsing measurement for overlap `z`.
pub fn cm_single(z: f64) -> Result<CmPair> {
    check_overlap(z)?;
    let (plus_coeffs, minus_coeffs) = outcome_coefficients(z);
    Ok(CmPair {
        z,
        plus_coeffs,
        minus_coeffs,
    })
}

/// The two CM outcomes `(Ω+, Ω−)` on `N` modes.
pub fn collapsed_outcomes(pair: &BranchPair, n: usize) -> Result<(TwoBranchState, TwoBranchState)> {
    if n == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            allowed: "N >= 1",
        });
    }
    let w = overlap_power(pair.z(), n);
    if w >= 1.0 - 1e-12 {
        return Err(Error::SingularMeasurement { overlap: w });
    }
    let (plus, minus) = outcome_coefficients(w);
    let make = |c: [f64; 2]| TwoBranchState::new(c[0].into(), c[1].into(), n, pair.z());
    Ok((make(plus)?, make(minus)?))
}

/// Optimal probability of telling `|φ⟩` from `U|φ⟩` with equal priors, `½(1 + √(1 − z²))`.
pub fn helstrom_success_probability(z: f64) -> Result<f64> {
    if !z.is_finite() || !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain {
            name: "z",
            value: z,
            allowed: "[0, 1]",
        });
    }
    Ok(0.5 * (1.0 + (1.0 - z * z).sqrt()))
}

/// Probability of each CM outcome on a state, `|⟨Ω±|state⟩|²`.
pub fn outcome_probabilities(pair: &BranchPair, state: &TwoBranchState) -> Result<(f64, f64)> {
    let (plus, minus) = collapsed_outcomes(pair, state.modes())?;
    Ok((
        plus.inner(state)?.norm_sqr(),
        minus.inner(state)?.norm_sqr(),
    ))
}

/// Tolerance at which an m-ary measurement is accepted as a CM.
pub const MARY_TOLERANCE: f64 = 1e-8;

/// Measurement vectors of an m-ary CM, stored as coefficients on the input states.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    gram: DMatrix<f64>,
    /// Column `j` holds `ξ_j` expanded on `|φ_1⟩..|φ_m⟩`.
    coefficients: DMatrix<f64>,
    residuals: MaryResiduals,
}

impl MeasurementSet {
    pub fn m(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coefficients
    }

    /// Matrix of `⟨φ_k|ξ_j⟩` (row `k`, column `j`).
    pub fn overlaps(&self) -> DMatrix<f64> {
        &self.gram * &self.coefficients
    }

    pub fn residuals(&self) -> &MaryResiduals {
        &self.residuals
    }
}

/// Max-abs violation of each CM condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaryResiduals {
    /// `max |⟨ξ_j|ξ_k⟩ − δ_jk|`
    pub orthonormality: f64,
    /// `max |‖⟨ξ_j|ψ⟩‖² − 1/m|`
    pub probability: f64,
    /// `max |⟨φ_k|ξ_j⟩ − ⟨φ_s(k)|ξ_s(j)⟩|` over transpositions `s`
    pub permutation: f64,
}

impl MaryResiduals {
    pub fn max(&self) -> f64 {
        self.orthonormality
            .max(self.probability)
            .max(self.permutation)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaryOutcome {
    Satisfied(MeasurementSet),
    /// The square-root measurement exists but violates at least one CM condition.
    Unsatisfied(MaryResiduals),
}

fn validate_gram(gram: &DMatrix<f64>) -> Result<()> {
    let m = gram.nrows();
    if m != gram.ncols() {
        return Err(Error::InvalidGram(format!(
            "not square ({}x{})",
            gram.nrows(),
            gram.ncols()
        )));
    }
    if m < 2 {
        return Err(Error::InvalidGram(format!("need m >= 2 states, got {m}")));
    }
    if gram.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGram("non-finite entry".into()));
    }
    for i in 0..m {
        if (gram[(i, i)] - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidGram(format!(
                "diagonal entry {i} is {} (states must be normalized)",
                gram[(i, i)]
            )));
        }
        for j in 0..i {
            if (gram[(i, j)] - gram[(j, i)]).abs() > 1e-12 {
                return Err(Error::InvalidGram(format!("not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Square-root measurement `ξ_j = Σ_k (G^{−1/2})_{kj} |φ_k⟩`, checked against the CM conditions.
pub fn mary_cm(gram: &DMatrix<f64>) -> Result<MaryOutcome> {
    validate_gram(gram)?;
    let m = gram.nrows();
    let eig = gram.clone().symmetric_eigen();
    let min_eigenvalue = eig.eigenvalues.min();
    if min_eigenvalue <= 1e-12 {
        return Err(Error::LinearDependence { min_eigenvalue });
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.sqrt().recip()));
    let coefficients = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();

    let residuals = mary_residuals(gram, &coefficients);
    if residuals.max() > MARY_TOLERANCE {
        return Ok(MaryOutcome::Unsatisfied(residuals));
    }
    debug_assert_eq!(coefficients.ncols(), m);
    Ok(MaryOutcome::Satisfied(MeasurementSet {
        gram: gram.clone(),
        coefficients,
        residuals,
    }))
}

/// Evaluates the three CM conditions for measurement vectors given as
/// coefficients on the input states.
pub fn mary_residuals(gram: &DMatrix<f64>, coefficients: &DMatrix<f64>) -> MaryResiduals {
    let m = gram.nrows();
    let xi_gram = coefficients.transpose() * gram * coefficients;
    let orthonormality = (xi_gram - DMatrix::identity(m, m)).amax();

    let overlaps = gram * coefficients;
    // ψ ∝ Σ_k |φ_k⟩
    let norm = gram.sum().sqrt();
    let ones = DVector::from_element(m, 1.0 / norm);
    let amps = overlaps.transpose() * ones;
    let probability = amps
        .iter()
        .map(|a| (a * a - 1.0 / m as f64).abs())
        .fold(0.0, f64::max);

    let mut permutation: f64 = 0.0;
    for a in 0..m {
        for b in (a + 1)..m {
            let s = |i: usize| {
                if i == a {
                    b
                } else if i == b {
                    a
                } else {
                    i
                }
            };
            for k in 0..m {
                for j in 0..m {
                    permutation =
                        permutation.max((overlaps[(k, j)] - overlaps[(s(k), s(j))]).abs());
                }
            }
        }
    }
    MaryResiduals {
        orthonormality,
        probability,
        permutation,
    }
}

/// Gram matrix of `m` unit vectors with all pairwise overlaps equal to `z`.
pub fn symmetric_gram(m: usize, z: f64) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| if i == j { 1.0 } else { z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective_states::superposition;

    fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
        a[0] * b[0] + a[1] * b[1]
    }

    #[test]
    fn orthogonal_branches_give_branch_projectors() {
        let cm = cm_single(0.0).unwrap();
        assert_eq!(cm.xi_minus(), [1.0, 0.0]);
        assert_eq!(cm.xi_plus(), [0.0, 1.0]);
    }

    #[test]
    fn closed_form_overlaps_at_0_6() {
        let cm = cm_single(0.6).unwrap();
        assert!((cm.phi_overlap_plus().powi(2) - 0.1).abs() < 1e-12);
        assert!((cm.uphi_overlap_plus().powi(2) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn definition_holds_on_grid() {
        for i in 0..20 {
            let z = i as f64 * 0.05;
            let cm = cm_single(z).unwrap();
            let pair = BranchPair::from_overlap(z).unwrap();
            let psi = superposition(&pair, 1).unwrap();
            let psi_frame = pair.to_frame(psi.c0().re, psi.c1().re);
            assert!(dot(cm.xi_plus(), cm.xi_minus()).abs() < 1e-12);
            assert!((dot(cm.xi_plus(), cm.xi_plus()) - 1.0).abs() < 1e-12);
            assert!((dot(cm.xi_minus(), cm.xi_minus()) - 1.0).abs() < 1e-12);
            assert!((dot(cm.xi_plus(), psi_frame).powi(2) - 0.5).abs() < 1e-12);
            assert!((dot(cm.xi_minus(), psi_frame).powi(2) - 0.5).abs() < 1e-12);
            assert!(cm.spectral_residual() < 1e-10);
            // sign convention: ξ− leans towards |φ⟩ and has a positive |φ⟩ component
            assert!(cm.xi_minus()[0] > 0.0);
            assert!(cm.xi_minus()[0].abs() >= cm.phi_overlap_plus().abs());
        }
    }

    #[test]
    fn near_unit_overlap_for_small_z() {
        for &z in &[1e-1, 1e-2, 1e-3] {
            let cm = cm_single(z).unwrap();
            let defect = 1.0 - cm.uphi_overlap_plus().powi(2);
            // 1 − ½(1 + √(1 − z²)) ≈ z²/4
            assert!(defect <= 0.26 * z * z, "{z}: {defect}");
        }
    }

    #[test]
    fn singular_overlap() {
        assert!(matches!(
            cm_single(1.0),
            Err(Error::SingularMeasurement { .. })
        ));
        assert!(cm_single(1.0 - 1e-9).is_err());
    }

    #[test]
    fn outcomes_at_zero_overlap_are_branches() {
        let pair = BranchPair::from_overlap(0.0).unwrap();
        for n in 1..6 {
            let (plus, minus) = collapsed_outcomes(&pair, n).unwrap();
            assert!((minus.c0().re - 1.0).abs() < 1e-15 && minus.c1().norm() < 1e-15);
            assert!((plus.c1().re - 1.0).abs() < 1e-15 && plus.c0().norm() < 1e-15);
        }
    }

    #[test]
    fn outcomes_z05_n3() {
        let pair = BranchPair::from_overlap(0.5).unwrap();
        let (plus, minus) = collapsed_outcomes(&pair, 3).unwrap();
        // w = 0.125: (√0.875 ∓ √1.125)/(2√(1 − 0.015625))
        let d = 2.0 * (1.0f64 - 0.015625).sqrt();
        assert!((plus.c0().re - (0.875f64.sqrt() - 1.125f64.sqrt()) / d).abs() < 1e-15);
        assert!((plus.c1().re - (0.875f64.sqrt() + 1.125f64.sqrt()) / d).abs() < 1e-15);
        assert!(plus.inner(&minus).unwrap().norm() < 1e-12);
        let psi = superposition(&pair, 3).unwrap();
        let (pp, pm) = outcome_probabilities(&pair, &psi).unwrap();
        assert!((pp - 0.5).abs() < 1e-12 && (pm - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_mode_outcomes_match_cm() {
        for &z in &[0.0, 0.2, 0.6, 0.95] {
            let pair = BranchPair::from_overlap(z).unwrap();
            let cm = cm_single(z).unwrap();
            let (plus, minus) = collapsed_outcomes(&pair, 1).unwrap();
            assert_eq!([plus.c0().re, plus.c1().re], cm.plus_coefficients());
            assert_eq!([minus.c0().re, minus.c1().re], cm.minus_coefficients());
        }
    }

    #[test]
    fn success_probability() {
        assert_eq!(helstrom_success_probability(0.0).unwrap(), 1.0);
        assert!((helstrom_success_probability(0.6).unwrap() - 0.9).abs() < 1e-15);
        assert!((helstrom_success_probability(1.0 - 1e-12).unwrap() - 0.5).abs() < 1e-5);
        assert!(helstrom_success_probability(1.5).is_err());
    }

    #[test]
    fn mary_two_states_is_binary_cm() {
        let z = 0.6;
        let set = match mary_cm(&symmetric_gram(2, z)).unwrap() {
            MaryOutcome::Satisfied(set) => set,
            other => panic!("{other:?}"),
        };
        let cm = cm_single(z).unwrap();
        let c = set.coefficients();
        // ξ_1 ↔ ξ− (leans to φ_1), ξ_2 ↔ ξ+, up to a sign
        for (col, want) in [(0, cm.minus_coefficients()), (1, cm.plus_coefficients())] {
            let got = [c[(0, col)], c[(1, col)]];
            let sign = got[0].signum() * want[0].signum();
            assert!((got[0] - sign * want[0]).abs() < 1e-12);
            assert!((got[1] - sign * want[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn mary_symmetric_three() {
        match mary_cm(&symmetric_gram(3, 0.3)).unwrap() {
            MaryOutcome::Satisfied(set) => {
                assert_eq!(set.m(), 3);
                assert!(set.residuals().max() < 1e-10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mary_asymmetric_three_reports_residuals() {
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 0.1, 0.5, 0.1, 1.0, 0.9, 0.5, 0.9, 1.0]);
        match mary_cm(&g).unwrap() {
            MaryOutcome::Unsatisfied(r) => {
                assert!(r.orthonormality < 1e-10);
                assert!(r.probability > 1e-3);
                assert!(r.permutation > 1e-3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mary_input_errors() {
        let dependent = DMatrix::from_element(2, 2, 1.0);
        assert!(matches!(
            mary_cm(&dependent),
            Err(Error::LinearDependence { .. })
        ));
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.3, 1.0]);
        assert!(matches!(mary_cm(&bad), Err(Error::InvalidGram(_))));
        assert!(matches!(
            mary_cm(&DMatrix::identity(1, 1)),
            Err(Error::InvalidGram(_))
        ));
    }
}
