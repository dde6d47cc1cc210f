//! Phase-estimation precision of spin superpositions and their collapsed outcomes.
//!
//! The qubit family `(|0⟩^⊗N + (cos θ|0⟩ + sin θ|1⟩)^⊗N)/√(2 + 2cos^N θ)`, its
//! branches and its CM outcomes are all permutation symmetric, as is the
//! collective generator `T(ϑ) = ½ Σ_i σ⃗^{(i)}·(cos ϑ, 0, sin ϑ) = cos ϑ J_x + sin ϑ J_z`.
//! Everything is therefore computed on the `N + 1` Dicke states
//! `|J = N/2, m⟩`, indexed by the excitation number `k = J − m` (so index 0 is
//! `|0⟩^⊗N`).
//!
//! Precision follows the quantum Cramér–Rao bound for pure probes,
//! `δφ = 1/(2 Δ √ν)` with `Δ` the standard deviation of the generator and `ν`
//! the number of repetitions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::collapse::{cm_single, collapsed_outcomes};
use crate::effective_states::{superposition, BranchPair};
use crate::error::{Error, Result};
use crate::optimize::{linspace, maximize_periodic};
use rayon::prelude::*;

/// Grid density of the ϑ search over `[−π, π)`.
pub const VARTHETA_GRID: usize = 721;

/// Which member of the two-branch family to embed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Superposition,
    OmegaPlus,
    OmegaMinus,
    Branch0,
    Branch1,
}

/// Amplitudes over the Dicke states `|N/2, N/2 − k⟩`, `k = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeVector {
    amps: DVector<Complex64>,
}

impl DickeVector {
    /// Normalizes `amps` and wraps them.
    pub fn from_amplitudes(amps: DVector<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidState("empty Dicke vector".into()));
        }
        let norm = amps.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidState(format!("Dicke vector norm {norm}")));
        }
        Ok(Self {
            amps: amps / Complex64::from(norm),
        })
    }

    pub fn modes(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn inner(&self, other: &DickeVector) -> Complex64 {
        self.amps.dotc(&other.amps)
    }
}

/// A Hermitian operator on the symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeOperator {
    matrix: DMatrix<Complex64>,
}

impl DickeOperator {
    pub fn modes(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, state: &DickeVector) -> DVector<Complex64> {
        &self.matrix * &state.amps
    }

    pub fn expectation(&self, state: &DickeVector) -> f64 {
        state.amps.dotc(&self.apply(state)).re
    }

    /// `‖(A − ⟨A⟩)ψ‖²`.
    pub fn variance(&self, state: &DickeVector) -> f64 {
        let a_psi = self.apply(state);
        let mean = state.amps.dotc(&a_psi);
        (a_psi - &state.amps * mean).norm_squared()
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.matrix.clone().symmetric_eigen().eigenvalues.amax()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }
}

impl std::ops::Add for &DickeOperator {
    type Output = DickeOperator;

    fn add(self, rhs: &DickeOperator) -> DickeOperator {
        DickeOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl std::ops::Mul<f64> for &DickeOperator {
    type Output = DickeOperator;

    fn mul(self, rhs: f64) -> DickeOperator {
        DickeOperator {
            matrix: &self.matrix * Complex64::from(rhs),
        }
    }
}

fn m_value(n: usize, k: usize) -> f64 {
    0.5 * n as f64 - k as f64
}

/// `⟨k+1|J_−|k⟩ = √(J(J+1) − m(m−1))` with `m = J − k`.
fn lowering(n: usize, k: usize) -> f64 {
    let j = 0.5 * n as f64;
    let m = m_value(n, k);
    (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt()
}

/// `J_x`, `J_y`, `J_z` on the symmetric subspace of `n` qubits.
pub fn collective_spin(n: usize) -> [DickeOperator; 3] {
    let dim = n + 1;
    let mut jx = DMatrix::zeros(dim, dim);
    let mut jy = DMatrix::zeros(dim, dim);
    let mut jz = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        jz[(k, k)] = Complex64::from(m_value(n, k));
        if k + 1 < dim {
            let l = 0.5 * lowering(n, k);
            jx[(k, k + 1)] = Complex64::from(l);
            jx[(k + 1, k)] = Complex64::from(l);
            // J_y = (J+ − J−)/2i; row k is the higher m
            jy[(k, k + 1)] = Complex64::new(0.0, -l);
            jy[(k + 1, k)] = Complex64::new(0.0, l);
        }
    }
    [
        DickeOperator { matrix: jx },
        DickeOperator { matrix: jy },
        DickeOperator { matrix: jz },
    ]
}

/// `T(ϑ) = cos ϑ J_x + sin ϑ J_z`.
pub fn collective_generator(vartheta: f64, n: usize) -> DickeOperator {
    let [jx, _, jz] = collective_spin(n);
    &(&jx * vartheta.cos()) + &(&jz * vartheta.sin())
}

/// `Σ_i h^{(i)}` restricted to the symmetric subspace, for a single-qubit Hermitian `h`.
pub fn lift_one_local(h: &Matrix2<Complex64>, n: usize) -> DickeOperator {
    // h = a I + bx σx + by σy + bz σz  ⇒  Σ h^(i) = aN I + 2(bx Jx + by Jy + bz Jz)
    let a = 0.5 * (h[(0, 0)] + h[(1, 1)]).re;
    let bx = 0.5 * (h[(0, 1)] + h[(1, 0)]).re;
    let by = 0.5 * (h[(1, 0)] - h[(0, 1)]).im;
    let bz = 0.5 * (h[(0, 0)] - h[(1, 1)]).re;
    let [jx, jy, jz] = collective_spin(n);
    let id = DickeOperator {
        matrix: DMatrix::identity(n + 1, n + 1),
    };
    let diagonal = &(&id * (a * n as f64)) + &(&jz * (2.0 * bz));
    let transverse = &(&jx * (2.0 * bx)) + &(&jy * (2.0 * by));
    &diagonal + &transverse
}

/// Dicke amplitudes of `(cos θ|0⟩ + sin θ|1⟩)^⊗N`: `√C(N,k) cos^{N−k}θ sin^kθ`.
pub fn spin_coherent_amplitudes(theta: f64, n: usize) -> DVector<Complex64> {
    let (c, s) = (theta.cos(), theta.sin());
    let log_pow = |x: f64, e: usize| if e == 0 { 0.0 } else { e as f64 * x.abs().ln() };
    let sign_pow = |x: f64, e: usize| if x < 0.0 && e % 2 == 1 { -1.0 } else { 1.0 };
    let mut log_binom = 0.0;
    DVector::from_fn(n + 1, |k, _| {
        if k > 0 {
            log_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let log_amp = 0.5 * log_binom + log_pow(c, n - k) + log_pow(s, k);
        Complex64::from(sign_pow(c, n - k) * sign_pow(s, k) * log_amp.exp())
    })
}

/// Embeds a member of the qubit two-branch family at angle `θ` into the Dicke basis.
pub fn dicke_embed(theta: f64, n: usize, which: StateKind) -> Result<DickeVector> {
    let pair = BranchPair::qubit(theta)?;
    if n == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            allowed: "N >= 1",
        });
    }
    let mut b0 = DVector::zeros(n + 1);
    b0[0] = Complex64::from(1.0);
    let b1 = spin_coherent_amplitudes(theta, n);
    let (c0, c1) = match which {
        StateKind::Branch0 => (1.0.into(), 0.0.into()),
        StateKind::Branch1 => (0.0.into(), 1.0.into()),
        StateKind::Superposition => {
            let s = superposition(&pair, n)?;
            (s.c0(), s.c1())
        }
        StateKind::OmegaPlus | StateKind::OmegaMinus => {
            let (plus, minus) = collapsed_outcomes(&pair, n)?;
            let s = if which == StateKind::OmegaPlus {
                plus
            } else {
                minus
            };
            (s.c0(), s.c1())
        }
    };
    DickeVector::from_amplitudes(b0 * c0 + b1 * c1)
}

/// `√Var(T(ϑ))` in `state`, by direct application of the generator.
pub fn deviation(state: &DickeVector, vartheta: f64) -> f64 {
    collective_generator(vartheta, state.modes())
        .variance(state)
        .max(0.0)
        .sqrt()
}

/// First and second moments of `J_x`, `J_z` in a Dicke state.
///
/// `Var(T(ϑ)) = nᵀ C n` with `n = (cos ϑ, sin ϑ)` and `C` the symmetrized
/// covariance matrix of `(J_x, J_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments {
    pub covariance: Matrix2<f64>,
    pub mean: [f64; 2],
}

impl SpinMoments {
    pub fn of(state: &DickeVector) -> Self {
        let n = state.modes();
        let psi = &state.amps;
        let jx_psi = apply_jx(n, psi);
        let jz_psi = apply_jz(n, psi);
        let mx = psi.dotc(&jx_psi).re;
        let mz = psi.dotc(&jz_psi).re;
        let xx = jx_psi.norm_squared() - mx * mx;
        let zz = jz_psi.norm_squared() - mz * mz;
        let xz = jx_psi.dotc(&jz_psi).re - mx * mz;
        Self {
            covariance: Matrix2::new(xx, xz, xz, zz),
            mean: [mx, mz],
        }
    }

    pub fn variance(&self, vartheta: f64) -> f64 {
        let (s, c) = vartheta.sin_cos();
        let cov = &self.covariance;
        c * c * cov[(0, 0)] + 2.0 * s * c * cov[(0, 1)] + s * s * cov[(1, 1)]
    }

    pub fn deviation(&self, vartheta: f64) -> f64 {
        self.variance(vartheta).max(0.0).sqrt()
    }
}

fn apply_jz(n: usize, psi: &DVector<Complex64>) -> DVector<Complex64> {
    DVector::from_fn(n + 1, |k, _| psi[k] * m_value(n, k))
}

fn apply_jx(n: usize, psi: &DVector<Complex64>) -> DVector<Complex64> {
    DVector::from_fn(n + 1, |k, _| {
        let mut acc = Complex64::from(0.0);
        if k > 0 {
            acc += psi[k - 1] * (0.5 * lowering(n, k - 1));
        }
        if k < n {
            acc += psi[k + 1] * (0.5 * lowering(n, k));
        }
        acc
    })
}

/// Maximal deviation of `T(ϑ)` over `ϑ ∈ [−π, π)`, returned as `(ϑ*, Δ*)`.
///
/// `Var(T(ϑ))` has period π; among the two equivalent maximizers the one with
/// the smaller `|ϑ|` is returned.
pub fn max_deviation(state: &DickeVector) -> (f64, f64) {
    let moments = SpinMoments::of(state);
    let (vartheta, var) = maximize_periodic(|t| moments.variance(t), -PI, 2.0 * PI, VARTHETA_GRID);
    (vartheta, var.max(0.0).sqrt())
}

/// Quantum Cramér–Rao bound `1/(2 Δ √ν)` for `ν` repetitions.
pub fn qcrb(delta: f64, repetitions: u64) -> Result<f64> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Domain {
            name: "delta",
            value: delta,
            allowed: "(0, inf)",
        });
    }
    if repetitions == 0 {
        return Err(Error::Domain {
            name: "nu",
            value: 0.0,
            allowed: "nu >= 1",
        });
    }
    Ok(1.0 / (2.0 * delta * (repetitions as f64).sqrt()))
}

/// A member of the qubit family at a fixed angle, for scaling studies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateFamily {
    pub kind: StateKind,
    pub theta: f64,
}

/// Least-squares slope of `ln Δ*` against `ln N`.
pub fn scaling_exponent(family: StateFamily, ns: &[usize]) -> Result<f64> {
    if ns.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 mode counts, got {}",
            ns.len()
        )));
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 4) {
        return Err(Error::DegenerateFit(format!("mode count {n} < 4")));
    }
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let state = dicke_embed(family.theta, n, family.kind)?;
        let (_, delta) = max_deviation(&state);
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::DegenerateFit(format!("zero deviation at N = {n}")));
        }
        points.push(((n as f64).ln(), delta.ln()));
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all mode counts are equal".into()));
    }
    Ok(sxy / sxx)
}

/// One point of the deviation landscape of `ψ(θ)` and `Ω+(θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationRow {
    pub theta: f64,
    pub vartheta: f64,
    pub dev_superposition: f64,
    pub dev_collapsed: f64,
}

/// `θ_i = iπ/(2k)` for `i = 1..=k`.
pub fn theta_grid(k: usize) -> Vec<f64> {
    (1..=k).map(|i| i as f64 * PI / (2.0 * k as f64)).collect()
}

/// `k` points on `[−π, π]`, both ends included.
pub fn vartheta_grid(k: usize) -> Vec<f64> {
    linspace(-PI, PI, k)
}

/// Deviations of `T(ϑ)` for `ψ(θ)` and `Ω+(θ)` over a `(θ, ϑ)` grid, θ-major.
///
/// Each point applies the generator directly, so deviations near zero keep full
/// absolute precision.
pub fn deviation_sweep(n: usize, thetas: &[f64], varthetas: &[f64]) -> Result<Vec<DeviationRow>> {
    let blocks = thetas
        .par_iter()
        .map(|&theta| {
            let psi = dicke_embed(theta, n, StateKind::Superposition)?;
            let plus = dicke_embed(theta, n, StateKind::OmegaPlus)?;
            Ok(varthetas
                .iter()
                .map(|&vartheta| DeviationRow {
                    theta,
                    vartheta,
                    dev_superposition: deviation(&psi, vartheta),
                    dev_collapsed: deviation(&plus, vartheta),
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// The CM generator `Σ_i (E− − E+)^{(i)}` for the single-qubit pair at angle `θ`.
pub fn cm_generator(theta: f64, n: usize) -> Result<DickeOperator> {
    let pair = BranchPair::qubit(theta)?;
    let g = cm_single(pair.z())?.generator();
    // for the qubit carrier the CM frame is the computational basis
    Ok(lift_one_local(&g.map(Complex64::from), n))
}

/// `max |T(−θ) + ½ Σ_i (E− − E+)^{(i)}|` over Dicke matrix entries.
pub fn cm_generator_check(theta: f64, n: usize) -> Result<f64> {
    let g = cm_generator(theta, n)?;
    let t = collective_generator(-theta, n);
    Ok((&t + &(&g * 0.5)).matrix.camax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn ghz_embedding() {
        let v = dicke_embed(FRAC_PI_2, 2, StateKind::Superposition).unwrap();
        let a = v.amplitudes();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((a[0].re - h).abs() < 1e-12);
        assert!(a[1].norm() < 1e-12);
        assert!((a[2].re - h).abs() < 1e-12);
    }

    #[test]
    fn omega_plus_at_orthogonal_branches_is_branch1() {
        let a = dicke_embed(FRAC_PI_2, 7, StateKind::OmegaPlus).unwrap();
        let b = dicke_embed(FRAC_PI_2, 7, StateKind::Branch1).unwrap();
        assert!((a.inner(&b).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin_coherent_is_normalized_for_large_n() {
        for &n in &[1usize, 10, 128, 2000] {
            let v = spin_coherent_amplitudes(0.7, n);
            assert!((v.norm() - 1.0).abs() < 1e-12, "{n}");
        }
        let v = spin_coherent_amplitudes(FRAC_PI_2, 50);
        assert!((v[50].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generator_matrix_elements() {
        let n = 4;
        let t = collective_generator(FRAC_PI_2, n);
        for k in 0..=n {
            assert!((t.matrix()[(k, k)].re - m_value(n, k)).abs() < 1e-15);
        }
        let t = collective_generator(0.0, n);
        // J = 2, m = 2 → 1: ½√(6 − 2)
        assert!((t.matrix()[(0, 1)].re - 1.0).abs() < 1e-15);
        // m = 1 → 0: ½√(6 − 0)
        assert!((t.matrix()[(1, 2)].re - 0.5 * 6f64.sqrt()).abs() < 1e-15);
        assert!(t.hermiticity_defect() < 1e-12);
        for &v in &[0.0, 0.4, 1.3, -2.0] {
            assert!((collective_generator(v, 10).spectral_radius() - 5.0).abs() < 1e-10);
        }
    }

    #[test]
    fn collective_spin_commutators() {
        let [jx, jy, jz] = collective_spin(5);
        let i = Complex64::new(0.0, 1.0);
        let comm = jx.matrix() * jy.matrix() - jy.matrix() * jx.matrix();
        assert!((comm - jz.matrix() * i).camax() < 1e-12);
    }

    #[test]
    fn single_qubit_deviation() {
        let v =
            DickeVector::from_amplitudes(DVector::from_vec(vec![1.0.into(), 0.0.into()])).unwrap();
        assert!((deviation(&v, 0.0) - 0.5).abs() < 1e-15);
        assert!(deviation(&v, FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn ghz_maximum() {
        let v = dicke_embed(FRAC_PI_2, 10, StateKind::Superposition).unwrap();
        assert!((deviation(&v, -FRAC_PI_2) - 5.0).abs() < 1e-12);
        let (t, d) = max_deviation(&v);
        assert!((d - 5.0).abs() < 1e-9);
        let dist = (t + FRAC_PI_2).rem_euclid(PI);
        assert!(dist.min(PI - dist) < 1e-6, "{t}");
    }

    #[test]
    fn product_state_is_shot_noise_limited() {
        let v = dicke_embed(0.9, 10, StateKind::Branch1).unwrap();
        let (_, d) = max_deviation(&v);
        assert!((d - 10f64.sqrt() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn moments_agree_with_direct_deviation() {
        for &theta in &[0.2, 0.8, FRAC_PI_2] {
            for kind in [
                StateKind::Superposition,
                StateKind::OmegaPlus,
                StateKind::OmegaMinus,
            ] {
                let v = dicke_embed(theta, 9, kind).unwrap();
                let m = SpinMoments::of(&v);
                for i in 0..13 {
                    let t = -PI + i as f64 * 0.5;
                    assert!((m.deviation(t) - deviation(&v, t)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn maximum_matches_covariance_eigenvalue() {
        for &theta in &[0.3, 0.5, 1.0, 1.4] {
            for kind in [StateKind::Superposition, StateKind::OmegaPlus] {
                let v = dicke_embed(theta, 10, kind).unwrap();
                let cov = SpinMoments::of(&v).covariance;
                let top = cov.symmetric_eigen().eigenvalues.max();
                let (_, d) = max_deviation(&v);
                assert!((d - top.sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn superposition_peaks_at_minus_theta() {
        for &theta in &[0.5, 1.0, FRAC_PI_2] {
            let v = dicke_embed(theta, 10, StateKind::Superposition).unwrap();
            let (t, _) = max_deviation(&v);
            let dist = (t + theta).rem_euclid(PI);
            assert!(dist.min(PI - dist) < 1e-6, "{theta}: {t}");
        }
    }

    #[test]
    fn small_angle_regression() {
        // θ = 0.3, N = 10; pinned from the Dicke path, confirmed by a dense statevector check
        let psi = max_deviation(&dicke_embed(0.3, 10, StateKind::Superposition).unwrap()).1;
        let omega = max_deviation(&dicke_embed(0.3, 10, StateKind::OmegaPlus).unwrap()).1;
        assert!((psi - 1.924_349_055).abs() < 1e-8, "{psi}");
        assert!((omega - 1.480_555_638).abs() < 1e-8, "{omega}");
    }

    #[test]
    fn asymmetry_about_zero() {
        let v = dicke_embed(FRAC_PI_2 - 0.2, 10, StateKind::Superposition).unwrap();
        let worst = (0..=20)
            .map(|i| i as f64 * PI / 20.0)
            .map(|t| (deviation(&v, t) - deviation(&v, -t)).abs())
            .fold(0.0, f64::max);
        assert!(worst > 1e-3);
    }

    #[test]
    fn qcrb_values() {
        assert!((qcrb(5.0, 1).unwrap() - 0.1).abs() < 1e-15);
        assert!((qcrb(10f64.sqrt() / 2.0, 1).unwrap() - 1.0 / 10f64.sqrt()).abs() < 1e-15);
        assert!((qcrb(5.0, 100).unwrap() - 0.01).abs() < 1e-15);
        assert!(qcrb(0.0, 1).is_err());
        assert!(qcrb(-1.0, 1).is_err());
    }

    #[test]
    fn scaling_fits() {
        let ns = [8, 16, 32, 64, 128];
        let ghz = StateFamily {
            kind: StateKind::Superposition,
            theta: FRAC_PI_2,
        };
        assert!((scaling_exponent(ghz, &ns).unwrap() - 1.0).abs() < 0.05);
        let collapsed = StateFamily {
            kind: StateKind::OmegaPlus,
            theta: FRAC_PI_2,
        };
        assert!((scaling_exponent(collapsed, &ns).unwrap() - 0.5).abs() < 0.05);
        let b0 = StateFamily {
            kind: StateKind::Branch0,
            theta: FRAC_PI_2,
        };
        assert!((scaling_exponent(b0, &ns).unwrap() - 0.5).abs() < 0.05);
        assert!(scaling_exponent(ghz, &[8, 16, 32]).is_err());
        assert!(scaling_exponent(ghz, &[2, 16, 32, 64]).is_err());
        assert!(scaling_exponent(ghz, &[8, 8, 8, 8]).is_err());
    }

    #[test]
    fn corrected_generator_identity() {
        assert!(cm_generator_check(FRAC_PI_2, 3).unwrap() < 1e-12);
        assert!(cm_generator_check(FRAC_PI_4, 2).unwrap() < 1e-10);
        for &theta in &[0.2, 0.7, 1.1] {
            assert!(cm_generator_check(theta, 6).unwrap() < 1e-10);
        }
    }

    #[test]
    fn deviation_scales_through_generator_factor() {
        let theta = 0.8;
        let v = dicke_embed(theta, 6, StateKind::Superposition).unwrap();
        let g = cm_generator(theta, 6).unwrap();
        let lhs = deviation(&v, -theta);
        let rhs = 0.5 * g.variance(&v).sqrt();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn deviation_bounded_by_half_n() {
        for &theta in &[0.1, 0.6, 1.2, FRAC_PI_2] {
            for kind in [
                StateKind::Superposition,
                StateKind::OmegaPlus,
                StateKind::OmegaMinus,
            ] {
                let (_, d) = max_deviation(&dicke_embed(theta, 12, kind).unwrap());
                assert!(d <= 6.0 + 1e-12);
            }
        }
    }
}
