//! Orthogonalization under the CM generator.
//!
//! With `E±` the single-mode CM, `exp(−iωt Σ_i (E− − E+)^{(i)}) = M^⊗N` where
//! `M = e^{−iωt}E− + e^{iωt}E+` (the projectors sum to the identity on the span).
//! The survival amplitude `F = ⟨ψ|M^⊗N|ψ⟩` of the superposition then reduces to
//! four single-mode matrix elements raised to the N-th power:
//!
//! ```text
//! ⟨φ|M|φ⟩    = cos ωt − i√(1 − z²) sin ωt
//! ⟨Uφ|M|Uφ⟩  = cos ωt + i√(1 − z²) sin ωt
//! ⟨φ|M|Uφ⟩   = ⟨Uφ|M|φ⟩ = z cos ωt
//! ```
//!
//! Time is measured in units of `1/ω` with `ħ = 1`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::collapse::{cm_single, CmPair};
use crate::effective_states::{check_overlap, overlap_power, BranchPair};
use crate::error::{Error, Result};
use crate::optimize::linspace;
use crate::oracle::{self, DenseState, MAX_OPERATOR_MODES};
use crate::spin_metrology::StateKind;

/// Number of grid points on `[0, π/ω]` scanned for recurrences (`t = 0` excluded).
pub const RECURRENCE_GRID: usize = 2001;

/// Default `|F|` below which a state counts as orthogonalized.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Time grid for orthogonalization searches, in units where `‖H‖ = N`.
pub const SPEED_LIMIT_GRID: usize = 4001;

/// `F(t)` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapTrace {
    pub z: f64,
    pub n: usize,
    pub omega: f64,
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Single-mode elements `(⟨φ|M|φ⟩, ⟨φ|M|Uφ⟩, ⟨Uφ|M|Uφ⟩)` at phase `ωt`.
pub fn propagator_elements(z: f64, omega_t: f64) -> (Complex64, Complex64, Complex64) {
    let s = (1.0 - z * z).sqrt();
    let (sin, cos) = omega_t.sin_cos();
    (
        Complex64::new(cos, -s * sin),
        Complex64::new(z * cos, 0.0),
        Complex64::new(cos, s * sin),
    )
}

/// `F = ⟨ψ|exp(−iωt Σ(E− − E+))|ψ⟩` in closed form.
pub fn overlap_closed_form(z: f64, n: usize, omega_t: f64) -> Complex64 {
    let (m00, m01, m11) = propagator_elements(z, omega_t);
    let n_i = n as i32;
    let cross = if m01.re == 0.0 {
        Complex64::from(0.0)
    } else {
        m01.powi(n_i)
    };
    (m00.powi(n_i) + m11.powi(n_i) + cross * 2.0) / (2.0 + 2.0 * overlap_power(z, n))
}

fn check_dynamics_args(z: f64, n: usize, omega: f64) -> Result<()> {
    check_overlap(z)?;
    if n == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            allowed: "N >= 1",
        });
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain {
            name: "omega",
            value: omega,
            allowed: "(0, inf)",
        });
    }
    Ok(())
}

pub fn overlap_trace(z: f64, n: usize, omega: f64, times: &[f64]) -> Result<OverlapTrace> {
    check_dynamics_args(z, n, omega)?;
    let values = times
        .iter()
        .map(|&t| overlap_closed_form(z, n, omega * t))
        .collect();
    Ok(OverlapTrace {
        z,
        n,
        omega,
        times: times.to_vec(),
        values,
    })
}

/// `M = e^{−iωt}E− + e^{iωt}E+` in the single-mode frame.
pub fn per_mode_propagator(cm: &CmPair, omega_t: f64) -> Matrix2<Complex64> {
    let minus = cm.projector_minus().map(Complex64::from);
    let plus = cm.projector_plus().map(Complex64::from);
    minus * Complex64::from_polar(1.0, -omega_t) + plus * Complex64::from_polar(1.0, omega_t)
}

/// `max |F|` over `ωt ∈ (0, π]`.
pub fn recurrence_scan(z: f64, n: usize, omega: f64) -> Result<f64> {
    check_dynamics_args(z, n, omega)?;
    let times = linspace(0.0, std::f64::consts::PI / omega, RECURRENCE_GRID);
    Ok(times[1..]
        .iter()
        .map(|&t| overlap_closed_form(z, n, omega * t).norm())
        .fold(0.0, f64::max))
}

/// One point of the `F(z, ωt)` surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapRow {
    pub z: f64,
    pub omega_t: f64,
    pub f_re: f64,
    pub f_im: f64,
    pub f_abs: f64,
}

/// `F` over `z_grid × t_grid`, z-major.
pub fn overlap_sweep(
    n: usize,
    omega: f64,
    z_grid: &[f64],
    times: &[f64],
) -> Result<Vec<OverlapRow>> {
    let mut rows = Vec::with_capacity(z_grid.len() * times.len());
    for &z in z_grid {
        let trace = overlap_trace(z, n, omega, times)?;
        for (&t, f) in trace.times.iter().zip(&trace.values) {
            rows.push(OverlapRow {
                z,
                omega_t: omega * t,
                f_re: f.re,
                f_im: f.im,
                f_abs: f.norm(),
            });
        }
    }
    Ok(rows)
}

/// A Hamiltonian in diagonal form, for fast survival amplitudes of one state.
struct Spectrum {
    eigenvalues: DVector<f64>,
    /// `|⟨v_k|ψ⟩|²`
    weights: DVector<f64>,
}

impl Spectrum {
    fn new(h: &DMatrix<Complex64>, psi: &DenseState) -> Self {
        let eig = h.clone().symmetric_eigen();
        let coeffs = eig.eigenvectors.adjoint() * psi.amplitudes();
        Self {
            eigenvalues: eig.eigenvalues,
            weights: coeffs.map(|c| c.norm_sqr()),
        }
    }

    fn norm(&self) -> f64 {
        self.eigenvalues.amax()
    }

    fn survival(&self, scale: f64, t: f64) -> f64 {
        self.eigenvalues
            .iter()
            .zip(self.weights.iter())
            .map(|(&l, &w)| Complex64::from_polar(w, -scale * l * t))
            .sum::<Complex64>()
            .norm()
    }

    /// First grid time with survival `≤ ε` once rescaled to spectral norm `target_norm`.
    fn orthogonalization_time(&self, target_norm: f64, times: &[f64], epsilon: f64) -> Option<f64> {
        let scale = target_norm / self.norm();
        times
            .iter()
            .copied()
            .find(|&t| self.survival(scale, t) <= epsilon)
    }
}

/// Earliest grid time at which `|⟨ψ|e^{−iHt}|ψ⟩| ≤ ε`, after rescaling `H` to spectral norm `target_norm`.
pub fn orthogonalization_time(
    psi: &DenseState,
    hamiltonian: &DMatrix<Complex64>,
    target_norm: f64,
    times: &[f64],
    epsilon: f64,
) -> Result<Option<f64>> {
    let defect = oracle::hermiticity_defect(hamiltonian);
    if defect > 1e-10 {
        return Err(Error::NonHermitian { deviation: defect });
    }
    Ok(Spectrum::new(hamiltonian, psi).orthogonalization_time(target_norm, times, epsilon))
}

/// One random 1-local Hamiltonian's result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub index: usize,
    /// `None` if the state never reached `ε` on the grid.
    pub time: Option<f64>,
    /// `time / cm_time`
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedLimitReport {
    pub theta: f64,
    pub n: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// Spectral norm shared by every compared Hamiltonian.
    pub norm: f64,
    pub cm_time: Option<f64>,
    pub trials: Vec<TrialOutcome>,
    /// Trials that orthogonalized strictly before the CM generator.
    pub counterexamples: usize,
}

/// `h = r⃗·σ⃗` with `r⃗` uniform in the unit ball.
fn random_site_term(rng: &mut ChaCha8Rng) -> Matrix2<Complex64> {
    let r = loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            break v;
        }
    };
    let [x, y, z] = oracle::pauli();
    x * Complex64::from(r[0]) + y * Complex64::from(r[1]) + z * Complex64::from(r[2])
}

/// Random 1-local Hamiltonian for `trial`, independent of scheduling.
pub fn random_one_local(n: usize, seed: u64, trial: usize) -> Vec<Matrix2<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    (0..n).map(|_| random_site_term(&mut rng)).collect()
}

/// Site terms of the CM generator `Σ_i (E− − E+)^{(i)}` for the qubit pair at angle `θ`.
pub fn cm_site_terms(theta: f64, n: usize) -> Result<Vec<Matrix2<Complex64>>> {
    let pair = BranchPair::qubit(theta)?;
    let g = cm_single(pair.z())?.generator().map(Complex64::from);
    Ok(vec![g; n])
}

/// Time grid `[0, π]` used by [`speed_limit_trial`].
pub fn speed_limit_times() -> Vec<f64> {
    linspace(0.0, std::f64::consts::PI, SPEED_LIMIT_GRID)
}

/// Compares the CM generator's orthogonalization time against `trials` random
/// norm-matched 1-local Hamiltonians.
pub fn speed_limit_trial(
    theta: f64,
    n: usize,
    trials: usize,
    epsilon: f64,
    seed: u64,
) -> Result<SpeedLimitReport> {
    oracle::check_modes(n, MAX_OPERATOR_MODES)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain {
            name: "epsilon",
            value: epsilon,
            allowed: "(0, 1)",
        });
    }
    let psi = oracle::dense_superposition(theta, n, StateKind::Superposition)?;
    let times = speed_limit_times();

    let cm = Spectrum::new(&oracle::one_local_matrix(&cm_site_terms(theta, n)?)?, &psi);
    let norm = cm.norm();
    let cm_time = cm.orthogonalization_time(norm, &times, epsilon);

    let outcomes = (0..trials)
        .into_par_iter()
        .map(|index| {
            let h = oracle::one_local_matrix(&random_one_local(n, seed, index))?;
            let time = Spectrum::new(&h, &psi).orthogonalization_time(norm, &times, epsilon);
            let ratio = match (time, cm_time) {
                (Some(t), Some(c)) if c > 0.0 => Some(t / c),
                _ => None,
            };
            Ok(TrialOutcome { index, time, ratio })
        })
        .collect::<Result<Vec<_>>>()?;

    let counterexamples = outcomes
        .iter()
        .filter(|o| match (o.time, cm_time) {
            (Some(t), Some(c)) => t < c,
            (Some(_), None) => true,
            _ => false,
        })
        .count();

    Ok(SpeedLimitReport {
        theta,
        n,
        epsilon,
        seed,
        norm,
        cm_time,
        trials: outcomes,
        counterexamples,
    })
}
