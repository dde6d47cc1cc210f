//! Entanglement entropy of two-mode superpositions and their collapsed outcomes.
//!
//! For `N = 2` a two-branch state `c0|φ⟩|φ⟩ + c1 U|φ⟩U|φ⟩` has coefficient matrix
//! `C = c0 e e^T + c1 u u^T` in the single-mode frame (`e = (1, 0)`,
//! `u = (z, √(1 − z²))`), and the reduced state of either mode is `C C†`.
//! Entropies are in nats (`k_B = 1`); divide by `ln 2` for bits.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::collapse::collapsed_outcomes;
use crate::effective_states::{superposition, BranchPair, TwoBranchState};
use crate::error::{Error, Result};

/// Eigenvalues down to this are clipped to zero before taking logarithms.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// Bracket searched for the entropy crossing.
pub const CROSSING_BRACKET: (f64, f64) = (0.3, 0.95);

/// A single-mode density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2(Matrix2<Complex64>);

impl DensityMatrix2 {
    /// Validates Hermiticity, unit trace and (near) positivity.
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let herm = (m - m.adjoint()).camax();
        if herm > 1e-12 {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:e})")));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::InvalidState(format!("trace {trace}")));
        }
        let rho = Self(m);
        let (lo, _) = rho.eigenvalues();
        if lo < -NEGATIVE_EIGENVALUE_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:e}")));
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    /// Eigenvalues `(λ_min, λ_max)` from the trace and determinant.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = &self.0;
        let half_trace = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
        let half_gap = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
        let r = (half_gap * half_gap + m[(0, 1)].norm_sqr()).sqrt();
        (half_trace - r, half_trace + r)
    }
}

/// Reduced state of the first mode of a two-mode two-branch state.
pub fn reduced_state(state: &TwoBranchState) -> Result<DensityMatrix2> {
    if state.modes() != 2 {
        return Err(Error::Unsupported(format!(
            "reduced_state needs N = 2, got N = {}",
            state.modes()
        )));
    }
    let z = state.z();
    let s = (1.0 - z * z).sqrt();
    let (c0, c1) = (state.c0(), state.c1());
    let e = [1.0, 0.0];
    let u = [z, s];
    let coeff = Matrix2::from_fn(|i, j| c0 * (e[i] * e[j]) + c1 * (u[i] * u[j]));
    let mut rho = coeff * coeff.adjoint();
    // restore exact Hermiticity lost to rounding
    rho = (rho + rho.adjoint()) * Complex64::from(0.5);
    DensityMatrix2::new(rho)
}

/// `−Σ λ ln λ`, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix2) -> Result<f64> {
    let (lo, hi) = rho.eigenvalues();
    let mut s = 0.0;
    for l in [lo, hi] {
        if l < -NEGATIVE_EIGENVALUE_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {l:e}")));
        }
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

/// Entropies of `ψ` and `Ω+` at one overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRow {
    pub z: f64,
    pub s_psi: f64,
    pub s_omega_plus: f64,
}

pub fn entropies_at(z: f64) -> Result<EntropyRow> {
    let pair = BranchPair::from_overlap(z)?;
    let psi = superposition(&pair, 2)?;
    let (plus, _) = collapsed_outcomes(&pair, 2)?;
    Ok(EntropyRow {
        z,
        s_psi: von_neumann_entropy(&reduced_state(&psi)?)?,
        s_omega_plus: von_neumann_entropy(&reduced_state(&plus)?)?,
    })
}

pub fn entropy_sweep(z_grid: &[f64]) -> Result<Vec<EntropyRow>> {
    z_grid.iter().map(|&z| entropies_at(z)).collect()
}

/// Root of `S(Ω+) − S(ψ)` on the crossing bracket, by bisection to width `tol`.
pub fn entropy_crossing(tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            allowed: "(0, inf)",
        });
    }
    let gap = |z: f64| entropies_at(z).map(|r| r.s_omega_plus - r.s_psi);
    let (mut lo, mut hi) = CROSSING_BRACKET;
    let mut g_lo = gap(lo)?;
    let g_hi = gap(hi)?;
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoCrossing { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let g = gap(mid)?;
        if g == 0.0 {
            return Ok(mid);
        }
        if g.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
