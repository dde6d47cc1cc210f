//! Brute-force reference computations on full `2^N` statevectors.
//!
//! Nothing here uses the two-branch Gram algebra or the Dicke reduction: states
//! are built as literal tensor products and operators act site by site. Every
//! closed form elsewhere in the crate is checked against this module, and
//! [`verify`] bundles those cross-checks for the command line.

mod dense;
pub mod verify;

pub use dense::*;

use nalgebra::{DVector, Matrix2};
use num_complex::Complex64;
use serde::Serialize;

use crate::collapse::cm_single;
use crate::entanglement::{von_neumann_entropy, DensityMatrix2};
use crate::error::Result;
use crate::optimize::maximize_periodic;
use crate::spin_metrology::VARTHETA_GRID;

/// Largest register for which all separable outcomes are enumerated.
pub const MAX_ENUMERATION_MODES: usize = 10;

/// Expected fidelity of a separable-CM outcome with each branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparableFidelity {
    /// `Σ_outcomes p · |⟨outcome|φ^⊗N⟩|²`
    pub branch0: f64,
    /// `Σ_outcomes p · |⟨outcome|(Uφ)^⊗N⟩|²`
    pub branch1: f64,
}

/// Enumerates the `2^N` outcomes `ξ_{i_1} ⊗ … ⊗ ξ_{i_N}` of the mode-by-mode CM.
///
/// Each outcome is weighted by the statistics the single-mode CM assigns it on
/// the single-mode superposition, i.e. `Π_k |⟨ξ_{i_k}|ψ_1⟩|²` (equiprobable
/// outcomes), and scored by its fidelity with the branch.
pub fn separable_cm_fidelity(z: f64, n: usize) -> Result<SeparableFidelity> {
    check_modes(n, MAX_ENUMERATION_MODES)?;
    let cm = cm_single(z)?;
    let s = (1.0 - z * z).sqrt();
    let c = Complex64::from;
    let xi = [cm.xi_minus(), cm.xi_plus()].map(|v| [c(v[0]), c(v[1])]);
    let norm = (2.0 + 2.0 * z).sqrt();
    let psi1 = [c((1.0 + z) / norm), c(s / norm)];

    let probe = DenseState::product_raw(psi1, n)?;
    let phi0 = DenseState::product_raw([c(1.0), c(0.0)], n)?;
    let phi1 = DenseState::product_raw([c(z), c(s)], n)?;

    let mut out = SeparableFidelity {
        branch0: 0.0,
        branch1: 0.0,
    };
    for pattern in 0..(1usize << n) {
        let sites: Vec<[Complex64; 2]> = (0..n).map(|k| xi[(pattern >> (n - 1 - k)) & 1]).collect();
        let outcome = DenseState::product(&sites)?;
        let o = outcome.amplitudes();
        let p = o.dotc(&probe).norm_sqr();
        out.branch0 += p * o.dotc(&phi0).norm_sqr();
        out.branch1 += p * o.dotc(&phi1).norm_sqr();
    }
    Ok(out)
}

/// Maximal `√Var(T(ϑ))` over `ϑ`, evaluated on the statevector.
pub fn dense_max_deviation(state: &DenseState) -> (f64, f64) {
    let (t, var) = maximize_periodic(
        |v| dense_deviation(state, v).powi(2),
        -std::f64::consts::PI,
        2.0 * std::f64::consts::PI,
        VARTHETA_GRID,
    );
    (t, var.max(0.0).sqrt())
}

/// Outcome of the GHZ-hierarchy comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzHierarchyReport {
    pub n: usize,
    /// Max deviation of `T(ϑ)` over `N + 1` sites in `(|↑⟩|GHZ+⟩ + |↓⟩|GHZ−⟩)/√2`.
    pub max_deviation_state: f64,
    /// Same for the branch `|↑⟩|GHZ+⟩`.
    pub max_deviation_branch: f64,
    pub ratio: f64,
    /// Entropy of every single-site reduced state of the superposition, in nats.
    pub single_site_entropies: Vec<f64>,
}

fn ghz(n: usize, sign: f64) -> DVector<Complex64> {
    let mut v = DVector::zeros(1 << n);
    v[0] = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    v[(1 << n) - 1] = Complex64::from(sign * std::f64::consts::FRAC_1_SQRT_2);
    v
}

/// Builds `(|↑⟩|GHZ_{N,+}⟩ + |↓⟩|GHZ_{N,−}⟩)/√2` on `N + 1` qubits and compares it to its branch.
pub fn ghz_hierarchy_check(n: usize) -> Result<GhzHierarchyReport> {
    check_modes(n, MAX_ENUMERATION_MODES)?;
    let plus = ghz(n, 1.0);
    let minus = ghz(n, -1.0);
    let dim = 1usize << n;
    // the leading site is the most significant bit
    let sup = DVector::from_fn(
        2 * dim,
        |i, _| if i < dim { plus[i] } else { minus[i - dim] },
    );
    let branch = DVector::from_fn(2 * dim, |i, _| {
        if i < dim {
            plus[i]
        } else {
            Complex64::from(0.0)
        }
    });
    let sup = DenseState::from_amplitudes(n + 1, sup)?;
    let branch = DenseState::from_amplitudes(n + 1, branch)?;

    let (_, max_deviation_state) = dense_max_deviation(&sup);
    let (_, max_deviation_branch) = dense_max_deviation(&branch);
    let single_site_entropies = (0..=n)
        .map(|site| von_neumann_entropy(&DensityMatrix2::new(hermitize(reduced_site(&sup, site)))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(GhzHierarchyReport {
        n,
        max_deviation_state,
        max_deviation_branch,
        ratio: max_deviation_state / max_deviation_branch,
        single_site_entropies,
    })
}

pub(crate) fn hermitize(m: Matrix2<Complex64>) -> Matrix2<Complex64> {
    (m + m.adjoint()) * Complex64::from(0.5)
}
