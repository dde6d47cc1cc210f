//! Closed forms against the dense oracle, as a list of pass/fail rows.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use super::dense::*;
use crate::collapse::{cm_single, collapsed_outcomes};
use crate::dynamics::{cm_site_terms, overlap_closed_form};
use crate::effective_states::{superposition, BranchPair};
use crate::entanglement::reduced_state;
use crate::error::Result;
use crate::spin_metrology::{cm_generator_check, dicke_embed, SpinMoments, StateKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest discrepancy observed.
    pub worst: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, worst: f64, tolerance: f64) -> Self {
        Self {
            name,
            passed: worst <= tolerance,
            worst,
            tolerance,
        }
    }
}

fn z_grid() -> Vec<f64> {
    (0..20).map(|i| i as f64 * 0.05).collect()
}

const THETAS: [f64; 4] = [
    0.2,
    0.7,
    std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_2,
];

const KINDS: [StateKind; 5] = [
    StateKind::Superposition,
    StateKind::OmegaPlus,
    StateKind::OmegaMinus,
    StateKind::Branch0,
    StateKind::Branch1,
];

fn c(x: f64) -> Complex64 {
    Complex64::from(x)
}

/// CM projectors against the spectral projectors of `|φ⟩⟨φ| − |Uφ⟩⟨Uφ|`.
pub fn check_helstrom() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for z in z_grid() {
        let cm = cm_single(z)?;
        let s = (1.0 - z * z).sqrt();
        let h = dense_helstrom([c(1.0), c(0.0)], [c(z), c(s)])?;
        let minus = cm.projector_minus().map(c);
        let plus = cm.projector_plus().map(c);
        worst = worst
            .max((h.positive - minus).norm())
            .max((h.negative - plus).norm())
            .max((h.eigenvalues.0 - s).abs())
            .max((h.eigenvalues.1 + s).abs());
    }
    Ok(Check::new("helstrom_projectors", worst, 1e-8))
}

/// Dicke-basis states against literal tensor products.
pub fn check_dicke_states() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in [1usize, 2, 5, 8] {
        for theta in THETAS {
            for kind in KINDS {
                let dicke = dicke_to_dense(dicke_embed(theta, n, kind)?.amplitudes())?;
                let dense = dense_superposition(theta, n, kind)?;
                worst = worst.max((dicke.amplitudes() - dense.amplitudes()).camax());
            }
        }
    }
    Ok(Check::new("dicke_embedding", worst, 1e-10))
}

/// `Var(T(ϑ))` from collective moments against site-by-site application.
pub fn check_deviation() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in [2usize, 6, 10] {
        for theta in THETAS {
            for kind in [StateKind::Superposition, StateKind::OmegaPlus] {
                let dicke = SpinMoments::of(&dicke_embed(theta, n, kind)?);
                let dense = dense_superposition(theta, n, kind)?;
                for i in 0..24 {
                    let v = -std::f64::consts::PI + i as f64 * std::f64::consts::PI / 12.0;
                    worst =
                        worst.max((dicke.variance(v) - dense_deviation(&dense, v).powi(2)).abs());
                }
            }
        }
    }
    Ok(Check::new("generator_variance", worst, 1e-10))
}

/// `T(−θ) = −½ Σ(E− − E+)` in the symmetric subspace.
pub fn check_corrected_identity() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in [2usize, 6, 10] {
        for theta in THETAS {
            worst = worst.max(cm_generator_check(theta, n)?);
        }
    }
    Ok(Check::new("cm_generator_identity", worst, 1e-10))
}

/// Closed-form survival amplitude against dense evolution under `Σ(E− − E+)`.
pub fn check_dynamics() -> Result<Check> {
    let mut worst: f64 = 0.0;
    let n = 6;
    for z in [0.0, 0.3, 0.65, 0.9] {
        let cm = cm_single(z)?;
        let g = cm.generator().map(c);
        let pair = BranchPair::from_overlap(z)?;
        let psi = dense_two_branch(&superposition(&pair, n)?)?;
        for i in 0..=16 {
            let t = i as f64 * std::f64::consts::PI / 16.0;
            let evolved = evolve_one_local(&psi, &vec![g; n], t)?;
            worst = worst.max((psi.inner(&evolved) - overlap_closed_form(z, n, t)).norm());
        }
    }
    // the qubit parametrization agrees with the abstract frame
    let theta = 0.7;
    let terms = cm_site_terms(theta, 4)?;
    let psi = dense_superposition(theta, 4, StateKind::Superposition)?;
    let evolved = evolve_one_local(&psi, &terms, 0.4)?;
    worst = worst.max((psi.inner(&evolved) - overlap_closed_form(theta.cos(), 4, 0.4)).norm());
    Ok(Check::new("survival_amplitude", worst, 1e-10))
}

/// Reduced states from the coefficient matrix against a dense partial trace.
pub fn check_reduced_states() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for z in z_grid() {
        let pair = BranchPair::from_overlap(z)?;
        let psi = superposition(&pair, 2)?;
        let (plus, minus) = collapsed_outcomes(&pair, 2)?;
        for state in [psi, plus, minus] {
            let dense = dense_two_branch(&state)?;
            let a: Matrix2<Complex64> = *reduced_state(&state)?.matrix();
            for site in 0..2 {
                worst = worst.max((a - reduced_site(&dense, site)).camax());
            }
        }
    }
    Ok(Check::new("reduced_density_matrix", worst, 1e-12))
}

/// Gram-algebra inner products against dense ones.
pub fn check_inner_products() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in [1usize, 3, 7] {
        for z in [0.0, 0.4, 0.8, 0.95] {
            let pair = BranchPair::from_overlap(z)?;
            let psi = superposition(&pair, n)?;
            let (plus, minus) = collapsed_outcomes(&pair, n)?;
            let states = [psi, plus, minus];
            let dense = states
                .iter()
                .map(dense_two_branch)
                .collect::<Result<Vec<_>>>()?;
            for i in 0..3 {
                for j in 0..3 {
                    let gram = states[i].inner(&states[j])?;
                    worst = worst.max((gram - dense[i].inner(&dense[j])).norm());
                }
            }
        }
    }
    Ok(Check::new("two_branch_inner_product", worst, 1e-12))
}

/// Runs every cross-check.
pub fn run_all() -> Result<Vec<Check>> {
    Ok(vec![
        check_helstrom()?,
        check_inner_products()?,
        check_dicke_states()?,
        check_deviation()?,
        check_corrected_identity()?,
        check_dynamics()?,
        check_reduced_states()?,
    ])
}
