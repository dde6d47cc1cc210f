//! Two-branch superpositions in the span of their branch vectors.
//!
//! Every state handled here lives in the span of `|Φ0⟩ = |φ⟩^⊗N` and
//! `|Φ1⟩ = U^⊗N |φ⟩^⊗N`. Only the Gram data of the branches matters: a single
//! mode contributes the real overlap `z = ⟨φ|U|φ⟩`, so `⟨Φ0|Φ1⟩ = z^N`.
//!
//! A single mode is coordinatized in the orthonormal frame
//! `e0 = |φ⟩`, `e1 = (U|φ⟩ − z|φ⟩)/√(1 − z²)`, which puts `|φ⟩` at `(1, 0)` and
//! `U|φ⟩` at `(z, √(1 − z²))`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest admissible per-mode overlap. Beyond this the collapse coefficients,
/// which divide by `√(1 − z²)`, carry no significant digits.
pub const MAX_OVERLAP: f64 = 1.0 - 1e-8;

/// Above this mode count `z^N` is evaluated as `exp(N ln z)`.
const LOG_SPACE_MODES: usize = 64;

/// `z^N` for a per-mode overlap `z ∈ [0, 1)`.
///
/// Underflow to zero is accepted: the branches are then orthogonal to working precision.
pub fn overlap_power(z: f64, n: usize) -> f64 {
    if n > LOG_SPACE_MODES {
        if z == 0.0 {
            0.0
        } else {
            (n as f64 * z.ln()).exp()
        }
    } else {
        z.powi(n as i32)
    }
}

pub(crate) fn check_overlap(z: f64) -> Result<()> {
    if !z.is_finite() || !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain {
            name: "z",
            value: z,
            allowed: "[0, 1)",
        });
    }
    if z > MAX_OVERLAP {
        return Err(Error::SingularMeasurement { overlap: z });
    }
    Ok(())
}

/// Single-mode branch data: `|φ⟩` and `U|φ⟩` with real overlap `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPair {
    z: f64,
    theta: Option<f64>,
}

impl BranchPair {
    /// Branch pair from its overlap `z = ⟨φ|U|φ⟩`.
    pub fn from_overlap(z: f64) -> Result<Self> {
        check_overlap(z)?;
        Ok(Self { z, theta: None })
    }

    /// Qubit carrier `|φ⟩ = |0⟩`, `U = exp(−iθσ_y)`, so `U|φ⟩ = cos θ|0⟩ + sin θ|1⟩`.
    pub fn qubit(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 || theta > std::f64::consts::FRAC_PI_2 {
            return Err(Error::Domain {
                name: "theta",
                value: theta,
                allowed: "(0, pi/2]",
            });
        }
        let z = theta.cos();
        check_overlap(z)?;
        Ok(Self {
            z,
            theta: Some(theta),
        })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Rotation angle of the qubit carrier, when the pair was built from one.
    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    /// `√(1 − z²)`, the length of `U|φ⟩` orthogonal to `|φ⟩`.
    pub fn orthogonal_part(&self) -> f64 {
        (1.0 - self.z * self.z).sqrt()
    }

    /// Frame coordinates of `|φ⟩`.
    pub fn phi(&self) -> [f64; 2] {
        [1.0, 0.0]
    }

    /// Frame coordinates of `U|φ⟩`.
    pub fn uphi(&self) -> [f64; 2] {
        [self.z, self.orthogonal_part()]
    }

    /// Frame coordinates of `a|φ⟩ + b U|φ⟩`.
    pub fn to_frame(&self, a: f64, b: f64) -> [f64; 2] {
        [a + b * self.z, b * self.orthogonal_part()]
    }
}

/// Free-function spelling of [`BranchPair::from_overlap`].
pub fn branch_pair_from_overlap(z: f64) -> Result<BranchPair> {
    BranchPair::from_overlap(z)
}

/// Free-function spelling of [`BranchPair::qubit`].
pub fn qubit_branch_pair(theta: f64) -> Result<BranchPair> {
    BranchPair::qubit(theta)
}

/// `c0 |Φ0⟩ + c1 |Φ1⟩` over `N` modes with per-mode overlap `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBranchState {
    c0: Complex64,
    c1: Complex64,
    n: usize,
    z: f64,
}

impl TwoBranchState {
    /// Builds a state from branch coefficients, rejecting anything that is not unit norm.
    pub fn new(c0: Complex64, c1: Complex64, n: usize, z: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain {
                name: "N",
                value: 0.0,
                allowed: "N >= 1",
            });
        }
        check_overlap(z)?;
        let state = Self { c0, c1, n, z };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "two-branch state has squared norm {norm}"
            )));
        }
        Ok(state)
    }

    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// `⟨Φ0|Φ1⟩ = z^N`.
    pub fn branch_overlap(&self) -> f64 {
        overlap_power(self.z, self.n)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr()
            + self.c1.norm_sqr()
            + 2.0 * (self.c0.conj() * self.c1).re * self.branch_overlap()
    }

    /// `⟨self|other⟩` from the branch Gram matrix.
    pub fn inner(&self, other: &TwoBranchState) -> Result<Complex64> {
        if self.n != other.n || self.z != other.z {
            return Err(Error::Incompatible {
                n_a: self.n,
                z_a: self.z,
                n_b: other.n,
                z_b: other.z,
            });
        }
        let w = self.branch_overlap();
        let a0 = self.c0.conj();
        let a1 = self.c1.conj();
        Ok(a0 * other.c0 + a1 * other.c1 + (a0 * other.c1 + a1 * other.c0) * w)
    }
}

/// Equal-weight superposition `(|Φ0⟩ + |Φ1⟩)/√(2 + 2z^N)`.
pub fn superposition(pair: &BranchPair, n: usize) -> Result<TwoBranchState> {
    if n == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            allowed: "N >= 1",
        });
    }
    let c = (2.0 + 2.0 * overlap_power(pair.z(), n)).sqrt().recip();
    Ok(TwoBranchState {
        c0: Complex64::new(c, 0.0),
        c1: Complex64::new(c, 0.0),
        n,
        z: pair.z(),
    })
}

/// A bare branch, `|Φ0⟩` (`which = 0`) or `|Φ1⟩` (`which = 1`).
pub fn branch(pair: &BranchPair, n: usize, which: u8) -> Result<TwoBranchState> {
    let (c0, c1) = match which {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        _ => return Err(Error::Unsupported(format!("branch index {which}"))),
    };
    TwoBranchState::new(c0.into(), c1.into(), n, pair.z())
}

/// Free-function spelling of [`TwoBranchState::inner`].
pub fn two_branch_inner(a: &TwoBranchState, b: &TwoBranchState) -> Result<Complex64> {
    a.inner(b)
}

/// `k` overlaps `z_i = i/k` covering `[0, 1)`.
pub fn overlap_grid(k: usize) -> Vec<f64> {
    (0..k).map(|i| i as f64 / k as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn frame_coordinates() {
        let p = BranchPair::from_overlap(0.0).unwrap();
        assert_eq!(p.uphi(), [0.0, 1.0]);
        let p = BranchPair::from_overlap(0.6).unwrap();
        assert!((p.uphi()[0] - 0.6).abs() < 1e-15);
        assert!((p.uphi()[1] - 0.8).abs() < 1e-15);
        let [a, b] = p.uphi();
        assert!((a * a + b * b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_guards() {
        assert!(matches!(
            BranchPair::from_overlap(0.999999999),
            Err(Error::SingularMeasurement { .. })
        ));
        assert!(matches!(
            BranchPair::from_overlap(1.0),
            Err(Error::SingularMeasurement { .. })
        ));
        assert!(matches!(
            BranchPair::from_overlap(-0.1),
            Err(Error::Domain { .. })
        ));
        assert!(BranchPair::from_overlap(f64::NAN).is_err());
    }

    #[test]
    fn qubit_pairs() {
        let p = BranchPair::qubit(FRAC_PI_2).unwrap();
        assert!(p.z().abs() < 1e-12);
        assert_eq!(p.theta(), Some(FRAC_PI_2));
        let p = BranchPair::qubit(FRAC_PI_3).unwrap();
        assert!((p.z() - 0.5).abs() < 1e-12);
        assert!((p.z() - FRAC_PI_3.cos()).abs() < 1e-12);
        assert!(BranchPair::qubit(0.0).is_err());
        assert!(BranchPair::qubit(2.0).is_err());
    }

    #[test]
    fn superposition_coefficients() {
        let s = superposition(&BranchPair::from_overlap(0.0).unwrap(), 1).unwrap();
        assert!((s.c0().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(s.c0(), s.c1());

        let s = superposition(&BranchPair::from_overlap(0.9).unwrap(), 2).unwrap();
        // (2 + 2 * 0.81)^(-1/2)
        assert!((s.c0().re - 0.525_588_331_227_636_7).abs() < 1e-15);
        assert!(superposition(&BranchPair::from_overlap(0.9).unwrap(), 0).is_err());
    }

    #[test]
    fn gram_inner_products() {
        let p = BranchPair::from_overlap(0.9).unwrap();
        let b0 = branch(&p, 2, 0).unwrap();
        let b1 = branch(&p, 2, 1).unwrap();
        assert!((b0.inner(&b1).unwrap().re - 0.81).abs() < 1e-15);
        let s = superposition(&p, 2).unwrap();
        assert!((s.inner(&s).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        let other = superposition(&p, 3).unwrap();
        assert!(matches!(s.inner(&other), Err(Error::Incompatible { .. })));
    }

    #[test]
    fn log_space_power_matches_direct() {
        for &z in &[0.0f64, 0.3, 0.9, 0.999] {
            for n in [65usize, 100, 500] {
                let direct = z.powi(n as i32);
                let got = overlap_power(z, n);
                assert!((got - direct).abs() <= 1e-12 * direct, "{z} {n}");
            }
        }
        assert_eq!(overlap_power(0.5, 100_000), 0.0);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(TwoBranchState::new(1.0.into(), 1.0.into(), 2, 0.5).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn superposition_is_normalized(z in 0.0f64..0.99, n in 1usize..200) {
                let s = superposition(&BranchPair::from_overlap(z).unwrap(), n).unwrap();
                prop_assert!((s.inner(&s).unwrap().re - 1.0).abs() < 1e-12);
            }

            #[test]
            fn inner_is_conjugate_symmetric(
                z in 0.0f64..0.99,
                n in 1usize..20,
                a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0,
            ) {
                let x = TwoBranchState { c0: Complex64::new(a, b), c1: Complex64::new(c, d), n, z };
                let y = TwoBranchState { c0: Complex64::new(d, a), c1: Complex64::new(b, -c), n, z };
                prop_assert_eq!(x.inner(&y).unwrap(), y.inner(&x).unwrap().conj());
            }
        }
    }
}
