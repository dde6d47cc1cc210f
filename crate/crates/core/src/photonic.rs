//! Truncated-Fock states of a single bosonic mode: coherent states, even and odd
//! cats, number states, and the displacement metrology of collapsed
//! hierarchical cat states.
//!
//! Quadratures follow `x_λ = (a e^{−iλ} + a† e^{iλ})/2`, so the vacuum variance is
//! `¼` and a pure state's quantum Fisher information for displacements generated
//! by `x_λ` is `4 Var(x_λ)`.
//!
//! ```
//! use remnant::photonic::{cat_vector, mandel_q, Parity};
//!
//! let even = cat_vector(1.0, Parity::Even, 40).unwrap();
//! assert!(mandel_q(&even).unwrap() > 0.0);
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::maximize_periodic;

/// Largest tolerated probability of the generating coherent state beyond the cutoff.
pub const MAX_LEAKAGE: f64 = 1e-12;

/// `⟨n⟩` must stay at least this far below the cutoff for moments to be trusted.
pub const MOMENT_MARGIN: usize = 3;

/// Grid used to locate the best quadrature angle on `[−π/2, π/2)`.
pub const LAMBDA_GRID: usize = 181;

/// Smallest cutoff accepted for a coherent amplitude `α`: `⌈4|α|² + 25⌉`.
pub fn required_cutoff(alpha: Complex64) -> usize {
    (4.0 * alpha.norm_sqr() + 25.0).ceil() as usize
}

/// Poisson weight of photon numbers above `cutoff` for mean `|α|²`.
pub fn coherent_leakage(alpha: Complex64, cutoff: usize) -> f64 {
    let mean = alpha.norm_sqr();
    if mean == 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut ln_p = -mean;
    for k in 1..=cutoff {
        ln_p += ln_mean - (k as f64).ln();
    }
    let mut tail = 0.0;
    let mut k = cutoff + 1;
    loop {
        ln_p += ln_mean - (k as f64).ln();
        let p = ln_p.exp();
        tail += p;
        if k as f64 > mean && p <= tail * 1e-17 {
            return tail;
        }
        k += 1;
    }
}

fn check_cutoff(alpha: Complex64, cutoff: usize) -> Result<()> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::Domain {
            name: "alpha",
            value: alpha.norm(),
            allowed: "finite",
        });
    }
    let mut required = required_cutoff(alpha);
    if cutoff >= required && coherent_leakage(alpha, cutoff) > MAX_LEAKAGE {
        while coherent_leakage(alpha, required) > MAX_LEAKAGE {
            required += 1;
        }
    }
    if cutoff < required {
        return Err(Error::Cutoff { cutoff, required });
    }
    Ok(())
}

/// A normalized state on photon numbers `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: DVector<Complex64>,
    alpha_tag: Option<Complex64>,
}

impl FockVector {
    /// Validates unit norm to 1e-10. At least one amplitude is required.
    pub fn from_amplitudes(amps: DVector<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidState("empty Fock vector".into()));
        }
        let norm = amps.norm_squared();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("norm² = {norm}")));
        }
        Ok(Self {
            amps,
            alpha_tag: None,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// Coherent amplitude the state was built from, if any.
    pub fn alpha_tag(&self) -> Option<Complex64> {
        self.alpha_tag
    }

    /// `⟨self|other⟩`; the shorter vector is zero-padded.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The same state on a larger cutoff.
    pub fn extend(&self, cutoff: usize) -> FockVector {
        let mut amps = DVector::zeros(cutoff.max(self.cutoff()) + 1);
        amps.rows_mut(0, self.amps.len()).copy_from(&self.amps);
        FockVector {
            amps,
            alpha_tag: self.alpha_tag,
        }
    }

    /// Ladder moments by direct sums over amplitudes.
    pub fn moments(&self) -> FockMoments {
        let c = &self.amps;
        let mut m = FockMoments::default();
        for n in 0..c.len() {
            let p = c[n].norm_sqr();
            let nf = n as f64;
            m.n += nf * p;
            m.n2 += nf * nf * p;
            if n + 1 < c.len() {
                m.a += c[n].conj() * c[n + 1] * (nf + 1.0).sqrt();
            }
            if n + 2 < c.len() {
                m.a2 += c[n].conj() * c[n + 2] * ((nf + 1.0) * (nf + 2.0)).sqrt();
            }
        }
        m
    }
}

/// `⟨a†a⟩`, `⟨(a†a)²⟩`, `⟨a⟩`, `⟨a²⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FockMoments {
    pub n: f64,
    pub n2: f64,
    pub a: Complex64,
    pub a2: Complex64,
}

/// Truncated annihilation operator on `0..=cutoff`.
pub fn annihilation(cutoff: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(cutoff + 1, cutoff + 1, |i, j| {
        if j == i + 1 {
            Complex64::from((j as f64).sqrt())
        } else {
            Complex64::from(0.0)
        }
    })
}

/// The same moments as [`FockVector::moments`], from explicit operator matrices.
pub fn operator_moments(state: &FockVector) -> FockMoments {
    let a = annihilation(state.cutoff());
    let number = a.adjoint() * &a;
    let psi = state.amplitudes();
    let expect = |op: &DMatrix<Complex64>| psi.dotc(&(op * psi));
    FockMoments {
        n: expect(&number).re,
        n2: expect(&(&number * &number)).re,
        a: expect(&a),
        a2: expect(&(&a * &a)),
    }
}

fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> DVector<Complex64> {
    let mut amps = DVector::zeros(cutoff + 1);
    amps[0] = Complex64::from(1.0);
    for n in 1..=cutoff {
        amps[n] = amps[n - 1] * alpha / (n as f64).sqrt();
    }
    let norm = amps.norm();
    amps.unscale_mut(norm);
    amps
}

/// `|α⟩ = e^{−|α|²/2} Σ α^n/√(n!) |n⟩`, renormalized on the truncation.
pub fn coherent_vector(alpha: Complex64, cutoff: usize) -> Result<FockVector> {
    check_cutoff(alpha, cutoff)?;
    Ok(FockVector {
        amps: coherent_amplitudes(alpha, cutoff),
        alpha_tag: Some(alpha),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn keeps(self, n: usize) -> bool {
        n.is_multiple_of(2) == (self == Parity::Even)
    }
}

/// `(|α⟩ ± |−α⟩)/√(2 ± 2e^{−2α²})` for real `α > 0`.
///
/// Built by parity projection of `|α⟩`, which avoids the cancellation in the
/// odd normalization at small `α`.
pub fn cat_vector(alpha: f64, parity: Parity, cutoff: usize) -> Result<FockVector> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain {
            name: "alpha",
            value: alpha,
            allowed: "(0, inf)",
        });
    }
    let a = Complex64::from(alpha);
    check_cutoff(a, cutoff)?;
    let mut amps = coherent_amplitudes(a, cutoff);
    for (n, c) in amps.iter_mut().enumerate() {
        if !parity.keeps(n) {
            *c = Complex64::from(0.0);
        }
    }
    let norm = amps.norm();
    amps.unscale_mut(norm);
    Ok(FockVector {
        amps,
        alpha_tag: Some(a),
    })
}

/// Number state `|n⟩` on `0..=cutoff`.
pub fn fock_vector(n: usize, cutoff: usize) -> Result<FockVector> {
    if n > cutoff {
        return Err(Error::Cutoff {
            cutoff,
            required: n,
        });
    }
    let mut amps = DVector::zeros(cutoff + 1);
    amps[n] = Complex64::from(1.0);
    Ok(FockVector {
        amps,
        alpha_tag: None,
    })
}

/// `Q = (⟨n²⟩ − ⟨n⟩² − ⟨n⟩)/⟨n⟩`.
pub fn mandel_q(state: &FockVector) -> Result<f64> {
    let m = state.moments();
    if m.n <= 1e-300 {
        return Err(Error::UndefinedMandelQ);
    }
    Ok((m.n2 - m.n * m.n - m.n) / m.n)
}

fn check_moment_margin(state: &FockVector, m: &FockMoments) -> Result<()> {
    let required = (m.n.ceil() as usize) + MOMENT_MARGIN;
    if required > state.cutoff() {
        return Err(Error::Cutoff {
            cutoff: state.cutoff(),
            required,
        });
    }
    Ok(())
}

fn variance_from(m: &FockMoments, lambda: f64) -> f64 {
    let phase = Complex64::from_polar(1.0, -lambda);
    let mean = (phase * m.a).re;
    0.25 * (1.0 + 2.0 * m.n + 2.0 * (phase * phase * m.a2).re) - mean * mean
}

/// `Var(x_λ)` with `x_λ = (a e^{−iλ} + a† e^{iλ})/2`.
pub fn quadrature_variance(state: &FockVector, lambda: f64) -> Result<f64> {
    let m = state.moments();
    check_moment_margin(state, &m)?;
    Ok(variance_from(&m, lambda).max(0.0))
}

/// `(λ*, Var(x_λ*))` maximizing the quadrature variance over `[−π/2, π/2)`.
pub fn best_quadrature(state: &FockVector) -> Result<(f64, f64)> {
    let m = state.moments();
    check_moment_margin(state, &m)?;
    let (lambda, var) = maximize_periodic(
        |l| variance_from(&m, l),
        -std::f64::consts::FRAC_PI_2,
        std::f64::consts::PI,
        LAMBDA_GRID,
    );
    Ok((lambda, var.max(0.0)))
}

/// Displacement metrology of one collapsed outcome `|cat±⟩^⊗N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeMetrology {
    pub parity: Parity,
    pub mean_photons: f64,
    pub mandel_q: f64,
    pub lambda_star: f64,
    pub variance: f64,
    pub qfi_per_mode: f64,
    pub qfi_total: f64,
    pub qcrb: f64,
}

/// What survives a CM applied to `(|cat+⟩^⊗N + |cat−⟩^⊗N)/√2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HcsReport {
    pub alpha: f64,
    pub n: usize,
    pub cutoff: usize,
    /// `⟨cat+|cat−⟩`; zero, so the CM projects onto the branches.
    pub branch_overlap: f64,
    /// Each outcome occurs with this probability.
    pub outcome_probability: f64,
    pub outcomes: [OutcomeMetrology; 2],
}

impl HcsReport {
    pub fn outcome(&self, parity: Parity) -> &OutcomeMetrology {
        match parity {
            Parity::Even => &self.outcomes[0],
            Parity::Odd => &self.outcomes[1],
        }
    }
}

fn outcome_metrology(cat: &FockVector, parity: Parity, n: usize) -> Result<OutcomeMetrology> {
    let (lambda_star, variance) = best_quadrature(cat)?;
    let qfi_per_mode = 4.0 * variance;
    let qfi_total = n as f64 * qfi_per_mode;
    Ok(OutcomeMetrology {
        parity,
        mean_photons: cat.moments().n,
        mandel_q: mandel_q(cat)?,
        lambda_star,
        variance,
        qfi_per_mode,
        qfi_total,
        qcrb: 1.0 / qfi_total.sqrt(),
    })
}

pub fn hcs_collapse_report(alpha: f64, n: usize, cutoff: usize) -> Result<HcsReport> {
    if n == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            allowed: "N >= 1",
        });
    }
    let even = cat_vector(alpha, Parity::Even, cutoff)?;
    let odd = cat_vector(alpha, Parity::Odd, cutoff)?;
    let overlap = even.inner(&odd);
    Ok(HcsReport {
        alpha,
        n,
        cutoff,
        branch_overlap: overlap.norm(),
        outcome_probability: 0.5,
        outcomes: [
            outcome_metrology(&even, Parity::Even, n)?,
            outcome_metrology(&odd, Parity::Odd, n)?,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    #[test]
    fn vacuum() {
        let v = coherent_vector(c(0.0), 25).unwrap();
        assert_eq!(v.amplitudes()[0], c(1.0));
        assert!(v.amplitudes().iter().skip(1).all(|a| *a == c(0.0)));
        for l in [0.0, 0.7, 2.0] {
            assert!((quadrature_variance(&v, l).unwrap() - 0.25).abs() < 1e-15);
        }
        assert_eq!(mandel_q(&v), Err(Error::UndefinedMandelQ));
    }

    #[test]
    fn coherent_overlap_and_mean() {
        let plus = coherent_vector(c(1.0), 40).unwrap();
        let minus = coherent_vector(c(-1.0), 40).unwrap();
        let z = plus.inner(&minus);
        assert!((z.re - (-2.0f64).exp()).abs() < 1e-10);
        assert!((z.re - 0.135_335_283_236_612_7).abs() < 1e-10);
        let alpha = Complex64::new(1.2, -0.7);
        let v = coherent_vector(alpha, 60).unwrap();
        assert!((v.moments().n - alpha.norm_sqr()).abs() < 1e-10);
        assert!((mandel_q(&v).unwrap()).abs() < 1e-9);
        for l in [0.0, 0.4, -1.3] {
            assert!((quadrature_variance(&v, l).unwrap() - 0.25).abs() < 1e-10);
        }
    }

    #[test]
    fn cutoff_adequacy() {
        assert_eq!(
            coherent_vector(c(2.0), 40),
            Err(Error::Cutoff {
                cutoff: 40,
                required: 41
            })
        );
        assert!(coherent_vector(c(2.0), 41).is_ok());
        assert!(coherent_leakage(c(2.0), 41) < MAX_LEAKAGE);
        assert!(cat_vector(0.0, Parity::Even, 40).is_err());
        assert!(cat_vector(-1.0, Parity::Even, 40).is_err());
    }

    #[test]
    fn leakage_matches_partial_sum() {
        let alpha = c(1.5);
        let cut = 8;
        let kept: f64 = (0..=cut)
            .map(|n| {
                let mut p = (-alpha.norm_sqr()).exp();
                for k in 1..=n {
                    p *= alpha.norm_sqr() / k as f64;
                }
                p
            })
            .sum();
        assert!((coherent_leakage(alpha, cut) - (1.0 - kept)).abs() < 1e-14);
    }

    #[test]
    fn parity_sectors() {
        for &alpha in &[0.3, 1.0, 2.5] {
            let even = cat_vector(alpha, Parity::Even, 60).unwrap();
            let odd = cat_vector(alpha, Parity::Odd, 60).unwrap();
            for n in 0..=60 {
                let (wrong_even, wrong_odd) = if n % 2 == 1 {
                    (even.amplitudes()[n], c(0.0))
                } else {
                    (c(0.0), odd.amplitudes()[n])
                };
                assert!(wrong_even.norm() < 1e-14);
                assert!(wrong_odd.norm() < 1e-14);
            }
            assert!(even.inner(&odd).norm() < 1e-12);
        }
    }

    #[test]
    fn cat_matches_normalized_superposition() {
        let alpha = 1.3;
        let plus = coherent_vector(c(alpha), 40).unwrap();
        let minus = coherent_vector(c(-alpha), 40).unwrap();
        let e2 = (-2.0 * alpha * alpha).exp();
        for (parity, sign) in [(Parity::Even, 1.0), (Parity::Odd, -1.0)] {
            let direct = (plus.amplitudes() + minus.amplitudes() * c(sign))
                * c(1.0 / (2.0 + 2.0 * sign * e2).sqrt());
            let cat = cat_vector(alpha, parity, 40).unwrap();
            assert!((direct - cat.amplitudes()).camax() < 1e-12);
        }
    }

    #[test]
    fn even_cat_mean_number() {
        // ⟨n⟩ = α² tanh α² for the even cat
        let cat = cat_vector(2.0, Parity::Even, 60).unwrap();
        assert!((cat.moments().n - 4.0 * 4f64.tanh()).abs() < 1e-10);
        let odd = cat_vector(2.0, Parity::Odd, 60).unwrap();
        assert!((odd.moments().n - 4.0 / 4f64.tanh()).abs() < 1e-10);
    }

    #[test]
    fn even_cat_regression() {
        let cat = cat_vector(1.0, Parity::Even, 40).unwrap();
        // 1 + Q = ⟨n²⟩/⟨n⟩ − ⟨n⟩ with ⟨n⟩ = tanh 1 and ⟨n²⟩ = 1 + tanh 1
        let t = 1f64.tanh();
        let expected = (1.0 + t) / t - t - 1.0;
        let q = mandel_q(&cat).unwrap();
        assert!((q - expected).abs() < 1e-10);
        assert!((q - 0.551_441_129_543_566_9).abs() < 1e-10, "{q}");
    }

    #[test]
    fn number_states() {
        for n in 1..6 {
            let f = fock_vector(n, 20).unwrap();
            assert!((mandel_q(&f).unwrap() + 1.0).abs() < 1e-12);
            let var = quadrature_variance(&f, 0.3).unwrap();
            assert!((var - (2.0 * n as f64 + 1.0) / 4.0).abs() < 1e-12);
        }
        assert!(fock_vector(5, 4).is_err());
        assert!(quadrature_variance(&fock_vector(18, 20).unwrap(), 0.0).is_err());
    }

    #[test]
    fn moments_two_ways() {
        let states = [
            coherent_vector(Complex64::new(0.8, 1.1), 40).unwrap(),
            cat_vector(2.0, Parity::Even, 50).unwrap(),
            cat_vector(1.7, Parity::Odd, 50).unwrap(),
            fock_vector(4, 12).unwrap(),
        ];
        for s in &states {
            let a = s.moments();
            let b = operator_moments(s);
            assert!((a.n - b.n).abs() < 1e-10);
            assert!((a.n2 - b.n2).abs() < 1e-10);
            assert!((a.a - b.a).norm() < 1e-10);
            assert!((a.a2 - b.a2).norm() < 1e-10);
        }
    }

    #[test]
    fn even_cat_is_super_vacuum() {
        let cat = cat_vector(2.0, Parity::Even, 50).unwrap();
        assert!(quadrature_variance(&cat, 0.0).unwrap() > 0.25);
        let (l, v) = best_quadrature(&cat).unwrap();
        assert!(l.abs() < 1e-8);
        // ¼(1 + 2⟨n⟩ + 2α²) with ⟨n⟩ = α² tanh α²
        assert!((v - 0.25 * (1.0 + 8.0 * 4f64.tanh() + 8.0)).abs() < 1e-10);
    }

    #[test]
    fn hcs_report() {
        let one = hcs_collapse_report(1.5, 1, 40).unwrap();
        assert!(one.branch_overlap < 1e-12);
        for n in [4usize, 9, 16] {
            let r = hcs_collapse_report(1.5, n, 40).unwrap();
            for p in [Parity::Even, Parity::Odd] {
                let ratio = r.outcome(p).qfi_total / one.outcome(p).qfi_total;
                assert!((ratio - n as f64).abs() < 1e-9);
                let q = r.outcome(p).qcrb / one.outcome(p).qcrb;
                assert!((q - 1.0 / (n as f64).sqrt()).abs() < 1e-12);
            }
        }
        assert!(hcs_collapse_report(1.5, 0, 40).is_err());
        assert!(hcs_collapse_report(1.5, 2, 20).is_err());
    }

    #[test]
    fn truncation_stability() {
        let a = hcs_collapse_report(1.5, 3, 40).unwrap();
        let b = hcs_collapse_report(1.5, 3, 50).unwrap();
        for p in [Parity::Even, Parity::Odd] {
            let (x, y) = (a.outcome(p), b.outcome(p));
            assert!((x.qfi_total - y.qfi_total).abs() < 1e-9);
            assert!((x.mandel_q - y.mandel_q).abs() < 1e-9);
            assert!((x.lambda_star - y.lambda_star).abs() < 1e-9);
        }
        let cat = cat_vector(2.0, Parity::Odd, 50).unwrap();
        let wide = cat_vector(2.0, Parity::Odd, 60).unwrap();
        assert!((cat.extend(60).amplitudes() - wide.amplitudes()).camax() < 1e-9);
    }

    proptest! {
        #[test]
        fn coherent_is_minimum_uncertainty(re in -2.0f64..2.0, im in -2.0f64..2.0, l in -3.0f64..3.0) {
            let v = coherent_vector(Complex64::new(re, im), 60).unwrap();
            prop_assert!((quadrature_variance(&v, l).unwrap() - 0.25).abs() < 1e-9);
        }
    }
}
