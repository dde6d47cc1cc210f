use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::effective_states::TwoBranchState;
use crate::error::{Error, Result};
use crate::spin_metrology::StateKind;

/// Largest register the oracle materializes as a statevector.
pub const MAX_STATE_MODES: usize = 12;
/// Largest register for which full operator matrices are built.
pub const MAX_OPERATOR_MODES: usize = 10;

/// Full `2^N` statevector; site 0 is the most significant bit of the index.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: DVector<Complex64>,
}

pub(crate) fn check_modes(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            allowed: "N >= 1",
        });
    }
    if n > max {
        return Err(Error::TooLarge { n, max });
    }
    Ok(())
}

impl DenseState {
    /// Wraps amplitudes after normalizing them.
    pub fn from_amplitudes(n: usize, amps: DVector<Complex64>) -> Result<Self> {
        check_modes(n, MAX_STATE_MODES)?;
        if amps.len() != 1 << n {
            return Err(Error::InvalidState(format!(
                "{} amplitudes for {n} modes",
                amps.len()
            )));
        }
        let norm = amps.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidState(format!("dense norm {norm}")));
        }
        Ok(Self {
            n,
            amps: amps / Complex64::from(norm),
        })
    }

    /// `v^⊗N` for a single-mode vector `v`, without normalizing.
    pub fn product_raw(v: [Complex64; 2], n: usize) -> Result<DVector<Complex64>> {
        check_modes(n, MAX_STATE_MODES)?;
        Ok(kron_power(v, n))
    }

    /// `v_0 ⊗ v_1 ⊗ … ⊗ v_{N−1}`.
    pub fn product(vs: &[[Complex64; 2]]) -> Result<Self> {
        check_modes(vs.len(), MAX_STATE_MODES)?;
        let mut amps = DVector::from_element(1, Complex64::from(1.0));
        for v in vs {
            amps = kron(&amps, v);
        }
        Self::from_amplitudes(vs.len(), amps)
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// `‖(A − ⟨A⟩)ψ‖²` for an operator already applied, `a_psi = Aψ`.
    pub fn variance_of(&self, a_psi: &DVector<Complex64>) -> f64 {
        let mean = self.amps.dotc(a_psi);
        (a_psi - &self.amps * mean).norm_squared()
    }
}

fn kron(a: &DVector<Complex64>, v: &[Complex64; 2]) -> DVector<Complex64> {
    DVector::from_fn(a.len() * 2, |i, _| a[i / 2] * v[i % 2])
}

fn kron_power(v: [Complex64; 2], n: usize) -> DVector<Complex64> {
    let mut amps = DVector::from_element(1, Complex64::from(1.0));
    for _ in 0..n {
        amps = kron(&amps, &v);
    }
    amps
}

fn c(x: f64) -> Complex64 {
    Complex64::from(x)
}

/// Members of the qubit family built literally from the product branches
/// `|0⟩^⊗N` and `(cos θ|0⟩ + sin θ|1⟩)^⊗N`.
pub fn dense_superposition(theta: f64, n: usize, which: StateKind) -> Result<DenseState> {
    check_modes(n, MAX_STATE_MODES)?;
    if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain {
            name: "theta",
            value: theta,
            allowed: "(0, pi/2]",
        });
    }
    let p0 = kron_power([c(1.0), c(0.0)], n);
    let p1 = kron_power([c(theta.cos()), c(theta.sin())], n);
    let w = theta.cos().powi(n as i32);
    let (a, b) = match which {
        StateKind::Branch0 => (1.0, 0.0),
        StateKind::Branch1 => (0.0, 1.0),
        StateKind::Superposition => {
            let norm = (2.0 + 2.0 * w).sqrt();
            (1.0 / norm, 1.0 / norm)
        }
        StateKind::OmegaPlus | StateKind::OmegaMinus => {
            let sign = if which == StateKind::OmegaPlus {
                1.0
            } else {
                -1.0
            };
            let d = 2.0 * (1.0 - w * w).sqrt();
            (
                ((1.0 - w).sqrt() - sign * (1.0 + w).sqrt()) / d,
                ((1.0 - w).sqrt() + sign * (1.0 + w).sqrt()) / d,
            )
        }
    };
    DenseState::from_amplitudes(n, p0 * c(a) + p1 * c(b))
}

/// Expands a two-branch state in the product of single-mode frames.
pub fn dense_two_branch(state: &TwoBranchState) -> Result<DenseState> {
    let n = state.modes();
    check_modes(n, MAX_STATE_MODES)?;
    let z = state.z();
    let s = (1.0 - z * z).sqrt();
    let p0 = kron_power([c(1.0), c(0.0)], n);
    let p1 = kron_power([c(z), c(s)], n);
    let amps = p0 * state.c0() + p1 * state.c1();
    let norm = amps.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("dense norm {norm}")));
    }
    Ok(DenseState { n, amps })
}

/// `op` acting on one site.
pub fn apply_site(
    state: &DVector<Complex64>,
    n: usize,
    site: usize,
    op: &Matrix2<Complex64>,
) -> DVector<Complex64> {
    let stride = 1usize << (n - 1 - site);
    let mut out = DVector::zeros(state.len());
    for i in 0..state.len() {
        if i & stride != 0 {
            continue;
        }
        let j = i | stride;
        let (a0, a1) = (state[i], state[j]);
        out[i] = op[(0, 0)] * a0 + op[(0, 1)] * a1;
        out[j] = op[(1, 0)] * a0 + op[(1, 1)] * a1;
    }
    out
}

/// `Σ_i h_i^{(i)} ψ` for one single-site operator per site.
pub fn apply_one_local(
    state: &DenseState,
    hs: &[Matrix2<Complex64>],
) -> Result<DVector<Complex64>> {
    if hs.len() != state.n {
        return Err(Error::InvalidState(format!(
            "{} site operators for {} sites",
            hs.len(),
            state.n
        )));
    }
    let mut out = DVector::zeros(state.amps.len());
    for (site, h) in hs.iter().enumerate() {
        out += apply_site(&state.amps, state.n, site, h);
    }
    Ok(out)
}

/// Full matrix of `Σ_i h_i^{(i)}`.
pub fn one_local_matrix(hs: &[Matrix2<Complex64>]) -> Result<DMatrix<Complex64>> {
    let n = hs.len();
    check_modes(n, MAX_OPERATOR_MODES)?;
    let dim = 1usize << n;
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut e = DVector::zeros(dim);
        e[col] = c(1.0);
        let mut acc = DVector::zeros(dim);
        for (site, h) in hs.iter().enumerate() {
            acc += apply_site(&e, n, site, h);
        }
        out.set_column(col, &acc);
    }
    Ok(out)
}

pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0)),
        Matrix2::new(c(0.0), -i, i, c(0.0)),
        Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0)),
    ]
}

/// Single-site term of `T(ϑ)`: `½(cos ϑ σ_x + sin ϑ σ_z)`.
pub fn zeeman_term(vartheta: f64) -> Matrix2<Complex64> {
    let [x, _, z] = pauli();
    x * c(0.5 * vartheta.cos()) + z * c(0.5 * vartheta.sin())
}

/// `⟨T(ϑ)⟩` and `⟨T(ϑ)²⟩` by direct action on the statevector.
pub fn dense_moments(state: &DenseState, vartheta: f64) -> (f64, f64) {
    let hs = vec![zeeman_term(vartheta); state.n];
    let t_psi = apply_one_local(state, &hs).expect("one term per site");
    let mean = state.amps.dotc(&t_psi).re;
    (mean, t_psi.norm_squared())
}

/// `√Var(T(ϑ))` computed on the statevector.
pub fn dense_deviation(state: &DenseState, vartheta: f64) -> f64 {
    let hs = vec![zeeman_term(vartheta); state.n];
    let t_psi = apply_one_local(state, &hs).expect("one term per site");
    state.variance_of(&t_psi).max(0.0).sqrt()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Projection onto the symmetric subspace, in Dicke amplitudes (index = number of 1s).
pub fn dense_to_dicke(state: &DenseState) -> DVector<Complex64> {
    let n = state.n;
    let mut out = DVector::zeros(n + 1);
    for (i, a) in state.amps.iter().enumerate() {
        out[i.count_ones() as usize] += *a;
    }
    for k in 0..=n {
        out[k] /= binomial(n, k).sqrt();
    }
    out
}

/// Lifts Dicke amplitudes to the full register.
pub fn dicke_to_dense(amps: &DVector<Complex64>) -> Result<DenseState> {
    let n = amps.len() - 1;
    check_modes(n, MAX_STATE_MODES)?;
    let v = DVector::from_fn(1 << n, |i, _| {
        let k = i.count_ones() as usize;
        amps[k] / binomial(n, k).sqrt()
    });
    DenseState::from_amplitudes(n, v)
}

/// Spectral decomposition of `|φ⟩⟨φ| − |Uφ⟩⟨Uφ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct HelstromDecomposition {
    /// Projector for the positive eigenvalue (leans towards `|φ⟩`).
    pub positive: Matrix2<Complex64>,
    /// Projector for the negative eigenvalue (leans towards `U|φ⟩`).
    pub negative: Matrix2<Complex64>,
    /// `(λ+, λ−)`
    pub eigenvalues: (f64, f64),
}

pub fn dense_helstrom(phi: [Complex64; 2], uphi: [Complex64; 2]) -> Result<HelstromDecomposition> {
    let outer = |v: [Complex64; 2]| {
        Matrix2::new(
            v[0] * v[0].conj(),
            v[0] * v[1].conj(),
            v[1] * v[0].conj(),
            v[1] * v[1].conj(),
        )
    };
    for v in [phi, uphi] {
        let norm = v[0].norm_sqr() + v[1].norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("branch vector norm² {norm}")));
        }
    }
    let diff = outer(phi) - outer(uphi);
    let eig = diff.symmetric_eigen();
    let (ip, ineg) = if eig.eigenvalues[0] >= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let (lp, ln) = (eig.eigenvalues[ip], eig.eigenvalues[ineg]);
    if lp - ln < 1e-8 {
        return Err(Error::SingularMeasurement {
            overlap: (phi[0].conj() * uphi[0] + phi[1].conj() * uphi[1]).norm(),
        });
    }
    let proj = |i: usize| {
        let v = eig.eigenvectors.column(i);
        outer([v[0], v[1]])
    };
    Ok(HelstromDecomposition {
        positive: proj(ip),
        negative: proj(ineg),
        eigenvalues: (lp, ln),
    })
}

/// Reduced density matrix of one site.
pub fn reduced_site(state: &DenseState, site: usize) -> Matrix2<Complex64> {
    let stride = 1usize << (state.n - 1 - site);
    let mut rho = Matrix2::zeros();
    for i in 0..state.amps.len() {
        let bi = usize::from(i & stride != 0);
        let rest = i & !stride;
        for bj in 0..2 {
            let j = rest | (bj * stride);
            rho[(bi, bj)] += state.amps[i] * state.amps[j].conj();
        }
    }
    rho
}

/// Checks Hermiticity of a dense operator.
pub fn hermiticity_defect(h: &DMatrix<Complex64>) -> f64 {
    (h - h.adjoint()).camax()
}

/// `e^{−iHt}|ψ⟩` via the eigendecomposition of `H`.
pub fn dense_evolve(
    state: &DenseState,
    hamiltonian: &DMatrix<Complex64>,
    t: f64,
) -> Result<DenseState> {
    check_modes(state.n, MAX_OPERATOR_MODES)?;
    if hamiltonian.nrows() != state.amps.len() || !hamiltonian.is_square() {
        return Err(Error::InvalidState("operator dimension mismatch".into()));
    }
    let defect = hermiticity_defect(hamiltonian);
    if defect > 1e-10 {
        return Err(Error::NonHermitian { deviation: defect });
    }
    let eig = hamiltonian.clone().symmetric_eigen();
    let coeffs = eig.eigenvectors.adjoint() * &state.amps;
    let phased = DVector::from_fn(coeffs.len(), |k, _| {
        coeffs[k] * Complex64::from_polar(1.0, -eig.eigenvalues[k] * t)
    });
    Ok(DenseState {
        n: state.n,
        amps: &eig.eigenvectors * phased,
    })
}

/// `⊗_i e^{−i h_i t}` applied site by site.
pub fn evolve_one_local(
    state: &DenseState,
    hs: &[Matrix2<Complex64>],
    t: f64,
) -> Result<DenseState> {
    if hs.len() != state.n {
        return Err(Error::InvalidState("one operator per site required".into()));
    }
    let mut amps = state.amps.clone();
    for (site, h) in hs.iter().enumerate() {
        let defect = (h - h.adjoint()).camax();
        if defect > 1e-12 {
            return Err(Error::NonHermitian { deviation: defect });
        }
        let eig = h.symmetric_eigen();
        let phases = Matrix2::from_diagonal(&nalgebra::Vector2::new(
            Complex64::from_polar(1.0, -eig.eigenvalues[0] * t),
            Complex64::from_polar(1.0, -eig.eigenvalues[1] * t),
        ));
        let u = eig.eigenvectors * phases * eig.eigenvectors.adjoint();
        amps = apply_site(&amps, state.n, site, &u);
    }
    Ok(DenseState { n: state.n, amps })
}
