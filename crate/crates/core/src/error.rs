use thiserror::Error;

/// Everything that can go wrong while building states, measurements or reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter fell outside the domain of the construction.
    #[error("{name} = {value} is outside the allowed domain {allowed}")]
    Domain {
        name: &'static str,
        value: f64,
        allowed: &'static str,
    },

    /// The branches are (numerically) identical, so the collapsing measurement is undefined.
    #[error("singular measurement: branch overlap {overlap} is too close to 1")]
    SingularMeasurement { overlap: f64 },

    /// Two-branch states built over different (N, z) cannot be combined.
    #[error("incompatible two-branch states: (N={n_a}, z={z_a}) vs (N={n_b}, z={z_b})")]
    Incompatible {
        n_a: usize,
        z_a: f64,
        n_b: usize,
        z_b: f64,
    },

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    /// The Gram matrix has a (near) zero eigenvalue.
    #[error("input states are linearly dependent (smallest Gram eigenvalue {min_eigenvalue:e})")]
    LinearDependence { min_eigenvalue: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Fock truncation too small for the requested state.
    #[error("cutoff {cutoff} is inadequate (needs at least {required})")]
    Cutoff { cutoff: usize, required: usize },

    #[error("Mandel Q is undefined for a state with zero mean photon number")]
    UndefinedMandelQ,

    /// Dense oracle refused a register that would not fit in memory.
    #[error("N = {n} exceeds the dense limit of {max} modes")]
    TooLarge { n: usize, max: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("no sign change of the entropy difference on ({lo}, {hi})")]
    NoCrossing { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
