use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use remnant::collapse::{
    cm_single, helstrom_success_probability, mary_cm, symmetric_gram, MaryOutcome,
};
use remnant::dynamics::{overlap_sweep, speed_limit_trial};
use remnant::effective_states::overlap_grid;
use remnant::entanglement::entropy_sweep;
use remnant::optimize::linspace;
use remnant::oracle::verify;
use remnant::photonic::hcs_collapse_report;
use remnant::spin_metrology::{deviation_sweep, theta_grid, vartheta_grid};

use crate::number::format_sig;
use crate::EXIT_USAGE;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Library(#[from] remnant::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("bad input: {0}")]
    Input(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("{0} of {1} verification checks failed")]
    Verification(usize, usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(_) => 2,
            CliError::Verification(..) => 3,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => 65,
            CliError::Io(_) => 74,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

/// Writes `bytes` to `path` or standard output.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(bytes).and_then(|_| out.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn write_csv<const K: usize>(
    path: Option<&Path>,
    header: [&str; K],
    rows: impl Iterator<Item = [f64; K]>,
) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.map(format_sig))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?;
    emit(path, &bytes)
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(io::Error::other)?;
    bytes.push(b'\n');
    emit(path, &bytes)
}

fn positive(name: &str, value: usize) -> Result<(), CliError> {
    if value == 0 {
        return Err(CliError::Usage(format!("--{name} must be at least 1")));
    }
    Ok(())
}

pub fn fig1(n: usize, thetas: usize, varthetas: usize, out: Option<&Path>) -> Result<(), CliError> {
    positive("n", n)?;
    positive("theta-grid", thetas)?;
    positive("vartheta-grid", varthetas)?;
    let rows = deviation_sweep(n, &theta_grid(thetas), &vartheta_grid(varthetas))?;
    write_csv(
        out,
        ["theta", "vartheta", "dev_superposition", "dev_collapsed"],
        rows.iter()
            .map(|r| [r.theta, r.vartheta, r.dev_superposition, r.dev_collapsed]),
    )
}

pub fn fig2(
    n: usize,
    omega: f64,
    zs: usize,
    ts: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    positive("z-grid", zs)?;
    positive("t-grid", ts)?;
    let times = linspace(0.0, std::f64::consts::PI, ts);
    let rows = overlap_sweep(n, omega, &overlap_grid(zs), &times)?;
    write_csv(
        out,
        ["z", "omega_t", "f_re", "f_im", "f_abs"],
        rows.iter()
            .map(|r| [r.z, r.omega_t, r.f_re, r.f_im, r.f_abs]),
    )
}

pub fn fig3(zs: usize, out: Option<&Path>) -> Result<(), CliError> {
    positive("z-grid", zs)?;
    let rows = entropy_sweep(&overlap_grid(zs))?;
    write_csv(
        out,
        ["z", "s_psi", "s_omega_plus"],
        rows.iter().map(|r| [r.z, r.s_psi, r.s_omega_plus]),
    )
}

fn read_gram(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn cm(
    z: Option<f64>,
    m: Option<usize>,
    gram: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let gram = match (z, m, gram) {
        (_, _, Some(path)) => {
            let rows = read_gram(path)?;
            let size = rows.len();
            if rows.iter().any(|r| r.len() != size) {
                return Err(CliError::Input("Gram matrix must be square".into()));
            }
            rows::to_matrix(&rows)
        }
        (Some(z), Some(m), None) => symmetric_gram(m, z),
        (Some(z), None, None) => return binary_cm(z, out),
        (None, _, None) => return Err(CliError::Usage("cm needs --z or --gram".into())),
    };
    let report = match mary_cm(&gram)? {
        MaryOutcome::Satisfied(set) => json!({
            "kind": "m_ary",
            "m": set.m(),
            "satisfied": true,
            "residuals": set.residuals(),
            "gram": rows::from_matrix(set.gram()),
            "coefficients": rows::from_matrix(set.coefficients()),
            "overlaps": rows::from_matrix(&set.overlaps()),
        }),
        MaryOutcome::Unsatisfied(residuals) => json!({
            "kind": "m_ary",
            "m": gram.nrows(),
            "satisfied": false,
            "residuals": residuals,
            "gram": rows::from_matrix(&gram),
        }),
    };
    write_json(out, &report)
}

fn binary_cm(z: f64, out: Option<&Path>) -> Result<(), CliError> {
    let cm = cm_single(z)?;
    let report = json!({
        "kind": "binary",
        "z": z,
        "xi_plus": cm.xi_plus(),
        "xi_minus": cm.xi_minus(),
        "projector_plus": rows::from_matrix2(&cm.projector_plus()),
        "projector_minus": rows::from_matrix2(&cm.projector_minus()),
        "phi_overlap_plus_sq": cm.phi_overlap_plus().powi(2),
        "uphi_overlap_plus_sq": cm.uphi_overlap_plus().powi(2),
        "helstrom_success_probability": helstrom_success_probability(z)?,
        "spectral_residual": cm.spectral_residual(),
    });
    write_json(out, &report)
}

pub fn hcs(alpha: f64, n: usize, cutoff: usize, out: Option<&Path>) -> Result<(), CliError> {
    write_json(out, &hcs_collapse_report(alpha, n, cutoff)?)
}

pub fn speedlimit(
    n: usize,
    theta: f64,
    trials: usize,
    seed: u64,
    epsilon: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    write_json(out, &speed_limit_trial(theta, n, trials, epsilon, seed)?)
}

pub fn verify(out: Option<&Path>) -> Result<(), CliError> {
    let checks = verify::run_all()?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    write_json(
        out,
        &json!({
            "passed": failed == 0,
            "checks": checks,
        }),
    )?;
    if failed > 0 {
        return Err(CliError::Verification(failed, checks.len()));
    }
    Ok(())
}

/// Nested rows for JSON.
mod rows {
    use remnant::nalgebra::{DMatrix, Matrix2};

    pub fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
        let n = rows.len();
        DMatrix::from_fn(n, n, |i, j| rows[i][j])
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
        m.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn from_matrix2(m: &Matrix2<f64>) -> [[f64; 2]; 2] {
        [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
    }
}
