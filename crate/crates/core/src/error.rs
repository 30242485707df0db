use thiserror::Error;

/// Errors surfaced by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate simplex or polytope: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unimodularity violated: generator {index} has determinant {det}")]
    NotUnimodular { index: usize, det: String },

    #[error("negative entry in {what} {index} at ({row}, {col})")]
    NegativeEntry {
        what: &'static str,
        index: usize,
        row: usize,
        col: usize,
    },

    #[error("generator {index} has a column sum below 1; norm-cap pruning would be unsound")]
    ColumnSumTooSmall { index: usize },

    #[error("hole matrix {index}: |det| = {det} differs from 1 by more than 1e-12")]
    HoleDeterminant { index: usize, det: f64 },

    #[error("malformed configuration: {0}")]
    Config(String),

    #[error("tiling hypotheses failed: {0}")]
    Tiling(String),

    #[error("invalid pruning policy: {0}")]
    Policy(String),

    #[error("interval [{lo}, {hi}] does not bracket a root (growth {g_lo:.6} and {g_hi:.6})")]
    NonBracketing { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("depth {depth} too small, need at least {min}")]
    DepthTooSmall { depth: usize, min: usize },

    #[error("norm-cap schedule must be strictly increasing with at least 4 points")]
    ScheduleTooShort,

    #[error("singular value computation did not converge")]
    SvdFailure,

    #[error("linear program infeasible or unbounded: {0}")]
    LpFailure(String),

    #[error("quadrature did not reach tolerance {tolerance:e} within {evaluations} evaluations")]
    QuadratureBudget { tolerance: f64, evaluations: usize },

    #[error("box-count calibration failed: {0}")]
    Calibration(String),

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
