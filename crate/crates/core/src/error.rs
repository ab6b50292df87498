use thiserror::Error;

/// Errors raised anywhere in the certified tracking pipeline.
///
/// Arithmetic failures inside a Krawczyk test are reported through this type
/// as well; callers treat them as a failed test, never as a success.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("interval endpoint is not finite")]
    NonFiniteEndpoint,
    #[error("invalid interval: lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvertedInterval { lo: f64, hi: f64 },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is numerically singular")]
    SingularMatrix,
    #[error("degenerate time interval: t0 = {t0} must be below t1 = {t1}")]
    DegenerateTimeInterval { t0: f64, t1: f64 },
    #[error("jacobian is singular at the current iterate")]
    SingularJacobian,
    #[error("newton iteration did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("step size underflow at t = {t} (dt = {dt:e}); path cannot be certified")]
    StepUnderflow { t: f64, dt: f64 },
    #[error("maximum number of steps ({0}) exceeded")]
    MaxStepsExceeded(usize),
    #[error("invalid tracker configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid polynomial system: {0}")]
    InvalidSystem(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("newton homotopy requires m > -1, got {0}")]
    InvalidM(f64),
    #[error("unsupported size {n} (supported range {min}..={max})")]
    UnsupportedN { n: usize, min: usize, max: usize },
    #[error("bootstrap found {found} distinct start solutions, expected {expected}")]
    RootCountMismatch { expected: usize, found: usize },
    #[error("start matrix has a repeated top singular value (gap {gap:e})")]
    DegenerateStart { gap: f64 },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
