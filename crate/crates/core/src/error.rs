use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("index {index:?} is outside the interior of a {shape:?} grid")]
    Index {
        index: (usize, usize),
        shape: (usize, usize),
    },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("integration exceeded the step budget of {max_steps} at parameter {at}")]
    MaxSteps { max_steps: usize, at: f64 },

    #[error("step size underflow at parameter {at}")]
    StepUnderflow { at: f64 },

    #[error(
        "quadrature did not converge within {max_evals} evaluations (estimated error {error:e})"
    )]
    NoConvergence { max_evals: usize, error: f64 },

    #[error(
        "quadrature window excludes significant mass (tail estimate {tail:e}, integral {value:e})"
    )]
    TruncatedMass { tail: f64, value: f64 },

    #[error("unsupported {kind} separation (tau^2 = {tau_sq:e}); only time-like separations are supported")]
    UnsupportedSeparation { kind: &'static str, tau_sq: f64 },

    #[error("initial point violates the mass-shell constraint (normalized residual {residual:e})")]
    OffConstraint { residual: f64 },

    #[error("backward-in-time branch (dt/ds = {dt_ds}) is not supported")]
    BackwardBranch { dt_ds: f64 },

    #[error("time is not strictly increasing along the trajectory at sample {index}")]
    NonMonotoneTime { index: usize },

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("field configuration is not supported on this grid layout: {0}")]
    UnsupportedField(String),

    #[error("square-root argument {radicand:e} inside the Hamiltonian is negative")]
    HamiltonianDomain { radicand: f64 },

    #[error(
        "trajectory sampling too sparse for the action quadrature (estimated error {error:e})"
    )]
    TooSparse { error: f64 },

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
