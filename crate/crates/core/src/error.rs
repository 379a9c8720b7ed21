use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range (maximum {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("secant stagnated: f({x_prev}) == f({x_curr})")]
    Stagnation { x_prev: f64, x_curr: f64 },

    #[error("zero derivative at x = {0}")]
    ZeroDerivative(f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("singular spring: nodes {0} and {1} coincide")]
    SingularSpring(usize, usize),

    #[error("CFL limit exceeded: courant number {courant} > 1")]
    Cfl { courant: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("no exact solution supplied")]
    MissingExact,

    #[error("records are not aligned: {0}")]
    Misaligned(String),

    #[error("simulation failed at step {step}: {source}")]
    Simulation {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures that originate in the filesystem rather than the numerics.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::File { .. } | Error::Parse { .. })
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
