use thiserror::Error;

/// Errors raised by the numerical kernels and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A pole of a meromorphic function was hit exactly; carries the location.
    #[error("pole at s = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("precision error: {0}")]
    Precision(String),

    #[error("underflow: {0}")]
    Underflow(String),

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("contour passes through a zero: {0}")]
    Contour(String),

    #[error("simplicity violation: |L'(rho)| = {derivative_abs:e} at gamma = {gamma}")]
    SimplicityViolation { gamma: f64, derivative_abs: f64 },

    #[error("zeros unavailable: {0}")]
    MissingZeros(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation failure: {0}")]
    Validation(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn pole(s: num_complex::Complex64) -> Self {
        Error::Pole { re: s.re, im: s.im }
    }
}
