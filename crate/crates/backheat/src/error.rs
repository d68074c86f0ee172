//! Error type shared across the crate.

use std::fmt;

/// Where an unfiltered spectral inversion left the representable range.
///
/// Carries the offending mode and the magnitude (base-10 log) of the largest
/// coefficient that the log-space evaluation produced, so callers can report
/// the size of a divergence without ever materialising an infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowUpReport {
    /// Mode (p, q) with the largest log-magnitude.
    pub mode: (usize, usize),
    /// log10 of the largest coefficient magnitude seen.
    pub log10_magnitude: f64,
}

#[derive(Debug)]
pub enum Error {
    /// Bad configuration value or key.
    Config(String),
    /// Requested mode lies at or beyond the grid's alias-free range.
    ModeOutOfRange { p: usize, q: usize, n: usize, m: usize },
    /// Matrix shape does not match the grid.
    ShapeMismatch { expected: (usize, usize), got: (usize, usize) },
    /// Series length does not match the time grid.
    LengthMismatch { expected: usize, got: usize },
    /// A value that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// Scalar argument outside its admissible range.
    OutOfRange { what: &'static str, value: f64 },
    /// Root refinement failed to converge.
    Convergence(&'static str),
    /// Exponent guard tripped: the inversion diverged.
    BlowUp(BlowUpReport),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::ModeOutOfRange { p, q, n, m } => write!(
                f,
                "mode ({p},{q}) out of alias-free range for a {n}x{m} grid (need p<n, q<m)"
            ),
            Error::ShapeMismatch { expected, got } => write!(
                f,
                "shape mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::OutOfRange { what, value } => write!(f, "{what} out of range: {value}"),
            Error::Convergence(what) => write!(f, "iteration failed to converge: {what}"),
            Error::BlowUp(r) => write!(
                f,
                "numerical blow-up at mode ({},{}), magnitude ~1e{:.1}",
                r.mode.0, r.mode.1, r.log10_magnitude
            ),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
