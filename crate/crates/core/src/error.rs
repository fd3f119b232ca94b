use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("matrix is not symmetric (max |a_ij - a_ji| = {0:e})")]
    NotSymmetric(f64),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("stationary Lyapunov system is singular")]
    SingularSystem,

    #[error("ODE step too coarse: h*|Y| = {0} exceeds 0.1")]
    StepSize(f64),

    #[error("inconsistent symplectic spectrum: discriminant {discriminant:e} for invariant {invariant}")]
    NegativeDiscriminant { discriminant: f64, invariant: f64 },

    #[error("degenerate state: det {block} = {value:e} is not positive")]
    DegenerateState { block: &'static str, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid dissipator: {0}")]
    InvalidDissipator(String),

    #[error("unphysical initial state: nu_- = {nu_minus} < 1/2 (set allow_unphysical_initial to override)")]
    UnphysicalInitial { nu_minus: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("scenario field `{field}`: {reason}")]
    Field { field: String, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io { .. } | Error::Field { .. } => 2,
            _ => 1,
        }
    }
}
