use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid gas model: {0}")]
    Gas(String),

    #[error("nonpositive density {rho} ({context})")]
    Density { rho: f64, context: &'static str },

    #[error("no shock: normal Mach number {mach} <= 1")]
    NoShock { mach: f64 },

    #[error("shock detached: deflection {alpha} rad >= maximum {alpha_max} rad")]
    Detached { alpha: f64, alpha_max: f64 },

    #[error("vacuum forms: velocity jump {du} >= critical {critical}")]
    Vacuum { du: f64, critical: f64 },

    #[error("nonlinear solve did not converge: {0}")]
    NoConvergence(String),

    #[error("non-finite state in cell ({i}, {j}) at step {step}")]
    NonFinite { i: usize, j: usize, step: usize },

    #[error("step {step}: edge {edge}: {source}")]
    Edge {
        step: usize,
        edge: String,
        #[source]
        source: Box<Error>,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("config line {line}: key `{key}`: {msg}")]
    Config { line: usize, key: String, msg: String },

    #[error("parse: {0}")]
    Parse(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
