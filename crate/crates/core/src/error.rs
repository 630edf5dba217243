use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("insufficient data: need at least {needed} entries, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("syntax error at byte {offset}: expected {}", expected.join(" | "))]
    Syntax { offset: usize, expected: Vec<String> },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("exponent p = {0} outside the admissible range")]
    BadExponent(f64),
    #[error("the inverse square root of the areal coefficient is not integrable at r = {0}")]
    NonIntegrableThroat(f64),
    #[error("metric is p-parabolic for p = {0}: the capacitary integral diverges")]
    ParabolicMetric(f64),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("area profile is not asymptotically large: {0}")]
    NotAsymptoticallyLarge(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
