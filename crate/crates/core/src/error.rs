use thiserror::Error;

/// Failures reported by every fallible operation of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("state cap of {cap} exceeded during {during}")]
    StateCap { cap: usize, during: &'static str },
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("inconclusive at budget {0}")]
    Inconclusive(usize),
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
