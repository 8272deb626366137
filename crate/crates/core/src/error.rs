use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied parameter lies outside its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("size {size} exceeds the cap {cap}")]
    SizeCap { size: usize, cap: usize },

    /// An input violates an operation's precondition (e.g. a marked set that
    /// is not increasing).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at byte {pos}: {reason}")]
    Parse { pos: usize, reason: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Checks `0 <= p <= 1`.
pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param("p", format!("{p} is not in [0, 1]")))
    }
}

/// Checks `0 < p < 1`.
pub(crate) fn check_open_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::param("p", format!("{p} is not in (0, 1)")))
    }
}
