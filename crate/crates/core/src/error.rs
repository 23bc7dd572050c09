//! Error type shared across the crate.

use std::fmt;

/// Errors surfaced by fallible operations.
///
/// Pure-arithmetic contract violations (division by zero, mismatched field
/// contexts) panic instead; these variants cover input validation and
/// resource limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller-supplied parameter is invalid (non-prime p, zero extension
    /// degree, malformed range, unparseable text).
    InvalidArgument(String),
    /// An enumeration or precision budget would be exceeded.
    BudgetExceeded(String),
    /// A requested quantity does not fit the configured integer or degree
    /// widths (q^n overflow, unstorable polynomial degree).
    Overflow(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::BudgetExceeded(msg) => write!(f, "budget exceeded: {msg}"),
            Error::Overflow(msg) => write!(f, "overflow: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
