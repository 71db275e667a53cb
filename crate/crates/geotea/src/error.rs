//! Crate-wide error and warning types.
//!
//! Errors are grouped by what the caller should do about them: `Domain` and
//! `Config` mean the inputs must change, `Undefined` means the inputs are
//! legal but the requested quantity does not exist for them (for example an
//! IRR that has no root, or an LCOE over a zero-energy series), and `Parse`
//! and `Io` wrap file-level failures. The CLI maps these onto distinct exit
//! codes; see `main.rs`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or financial precondition was violated (negative depth,
    /// discount rate at or below -100%, production colder than injection).
    #[error("{0}")]
    Domain(String),

    /// A project description is malformed or internally inconsistent.
    #[error("{0}")]
    Config(String),

    /// The requested metric does not exist for these inputs.
    #[error("{0}")]
    Undefined(String),

    /// A file could not be parsed into a project description.
    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn undefined(msg: impl Into<String>) -> Self {
        Error::Undefined(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// A non-fatal validation finding: the value is unusual for the modelled
/// setting but the computation is still well defined. Warnings are collected
/// during validation and printed to stderr by the CLI; they never change
/// results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    /// Dotted path of the field the finding refers to, e.g. `site.gradient`.
    pub field: String,
    pub message: String,
}

impl Warning {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Warning {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "warning: {}: {}", self.field, self.message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_display_their_message() {
        let err = Error::domain("depth must be non-negative");
        assert_eq!(err.to_string(), "depth must be non-negative");
        let err = Error::undefined("no positive root");
        assert_eq!(err.to_string(), "no positive root");
    }

    #[test]
    fn warnings_format_with_field_prefix() {
        let w = Warning::new("site.gradient", "outside the typical 20-35 degC/km band");
        assert_eq!(
            w.to_string(),
            "warning: site.gradient: outside the typical 20-35 degC/km band"
        );
    }
}
