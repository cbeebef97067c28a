//! Batch front end: datum files in, JSON or Markdown reports out.

pub mod analyze;
pub mod datum;
pub mod report;
pub mod search;
pub mod tools;

use std::fmt::Debug;

use otlab_core::polyfield::PolyError;
use otlab_core::units::UnitError;
use thiserror::Error;

pub use analyze::{analyze, Outcome, Status};
pub use datum::DatumFile;

pub const DEFAULT_BITS: u32 = 256;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: exit 2.
    #[error("{0}")]
    Validation(String),
    /// Formula and direct computation disagree: exit 3.
    #[error("{0}")]
    Mismatch(String),
    /// A numeric decision fell in the refusal band: exit 4.
    #[error("{0}")]
    Ambiguous(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Mismatch(_) => 3,
            CliError::Ambiguous(_) => 4,
        }
    }
}

/// `Enum::Variant` taken from the Debug form of an error value.
pub fn error_name<E: Debug>(family: &str, e: &E) -> String {
    let dbg = format!("{e:?}");
    let variant: String = dbg.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
    format!("{family}::{variant}")
}

pub fn poly_error(e: PolyError) -> CliError {
    let msg = format!("{}: {e}", error_name("PolyError", &e));
    match e {
        PolyError::AmbiguousNumeric(_) => CliError::Ambiguous(msg),
        _ => CliError::Validation(msg),
    }
}

pub fn unit_error(e: UnitError) -> CliError {
    match e {
        UnitError::Poly(p) => poly_error(p),
        UnitError::AmbiguousNumeric(_) => CliError::Ambiguous(format!("{}: {e}", error_name("UnitError", &e))),
        _ => CliError::Validation(format!("{}: {e}", error_name("UnitError", &e))),
    }
}

/// Precision from, in order: the command line, the datum file, the
/// OTLAB_PRECISION variable, the default.
pub fn resolve_bits(flag: Option<u32>, file: Option<u32>) -> Result<u32, CliError> {
    if let Some(b) = flag.or(file) {
        return check_bits(b);
    }
    match std::env::var("OTLAB_PRECISION") {
        Ok(v) => {
            let b: u32 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("OTLAB_PRECISION: cannot read {v:?} as a bit count")))?;
            check_bits(b)
        }
        Err(_) => Ok(DEFAULT_BITS),
    }
}

fn check_bits(b: u32) -> Result<u32, CliError> {
    if (64..=4096).contains(&b) {
        Ok(b)
    } else {
        Err(CliError::Validation(format!("precision {b} is outside 64..=4096")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_names_come_from_the_variant() {
        assert_eq!(error_name("PolyError", &PolyError::NotSquarefree), "PolyError::NotSquarefree");
        let e = UnitError::WrongRank { got: 2, expected: 1 };
        assert_eq!(error_name("UnitError", &e), "UnitError::WrongRank");
    }

    #[test]
    fn flag_beats_file() {
        assert_eq!(resolve_bits(Some(128), Some(512)).unwrap(), 128);
        assert_eq!(resolve_bits(None, Some(512)).unwrap(), 512);
        assert!(resolve_bits(Some(8), None).is_err());
    }
}
