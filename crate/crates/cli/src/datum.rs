//! Datum files: a polynomial and unit generators given exactly.
//!
//! ```toml
//! label = "cubic"
//! poly = ["-1", "-1", "0", "1"]     # ascending, monic
//! units = [["0", "1", "0"]]         # power-basis coordinates
//! precision_bits = 256              # optional
//! note = "free text"                # optional
//! ```
//!
//! Numbers are integers or strings holding integers or fractions `a/b`.
//! Floating-point values are rejected.

use std::path::Path;

use rug::{Integer, Rational};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    label: String,
    poly: Vec<Num>,
    units: Vec<Vec<Num>>,
    precision_bits: Option<u32>,
    note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct DatumFile {
    pub label: String,
    pub poly: Vec<Integer>,
    pub units: Vec<Vec<Rational>>,
    pub precision_bits: Option<u32>,
    pub note: Option<String>,
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("DatumFile: field `{field}`: {msg}"))
}

fn to_rational(n: &Num, field: &str) -> Result<Rational, CliError> {
    match n {
        Num::Int(v) => Ok(Rational::from(*v)),
        Num::Float(v) => Err(field_err(field, format!("{v} is a float; write exact integers or fractions"))),
        Num::Text(s) => {
            let s = s.trim();
            if s.contains(['.', 'e', 'E']) {
                return Err(field_err(field, format!("{s:?} is not an exact integer or fraction")));
            }
            let q = Rational::from_str_radix(s, 10).map_err(|_| field_err(field, format!("cannot read {s:?}")))?;
            Ok(q)
        }
    }
}

fn to_integer(n: &Num, field: &str) -> Result<Integer, CliError> {
    let q = to_rational(n, field)?;
    if *q.denom() != 1 {
        return Err(field_err(field, format!("{q} is not an integer")));
    }
    Ok(q.numer().clone())
}

impl DatumFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawDatum = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            CliError::Validation(format!("DatumFile: {msg}"))
        })?;
        let poly = raw.poly.iter().map(|n| to_integer(n, "poly")).collect::<Result<Vec<_>, _>>()?;
        let units = raw
            .units
            .iter()
            .map(|u| u.iter().map(|n| to_rational(n, "units")).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if poly.len() < 4 {
            return Err(field_err("poly", "degree must be at least 3"));
        }
        if let Some(b) = raw.precision_bits {
            if !(64..=4096).contains(&b) {
                return Err(field_err("precision_bits", format!("{b} is outside 64..=4096")));
            }
        }
        Ok(DatumFile { label: raw.label, poly, units, precision_bits: raw.precision_bits, note: raw.note })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_strings_and_integers() {
        let d = DatumFile::parse("label = \"x\"\npoly = [-1, \"-1\", 0, 1]\nunits = [[\"1/2\", 0, \"3\"]]\n").unwrap();
        assert_eq!(d.poly.len(), 4);
        assert_eq!(d.units[0][0], Rational::from((1, 2)));
        assert_eq!(d.precision_bits, None);
    }

    #[test]
    fn floats_are_rejected_with_the_field_name() {
        let e = DatumFile::parse("label = \"x\"\npoly = [-1, -1, 0, 1]\nunits = [[\"0.5\", 0, 0]]\n").unwrap_err();
        assert!(e.to_string().contains("units"), "{e}");
        let e = DatumFile::parse("label = \"x\"\npoly = [-1, -1, 0, 1.0]\nunits = []\n").unwrap_err();
        assert!(e.to_string().contains("poly"), "{e}");
    }

    #[test]
    fn missing_field_is_named() {
        let e = DatumFile::parse("label = \"x\"\nunits = []\n").unwrap_err();
        assert!(e.to_string().contains("poly"), "{e}");
    }
}
