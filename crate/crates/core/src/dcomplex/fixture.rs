//! Plain-text fixture format for double complexes.
//!
//! ```text
//! # comment
//! mode exact                  (or: mode float <bits>)
//! gen <label> <p> <q>         basis vector of A^{p,q}, in order
//! d1 <src> <dst> <re> [<im>]  matrix entry of d1 from src to dst
//! d2 <src> <dst> <re> [<im>]
//! expect odd <d> <p> <q> <mult>
//! expect even column|row <r> <p> <q> <mult>
//! expect square <p> <q> <mult>
//! ```
//!
//! Exact entries are rationals such as `-3/4`; float entries are
//! decimals. Exact fixtures round-trip bit for bit.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::complex::{build_double_complex, DoubleComplex};
use super::linalg::LinAlg;
use super::matrix::Matrix;
use super::scalar::{Field, GaussRat, MpC};
use super::shape::{Bidegree, Orientation};
use super::zigzag::ZigzagDecomposition;
use super::DcError;
use crate::precision::Precision;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float(Precision),
}

/// Expected multiplicities, in the keys used by `ZigzagDecomposition`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub odd: BTreeMap<(i32, i32, i32), usize>,
    pub even: BTreeMap<(Orientation, i32, i32, i32), usize>,
    pub squares: BTreeMap<Bidegree, usize>,
}

impl Manifest {
    pub fn from_decomposition(z: &ZigzagDecomposition) -> Self {
        Manifest { odd: z.odd.clone(), even: z.even.clone(), squares: z.squares.clone() }
    }

    pub fn matches(&self, z: &ZigzagDecomposition) -> bool {
        *self == Self::from_decomposition(z)
    }

    pub fn is_empty(&self) -> bool {
        self.odd.is_empty() && self.even.is_empty() && self.squares.is_empty()
    }
}

pub trait FixtureScalar: LinAlg {
    fn mode_line(ctx: &Self::Ctx) -> String;
}

impl FixtureScalar for GaussRat {
    fn mode_line(_: &()) -> String {
        "mode exact".into()
    }
}

impl FixtureScalar for MpC {
    fn mode_line(ctx: &Precision) -> String {
        format!("mode float {}", ctx.bits())
    }
}

pub struct Fixture<S: Field> {
    pub complex: DoubleComplex<S>,
    pub expected: Option<Manifest>,
}

fn err(line: usize, msg: impl Into<String>) -> DcError {
    DcError::Parse { line, msg: msg.into() }
}

/// Reads only the mode line.
pub fn read_mode(text: &str) -> Result<Mode, DcError> {
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        let w: Vec<&str> = line.split_whitespace().collect();
        if w.first() == Some(&"mode") {
            return match w.as_slice() {
                ["mode", "exact"] => Ok(Mode::Exact),
                ["mode", "float", bits] => {
                    let b: u32 = bits.parse().map_err(|_| err(n + 1, "bad precision"))?;
                    Ok(Mode::Float(Precision::new(b)))
                }
                _ => Err(err(n + 1, "unknown mode")),
            };
        }
    }
    Err(err(0, "missing mode line"))
}

fn num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, DcError> {
    s.parse().map_err(|_| err(line, format!("not a number: {s:?}")))
}

pub fn parse_fixture<S: LinAlg>(text: &str, ctx: S::Ctx) -> Result<Fixture<S>, DcError> {
    let mut labels: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
    let mut index: HashMap<String, (Bidegree, usize)> = HashMap::new();
    let mut entries: Vec<(usize, bool, String, String, S)> = vec![];
    let mut manifest = Manifest::default();
    let mut has_expect = false;
    for (n, raw) in text.lines().enumerate() {
        let ln = n + 1;
        let line = raw.split('#').next().unwrap().trim();
        let w: Vec<&str> = line.split_whitespace().collect();
        match w.as_slice() {
            [] | ["mode", ..] => {}
            ["gen", label, p, q] => {
                let b = (num(p, ln)?, num(q, ln)?);
                let list = labels.entry(b).or_default();
                if index.insert(label.to_string(), (b, list.len())).is_some() {
                    return Err(err(ln, format!("duplicate label {label}")));
                }
                list.push(label.to_string());
            }
            [which @ ("d1" | "d2"), src, dst, rest @ ..] if !rest.is_empty() && rest.len() <= 2 => {
                let im = rest.get(1).copied().unwrap_or("0");
                let v = S::parse(rest[0], im, &ctx).map_err(|m| err(ln, m))?;
                entries.push((ln, *which == "d1", src.to_string(), dst.to_string(), v));
            }
            ["expect", "odd", d, p, q, m] => {
                has_expect = true;
                manifest.odd.insert((num(d, ln)?, num(p, ln)?, num(q, ln)?), num(m, ln)?);
            }
            ["expect", "even", o, r, p, q, m] => {
                has_expect = true;
                let o = match *o {
                    "column" => Orientation::Column,
                    "row" => Orientation::Row,
                    _ => return Err(err(ln, "orientation must be column or row")),
                };
                manifest.even.insert((o, num(r, ln)?, num(p, ln)?, num(q, ln)?), num(m, ln)?);
            }
            ["expect", "square", p, q, m] => {
                has_expect = true;
                manifest.squares.insert((num(p, ln)?, num(q, ln)?), num(m, ln)?);
            }
            _ => return Err(err(ln, format!("unrecognized line {line:?}"))),
        }
    }
    let mut d1: BTreeMap<Bidegree, Matrix<S>> = BTreeMap::new();
    let mut d2: BTreeMap<Bidegree, Matrix<S>> = BTreeMap::new();
    for (ln, is_d1, src, dst, v) in entries {
        let &(sb, si) = index.get(&src).ok_or_else(|| err(ln, format!("unknown label {src}")))?;
        let &(tb, ti) = index.get(&dst).ok_or_else(|| err(ln, format!("unknown label {dst}")))?;
        let want = if is_d1 { (sb.0 + 1, sb.1) } else { (sb.0, sb.1 + 1) };
        if tb != want {
            return Err(err(ln, format!("{src} -> {dst} does not raise the right degree")));
        }
        let map = if is_d1 { &mut d1 } else { &mut d2 };
        let m = map
            .entry(sb)
            .or_insert_with(|| Matrix::zeros(labels[&tb].len(), labels[&sb].len(), &ctx));
        m.set(ti, si, v);
    }
    let complex = build_double_complex(labels, d1, d2, ctx)?;
    Ok(Fixture { complex, expected: has_expect.then_some(manifest) })
}

pub fn write_fixture<S: FixtureScalar>(c: &DoubleComplex<S>, expected: Option<&Manifest>) -> String {
    let mut out = String::new();
    out.push_str(&S::mode_line(&c.ctx));
    out.push('\n');
    for (b, list) in &c.labels {
        for l in list {
            out.push_str(&format!("gen {l} {} {}\n", b.0, b.1));
        }
    }
    for (name, maps, step) in [("d1", &c.d1, (1, 0)), ("d2", &c.d2, (0, 1))] {
        for (b, m) in maps {
            let t = (b.0 + step.0, b.1 + step.1);
            for j in 0..m.cols {
                for i in 0..m.rows {
                    let v = m.get(i, j);
                    if v.is_exact_zero() {
                        continue;
                    }
                    let (re, im) = v.to_text(&c.ctx);
                    let src = &c.labels[b][j];
                    let dst = &c.labels[&t][i];
                    if im == "0" {
                        out.push_str(&format!("{name} {src} {dst} {re}\n"));
                    } else {
                        out.push_str(&format!("{name} {src} {dst} {re} {im}\n"));
                    }
                }
            }
        }
    }
    if let Some(m) = expected {
        for ((d, p, q), n) in &m.odd {
            out.push_str(&format!("expect odd {d} {p} {q} {n}\n"));
        }
        for ((o, r, p, q), n) in &m.even {
            let o = match o {
                Orientation::Column => "column",
                Orientation::Row => "row",
            };
            out.push_str(&format!("expect even {o} {r} {p} {q} {n}\n"));
        }
        for ((p, q), n) in &m.squares {
            out.push_str(&format!("expect square {p} {q} {n}\n"));
        }
    }
    out
}

/// Same labels and the same matrix entries, compared as text.
pub fn same_complex<S: FixtureScalar>(a: &DoubleComplex<S>, b: &DoubleComplex<S>) -> bool {
    write_fixture(a, None) == write_fixture(b, None)
}
