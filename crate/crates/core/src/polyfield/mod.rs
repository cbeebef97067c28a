//! Integer polynomials, their complex roots, and the number field they define.

mod modp;
mod poly;
mod roots;

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use thiserror::Error;

use crate::precision::Precision;

pub use modp::{factor_degrees_mod_p, first_primes, is_prime, usable_primes};
pub use poly::{Polynomial, RatPoly};
pub use roots::{classify_roots, find_roots, real_poly_roots, RootSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial is not monic (leading coefficient {0})")]
    NonMonic(String),
    #[error("polynomial must have degree at least 1")]
    DegreeTooSmall,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("root residual {residual:e} exceeds tolerance at {bits} bits")]
    RootResidualTooLarge { residual: f64, bits: u32 },
    #[error("non-real roots do not pair up under conjugation")]
    ConjugatePairing,
    #[error("ambiguous numeric comparison: {0}")]
    AmbiguousNumeric(String),
    #[error("embedding index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("field element has {got} coordinates, expected {expected}")]
    ElementLength { got: usize, expected: usize },
    #[error("no usable primes among those supplied")]
    NoUsablePrimes,
}

pub fn is_squarefree(f: &Polynomial) -> bool {
    let r = RatPoly::new(f.rational_coeffs());
    r.gcd(&r.derivative()).degree() == Some(0)
}

/// A number field Q[x]/(f) together with numerically certified roots.
#[derive(Clone, Debug)]
pub struct FieldDatum {
    pub poly: Polynomial,
    pub roots: RootSet,
    pub s: usize,
    pub t: usize,
    pub precision: Precision,
}

impl FieldDatum {
    pub fn new(poly: Polynomial, precision: Precision) -> Result<Self, PolyError> {
        let roots = find_roots(&poly, precision)?;
        let (s, t) = signature(&roots);
        Ok(FieldDatum { poly, roots, s, t, precision })
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
}

pub fn signature(roots: &RootSet) -> (usize, usize) {
    (roots.s(), roots.t())
}

/// σ_i(elem) for an element given by its power-basis coordinates
/// (ascending), i in 1..=s+2t.
pub fn eval_embedding(field: &FieldDatum, elem: &[Rational], i: usize) -> Result<Complex, PolyError> {
    let n = field.degree();
    if elem.len() != n {
        return Err(PolyError::ElementLength { got: elem.len(), expected: n });
    }
    let bits = field.precision.bits();
    let z = field.roots.embedding(i)?;
    let mut acc = Complex::new(bits);
    for c in elem.iter().rev() {
        acc *= &z;
        acc += Float::with_val(bits, c);
    }
    Ok(acc)
}

fn bareiss_det(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&m[i][j] * &m[k][k]) - Integer::from(&m[i][k] * &m[k][j]);
                m[i][j] = v.div_exact(&prev);
            }
            m[i][k] = Integer::new();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

fn integer_resultant(f: &[Integer], g: &[Integer]) -> Integer {
    // descending Sylvester layout
    let n = f.len() - 1;
    let m = g.len() - 1;
    if m == 0 {
        return Integer::from((&g[0]).pow(n as u32));
    }
    let size = n + m;
    let mut rows = vec![vec![Integer::new(); size]; size];
    for r in 0..m {
        for (k, c) in f.iter().rev().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..n {
        for (k, c) in g.iter().rev().enumerate() {
            rows[m + r][r + k] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// Res(f, g) = Π g(α) over the roots α of f, computed exactly.
pub fn resultant(f: &Polynomial, g: &[Rational]) -> Rational {
    let fr = RatPoly::new(f.rational_coeffs());
    let g = RatPoly::new(g.to_vec()).rem(&fr);
    if g.is_zero() {
        return Rational::new();
    }
    let mut den = Integer::from(1);
    for c in &g.0 {
        den.lcm_mut(c.denom());
    }
    let gi: Vec<Integer> = g.0.iter().map(|c| Integer::from(&den / c.denom()) * c.numer()).collect();
    let r = integer_resultant(f.coeffs(), &gi);
    let scale = Integer::from((&den).pow(f.degree() as u32));
    Rational::from((r, scale))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Factor-degree patterns whose subset sums intersect to {0, n}.
    Irreducible { patterns: Vec<(u64, Vec<usize>)> },
    /// A nontrivial factor, ascending integer coefficients.
    Reducible { factor: Vec<Integer> },
    Inconclusive { patterns: Vec<(u64, Vec<usize>)> },
}

fn subset_sums(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

fn integer_root(f: &Polynomial) -> Option<Integer> {
    let a0 = &f.coeffs()[0];
    if *a0 == 0 {
        return Some(Integer::new());
    }
    let a = Integer::from(a0.abs_ref());
    if a > 1_000_000_000_000u64 {
        return None;
    }
    let a = a.to_u64().unwrap();
    let mut d = 1u64;
    while d * d <= a {
        if a % d == 0 {
            for cand in [d, a / d] {
                for sgn in [1i64, -1] {
                    let r = Integer::from(cand) * sgn;
                    let mut acc = Integer::new();
                    for c in f.coeffs().iter().rev() {
                        acc *= &r;
                        acc += c;
                    }
                    if acc == 0 {
                        return Some(r);
                    }
                }
            }
        }
        d += 1;
    }
    None
}

/// Irreducibility over Q from factorization patterns modulo the given
/// primes; primes where f is not squarefree of full degree are skipped.
pub fn irreducibility_certificate(f: &Polynomial, primes: &[u64]) -> Result<Irreducibility, PolyError> {
    let n = f.degree();
    if let Some(r) = integer_root(f) {
        if n > 1 {
            return Ok(Irreducibility::Reducible { factor: vec![-r, Integer::from(1)] });
        }
    }
    let mut patterns = vec![];
    let mut possible = vec![true; n + 1];
    for &p in primes {
        if let Some(degs) = factor_degrees_mod_p(f, p) {
            let reach = subset_sums(&degs, n);
            for k in 0..=n {
                possible[k] &= reach[k];
            }
            patterns.push((p, degs));
        }
    }
    if patterns.is_empty() {
        return Err(PolyError::NoUsablePrimes);
    }
    if (1..n).all(|k| !possible[k]) {
        Ok(Irreducibility::Irreducible { patterns })
    } else {
        Ok(Irreducibility::Inconclusive { patterns })
    }
}
