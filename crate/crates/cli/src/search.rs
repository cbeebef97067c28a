//! Screening search for units satisfying the pluriclosed relation.
//!
//! Scans monic integer polynomials with constant term ±1, keeps the
//! certified irreducible ones with s, t >= 1 and tests a few explicit
//! units: the root itself, the units among x + k and x^2 + kx ± 1 at
//! the root (|Res| = 1), and products of two of them with exponents in
//! -2..=2. A unit passes when it is totally positive (up to sign), not
//! torsion, and each real place j can be paired with its own complex
//! place i so that σ_j(u)|σ_{s+i}(u)|^2 = 1, every unpaired complex
//! place being unimodular. Finding nothing proves nothing.

use otlab_core::polyfield::{
    eval_embedding, irreducibility_certificate, is_squarefree, resultant, usable_primes, FieldDatum, Irreducibility, Polynomial,
};
use otlab_core::{Closeness, Precision};
use rayon::prelude::*;
use rug::{Complex, Float, Rational};
use serde_json::{json, Value};

use crate::report;
use crate::CliError;

pub const MAX_DEGREE: usize = 9;
pub const MAX_POLYNOMIALS: u64 = 250_000;
/// Range of k in x + k and x^2 + kx ± 1.
const SHIFT: i64 = 3;

#[derive(Clone, Debug)]
pub struct SearchParams {
    pub min_degree: usize,
    pub max_degree: usize,
    pub height: u32,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub poly: Vec<i64>,
    pub s: usize,
    pub t: usize,
    pub unit: String,
    /// (real place, complex place), both 1-based embedding indices
    pub pairing: Vec<(usize, usize)>,
    pub residual: Float,
}

#[derive(Clone, Debug, Default)]
pub struct SearchReport {
    pub scanned: u64,
    pub irreducible: u64,
    pub inconclusive: u64,
    pub mixed_signature: u64,
    pub candidates: Vec<Candidate>,
}

pub fn polynomial_count(p: &SearchParams) -> u64 {
    let w = 2 * p.height as u64 + 1;
    (p.min_degree..=p.max_degree).map(|d| 2 * w.pow(d as u32 - 1)).sum()
}

fn bound_err(msg: String) -> CliError {
    CliError::Validation(format!("BoundTooLarge: {msg}"))
}

struct Base {
    name: String,
    /// values at all s+2t embeddings
    values: Vec<Complex>,
    /// log|σ_k| at every embedding
    logs: Vec<f64>,
}

fn unit_bases(field: &FieldDatum) -> Vec<Base> {
    let n = field.degree();
    let places = field.s + 2 * field.t;
    let mut gens: Vec<(String, Vec<i64>)> = vec![("a".into(), vec![0, 1])];
    for k in -SHIFT..=SHIFT {
        if k != 0 {
            gens.push((format!("(a{k:+})"), vec![k, 1]));
        }
    }
    if n > 2 {
        for k in -SHIFT..=SHIFT {
            for c in [-1, 1] {
                gens.push((format!("(a^2{k:+}a{c:+})"), vec![c, k, 1]));
            }
        }
    }
    let mut out = vec![];
    for (name, g) in gens {
        let g: Vec<Rational> = g.into_iter().map(Rational::from).collect();
        let res = resultant(&field.poly, &g);
        if res != 1 && res != -1 {
            continue;
        }
        let mut coords = vec![Rational::new(); n];
        for (i, c) in g.into_iter().enumerate() {
            coords[i] = c;
        }
        let values: Vec<Complex> = (1..=places).map(|i| eval_embedding(field, &coords, i).expect("valid index")).collect();
        let logs = values.iter().map(|v| Float::with_val(53, v.abs_ref()).to_f64().ln()).collect();
        out.push(Base { name, values, logs });
    }
    out
}

fn power(z: &Complex, e: i32) -> Complex {
    use rug::ops::Pow;
    Complex::with_val(z.prec().0, z.pow(e))
}

/// Every combination tried: one base, or two bases with exponents.
fn combinations(n: usize) -> Vec<Vec<(usize, i32)>> {
    let mut out = vec![];
    for i in 0..n {
        out.push(vec![(i, 1)]);
        for j in i + 1..n {
            for e1 in [1, 2] {
                for e2 in [-2, -1, 1, 2] {
                    out.push(vec![(i, e1), (j, e2)]);
                }
            }
        }
    }
    out
}

/// Double-precision test on logarithms; anything it lets through is
/// decided again at working precision.
fn screen(field: &FieldDatum, bases: &[Base], combo: &[(usize, i32)]) -> bool {
    let (s, t) = (field.s, field.t);
    let log = |k: usize| -> f64 { combo.iter().map(|&(b, e)| e as f64 * bases[b].logs[k]).sum() };
    let tol = 1e-6;
    let real: Vec<f64> = (0..s).map(log).collect();
    let cplx: Vec<f64> = (s..s + t).map(log).collect();
    if real.iter().all(|x| x.abs() < tol) {
        return false;
    }
    let compat: Vec<Vec<bool>> = real.iter().map(|x| cplx.iter().map(|m| (x + 2.0 * m).abs() < tol).collect()).collect();
    let mut used = vec![false; t];
    if !find_pairing(&compat, &mut used, &mut vec![]) {
        return false;
    }
    cplx.iter().filter(|m| m.abs() >= tol).count() <= s
}

/// Injective pairings from real places to complex places, smallest
/// first in lexicographic order.
fn find_pairing(compat: &[Vec<bool>], used: &mut Vec<bool>, acc: &mut Vec<usize>) -> bool {
    let j = acc.len();
    if j == compat.len() {
        return true;
    }
    for i in 0..used.len() {
        if compat[j][i] && !used[i] {
            used[i] = true;
            acc.push(i);
            if find_pairing(compat, used, acc) {
                return true;
            }
            acc.pop();
            used[i] = false;
        }
    }
    false
}

fn test_unit(field: &FieldDatum, prec: Precision, name: &str, values: &[Complex]) -> Option<Candidate> {
    let (s, t) = (field.s, field.t);
    let bits = prec.bits();
    let one = |x: Float| prec.classify(&(x - 1u32)) == Closeness::Equal;
    let sign_pos = values[..s].iter().all(|v| v.real().is_sign_positive());
    let sign_neg = values[..s].iter().all(|v| v.real().is_sign_negative());
    if !sign_pos && !sign_neg {
        return None;
    }
    let flip = if sign_neg { -1 } else { 1 };
    let real: Vec<Float> = values[..s].iter().map(|v| Float::with_val(bits, v.real()) * flip).collect();
    if real.iter().all(|x| one(x.clone())) {
        return None;
    }
    let norms: Vec<Float> = values[s..s + t].iter().map(|v| Float::with_val(bits, v.norm_ref())).collect();
    let compat: Vec<Vec<bool>> =
        real.iter().map(|x| norms.iter().map(|m| one(Float::with_val(bits, x * m))).collect()).collect();
    let mut used = vec![false; t];
    let mut acc = vec![];
    if !find_pairing(&compat, &mut used, &mut acc) {
        return None;
    }
    if !used.iter().zip(&norms).all(|(u, m)| *u || one(m.clone())) {
        return None;
    }
    let mut residual = Float::new(bits);
    for (j, &i) in acc.iter().enumerate() {
        let r = Float::with_val(bits, &real[j] * &norms[i]) - 1u32;
        residual = residual.max(&r.abs());
    }
    Some(Candidate {
        poly: vec![],
        s,
        t,
        unit: if flip < 0 { format!("-{name}") } else { name.to_string() },
        pairing: acc.iter().enumerate().map(|(j, &i)| (j + 1, s + i + 1)).collect(),
        residual,
    })
}

fn polynomials(degree: usize, height: i64) -> impl Iterator<Item = Vec<i64>> {
    let w = (2 * height + 1) as u64;
    let inner = w.pow(degree as u32 - 1);
    (0..2 * inner).map(move |idx| {
        let mut c = vec![0i64; degree + 1];
        c[0] = if idx % 2 == 0 { -1 } else { 1 };
        let mut rest = idx / 2;
        for slot in c.iter_mut().take(degree).skip(1) {
            *slot = (rest % w) as i64 - height;
            rest /= w;
        }
        c[degree] = 1;
        c
    })
}

pub fn search_pluriclosed(p: &SearchParams, bits: u32) -> Result<SearchReport, CliError> {
    if p.max_degree > MAX_DEGREE {
        return Err(bound_err(format!("degree {} exceeds {MAX_DEGREE}", p.max_degree)));
    }
    if p.min_degree < 3 || p.min_degree > p.max_degree {
        return Err(CliError::Validation(format!("degree range {}..={} is empty or below 3", p.min_degree, p.max_degree)));
    }
    let count = polynomial_count(p);
    if count > MAX_POLYNOMIALS {
        return Err(bound_err(format!("{count} polynomials exceed the limit of {MAX_POLYNOMIALS}")));
    }
    let prec = Precision::new(bits);
    let polys: Vec<Vec<i64>> = (p.min_degree..=p.max_degree).flat_map(|d| polynomials(d, p.height as i64)).collect();
    let scanned: Vec<Scan> = polys.into_par_iter().map(|c| scan_one(c, prec)).collect();
    let mut rep = SearchReport::default();
    for s in scanned {
        rep.scanned += 1;
        match s {
            Scan::Skipped => {}
            Scan::Inconclusive => rep.inconclusive += 1,
            Scan::Irreducible => rep.irreducible += 1,
            Scan::Mixed(found) => {
                rep.irreducible += 1;
                rep.mixed_signature += 1;
                rep.candidates.extend(found);
            }
        }
    }
    Ok(rep)
}

enum Scan {
    Skipped,
    Inconclusive,
    Irreducible,
    Mixed(Option<Candidate>),
}

fn scan_one(c: Vec<i64>, prec: Precision) -> Scan {
    let f = Polynomial::from_i64(&c).expect("monic");
    if !is_squarefree(&f) {
        return Scan::Skipped;
    }
    match irreducibility_certificate(&f, &usable_primes(&f, 16)) {
        Ok(Irreducibility::Irreducible { .. }) => {}
        Ok(Irreducibility::Inconclusive { .. }) => return Scan::Inconclusive,
        _ => return Scan::Skipped,
    }
    let Ok(field) = FieldDatum::new(f, prec) else { return Scan::Irreducible };
    if field.s == 0 || field.t == 0 {
        return Scan::Irreducible;
    }
    if field.s > field.t {
        return Scan::Mixed(None);
    }
    let bases = unit_bases(&field);
    for combo in combinations(bases.len()) {
        if !screen(&field, &bases, &combo) {
            continue;
        }
        let name: Vec<String> = combo
            .iter()
            .map(|&(b, e)| if e == 1 { bases[b].name.clone() } else { format!("{}^{e}", bases[b].name) })
            .collect();
        let values: Vec<Complex> = (0..field.s + 2 * field.t)
            .map(|k| combo.iter().fold(Complex::with_val(prec.bits(), 1), |acc, &(b, e)| acc * power(&bases[b].values[k], e)))
            .collect();
        if let Some(mut cand) = test_unit(&field, prec, &name.join("*"), &values) {
            cand.poly = c;
            return Scan::Mixed(Some(cand));
        }
    }
    Scan::Mixed(None)
}

pub fn report_json(p: &SearchParams, r: &SearchReport) -> Value {
    json!({
        "min_degree": p.min_degree,
        "max_degree": p.max_degree,
        "height": p.height,
        "scanned": r.scanned,
        "irreducible": r.irreducible,
        "irreducibility_inconclusive": r.inconclusive,
        "mixed_signature": r.mixed_signature,
        "candidates": r.candidates.iter().map(|c| json!({
            "poly": c.poly,
            "signature": { "s": c.s, "t": c.t },
            "unit": c.unit,
            "pairing": c.pairing.iter().map(|&(j, i)| json!({ "real": j, "complex": i })).collect::<Vec<_>>(),
            "residual": report::float(&c.residual),
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_covers_the_box() {
        let all: Vec<Vec<i64>> = polynomials(3, 1).collect();
        assert_eq!(all.len() as u64, polynomial_count(&SearchParams { min_degree: 3, max_degree: 3, height: 1 }));
        assert!(all.contains(&vec![-1, -1, 0, 1]));
        assert!(all.iter().all(|c| c[3] == 1 && c[0].abs() == 1));
    }

    #[test]
    fn pairing_is_injective() {
        let compat = vec![vec![true, false], vec![true, false]];
        assert!(!find_pairing(&compat, &mut vec![false; 2], &mut vec![]));
        let compat = vec![vec![true, true], vec![true, false]];
        let mut acc = vec![];
        assert!(find_pairing(&compat, &mut vec![false; 2], &mut acc));
        assert_eq!(acc, vec![1, 0]);
    }
}
