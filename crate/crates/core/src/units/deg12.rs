//! Certified check of the degree-12 example: F factors over Q(√2) as a
//! palindromic sextic times its conjugate, and its field carries the
//! pluriclosed relation u_1 u_3 u_4 = u_2 u_5 u_6 = 1.

use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complex, Float, Integer};
use serde::Serialize;

use crate::polyfield::{find_roots, irreducibility_certificate, real_poly_roots, usable_primes, Irreducibility, PolyError, Polynomial};
use crate::precision::Precision;

/// x^12 - 24x^11 + 72x^10 - 448x^9 - 191x^8 - 440x^7 - 432x^6 - ... + 1,
/// palindromic, so ascending and descending agree.
pub const DEG12_POLY: [i64; 13] = [1, -24, 72, -448, -191, -440, -432, -440, -191, -448, 72, -24, 1];

/// a + b√2
#[derive(Clone, Debug, PartialEq, Eq)]
struct Zs2 {
    a: Integer,
    b: Integer,
}

impl Zs2 {
    fn new(a: i64, b: i64) -> Self {
        Zs2 { a: Integer::from(a), b: Integer::from(b) }
    }

    fn conj(&self) -> Self {
        Zs2 { a: self.a.clone(), b: Integer::from(-&self.b) }
    }

    fn to_float(&self, bits: u32) -> Float {
        let r2 = Float::with_val(bits, 2).sqrt();
        Float::with_val(bits, &self.a) + Float::with_val(bits, &self.b) * r2
    }
}

impl Add for &Zs2 {
    type Output = Zs2;
    fn add(self, o: &Zs2) -> Zs2 {
        Zs2 { a: Integer::from(&self.a + &o.a), b: Integer::from(&self.b + &o.b) }
    }
}

impl Sub for &Zs2 {
    type Output = Zs2;
    fn sub(self, o: &Zs2) -> Zs2 {
        Zs2 { a: Integer::from(&self.a - &o.a), b: Integer::from(&self.b - &o.b) }
    }
}

impl Neg for &Zs2 {
    type Output = Zs2;
    fn neg(self) -> Zs2 {
        Zs2 { a: Integer::from(-&self.a), b: Integer::from(-&self.b) }
    }
}

impl Mul for &Zs2 {
    type Output = Zs2;
    fn mul(self, o: &Zs2) -> Zs2 {
        let a = Integer::from(&self.a * &o.a) + Integer::from(&self.b * &o.b) * 2u32;
        let b = Integer::from(&self.a * &o.b) + Integer::from(&self.b * &o.a);
        Zs2 { a, b }
    }
}

fn s_value() -> Zs2 {
    Zs2::new(-12, 9)
}

fn p_value() -> Zs2 {
    Zs2::new(33, -22)
}

/// Palindromic sextic with x^5 coefficient S and x^4 coefficient P - S.
fn sextic(s: &Zs2, p: &Zs2) -> Vec<Zs2> {
    let one = Zs2::new(1, 0);
    let two = Zs2::new(2, 0);
    let ps = p - s;
    let mid = &(&(&two * p) - &(s * s)) - &two;
    vec![one.clone(), s.clone(), ps.clone(), mid, ps, s.clone(), one]
}

/// y^3 + S y^2 + (P - S - 3) y + 2P - S^2 - 2S - 2, ascending; the
/// sextic equals x^3 times this cubic at y = x + 1/x.
fn trace_cubic(s: &Zs2, p: &Zs2) -> Vec<Zs2> {
    let two = Zs2::new(2, 0);
    let c1 = &(p - s) - &Zs2::new(3, 0);
    let c0 = &(&(&(&two * p) - &(s * s)) - &(&two * s)) - &two;
    vec![c0, c1, s.clone(), Zs2::new(1, 0)]
}

fn poly_mul(a: &[Zs2], b: &[Zs2]) -> Vec<Zs2> {
    let mut out = vec![Zs2::new(0, 0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Deg12Check {
    pub name: String,
    pub passed: bool,
    pub residual: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Deg12Report {
    pub bits: u32,
    pub checks: Vec<Deg12Check>,
}

impl Deg12Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Value agrees with a decimal that was printed to `places` digits.
fn matches_printed(v: f64, printed: f64, places: i32) -> bool {
    (v - printed).abs() < 10f64.powi(-places)
}

fn cubic_roots(c: &[Zs2], prec: Precision) -> Vec<Complex> {
    let coeffs: Vec<Float> = c.iter().map(|z| z.to_float(prec.bits())).collect();
    real_poly_roots(&coeffs, prec)
}

pub fn verify_degree12_example(prec: Precision) -> Result<Deg12Report, PolyError> {
    verify_degree12_with(&Polynomial::from_i64(&DEG12_POLY).unwrap(), prec)
}

/// Runs the seven checks against `f`, which should be the degree-12
/// polynomial; any other input makes some check fail.
pub fn verify_degree12_with(f: &Polynomial, prec: Precision) -> Result<Deg12Report, PolyError> {
    let bits = prec.bits();
    let eps = prec.eps().to_f64();
    let mut checks = vec![];
    let s = s_value();
    let p = p_value();

    let sv = s.to_float(bits).to_f64();
    let pv = p.to_float(bits).to_f64();
    checks.push(Deg12Check {
        name: "S and P values".into(),
        passed: matches_printed(sv, 0.727922, 6) && matches_printed(pv, 1.887301, 6),
        residual: None,
        detail: format!("S = {sv:.9}, P = {pv:.9}"),
    });

    let g = sextic(&s, &p);
    let gbar: Vec<Zs2> = g.iter().map(Zs2::conj).collect();
    let prod = poly_mul(&g, &gbar);
    let mut worst = Integer::new();
    let fc = f.coeffs();
    for k in 0..prod.len().max(fc.len()) {
        let target = fc.get(k).cloned().unwrap_or_default();
        let got = prod.get(k).cloned().unwrap_or(Zs2::new(0, 0));
        let da = Integer::from(&got.a - &target).abs();
        let db = Integer::from(got.b.abs_ref());
        worst = worst.max(da).max(db);
    }
    checks.push(Deg12Check {
        name: "G times its conjugate equals F".into(),
        passed: worst == 0,
        residual: Some(worst.to_f64()),
        detail: format!("max coefficient discrepancy {worst}"),
    });

    let ys = cubic_roots(&trace_cubic(&s, &p), prec);
    let mut reals: Vec<f64> = ys.iter().filter(|y| y.imag().to_f64().abs() < eps).map(|y| y.real().to_f64()).collect();
    reals.sort_by(f64::total_cmp);
    let want = [-1.724350, -0.110593, 1.107021];
    let ok = reals.len() == 3 && reals.iter().zip(want).all(|(&v, w)| matches_printed(v, w, 6) && v.abs() < 2.0);
    checks.push(Deg12Check {
        name: "trace cubic of G has three roots in (-2, 2)".into(),
        passed: ok,
        residual: None,
        detail: format!("{reals:.6?}"),
    });

    let ys = cubic_roots(&trace_cubic(&s.conj(), &p.conj()), prec);
    let reals: Vec<f64> = ys.iter().filter(|y| y.imag().to_f64().abs() < eps).map(|y| y.real().to_f64()).collect();
    let ok = reals.len() == 1 && matches_printed(reals[0], 21.697332, 6);
    checks.push(Deg12Check {
        name: "trace cubic of conjugate G has one real root".into(),
        passed: ok,
        residual: None,
        detail: format!("{reals:.6?}"),
    });

    let roots = find_roots(f, prec)?;
    checks.push(relation_check(&roots, prec));

    let primes = usable_primes(f, 20);
    let cert = irreducibility_certificate(f, &primes)?;
    checks.push(Deg12Check {
        name: "F is irreducible".into(),
        passed: matches!(cert, Irreducibility::Irreducible { .. }),
        residual: None,
        detail: format!("{} usable primes", primes.len()),
    });

    let top = roots.real.last().map(|r| r.to_f64()).unwrap_or(f64::NAN);
    checks.push(Deg12Check {
        name: "largest real root".into(),
        passed: matches_printed(top, 21.651145, 6),
        residual: None,
        detail: format!("{top:.9}"),
    });
    Ok(Deg12Report { bits, checks })
}

/// Two real roots, six unimodular roots, and two conjugate pairs with
/// u_1 |u_3|^2 = u_2 |u_5|^2 = 1.
fn relation_check(roots: &crate::polyfield::RootSet, prec: Precision) -> Deg12Check {
    let bits = prec.bits();
    let fail = |detail: String| Deg12Check { name: "pluriclosed relation among the roots".into(), passed: false, residual: None, detail };
    if roots.s() != 2 || roots.t() != 5 {
        return fail(format!("signature ({}, {})", roots.s(), roots.t()));
    }
    let one = Float::with_val(bits, 1);
    let mut worst = Float::new(bits);
    let mut unimodular = 0;
    let mut others = vec![];
    for z in &roots.complex {
        let d = Float::with_val(bits, z.abs_ref()) - &one;
        if d.clone().abs() < prec.sqrt_eps() {
            unimodular += 1;
            worst.max_mut(&d.abs());
        } else {
            others.push(Float::with_val(bits, z.norm_ref()));
        }
    }
    if unimodular != 3 || others.len() != 2 {
        return fail(format!("{unimodular} unimodular pairs"));
    }
    for r in &roots.real {
        let best = others
            .iter()
            .map(|m| (Float::with_val(bits, r * m) - &one).abs())
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        worst.max_mut(&best);
    }
    let ok = worst <= prec.eps();
    Deg12Check {
        name: "pluriclosed relation among the roots".into(),
        passed: ok,
        residual: Some(worst.to_f64()),
        detail: format!("max residual {:e}", worst.to_f64()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sextic_matches_integer_parts() {
        let g = sextic(&s_value(), &p_value());
        let a: Vec<i64> = g.iter().map(|z| z.a.to_i64().unwrap()).collect();
        let b: Vec<i64> = g.iter().map(|z| z.b.to_i64().unwrap()).collect();
        assert_eq!(a, vec![1, -12, 45, -242, 45, -12, 1]);
        assert_eq!(b, vec![0, 9, -31, 172, -31, 9, 0]);
    }

    #[test]
    fn cubic_coefficients() {
        let c = trace_cubic(&s_value(), &p_value());
        let pairs: Vec<(i64, i64)> = c.iter().map(|z| (z.a.to_i64().unwrap(), z.b.to_i64().unwrap())).collect();
        assert_eq!(pairs, vec![(-218, 154), (42, -31), (-12, 9), (1, 0)]);
    }

    #[test]
    fn full_example_passes() {
        let r = verify_degree12_example(Precision::default()).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(r.checks.len(), 7);
    }

    #[test]
    fn low_precision_is_refused() {
        let e = verify_degree12_example(Precision::new(32)).unwrap_err();
        assert!(matches!(e, PolyError::RootResidualTooLarge { .. }), "{e:?}");
    }

    #[test]
    fn perturbed_polynomial_fails_the_product_check() {
        let mut c = DEG12_POLY;
        c[3] += 1;
        let f = Polynomial::from_i64(&c).unwrap();
        if let Ok(r) = verify_degree12_with(&f, Precision::default()) {
            let b = &r.checks[1];
            assert!(!b.passed);
            assert_eq!(b.residual, Some(1.0));
        }
    }
}
