use std::cmp::Ordering;

use nalgebra::DMatrix;
use rug::{Complex, Float};

use super::{Polynomial, PolyError};
use crate::precision::{Closeness, Precision};

/// Roots of a real polynomial, real ones ascending, then one
/// representative per conjugate pair taken from the upper half plane,
/// ordered by real part and then imaginary part.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub real: Vec<Float>,
    pub complex: Vec<Complex>,
    pub bits: u32,
    /// max |f(root)| over all roots, evaluated at working precision.
    pub residual: Float,
}

impl RootSet {
    pub fn s(&self) -> usize {
        self.real.len()
    }

    pub fn t(&self) -> usize {
        self.complex.len()
    }

    /// Value of the i-th embedding at the generator, 1-based.
    /// Indices s+t+1..s+2t are the conjugates of s+1..s+t.
    pub fn embedding(&self, i: usize) -> Result<Complex, PolyError> {
        let (s, t) = (self.s(), self.t());
        match i {
            0 => Err(PolyError::IndexOutOfRange(i)),
            i if i <= s => Ok(Complex::with_val(self.bits, (&self.real[i - 1], 0))),
            i if i <= s + t => Ok(self.complex[i - s - 1].clone()),
            i if i <= s + 2 * t => Ok(Complex::with_val(self.bits, self.complex[i - s - t - 1].conj_ref())),
            _ => Err(PolyError::IndexOutOfRange(i)),
        }
    }

    pub fn all_embeddings(&self) -> Vec<Complex> {
        (1..=self.s() + 2 * self.t()).map(|i| self.embedding(i).unwrap()).collect()
    }
}

pub(crate) fn eval_with_derivative(coeffs: &[Float], z: &Complex, bits: u32) -> (Complex, Complex) {
    let n = coeffs.len() - 1;
    let mut p = Complex::with_val(bits, (&coeffs[n], 0));
    let mut dp = Complex::new(bits);
    for c in coeffs[..n].iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

pub(crate) fn eval(coeffs: &[Float], z: &Complex, bits: u32) -> Complex {
    let n = coeffs.len() - 1;
    let mut p = Complex::with_val(bits, (&coeffs[n], 0));
    for c in coeffs[..n].iter().rev() {
        p *= z;
        p += c;
    }
    p
}

fn seeds(coeffs: &[Float]) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].to_f64();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i].to_f64() / lead;
    }
    // unbounded Schur iteration can cycle on symmetric root sets
    let mut out: Vec<(f64, f64)> = match m.try_schur(f64::EPSILON, 2000) {
        Some(schur) => schur.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect(),
        None => circle_seeds(coeffs),
    };
    // Aberth stalls on coincident starting points.
    for i in 0..out.len() {
        for j in 0..i {
            let (a, b) = (out[i], out[j]);
            if (a.0 - b.0).abs() + (a.1 - b.1).abs() < 1e-10 * (1.0 + a.0.abs()) {
                out[i].1 += 1e-6 * (i as f64 + 1.0);
            }
        }
    }
    out.into_iter().map(|(re, im)| Complex::with_val(53, (re, im))).collect()
}

/// Points on a circle of Cauchy-bound radius, rotated off the axes.
fn circle_seeds(coeffs: &[Float]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].to_f64().abs();
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.to_f64().abs() / lead).fold(0.0, f64::max);
    (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            (0.5 * radius * a.cos(), 0.5 * radius * a.sin())
        })
        .collect()
}

fn schedule(bits: u32) -> Vec<u32> {
    let mut out = vec![];
    let mut b = 53u32.min(bits);
    loop {
        out.push(b);
        if b >= bits {
            break;
        }
        b = (2 * b).min(bits);
    }
    out
}

fn aberth_pass(coeffs: &[Float], z: &mut [Complex], bits: u32) -> f64 {
    let n = z.len();
    let mut max_rel = 0f64;
    for k in 0..n {
        let (p, dp) = eval_with_derivative(coeffs, &z[k], bits);
        if p.real().is_zero() && p.imag().is_zero() {
            continue;
        }
        let w = Complex::with_val(bits, &p / &dp);
        let mut sum = Complex::new(bits);
        for j in 0..n {
            if j != k {
                let diff = Complex::with_val(bits, &z[k] - &z[j]);
                sum += Complex::with_val(bits, diff.recip_ref());
            }
        }
        let denom = Complex::with_val(bits, 1) - Complex::with_val(bits, &w * &sum);
        let corr = Complex::with_val(bits, &w / &denom);
        let scale = Float::with_val(bits, z[k].abs_ref()).to_f64().max(1.0);
        let size = Float::with_val(bits, corr.abs_ref()).to_f64() / scale;
        if size.is_finite() {
            z[k] -= &corr;
            max_rel = max_rel.max(size);
        }
    }
    max_rel
}

/// All complex roots of a real polynomial by Aberth iteration, seeded
/// from companion-matrix eigenvalues and refined through a precision
/// schedule that doubles up to the target.
pub fn real_poly_roots(coeffs: &[Float], prec: Precision) -> Vec<Complex> {
    let mut z = seeds(coeffs);
    for level in schedule(prec.bits()) {
        let c: Vec<Float> = coeffs.iter().map(|x| Float::with_val(level, x)).collect();
        for zi in z.iter_mut() {
            zi.set_prec(level);
        }
        let target = 2f64.powi(-(level as i32) / 2);
        for _ in 0..200 {
            if aberth_pass(&c, &mut z, level) < target {
                break;
            }
        }
        aberth_pass(&c, &mut z, level);
        aberth_pass(&c, &mut z, level);
    }
    z
}

fn cmp_float(a: &Float, b: &Float) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Splits raw roots into real roots and upper-half-plane representatives.
pub fn classify_roots(coeffs: &[Float], raw: Vec<Complex>, prec: Precision) -> Result<RootSet, PolyError> {
    let bits = prec.bits();
    let mut real = vec![];
    let mut upper = vec![];
    let mut lower = vec![];
    for z in raw {
        let scale = Float::with_val(bits, z.abs_ref()).max(&Float::with_val(bits, 1));
        let rel = Float::with_val(bits, z.imag() / &scale);
        match prec.classify(&rel) {
            Closeness::Equal => real.push(Float::with_val(bits, z.real())),
            Closeness::Ambiguous => {
                return Err(PolyError::AmbiguousNumeric(format!(
                    "root {} has imaginary part in the refusal band",
                    z.to_string_radix(10, Some(20))
                )))
            }
            Closeness::Distinct if z.imag().is_sign_positive() => upper.push(z),
            Closeness::Distinct => lower.push(z),
        }
    }
    if upper.len() != lower.len() {
        return Err(PolyError::ConjugatePairing);
    }
    let mut used = vec![false; lower.len()];
    for u in &upper {
        let ub = Complex::with_val(bits, u.conj_ref());
        let scale = Float::with_val(bits, u.abs_ref()).max(&Float::with_val(bits, 1));
        let hit = lower.iter().enumerate().position(|(j, l)| {
            let d = Float::with_val(bits, Complex::with_val(bits, &ub - l).abs_ref()) / &scale;
            !used[j] && prec.classify(&d) == Closeness::Equal
        });
        match hit {
            Some(j) => used[j] = true,
            None => return Err(PolyError::ConjugatePairing),
        }
    }
    real.sort_by(cmp_float);
    let eps = prec.eps();
    upper.sort_by(|a, b| {
        let d = Float::with_val(bits, a.real() - b.real());
        if d.abs() <= eps {
            cmp_float(a.imag(), b.imag())
        } else {
            cmp_float(a.real(), b.real())
        }
    });
    let mut residual = Float::new(bits);
    for r in &real {
        let v = eval(coeffs, &Complex::with_val(bits, (r, 0)), bits);
        residual.max_mut(&Float::with_val(bits, v.abs_ref()));
    }
    for z in &upper {
        let v = eval(coeffs, z, bits);
        residual.max_mut(&Float::with_val(bits, v.abs_ref()));
    }
    if residual > eps {
        return Err(PolyError::RootResidualTooLarge { residual: residual.to_f64(), bits });
    }
    Ok(RootSet { real, complex: upper, bits, residual })
}

pub fn find_roots(f: &Polynomial, prec: Precision) -> Result<RootSet, PolyError> {
    if !super::is_squarefree(f) {
        return Err(PolyError::NotSquarefree);
    }
    let coeffs: Vec<Float> = f.coeffs().iter().map(|c| Float::with_val(prec.bits(), c)).collect();
    let raw = real_poly_roots(&coeffs, prec);
    classify_roots(&coeffs, raw, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_octic_terminates() {
        // its companion matrix sends unbounded Schur iteration into a cycle
        let f = Polynomial::from_i64(&[-1, 0, -1, 0, -1, 0, -1, 0, 1]).unwrap();
        let r = find_roots(&f, Precision::new(256)).unwrap();
        assert_eq!(r.s() + 2 * r.t(), 8);
    }

    #[test]
    fn circle_seeds_converge_too() {
        let c: Vec<Float> = [-1i64, -1, 0, 1].iter().map(|&x| Float::with_val(128, x)).collect();
        let mut z: Vec<Complex> = circle_seeds(&c).into_iter().map(|p| Complex::with_val(128, p)).collect();
        for _ in 0..200 {
            if aberth_pass(&c, &mut z, 128) < 1e-30 {
                break;
            }
        }
        let r = classify_roots(&c, z, Precision::new(128)).unwrap();
        assert_eq!((r.s(), r.t()), (1, 1));
    }

    #[test]
    fn schedule_doubles_to_target() {
        assert_eq!(schedule(256), vec![53, 106, 212, 256]);
        assert_eq!(schedule(32), vec![32]);
    }

    #[test]
    fn cubic_signature_and_order() {
        let f = Polynomial::from_i64(&[-1, -1, 0, 1]).unwrap();
        let r = find_roots(&f, Precision::default()).unwrap();
        assert_eq!((r.s(), r.t()), (1, 1));
        // plastic number
        assert!((r.real[0].to_f64() - 1.324717957244746).abs() < 1e-14);
        assert!(r.complex[0].imag().is_sign_positive());
        assert!(r.residual.to_f64() < 1e-70);
    }

    #[test]
    fn cyclotomic_roots_are_unimodular() {
        let f = Polynomial::from_i64(&[1, 1, 1, 1, 1]).unwrap();
        let r = find_roots(&f, Precision::default()).unwrap();
        assert_eq!((r.s(), r.t()), (0, 2));
        for z in &r.complex {
            let m = Float::with_val(256, z.abs_ref()) - 1u32;
            assert!(m.to_f64().abs() < 1e-70);
        }
        assert!(r.complex[0].real() < r.complex[1].real());
    }

    #[test]
    fn multiple_roots_rejected() {
        let f = Polynomial::from_i64(&[1, -2, 1]).unwrap();
        assert!(matches!(find_roots(&f, Precision::default()), Err(PolyError::NotSquarefree)));
    }
}
