//! Sparse exterior algebra on the invariant coframe ω^k, γ^i and their
//! conjugates, with the differential of the solvmanifold.

use std::collections::BTreeMap;

use rug::{Complex, Float};

use crate::precision::Precision;
use crate::units::UnitSystem;

/// A wedge monomial: bit g set means generator g is present, factors in
/// increasing generator order.
pub type Mono = u64;

/// Sign of `a ∧ b` relative to the sorted monomial, or None if they share
/// a factor.
pub fn wedge_mono(a: Mono, b: Mono) -> Option<(Mono, bool)> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j).count_ones();
        rest &= rest - 1;
    }
    Some((a | b, swaps % 2 == 1))
}

/// Sorted monomial and sign of an ordered product of generators.
pub fn ordered_mono(gens: &[usize]) -> Option<(Mono, bool)> {
    let mut m: Mono = 0;
    let mut neg = false;
    for &g in gens {
        let (next, s) = wedge_mono(m, 1 << g)?;
        m = next;
        neg ^= s;
    }
    Some((m, neg))
}

#[derive(Clone, Debug)]
pub struct Form {
    pub bits: u32,
    pub terms: BTreeMap<Mono, Complex>,
}

impl Form {
    pub fn zero(bits: u32) -> Self {
        Form { bits, terms: BTreeMap::new() }
    }

    pub fn mono(bits: u32, m: Mono, c: Complex) -> Self {
        let mut f = Form::zero(bits);
        f.add_term(m, &c);
        f
    }

    pub fn add_term(&mut self, m: Mono, c: &Complex) {
        let e = self.terms.entry(m).or_insert_with(|| Complex::new(self.bits));
        *e += c;
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut f = self.clone();
        for (&m, c) in &o.terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.scale(&Complex::with_val(self.bits, -1)))
    }

    pub fn scale(&self, k: &Complex) -> Form {
        let terms = self.terms.iter().map(|(&m, c)| (m, Complex::with_val(self.bits, c * k))).collect();
        Form { bits: self.bits, terms }
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut f = Form::zero(self.bits);
        for (&a, x) in &self.terms {
            for (&b, y) in &o.terms {
                if let Some((m, neg)) = wedge_mono(a, b) {
                    let mut v = Complex::with_val(self.bits, x * y);
                    if neg {
                        v = -v;
                    }
                    f.add_term(m, &v);
                }
            }
        }
        f
    }

    pub fn coeff(&self, m: Mono) -> Complex {
        self.terms.get(&m).cloned().unwrap_or_else(|| Complex::new(self.bits))
    }

    /// Coefficient on the ordered product of `gens`.
    pub fn coeff_ordered(&self, gens: &[usize]) -> Complex {
        match ordered_mono(gens) {
            Some((m, neg)) => {
                let c = self.coeff(m);
                if neg {
                    -c
                } else {
                    c
                }
            }
            None => Complex::new(self.bits),
        }
    }

    pub fn max_abs(&self) -> Float {
        let mut best = Float::new(self.bits);
        for c in self.terms.values() {
            let a = Float::with_val(self.bits, c.abs_ref());
            if a > best {
                best = a;
            }
        }
        best
    }
}

/// Generator layout: ω^k at k, γ^i at s+i, ω̄^k at n+k, γ̄^i at n+s+i,
/// all 0-based, n = s+t.
#[derive(Clone, Debug)]
pub struct CoframeAlgebra {
    pub s: usize,
    pub t: usize,
    pub precision: Precision,
    /// d of each generator
    pub dgen: Vec<Form>,
}

impl CoframeAlgebra {
    /// Structure equations from the matrices b and c (indexed [k][i]).
    pub fn new(b: &[Vec<Float>], c: &[Vec<Float>], t: usize, precision: Precision) -> Self {
        let s = b.len();
        let n = s + t;
        let bits = precision.bits();
        let cx = |re: Float, im: Float| Complex::with_val(bits, (re, im));
        let half_i = cx(Float::new(bits), Float::with_val(bits, 0.5));
        let mut alg = CoframeAlgebra { s, t, precision, dgen: vec![Form::zero(bits); 2 * n] };
        for k in 0..s {
            // dω = (i/2) ω∧ω̄ and its conjugate dω̄ = (i/2) ω∧ω̄
            let ww = alg.prod(&[alg.omega(k), alg.omega_bar(k)]);
            let g = alg.omega(k);
            alg.dgen[g] = ww.scale(&half_i);
            let g = alg.omega_bar(k);
            alg.dgen[g] = ww.scale(&half_i);
        }
        for i in 0..t {
            let mut dg = Form::zero(bits);
            let mut dgb = Form::zero(bits);
            for k in 0..s {
                // a = (i/4) b - c/2
                let a = cx(Float::with_val(bits, &c[k][i] * -0.5), Float::with_val(bits, &b[k][i] * 0.25));
                let abar = Complex::with_val(bits, a.conj_ref());
                let theta = alg.prod(&[alg.omega(k)]).sub(&alg.prod(&[alg.omega_bar(k)]));
                dg = dg.add(&theta.wedge(&alg.prod(&[alg.gamma(i)])).scale(&a));
                dgb = dgb.add(&theta.wedge(&alg.prod(&[alg.gamma_bar(i)])).scale(&-abar));
            }
            let g = alg.gamma(i);
            alg.dgen[g] = dg;
            let g = alg.gamma_bar(i);
            alg.dgen[g] = dgb;
        }
        alg
    }

    pub fn from_units(u: &UnitSystem) -> Self {
        CoframeAlgebra::new(&u.b, &u.c, u.t(), u.precision())
    }

    pub fn n(&self) -> usize {
        self.s + self.t
    }

    pub fn bits(&self) -> u32 {
        self.precision.bits()
    }

    pub fn omega(&self, k: usize) -> usize {
        k
    }
    pub fn gamma(&self, i: usize) -> usize {
        self.s + i
    }
    pub fn omega_bar(&self, k: usize) -> usize {
        self.n() + k
    }
    pub fn gamma_bar(&self, i: usize) -> usize {
        self.n() + self.s + i
    }

    /// The ordered product of generators with coefficient 1.
    pub fn prod(&self, gens: &[usize]) -> Form {
        match ordered_mono(gens) {
            Some((m, neg)) => Form::mono(self.bits(), m, Complex::with_val(self.bits(), if neg { -1 } else { 1 })),
            None => Form::zero(self.bits()),
        }
    }

    pub fn bidegree(&self, m: Mono) -> (i32, i32) {
        let n = self.n();
        let hol = m & ((1 << n) - 1);
        ((hol.count_ones()) as i32, (m >> n).count_ones() as i32)
    }

    /// d of a monomial by the Leibniz rule.
    pub fn d_mono(&self, m: Mono) -> Form {
        let bits = self.bits();
        let mut out = Form::zero(bits);
        let mut rest = m;
        let mut pos = 0;
        while rest != 0 {
            let g = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let below = m & ((1 << g) - 1);
            let above = m & !((1 << (g + 1)) - 1);
            let mid = Form::mono(bits, below, Complex::with_val(bits, 1))
                .wedge(&self.dgen[g])
                .wedge(&Form::mono(bits, above, Complex::with_val(bits, 1)));
            out = if pos % 2 == 0 { out.add(&mid) } else { out.sub(&mid) };
            pos += 1;
        }
        out
    }

    pub fn d(&self, f: &Form) -> Form {
        let mut out = Form::zero(self.bits());
        for (&m, c) in &f.terms {
            out = out.add(&self.d_mono(m).scale(c));
        }
        out
    }

    /// (∂f, ∂̄f) for a form of pure bidegree.
    pub fn split_d(&self, f: &Form) -> (Form, Form) {
        let mut del = Form::zero(self.bits());
        let mut dbar = Form::zero(self.bits());
        for (&m, c) in &f.terms {
            let (p, _) = self.bidegree(m);
            for (&o, v) in &self.d_mono(m).terms {
                let v = Complex::with_val(self.bits(), v * c);
                if self.bidegree(o).0 > p {
                    del.add_term(o, &v);
                } else {
                    dbar.add_term(o, &v);
                }
            }
        }
        (del, dbar)
    }

    pub fn del(&self, f: &Form) -> Form {
        self.split_d(f).0
    }

    pub fn dbar(&self, f: &Form) -> Form {
        self.split_d(f).1
    }

    /// max over generators of |d²(g)|.
    pub fn d_squared_residual(&self) -> Float {
        let mut worst = Float::new(self.bits());
        for g in &self.dgen {
            let r = self.d(g).max_abs();
            if r > worst {
                worst = r;
            }
        }
        worst
    }

    pub fn name(&self, m: Mono) -> String {
        let n = self.n();
        let mut parts = vec![];
        for g in 0..2 * n {
            if m >> g & 1 == 1 {
                let (conj, h) = (g >= n, g % n);
                let (sym, idx) = if h < self.s { ('w', h + 1) } else { ('g', h - self.s + 1) };
                let sym = if conj { sym.to_ascii_uppercase() } else { sym };
                parts.push(format!("{sym}{idx}"));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg11(b: f64, c: f64) -> CoframeAlgebra {
        let p = Precision::new(128);
        CoframeAlgebra::new(&[vec![p.float(b)]], &[vec![p.float(c)]], 1, p)
    }

    #[test]
    fn wedge_signs() {
        // g1 ∧ g0 = -(g0 ∧ g1)
        assert_eq!(wedge_mono(0b10, 0b01), Some((0b11, true)));
        assert_eq!(wedge_mono(0b01, 0b10), Some((0b11, false)));
        assert_eq!(wedge_mono(0b01, 0b01), None);
        assert_eq!(ordered_mono(&[2, 0, 1]), Some((0b111, false)));
        assert_eq!(ordered_mono(&[1, 0, 2]), Some((0b111, true)));
    }

    #[test]
    fn gamma_differential_coefficient() {
        let a = alg11(-1.0, 0.3);
        let dg = &a.dgen[a.gamma(0)];
        let c = dg.coeff_ordered(&[a.omega(0), a.gamma(0)]);
        assert!((c.real().to_f64() + 0.15).abs() < 1e-30);
        assert!((c.imag().to_f64() + 0.25).abs() < 1e-30);
        assert_eq!(a.d_squared_residual(), 0.0);
    }

    #[test]
    fn d_is_a_derivation_squaring_to_zero() {
        let a = alg11(-1.0, 0.7);
        for m in 0u64..16 {
            let f = Form::mono(a.bits(), m, Complex::with_val(a.bits(), 1));
            assert!(a.d(&a.d(&f)).max_abs() < 1e-30, "monomial {}", a.name(m));
        }
    }
}
