//! The finite-dimensional model VB: exponentially weighted invariant
//! forms exp(Ψ) γ^K∧γ̄^L wedged with the algebra generated by ω, ω̄.

use std::collections::{BTreeMap, HashMap};

use rug::{Complex, Float};
use serde::Serialize;

use super::algebra::{CoframeAlgebra, Form, Mono};
use super::OtError;
use crate::dcomplex::{build_double_complex, Bidegree, DoubleComplex, Matrix, MpC};
use crate::precision::Closeness;
use crate::relations::RelationSet;
use crate::units::UnitSystem;

/// A witness triple: J real indices, K unbarred and L barred complex
/// indices, all 1-based within their own range.
#[derive(Clone, Debug, Serialize)]
pub struct Triple {
    pub j: Vec<usize>,
    pub k: Vec<usize>,
    pub l: Vec<usize>,
    /// r = |J| + |K|
    pub grade: usize,
    /// λ_h = [h∈J] + ½Σ_K b_{h,k} + ½Σ_L b_{h,l}; vanishes for a witness
    #[serde(skip)]
    pub lambda: Vec<Float>,
    /// Σ_K c_{h,k} - Σ_L c_{h,l}
    #[serde(skip)]
    pub delta_c: Vec<Float>,
}

#[derive(Clone, Debug)]
pub struct VbModel {
    pub triples: Vec<Triple>,
    /// basis element -> (triple index, monomial)
    pub basis: BTreeMap<Bidegree, Vec<(usize, Mono)>>,
    pub complex: DoubleComplex<MpC>,
    /// (K, L) pairs carried by more than one witness J
    pub shared_witnesses: Vec<String>,
}

impl VbModel {
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.triples.iter().map(|t| t.grade).collect();
        g.sort();
        g.dedup();
        g
    }

    /// Swapping K and L maps the set of triples to itself.
    pub fn conjugation_stable(&self) -> bool {
        let set: std::collections::HashSet<_> = self.triples.iter().map(|t| (&t.j, &t.k, &t.l)).collect();
        self.triples.iter().all(|t| set.contains(&(&t.j, &t.l, &t.k)))
    }
}

/// Reads the witness triples off the Dolbeault relations: a pair (I, J)
/// with I ⊆ {1..s+t}, J ⊆ {s+1..s+t} becomes (I∩{1..s}, I∖{1..s}, J).
pub fn witness_triples(u: &UnitSystem, r: &RelationSet, rdeg: Option<usize>) -> Result<(Vec<Triple>, Vec<String>), OtError> {
    let s = u.s();
    let bits = u.bits();
    let prec = u.precision();
    let mut triples = vec![];
    let mut by_kl: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>> = HashMap::new();
    for (i_set, j_set) in &r.dolbeault {
        let j: Vec<usize> = i_set.iter().copied().filter(|&x| x <= s).collect();
        let k: Vec<usize> = i_set.iter().copied().filter(|&x| x > s).map(|x| x - s).collect();
        let l: Vec<usize> = j_set.iter().map(|&x| x - s).collect();
        let grade = j.len() + k.len();
        if rdeg.is_some_and(|g| g != grade) {
            continue;
        }
        let mut lambda = vec![];
        let mut delta_c = vec![];
        for h in 0..s {
            let mut lam = Float::with_val(bits, if j.contains(&(h + 1)) { 1 } else { 0 });
            let mut dc = Float::new(bits);
            for &kk in &k {
                lam += Float::with_val(bits, &u.b[h][kk - 1] / 2u32);
                dc += &u.c[h][kk - 1];
            }
            for &ll in &l {
                lam += Float::with_val(bits, &u.b[h][ll - 1] / 2u32);
                dc -= &u.c[h][ll - 1];
            }
            match prec.classify(&Float::with_val(bits, lam.abs_ref())) {
                Closeness::Equal => {}
                Closeness::Distinct => return Err(OtError::NoWitness { k, l }),
                Closeness::Ambiguous => return Err(OtError::AmbiguousNumeric(format!("weight of {j:?},{k:?},{l:?}"))),
            }
            lambda.push(lam);
            delta_c.push(dc);
        }
        by_kl.entry((k.clone(), l.clone())).or_default().push(triples.len());
        triples.push(Triple { j, k, l, grade, lambda, delta_c });
    }
    let mut shared: Vec<String> = by_kl
        .iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|((k, l), v)| format!("K={k:?} L={l:?} has {} witnesses", v.len()))
        .collect();
    shared.sort();
    Ok((triples, shared))
}

/// dΨ = (i/2) Σ_h Λ_h (ω^h - ω̄^h) with Λ_h = λ_h - i Δc_h, from
/// d log Im w^h = (ω^h - ω̄^h) / (2i).
fn d_psi(alg: &CoframeAlgebra, tr: &Triple) -> Form {
    let bits = alg.bits();
    let mut f = Form::zero(bits);
    for h in 0..alg.s {
        let cap = Complex::with_val(bits, (&tr.lambda[h], Float::with_val(bits, -&tr.delta_c[h])));
        let coeff = Complex::with_val(bits, &cap * Complex::with_val(bits, (0, 1))) / 2u32;
        let w = alg.prod(&[alg.omega(h)]).sub(&alg.prod(&[alg.omega_bar(h)]));
        f = f.add(&w.scale(&coeff));
    }
    f
}

pub fn build_vb_complex(u: &UnitSystem, r: &RelationSet, rdeg: Option<usize>) -> Result<VbModel, OtError> {
    let alg = CoframeAlgebra::from_units(u);
    let (triples, shared_witnesses) = witness_triples(u, r, rdeg)?;
    build_vb_from(&alg, triples, shared_witnesses)
}

pub fn build_vb_from(alg: &CoframeAlgebra, triples: Vec<Triple>, shared_witnesses: Vec<String>) -> Result<VbModel, OtError> {
    let s = alg.s;
    let bits = alg.bits();
    let prec = alg.precision;
    // ω, ω̄ part
    let b_gens: Vec<usize> = (0..s).flat_map(|k| [alg.omega(k), alg.omega_bar(k)]).collect();
    let mut basis: BTreeMap<Bidegree, Vec<(usize, Mono)>> = BTreeMap::new();
    let mut index: HashMap<(usize, Mono), (Bidegree, usize)> = HashMap::new();
    for (ti, tr) in triples.iter().enumerate() {
        let kl: Vec<usize> = tr.k.iter().map(|&k| alg.gamma(k - 1)).chain(tr.l.iter().map(|&l| alg.gamma_bar(l - 1))).collect();
        let kl_mono: Mono = kl.iter().map(|&g| 1u64 << g).sum();
        for sub in 0u64..1 << b_gens.len() {
            let extra: Mono = (0..b_gens.len()).filter(|i| sub >> i & 1 == 1).map(|i| 1u64 << b_gens[i]).sum();
            let m = kl_mono | extra;
            let bd = alg.bidegree(m);
            let list = basis.entry(bd).or_default();
            index.insert((ti, m), (bd, list.len()));
            list.push((ti, m));
        }
    }
    let dim = |b: Bidegree| basis.get(&b).map_or(0, |v| v.len());
    let mut d1: BTreeMap<Bidegree, Matrix<MpC>> = BTreeMap::new();
    let mut d2: BTreeMap<Bidegree, Matrix<MpC>> = BTreeMap::new();
    let dpsis: Vec<Form> = triples.iter().map(|tr| d_psi(alg, tr)).collect();
    for (&bd, list) in &basis {
        let mut m1 = Matrix::zeros(dim((bd.0 + 1, bd.1)), list.len(), &prec);
        let mut m2 = Matrix::zeros(dim((bd.0, bd.1 + 1)), list.len(), &prec);
        for (col, &(ti, m)) in list.iter().enumerate() {
            let one = Form::mono(bits, m, Complex::with_val(bits, 1));
            let image = dpsis[ti].wedge(&one).add(&alg.d_mono(m));
            for (&o, v) in &image.terms {
                if v.real().is_zero() && v.imag().is_zero() {
                    continue;
                }
                match index.get(&(ti, o)) {
                    Some(&(tb, row)) => {
                        let target = if tb.0 > bd.0 { &mut m1 } else { &mut m2 };
                        target.set(row, col, MpC(v.clone()));
                    }
                    None => {
                        let size = Float::with_val(bits, v.abs_ref());
                        if prec.classify(&size) != Closeness::Equal {
                            return Err(OtError::NotClosed { element: alg.name(m), image: alg.name(o), size: size.to_f64() });
                        }
                    }
                }
            }
        }
        if m1.rows > 0 {
            d1.insert(bd, m1);
        }
        if m2.rows > 0 {
            d2.insert(bd, m2);
        }
    }
    let labels = basis
        .iter()
        .map(|(&b, v)| {
            let names = v.iter().map(|&(ti, m)| format!("e{}.{}", ti + 1, alg.name(m))).collect();
            (b, names)
        })
        .collect();
    let complex = build_double_complex(labels, d1, d2, prec)?;
    Ok(VbModel { triples, basis, complex, shared_witnesses })
}
