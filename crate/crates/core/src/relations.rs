//! Multiplicative relations among the embeddings of a unit subgroup.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rayon::prelude::*;
use rug::{Complex, Float};
use serde::Serialize;
use thiserror::Error;

use crate::precision::Closeness;
use crate::units::{UnitSystem, Verdict};

pub const MAX_EMBEDDINGS: usize = 24;

/// Window of the double-precision screen; anything it lets through is
/// decided again at full precision.
const SCREEN: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelationError {
    #[error("{0} embeddings exceed the enumeration bound of {MAX_EMBEDDINGS}")]
    EnumerationTooLarge(usize),
}

/// Subsets I with Π_{i∈I} σ_i(u) = 1 for every u in U, in both the
/// de Rham form (I ⊆ {1..s+2t}) and the Dolbeault form
/// (I ⊆ {1..s+t}, J ⊆ {s+1..s+t}, σ_I conj(σ_J) ≡ 1).
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationSet {
    pub s: usize,
    pub t: usize,
    pub derham: Vec<Vec<usize>>,
    pub dolbeault: Vec<(Vec<usize>, Vec<usize>)>,
    pub rho: BTreeMap<usize, usize>,
    pub rho_pm: BTreeMap<(usize, usize), usize>,
    /// Subsets whose product fell in the refusal band.
    pub ambiguity_flags: Vec<String>,
}

impl RelationSet {
    /// Builds the counts from explicit relation lists.
    pub fn from_parts(s: usize, t: usize, derham: Vec<Vec<usize>>, dolbeault: Vec<(Vec<usize>, Vec<usize>)>) -> Self {
        let mut rho: BTreeMap<usize, usize> = (0..=s + 2 * t).map(|m| (m, 0)).collect();
        for d in &derham {
            *rho.entry(d.len()).or_default() += 1;
        }
        let mut rho_pm: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for p in 0..=s + t {
            for m in 0..=t {
                rho_pm.insert((p, m), 0);
            }
        }
        for (i, j) in &dolbeault {
            *rho_pm.entry((i.len(), j.len())).or_default() += 1;
        }
        RelationSet { s, t, derham, dolbeault, rho, rho_pm, ambiguity_flags: vec![] }
    }

    pub fn rho(&self, m: usize) -> usize {
        self.rho.get(&m).copied().unwrap_or(0)
    }

    pub fn rho_pm(&self, p: usize, m: usize) -> usize {
        self.rho_pm.get(&(p, m)).copied().unwrap_or(0)
    }

    pub fn is_certified(&self) -> bool {
        self.ambiguity_flags.is_empty()
    }

    /// Complex dimension s + t.
    pub fn dim(&self) -> usize {
        self.s + self.t
    }
}

fn mask_to_set(mask: u32, labels: &[usize]) -> Vec<usize> {
    (0..labels.len()).filter(|k| mask >> k & 1 == 1).map(|k| labels[k]).collect()
}

fn screen(logs: &[Vec<(f64, f64)>]) -> Vec<u32> {
    let n = logs.len();
    let gens = logs.first().map_or(0, |r| r.len());
    let low = n.min(16);
    let high = n - low;
    let mut out: Vec<u32> = (0u32..1 << high)
        .into_par_iter()
        .flat_map_iter(|h| {
            let mut acc = vec![(0f64, 0f64); gens];
            for k in 0..high {
                if h >> k & 1 == 1 {
                    for (a, v) in acc.iter_mut().zip(&logs[low + k]) {
                        a.0 += v.0;
                        a.1 += v.1;
                    }
                }
            }
            let mut hits = vec![];
            let mut gray = 0u32;
            for step in 0u32..1 << low {
                if step > 0 {
                    let bit = step.trailing_zeros() as usize;
                    let sign = if gray >> bit & 1 == 1 { -1.0 } else { 1.0 };
                    gray ^= 1 << bit;
                    for (a, v) in acc.iter_mut().zip(&logs[bit]) {
                        a.0 += sign * v.0;
                        a.1 += sign * v.1;
                    }
                }
                let near_one = acc.iter().all(|&(m, a)| {
                    let wrapped = a - TAU * (a / TAU).round();
                    m.abs() < SCREEN && wrapped.abs() < SCREEN
                });
                if near_one {
                    hits.push(gray | h << low);
                }
            }
            hits.into_iter()
        })
        .collect();
    out.sort_unstable();
    out
}

/// Candidate masks confirmed at full precision; returns relations and flags.
fn confirm(u: &UnitSystem, values: &[Vec<Complex>], masks: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
    let prec = u.precision();
    let bits = prec.bits();
    let gens = u.generators.len();
    let verdicts: Vec<(u32, Closeness)> = masks
        .into_par_iter()
        .map(|mask| {
            let mut worst = Closeness::Equal;
            for j in 0..gens {
                let mut p = Complex::with_val(bits, 1);
                for (k, row) in values.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        p *= &row[j];
                    }
                }
                p -= 1u32;
                let d = Float::with_val(bits, p.abs_ref());
                match prec.classify(&d) {
                    Closeness::Equal => {}
                    Closeness::Distinct => return (mask, Closeness::Distinct),
                    Closeness::Ambiguous => worst = Closeness::Ambiguous,
                }
            }
            (mask, worst)
        })
        .collect();
    let rel = verdicts.iter().filter(|v| v.1 == Closeness::Equal).map(|v| v.0).collect();
    let amb = verdicts.iter().filter(|v| v.1 == Closeness::Ambiguous).map(|v| v.0).collect();
    (rel, amb)
}

fn f64_logs(values: &[Vec<Complex>]) -> Vec<Vec<(f64, f64)>> {
    values
        .iter()
        .map(|row| {
            row.iter()
                .map(|z| {
                    let bits = z.prec().0;
                    let m = Float::with_val(bits, z.abs_ref()).ln().to_f64();
                    let a = Float::with_val(bits, z.arg_ref()).to_f64();
                    (m, a)
                })
                .collect()
        })
        .collect()
}

fn by_len_then_lex(a: &Vec<usize>, b: &Vec<usize>) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub struct DerhamRelations {
    pub subsets: Vec<Vec<usize>>,
    pub flags: Vec<Vec<usize>>,
}

pub fn enumerate_derham_relations(u: &UnitSystem) -> Result<DerhamRelations, RelationError> {
    let n = u.s() + 2 * u.t();
    if n > MAX_EMBEDDINGS {
        return Err(RelationError::EnumerationTooLarge(n));
    }
    let labels: Vec<usize> = (1..=n).collect();
    let masks = screen(&f64_logs(&u.sigma));
    let (rel, amb) = confirm(u, &u.sigma, masks);
    let mut subsets: Vec<Vec<usize>> = rel.iter().map(|&m| mask_to_set(m, &labels)).collect();
    subsets.sort_by(by_len_then_lex);
    let flags = amb.iter().map(|&m| mask_to_set(m, &labels)).collect();
    Ok(DerhamRelations { subsets, flags })
}

pub struct DolbeaultRelations {
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
    pub flags: Vec<(Vec<usize>, Vec<usize>)>,
}

pub fn enumerate_dolbeault_relations(u: &UnitSystem) -> Result<DolbeaultRelations, RelationError> {
    let (s, t) = (u.s(), u.t());
    let n = s + 2 * t;
    if n > MAX_EMBEDDINGS {
        return Err(RelationError::EnumerationTooLarge(n));
    }
    // bits 0..s+t select I, bits s+t.. select J through conjugates
    let mut values: Vec<Vec<Complex>> = u.sigma[..s + t].to_vec();
    for i in 0..t {
        values.push(u.sigma[s + i].iter().map(|z| Complex::with_val(z.prec(), z.conj_ref())).collect());
    }
    let masks = screen(&f64_logs(&values));
    let (rel, amb) = confirm(u, &values, masks);
    let split = |m: u32| {
        let i: Vec<usize> = (0..s + t).filter(|k| m >> k & 1 == 1).map(|k| k + 1).collect();
        let j: Vec<usize> = (0..t).filter(|k| m >> (s + t + k) & 1 == 1).map(|k| s + k + 1).collect();
        (i, j)
    };
    let mut pairs: Vec<_> = rel.into_iter().map(split).collect();
    pairs.sort_by(|a, b| {
        (a.0.len(), a.1.len()).cmp(&(b.0.len(), b.1.len())).then_with(|| a.cmp(b))
    });
    let flags = amb.into_iter().map(split).collect();
    Ok(DolbeaultRelations { pairs, flags })
}

pub fn enumerate_relations(u: &UnitSystem) -> Result<RelationSet, RelationError> {
    let d = enumerate_derham_relations(u)?;
    let b = enumerate_dolbeault_relations(u)?;
    let mut r = RelationSet::from_parts(u.s(), u.t(), d.subsets, b.pairs);
    for f in d.flags {
        r.ambiguity_flags.push(format!("de Rham subset {f:?}"));
    }
    for (i, j) in b.flags {
        r.ambiguity_flags.push(format!("Dolbeault pair {i:?} / {j:?}"));
    }
    Ok(r)
}

/// Whether the length-3 relations are s pairwise disjoint triples
/// {k, s+i, s+t+i} covering every embedding.
pub fn pluriclosed_relation_structure(r: &RelationSet) -> (Verdict, Option<String>) {
    let (s, t) = (r.s, r.t);
    if s != t {
        return (Verdict::Fails, Some(format!("s = {s} differs from t = {t}")));
    }
    let triples: Vec<&Vec<usize>> = r.derham.iter().filter(|d| d.len() == 3).collect();
    if triples.len() != s {
        return (Verdict::Fails, Some(format!("{} relations of length 3, expected {s}", triples.len())));
    }
    let mut seen = vec![false; s + 2 * t + 1];
    for tri in &triples {
        let real: Vec<usize> = tri.iter().copied().filter(|&i| i <= s).collect();
        let upper: Vec<usize> = tri.iter().copied().filter(|&i| i > s && i <= s + t).collect();
        let ok_shape = real.len() == 1 && upper.len() == 1 && tri.contains(&(upper[0] + t));
        if !ok_shape {
            return (Verdict::Fails, Some(format!("relation {tri:?} is not of the form {{k, s+i, s+t+i}}")));
        }
        for &i in tri.iter() {
            if seen[i] {
                return (Verdict::Fails, Some(format!("index {i} lies in two length-3 relations")));
            }
            seen[i] = true;
        }
    }
    (Verdict::Holds, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_detects_overlap() {
        let r = RelationSet::from_parts(2, 2, vec![vec![], vec![1, 3, 5], vec![1, 4, 6]], vec![]);
        assert_eq!(pluriclosed_relation_structure(&r).0, Verdict::Fails);
        let r = RelationSet::from_parts(2, 2, vec![vec![], vec![1, 3, 5], vec![2, 4, 6]], vec![]);
        assert_eq!(pluriclosed_relation_structure(&r).0, Verdict::Holds);
    }

    #[test]
    fn screen_finds_products_equal_to_one() {
        // values 2, 1/2, -1, -1 on one generator
        let logs = vec![
            vec![(2f64.ln(), 0.0)],
            vec![(-(2f64.ln()), 0.0)],
            vec![(0.0, std::f64::consts::PI)],
            vec![(0.0, std::f64::consts::PI)],
        ];
        assert_eq!(screen(&logs), vec![0b0000, 0b0011, 0b1100, 0b1111]);
    }
}
