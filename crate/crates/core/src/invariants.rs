//! Closed-form cohomology of an OT manifold from its relation counts.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dcomplex::shape::Shape;
use crate::relations::{pluriclosed_relation_structure, RelationSet};
use crate::units::Verdict;

/// Table indexed `[p][q]` for 0 <= p, q <= dim.
pub type Table = Vec<Vec<usize>>;

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn binom_i(n: usize, k: i64) -> usize {
    if k < 0 {
        0
    } else {
        binom(n, k as usize)
    }
}

fn zero_table(dim: usize) -> Table {
    vec![vec![0; dim + 1]; dim + 1]
}

/// b_k = Σ_{ℓ+m=k} C(s,ℓ) ρ_m, for k = 0..=2·dim.
pub fn betti_numbers(r: &RelationSet) -> Vec<usize> {
    let dim = r.dim();
    (0..=2 * dim)
        .map(|k| (0..=k).map(|l| binom(r.s, l) * r.rho(k - l)).sum())
        .collect()
}

/// h^{p,q} = Σ_{ℓ+m=q} C(s,ℓ) ρ_{p,m}.
pub fn hodge_numbers(r: &RelationSet) -> Table {
    let dim = r.dim();
    let mut h = zero_table(dim);
    for (p, row) in h.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate() {
            *cell = (0..=q).map(|l| binom(r.s, l) * r.rho_pm(p, q - l)).sum();
        }
    }
    h
}

/// Dolbeault numbers of the summand V^rB; nonzero only in row p = rdeg.
pub fn vrb_dolbeault(r: &RelationSet, rdeg: usize) -> Table {
    let dim = r.dim();
    let mut h = zero_table(dim);
    if rdeg <= dim {
        for q in 0..=dim {
            h[rdeg][q] = (0..=q).map(|q1| binom(r.s, q1) * r.rho_pm(rdeg, q - q1)).sum();
        }
    }
    h
}

/// h_BC^{p,q} = Σ_r h_BC^{p,q}(V^rB) where the summand contributes
/// h^{r,p+q-r} when r >= p, q and h^{r,p+q-r-1} when r < p, q.
pub fn bott_chern_numbers(r: &RelationSet) -> Table {
    let dim = r.dim();
    let mut h = zero_table(dim);
    let vrb: Vec<Table> = (0..=dim).map(|k| vrb_dolbeault(r, k)).collect();
    let at = |rr: usize, q: i64| -> usize {
        if q < 0 || q as usize > dim {
            0
        } else {
            vrb[rr][rr][q as usize]
        }
    };
    for p in 0..=dim {
        for q in 0..=dim {
            h[p][q] = (0..=dim)
                .map(|rr| {
                    let d = (p + q) as i64 - rr as i64;
                    if rr >= p && rr >= q {
                        at(rr, d)
                    } else if rr < p && rr < q {
                        at(rr, d - 1)
                    } else {
                        0
                    }
                })
                .sum();
        }
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagReport {
    /// (d, p, q) -> multiplicity of S_d^{p,q}
    pub odd: BTreeMap<(usize, usize, usize), usize>,
    /// Even shapes; always empty for these manifolds.
    pub even: BTreeMap<Shape, usize>,
    pub convention: String,
}

pub const SHAPE_CONVENTION: &str = "S_d^{p,q}: odd zigzag whose total-degree-d cells run from (p, d-p) to (d-q, q); length 2|p+q-d|+1";

/// Closed form: V^rB carries only shapes S_d^{r,r}, with multiplicity
/// h^{r,d-r}(V^rB).
pub fn zigzag_multiplicities(r: &RelationSet) -> ZigzagReport {
    let dim = r.dim();
    let mut odd = BTreeMap::new();
    for rr in 0..=dim {
        let v = vrb_dolbeault(r, rr);
        for d in rr..=rr + dim {
            let m = v[rr][d - rr];
            if m > 0 {
                odd.insert((d, rr, rr), m);
            }
        }
    }
    ZigzagReport { odd, even: BTreeMap::new(), convention: SHAPE_CONVENTION.into() }
}

/// Splits a Dolbeault relation (I, J) into the sizes of its real part,
/// its unbarred complex part and its barred part.
fn witness_sizes(s: usize, i: &[usize], j: &[usize]) -> (usize, usize, usize) {
    let real = i.iter().filter(|&&x| x <= s).count();
    (real, i.len() - real, j.len())
}

/// Relations whose unbarred and barred complex parts differ in size.
pub fn unbalanced_witnesses(r: &RelationSet) -> Vec<(Vec<usize>, Vec<usize>)> {
    r.dolbeault
        .iter()
        .filter(|(i, j)| {
            let (_, k, l) = witness_sizes(r.s, i, j);
            k != l
        })
        .cloned()
        .collect()
}

/// Zigzags placed relation by relation: the summand of a witness
/// (J, K, L) is the twisted algebra on ω, ω̄, whose shapes are
/// S^{|J|,|J|}, shifted by (|K|, |L|). Agrees with the closed form
/// exactly when every relation has |K| = |L|.
pub fn witness_zigzags(r: &RelationSet) -> ZigzagReport {
    let mut odd = BTreeMap::new();
    for (i, j) in &r.dolbeault {
        let (nj, nk, nl) = witness_sizes(r.s, i, j);
        for extra in 0..=r.s {
            let d = nj + extra + nk + nl;
            *odd.entry((d, nj + nk, nj + nl)).or_default() += binom(r.s, extra);
        }
    }
    ZigzagReport { odd, even: BTreeMap::new(), convention: SHAPE_CONVENTION.into() }
}

fn count_cells(z: &ZigzagReport, dim: usize, f: impl Fn(&Shape) -> Vec<(i32, i32)>) -> Table {
    let mut h = zero_table(dim);
    for (&(d, p, q), &m) in &z.odd {
        let shape = Shape::Odd { d: d as i32, p: p as i32, q: q as i32 };
        for (a, b) in f(&shape) {
            if (0..=dim as i32).contains(&a) && (0..=dim as i32).contains(&b) {
                h[a as usize][b as usize] += m;
            }
        }
    }
    h
}

/// Bott-Chern numbers counted shape by shape.
pub fn bott_chern_from_zigzags(z: &ZigzagReport, dim: usize) -> Table {
    count_cells(z, dim, Shape::bott_chern)
}

/// Aeppli numbers by counting, for each odd shape, the cells that
/// survive in Aeppli cohomology (its bottom-left corners, or its
/// degree-d cells for shapes of the other parity).
pub fn aeppli_numbers(z: &ZigzagReport, dim: usize) -> Table {
    count_cells(z, dim, Shape::aeppli)
}

pub fn pluriclosed_closed_forms(s: usize) -> (Vec<usize>, Table) {
    let dim = 2 * s;
    let betti = (0..=2 * dim)
        .map(|l| (0..=s).map(|k| binom_i(s, l as i64 - 3 * k as i64) * binom(s, k)).sum())
        .collect();
    let mut h = zero_table(dim);
    for p in (0..=dim).step_by(2) {
        for q in 0..=dim {
            h[p][q] = binom_i(s, q as i64 - (p / 2) as i64) * binom(s, p / 2);
        }
    }
    (betti, h)
}

fn cell(t: &Table, p: usize, q: usize) -> usize {
    t.get(p).and_then(|row| row.get(q)).copied().unwrap_or(0)
}

/// The cohomological side of the pluriclosed criterion.
pub fn cohomological_pluriclosed_test(r: &RelationSet) -> (Verdict, Option<String>) {
    let (s, t) = (r.s, r.t);
    if s != t {
        return (Verdict::Fails, Some(format!("s = {s} differs from t = {t}")));
    }
    let h = hodge_numbers(r);
    if cell(&h, 2, 1) != s {
        return (Verdict::Fails, Some(format!("h^(2,1) = {} differs from s", cell(&h, 2, 1))));
    }
    if cell(&h, 4, 2) != binom(s, 2) {
        return (Verdict::Fails, Some(format!("h^(4,2) = {} differs from C(s,2)", cell(&h, 4, 2))));
    }
    if cell(&h, 1, 2) != 0 {
        return (Verdict::Fails, Some("h^(1,2) is nonzero".into()));
    }
    pluriclosed_relation_structure(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub s: usize,
    pub t: usize,
    pub betti: Vec<usize>,
    pub hodge: Table,
    pub vrb_hodge: Vec<Table>,
    pub bott_chern: Table,
    pub aeppli: Table,
    pub zigzags: ZigzagReport,
    pub frolicher_degenerate: bool,
    /// Relations with |K| != |L|; when present the three tables below
    /// differ from the closed forms above.
    pub unbalanced: Vec<(Vec<usize>, Vec<usize>)>,
    pub witness_zigzags: ZigzagReport,
    pub witness_bott_chern: Table,
    pub witness_aeppli: Table,
}

pub fn cohomology_report(r: &RelationSet) -> CohomologyReport {
    let dim = r.dim();
    let zigzags = zigzag_multiplicities(r);
    let wz = witness_zigzags(r);
    CohomologyReport {
        s: r.s,
        t: r.t,
        betti: betti_numbers(r),
        hodge: hodge_numbers(r),
        vrb_hodge: (0..=dim).map(|k| vrb_dolbeault(r, k)).collect(),
        bott_chern: bott_chern_numbers(r),
        aeppli: aeppli_numbers(&zigzags, dim),
        zigzags,
        frolicher_degenerate: true,
        unbalanced: unbalanced_witnesses(r),
        witness_bott_chern: bott_chern_from_zigzags(&wz, dim),
        witness_aeppli: aeppli_numbers(&wz, dim),
        witness_zigzags: wz,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Relations of the datum x^3 - x - 1 with U generated by the root.
    pub(crate) fn inoue_relations() -> RelationSet {
        RelationSet::from_parts(1, 1, vec![vec![], vec![1, 2, 3]], vec![(vec![], vec![]), (vec![1, 2], vec![2])])
    }

    /// Relations of a pluriclosed datum with s = t = 2 and triples
    /// {1,3,5}, {2,4,6}.
    pub(crate) fn pluriclosed22() -> RelationSet {
        let derham = vec![vec![], vec![1, 3, 5], vec![2, 4, 6], vec![1, 2, 3, 4, 5, 6]];
        let dol = vec![
            (vec![], vec![]),
            (vec![1, 3], vec![3]),
            (vec![2, 4], vec![4]),
            (vec![1, 2, 3, 4], vec![3, 4]),
        ];
        RelationSet::from_parts(2, 2, derham, dol)
    }

    #[test]
    fn inoue_numbers() {
        let r = inoue_relations();
        assert_eq!(betti_numbers(&r), vec![1, 1, 0, 1, 1]);
        let h = hodge_numbers(&r);
        assert_eq!(h, vec![vec![1, 1, 0], vec![0, 0, 0], vec![0, 1, 1]]);
        assert_eq!(bott_chern_numbers(&r)[1][1], 1);
        assert_eq!(bott_chern_numbers(&r)[0][0], 1);
        assert_eq!(cohomological_pluriclosed_test(&r).0, Verdict::Holds);
    }

    #[test]
    fn pluriclosed_generic_matches_closed_form() {
        let r = pluriclosed22();
        let (b, h) = pluriclosed_closed_forms(2);
        assert_eq!(betti_numbers(&r), b);
        assert_eq!(b, vec![1, 2, 1, 2, 4, 2, 1, 2, 1]);
        assert_eq!(hodge_numbers(&r), h);
        assert_eq!(h[2][1], 2);
        assert_eq!(h[4][2], 1);
        let v = vrb_dolbeault(&r, 2);
        for q in 1..=3 {
            assert_eq!(v[2][q], 2 * binom(2, q - 1));
        }
        let z = zigzag_multiplicities(&r);
        assert!(z.odd.keys().all(|&(_, p, q)| p == q && [0, 2, 4].contains(&p)));
        assert_eq!(cohomological_pluriclosed_test(&r).0, Verdict::Holds);
    }

    #[test]
    fn aeppli_is_dual_to_bott_chern() {
        for r in [inoue_relations(), pluriclosed22()] {
            let dim = r.dim();
            let bc = bott_chern_numbers(&r);
            let a = aeppli_numbers(&zigzag_multiplicities(&r), dim);
            for p in 0..=dim {
                for q in 0..=dim {
                    assert_eq!(a[p][q], bc[dim - p][dim - q], "({p},{q})");
                }
            }
            assert_eq!(a[dim][dim], 1);
        }
    }

    #[test]
    fn overlapping_triples_fail() {
        let derham = vec![vec![], vec![1, 3, 5], vec![1, 4, 6]];
        let dol = vec![(vec![], vec![]), (vec![1, 3], vec![3]), (vec![1, 4], vec![4])];
        let r = RelationSet::from_parts(2, 2, derham, dol);
        assert_eq!(cohomological_pluriclosed_test(&r).0, Verdict::Fails);
    }

    #[test]
    fn witness_placement_agrees_when_balanced() {
        for r in [inoue_relations(), pluriclosed22()] {
            assert!(unbalanced_witnesses(&r).is_empty());
            assert_eq!(witness_zigzags(&r), zigzag_multiplicities(&r));
            assert_eq!(bott_chern_from_zigzags(&witness_zigzags(&r), r.dim()), bott_chern_numbers(&r));
        }
    }

    #[test]
    fn unbalanced_witness_moves_off_the_diagonal() {
        // s = 1, t = 3 with a relation σ1 σ2 conj(σ3 σ4) = 1 and its conjugate
        let dol = vec![(vec![], vec![]), (vec![1, 2], vec![3, 4]), (vec![1, 3, 4], vec![2])];
        let r = RelationSet::from_parts(1, 3, vec![], dol);
        assert_eq!(unbalanced_witnesses(&r).len(), 2);
        let w = witness_zigzags(&r);
        assert_eq!(w.odd.get(&(4, 2, 3)), Some(&1));
        assert_eq!(w.odd.get(&(4, 3, 2)), Some(&1));
        let c = zigzag_multiplicities(&r);
        assert_eq!(c.odd.values().sum::<usize>(), w.odd.values().sum::<usize>());
        assert_ne!(c, w);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(2, 3), 0);
        assert_eq!(binom(0, 0), 1);
    }
}
