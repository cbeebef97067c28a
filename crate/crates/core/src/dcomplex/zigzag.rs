use std::collections::BTreeMap;

use serde::Serialize;

use super::cohomology::{aeppli_dims, bott_chern_dims, column_cohomology, de_rham_dims, row_cohomology, DimTable};
use super::complex::DoubleComplex;
use super::linalg::LinAlg;
use super::pages::{frolicher_pages, refined_betti};
use super::shape::{Bidegree, Orientation, Shape};
use super::DcError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualCheck {
    pub name: String,
    pub passed: bool,
}

/// Multiplicities of every indecomposable summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagDecomposition {
    /// (d, p, q) -> multiplicity of S_d^{p,q}
    pub odd: BTreeMap<(i32, i32, i32), usize>,
    /// (orientation, r, p, q) -> multiplicity of the even zigzag realizing
    /// d_r with source (p, q)
    pub even: BTreeMap<(Orientation, i32, i32, i32), usize>,
    /// bottom-left corner -> number of squares
    pub squares: BTreeMap<Bidegree, usize>,
    pub residual: Vec<ResidualCheck>,
}

impl ZigzagDecomposition {
    pub fn shapes(&self) -> Vec<(Shape, usize)> {
        let mut v: Vec<(Shape, usize)> = self.odd.iter().map(|(&(d, p, q), &m)| (Shape::Odd { d, p, q }, m)).collect();
        v.extend(self.even.iter().map(|(&(orientation, r, p, q), &m)| (Shape::Even { orientation, r, p, q }, m)));
        v.extend(self.squares.iter().map(|(&(p, q), &m)| (Shape::Square { p, q }, m)));
        v
    }

    pub fn square_count(&self) -> usize {
        self.squares.values().sum()
    }
}

fn predict(shapes: &[(Shape, usize)], f: impl Fn(&Shape) -> Vec<Bidegree>) -> DimTable {
    let mut t = DimTable::new();
    for (s, m) in shapes {
        for b in f(s) {
            *t.entry(b).or_default() += m;
        }
    }
    t
}

/// Solves for square positions from the dimensions left over once the
/// zigzags are accounted for.
fn solve_squares<S: LinAlg>(c: &DoubleComplex<S>, zig: &[(Shape, usize)]) -> Result<BTreeMap<Bidegree, usize>, DcError> {
    let mut left: BTreeMap<Bidegree, i64> = c.support().into_iter().map(|b| (b, c.dim(b) as i64)).collect();
    for (s, m) in zig {
        for b in s.cells().cells {
            *left.entry(b).or_default() -= *m as i64;
        }
    }
    let (p0, p1, q0, q1) = c.bounds();
    let mut sq: BTreeMap<Bidegree, i64> = BTreeMap::new();
    let get = |m: &BTreeMap<Bidegree, i64>, b: Bidegree| m.get(&b).copied().unwrap_or(0);
    for p in p0..=p1 + 1 {
        for q in q0..=q1 + 1 {
            let n = get(&left, (p, q)) - get(&sq, (p - 1, q)) - get(&sq, (p, q - 1)) - get(&sq, (p - 1, q - 1));
            if n < 0 || (n > 0 && (p == p1 || q == q1 || p > p1 || q > q1)) {
                return Err(DcError::ResidualCheckFailed(format!("dimensions at {:?} are not explained by squares", (p, q))));
            }
            if n > 0 {
                sq.insert((p, q), n);
            }
        }
    }
    Ok(sq.into_iter().map(|(b, n)| (b, n as usize)).collect())
}

/// Decomposes a double complex into zigzags and squares: odd shapes from
/// refined Betti numbers, even shapes from the page differentials of
/// the two Frölicher spectral sequences, squares from what remains.
/// Every cohomology is then recomputed from the multiplicities and
/// compared against direct linear algebra.
pub fn zigzag_decompose<S: LinAlg>(c: &DoubleComplex<S>) -> Result<ZigzagDecomposition, DcError> {
    let odd = refined_betti(c)?;
    let pages = frolicher_pages(c, None)?;
    let mut even = BTreeMap::new();
    for (orientation, list) in [(Orientation::Column, &pages.column), (Orientation::Row, &pages.row)] {
        for page in list {
            for (&(p, q), &n) in &page.ranks {
                even.insert((orientation, page.r as i32, p, q), n);
            }
        }
    }
    let mut zig: Vec<(Shape, usize)> = odd.iter().map(|(&(d, p, q), &m)| (Shape::Odd { d, p, q }, m)).collect();
    zig.extend(even.iter().map(|(&(orientation, r, p, q), &m)| (Shape::Even { orientation, r, p, q }, m)));
    let squares = solve_squares(c, &zig)?;

    let mut residual = vec![];
    let mut check = |name: &str, passed: bool| residual.push(ResidualCheck { name: name.into(), passed });
    check("column cohomology", predict(&zig, Shape::column) == column_cohomology(c)?);
    check("row cohomology", predict(&zig, Shape::row) == row_cohomology(c)?);
    check("Bott-Chern", predict(&zig, Shape::bott_chern) == bott_chern_dims(c)?);
    check("Aeppli", predict(&zig, Shape::aeppli) == aeppli_dims(c)?);
    let mut dr: BTreeMap<i32, usize> = BTreeMap::new();
    for (s, m) in &zig {
        if let Some(d) = s.de_rham() {
            *dr.entry(d).or_default() += m;
        }
    }
    check("de Rham", dr == de_rham_dims(c)?);
    let cells: usize = zig.iter().map(|(s, m)| s.size() * m).sum::<usize>() + 4 * squares.values().sum::<usize>();
    check("total dimension", cells == c.total_dim());
    if let Some(bad) = residual.iter().find(|r| !r.passed) {
        return Err(DcError::ResidualCheckFailed(bad.name.clone()));
    }
    Ok(ZigzagDecomposition { odd, even, squares, residual })
}
