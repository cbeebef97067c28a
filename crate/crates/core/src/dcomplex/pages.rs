//! Frölicher spectral sequences and refined Betti numbers, computed
//! from ranks of filtered pieces of the total differential.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use super::cohomology::DimTable;
use super::complex::DoubleComplex;
use super::linalg::LinAlg;
use super::matrix::Matrix;
use super::shape::{Bidegree, Orientation};
use super::DcError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Page {
    pub r: usize,
    pub dims: DimTable,
    /// Rank of d_r out of each position, nonzero entries only.
    pub ranks: DimTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrolicherPages {
    /// Filtration by p; E_1 is ∂̄-cohomology.
    pub column: Vec<Page>,
    /// Filtration by q; E_1 is ∂-cohomology.
    pub row: Vec<Page>,
}

struct Filtered<'a, S: LinAlg> {
    c: &'a DoubleComplex<S>,
    orientation: Orientation,
    cache: Mutex<HashMap<(i32, i32, i32), usize>>,
}

impl<S: LinAlg> Filtered<'_, S> {
    fn idx(&self, b: Bidegree) -> i32 {
        match self.orientation {
            Orientation::Column => b.0,
            Orientation::Row => b.1,
        }
    }

    fn pos(&self, a: i32, k: i32) -> Bidegree {
        match self.orientation {
            Orientation::Column => (a, k - a),
            Orientation::Row => (k - a, a),
        }
    }

    fn fdim(&self, a: i32, k: i32) -> usize {
        self.c.total_degree(k).blocks.iter().filter(|b| self.idx(b.0) >= a).map(|b| b.2).sum()
    }

    /// rank of D_k from F^a into the pieces of filtration index < b
    fn rk(&self, k: i32, a: i32, b: i32) -> Result<usize, DcError> {
        if let Some(&v) = self.cache.lock().unwrap().get(&(k, a, b)) {
            return Ok(v);
        }
        let m = self.c.total_d_filtered(k, |x| self.idx(x) >= a, |x| self.idx(x) < b);
        let v = if m.rows == 0 || m.cols == 0 { 0 } else { self.c.rank(&m)? };
        self.cache.lock().unwrap().insert((k, a, b), v);
        Ok(v)
    }

    fn z(&self, r: i32, a: i32, k: i32) -> Result<usize, DcError> {
        Ok(self.fdim(a, k) - self.rk(k, a, a + r)?)
    }

    /// dim(D(F^a A^{k-1}) ∩ F^b A^k)
    fn bnd(&self, a: i32, b: i32, k: i32) -> Result<usize, DcError> {
        Ok(self.rk(k - 1, a, i32::MAX)? - self.rk(k - 1, a, b)?)
    }

    fn e(&self, r: i32, a: i32, k: i32) -> Result<usize, DcError> {
        let plus = self.z(r, a, k)? + self.bnd(a - r + 1, a + 1, k)?;
        let minus = self.z(r - 1, a + 1, k)? + self.bnd(a - r + 1, a, k)?;
        Ok(plus - minus)
    }

    fn rank_out(&self, r: i32, a: i32, k: i32) -> Result<usize, DcError> {
        let plus = self.z(r, a, k)? + self.z(r, a + 1, k)?;
        let minus = self.z(r + 1, a, k)? + self.z(r - 1, a + 1, k)?;
        Ok(plus - minus)
    }

    fn pages(&self, max_r: usize) -> Result<Vec<Page>, DcError> {
        let support = self.c.support();
        let jobs: Vec<(usize, Bidegree)> = (1..=max_r).flat_map(|r| support.iter().map(move |&b| (r, b))).collect();
        let vals: Result<Vec<_>, DcError> = jobs
            .into_par_iter()
            .map(|(r, b)| {
                let k = b.0 + b.1;
                let a = self.idx(b);
                debug_assert_eq!(self.pos(a, k), b);
                Ok((r, b, self.e(r as i32, a, k)?, self.rank_out(r as i32, a, k)?))
            })
            .collect();
        let mut pages: Vec<Page> = (1..=max_r).map(|r| Page { r, dims: BTreeMap::new(), ranks: BTreeMap::new() }).collect();
        for (r, b, e, rank) in vals? {
            if e > 0 {
                pages[r - 1].dims.insert(b, e);
            }
            if rank > 0 {
                pages[r - 1].ranks.insert(b, rank);
            }
        }
        Ok(pages)
    }
}

/// Pages E_1..E_{max_r} of both filtrations. With `None` the pages run
/// until the sequence has certainly degenerated.
pub fn frolicher_pages<S: LinAlg>(c: &DoubleComplex<S>, max_r: Option<usize>) -> Result<FrolicherPages, DcError> {
    let (p0, p1, q0, q1) = c.bounds();
    let width = ((p1 - p0).max(q1 - q0) + 2) as usize;
    let max_r = max_r.unwrap_or(width);
    let mk = |orientation| Filtered { c, orientation, cache: Mutex::new(HashMap::new()) };
    Ok(FrolicherPages { column: mk(Orientation::Column).pages(max_r)?, row: mk(Orientation::Row).pages(max_r)? })
}

fn embed<S: LinAlg>(c: &DoubleComplex<S>, k: i32, keep: impl Fn(Bidegree) -> bool, basis: &Matrix<S>) -> Matrix<S> {
    let td = c.total_degree(k);
    let rows: Vec<usize> = td
        .blocks
        .iter()
        .filter(|b| keep(b.0))
        .flat_map(|&(_, off, n)| off..off + n)
        .collect();
    let mut out = Matrix::zeros(td.dim, basis.cols, &c.ctx);
    for (i, &r) in rows.iter().enumerate() {
        for j in 0..basis.cols {
            out.set(r, j, basis.get(i, j).clone());
        }
    }
    out
}

/// b_d^{p,q}: dimension of the graded piece of H^d(A) for the two
/// filtrations, which equals the multiplicity of S_d^{p,q}.
pub fn refined_betti<S: LinAlg>(c: &DoubleComplex<S>) -> Result<BTreeMap<(i32, i32, i32), usize>, DcError> {
    let (p0, p1, q0, q1) = c.bounds();
    let degs: Vec<i32> = c.degree_range().collect();
    let per_degree: Result<Vec<_>, DcError> = degs
        .into_par_iter()
        .map(|d| -> Result<Vec<((i32, i32, i32), usize)>, DcError> {
            let prev = c.total_d(d - 1);
            let dim_b = c.rank(&prev)?;
            let boundaries = S::image(&prev, &c.ctx)?;
            let span = |keep: &dyn Fn(Bidegree) -> bool| -> Result<Matrix<S>, DcError> {
                let m = c.total_d_filtered(d, keep, |_| true);
                let k = S::kernel(&m, &c.ctx)?;
                let z = embed(c, d, keep, &k);
                S::image(&z.hstack(&boundaries, &c.ctx), &c.ctx)
            };
            let xs: Vec<Matrix<S>> = (p0..=p1).map(|a| span(&|b: Bidegree| b.0 >= a)).collect::<Result<_, _>>()?;
            let ys: Vec<Matrix<S>> = (q0..=q1).map(|a| span(&|b: Bidegree| b.1 >= a)).collect::<Result<_, _>>()?;
            let np = xs.len();
            let nq = ys.len();
            // f has an extra zero row and column for F^{max+1} = B
            let mut f = vec![vec![0i64; nq + 1]; np + 1];
            for i in 0..np {
                for j in 0..nq {
                    let sum = c.rank(&xs[i].hstack(&ys[j], &c.ctx))?;
                    f[i][j] = (xs[i].cols + ys[j].cols) as i64 - sum as i64 - dim_b as i64;
                }
            }
            let mut out = vec![];
            for i in 0..np {
                for j in 0..nq {
                    let v = f[i][j] - f[i + 1][j] - f[i][j + 1] + f[i + 1][j + 1];
                    if v < 0 {
                        return Err(DcError::ResidualCheckFailed(format!("negative refined Betti number in degree {d}")));
                    }
                    if v > 0 {
                        out.push(((d, p0 + i as i32, q0 + j as i32), v as usize));
                    }
                }
            }
            Ok(out)
        })
        .collect();
    Ok(per_degree?.into_iter().flatten().collect())
}
