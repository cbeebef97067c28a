use std::collections::BTreeMap;

use rayon::prelude::*;

use super::complex::DoubleComplex;
use super::linalg::LinAlg;
use super::shape::Bidegree;
use super::DcError;

/// Nonzero dimensions by bidegree.
pub type DimTable = BTreeMap<Bidegree, usize>;

fn collect(v: Vec<(Bidegree, usize)>) -> DimTable {
    v.into_iter().filter(|&(_, n)| n > 0).collect()
}

fn per_bidegree<S: LinAlg>(
    c: &DoubleComplex<S>,
    f: impl Fn(Bidegree) -> Result<usize, DcError> + Sync,
) -> Result<DimTable, DcError> {
    let out: Result<Vec<_>, DcError> = c.support().into_par_iter().map(|b| f(b).map(|n| (b, n))).collect();
    Ok(collect(out?))
}

/// ∂̄-cohomology: cohomology of the columns under d2.
pub fn column_cohomology<S: LinAlg>(c: &DoubleComplex<S>) -> Result<DimTable, DcError> {
    per_bidegree(c, |(p, q)| {
        Ok(c.dim((p, q)) - c.rank(&c.d2_at((p, q)))? - c.rank(&c.d2_at((p, q - 1)))?)
    })
}

/// ∂-cohomology: cohomology of the rows under d1.
pub fn row_cohomology<S: LinAlg>(c: &DoubleComplex<S>) -> Result<DimTable, DcError> {
    per_bidegree(c, |(p, q)| {
        Ok(c.dim((p, q)) - c.rank(&c.d1_at((p, q)))? - c.rank(&c.d1_at((p - 1, q)))?)
    })
}

pub fn de_rham_dims<S: LinAlg>(c: &DoubleComplex<S>) -> Result<BTreeMap<i32, usize>, DcError> {
    let degs: Vec<i32> = c.degree_range().collect();
    let out: Result<Vec<_>, DcError> = degs
        .into_par_iter()
        .map(|k| {
            let n = c.total_degree(k).dim;
            Ok((k, n - c.rank(&c.total_d(k))? - c.rank(&c.total_d(k - 1))?))
        })
        .collect();
    Ok(out?.into_iter().filter(|&(_, n)| n > 0).collect())
}

/// (ker d1 ∩ ker d2) / im d1d2.
pub fn bott_chern_dims<S: LinAlg>(c: &DoubleComplex<S>) -> Result<DimTable, DcError> {
    per_bidegree(c, |(p, q)| {
        let both = c.d1_at((p, q)).vstack(&c.d2_at((p, q)));
        let into = c.d1_at((p - 1, q)).mul(&c.d2_at((p - 1, q - 1)), &c.ctx);
        Ok(c.dim((p, q)) - c.rank(&both)? - c.rank(&into)?)
    })
}

/// ker d1d2 / (im d1 + im d2).
pub fn aeppli_dims<S: LinAlg>(c: &DoubleComplex<S>) -> Result<DimTable, DcError> {
    per_bidegree(c, |(p, q)| {
        let out = c.d1_at((p, q + 1)).mul(&c.d2_at((p, q)), &c.ctx);
        let into = c.d1_at((p - 1, q)).hstack(&c.d2_at((p, q - 1)), &c.ctx);
        Ok(c.dim((p, q)) - c.rank(&out)? - c.rank(&into)?)
    })
}
