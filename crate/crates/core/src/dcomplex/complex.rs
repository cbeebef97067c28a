use std::collections::BTreeMap;

use super::linalg::LinAlg;
use super::matrix::Matrix;
use super::scalar::{Field, GaussRat, MpC};
use super::shape::Bidegree;
use super::DcError;
use crate::precision::{Closeness, Precision};

/// A bounded double complex with finite-dimensional pieces A^{p,q}.
///
/// `d1[(p,q)]` maps A^{p,q} to A^{p+1,q} and `d2[(p,q)]` maps A^{p,q} to
/// A^{p,q+1}; matrices act on column vectors. For a complex manifold d1
/// is ∂ and d2 is ∂̄.
#[derive(Clone, Debug)]
pub struct DoubleComplex<S: Field> {
    pub ctx: S::Ctx,
    pub labels: BTreeMap<Bidegree, Vec<String>>,
    pub d1: BTreeMap<Bidegree, Matrix<S>>,
    pub d2: BTreeMap<Bidegree, Matrix<S>>,
}

/// The pieces of total degree k, in order of increasing p, with offsets
/// into the concatenated coordinate vector.
#[derive(Clone, Debug)]
pub struct TotalDegree {
    pub blocks: Vec<(Bidegree, usize, usize)>,
    pub dim: usize,
}

impl<S: LinAlg> DoubleComplex<S> {
    pub fn dim(&self, b: Bidegree) -> usize {
        self.labels.get(&b).map_or(0, |l| l.len())
    }

    pub fn support(&self) -> Vec<Bidegree> {
        self.labels.iter().filter(|(_, l)| !l.is_empty()).map(|(&b, _)| b).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(|l| l.len()).sum()
    }

    /// (min p, max p, min q, max q) over the support; (0,0,0,0) if empty.
    pub fn bounds(&self) -> (i32, i32, i32, i32) {
        let s = self.support();
        if s.is_empty() {
            return (0, 0, 0, 0);
        }
        let p = s.iter().map(|b| b.0);
        let q = s.iter().map(|b| b.1);
        (p.clone().min().unwrap(), p.max().unwrap(), q.clone().min().unwrap(), q.max().unwrap())
    }

    pub fn degree_range(&self) -> std::ops::RangeInclusive<i32> {
        let s = self.support();
        let lo = s.iter().map(|b| b.0 + b.1).min().unwrap_or(0);
        let hi = s.iter().map(|b| b.0 + b.1).max().unwrap_or(-1);
        lo..=hi
    }

    /// d1 out of `b`, zero when absent.
    pub fn d1_at(&self, b: Bidegree) -> Matrix<S> {
        self.d1
            .get(&b)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim((b.0 + 1, b.1)), self.dim(b), &self.ctx))
    }

    pub fn d2_at(&self, b: Bidegree) -> Matrix<S> {
        self.d2
            .get(&b)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim((b.0, b.1 + 1)), self.dim(b), &self.ctx))
    }

    pub fn total_degree(&self, k: i32) -> TotalDegree {
        let mut blocks = vec![];
        let mut off = 0;
        for (&b, l) in self.labels.range((i32::MIN, i32::MIN)..) {
            if b.0 + b.1 == k && !l.is_empty() {
                blocks.push((b, off, l.len()));
                off += l.len();
            }
        }
        TotalDegree { blocks, dim: off }
    }

    /// Total differential out of degree k, restricted to source pieces
    /// passing `src` and target pieces passing `dst`.
    pub fn total_d_filtered(&self, k: i32, src: impl Fn(Bidegree) -> bool, dst: impl Fn(Bidegree) -> bool) -> Matrix<S> {
        let from: Vec<_> = self.total_degree(k).blocks.into_iter().filter(|b| src(b.0)).collect();
        let to: Vec<_> = self.total_degree(k + 1).blocks.into_iter().filter(|b| dst(b.0)).collect();
        let relabel = |bl: &[(Bidegree, usize, usize)]| {
            let mut off = 0;
            bl.iter()
                .map(|&(b, _, n)| {
                    let o = off;
                    off += n;
                    (b, o, n)
                })
                .collect::<Vec<_>>()
        };
        let from = relabel(&from);
        let to = relabel(&to);
        let rows: usize = to.iter().map(|b| b.2).sum();
        let cols: usize = from.iter().map(|b| b.2).sum();
        let mut m = Matrix::zeros(rows, cols, &self.ctx);
        for &(b, co, _) in &from {
            for (target, d) in [((b.0 + 1, b.1), self.d1.get(&b)), ((b.0, b.1 + 1), self.d2.get(&b))] {
                let (Some(d), Some(&(_, ro, _))) = (d, to.iter().find(|t| t.0 == target)) else {
                    continue;
                };
                for i in 0..d.rows {
                    for j in 0..d.cols {
                        m.set(ro + i, co + j, d.get(i, j).clone());
                    }
                }
            }
        }
        m
    }

    pub fn total_d(&self, k: i32) -> Matrix<S> {
        self.total_d_filtered(k, |_| true, |_| true)
    }

    pub fn rank(&self, m: &Matrix<S>) -> Result<usize, DcError> {
        S::rank(m, &self.ctx)
    }
}

fn check_zero<S: Field>(m: &Matrix<S>, ctx: &S::Ctx, at: Bidegree, what: &str) -> Result<(), DcError> {
    for x in &m.data {
        if x.zero_test(ctx) != Closeness::Equal {
            return Err(DcError::NotAComplex { bidegree: at, relation: what.into(), residual: x.magnitude() });
        }
    }
    Ok(())
}

/// Validates shapes and d1² = d2² = d1d2 + d2d1 = 0.
pub fn build_double_complex<S: LinAlg>(
    labels: BTreeMap<Bidegree, Vec<String>>,
    d1: BTreeMap<Bidegree, Matrix<S>>,
    d2: BTreeMap<Bidegree, Matrix<S>>,
    ctx: S::Ctx,
) -> Result<DoubleComplex<S>, DcError> {
    let c = DoubleComplex { ctx, labels, d1, d2 };
    for (which, maps, step) in [("d1", &c.d1, (1, 0)), ("d2", &c.d2, (0, 1))] {
        for (&b, m) in maps.iter() {
            let t = (b.0 + step.0, b.1 + step.1);
            if m.cols != c.dim(b) || m.rows != c.dim(t) {
                return Err(DcError::ShapeMismatch {
                    map: which.into(),
                    bidegree: b,
                    expected: (c.dim(t), c.dim(b)),
                    got: (m.rows, m.cols),
                });
            }
        }
    }
    for b in c.support() {
        let (p, q) = b;
        let d11 = c.d1_at((p + 1, q)).mul(&c.d1_at(b), &c.ctx);
        check_zero(&d11, &c.ctx, b, "d1 d1")?;
        let d22 = c.d2_at((p, q + 1)).mul(&c.d2_at(b), &c.ctx);
        check_zero(&d22, &c.ctx, b, "d2 d2")?;
        let a = c.d1_at((p, q + 1)).mul(&c.d2_at(b), &c.ctx);
        let bb = c.d2_at((p + 1, q)).mul(&c.d1_at(b), &c.ctx);
        check_zero(&a.add(&bb), &c.ctx, b, "d1 d2 + d2 d1")?;
    }
    Ok(c)
}

impl DoubleComplex<GaussRat> {
    pub fn to_float(&self, prec: Precision) -> DoubleComplex<MpC> {
        let conv = |m: &Matrix<GaussRat>| Matrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|x| MpC::from_gauss(x, &prec)).collect(),
        };
        DoubleComplex {
            ctx: prec,
            labels: self.labels.clone(),
            d1: self.d1.iter().map(|(&b, m)| (b, conv(m))).collect(),
            d2: self.d2.iter().map(|(&b, m)| (b, conv(m))).collect(),
        }
    }
}
