//! Rank, kernel and image: exact row reduction over Q(i), and a
//! singular-value decomposition for multiprecision complex matrices.

use num_complex::Complex64;
use rug::{Complex, Float};

use super::matrix::Matrix;
use super::scalar::{Field, GaussRat, MpC};
use super::DcError;
use crate::precision::Precision;

pub trait LinAlg: Field {
    fn rank(m: &Matrix<Self>, ctx: &Self::Ctx) -> Result<usize, DcError>;
    /// Basis of the null space, as columns.
    fn kernel(m: &Matrix<Self>, ctx: &Self::Ctx) -> Result<Matrix<Self>, DcError>;
    /// Basis of the column space, as columns.
    fn image(m: &Matrix<Self>, ctx: &Self::Ctx) -> Result<Matrix<Self>, DcError>;
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut Matrix<GaussRat>) -> Vec<usize> {
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, row * m.cols + j);
            }
        }
        let inv = m.get(row, col).inv();
        for j in col..m.cols {
            let v = m.get(row, j).mul(&inv);
            m.set(row, j, v);
        }
        for r in 0..m.rows {
            if r == row || m.get(r, col).is_zero() {
                continue;
            }
            let f = m.get(r, col).clone();
            for j in col..m.cols {
                if m.get(row, j).is_zero() {
                    continue;
                }
                let v = m.get(r, j).sub(&f.mul(m.get(row, j)));
                m.set(r, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

impl LinAlg for GaussRat {
    fn rank(m: &Matrix<Self>, _: &()) -> Result<usize, DcError> {
        let mut w = m.clone();
        Ok(rref(&mut w).len())
    }

    fn kernel(m: &Matrix<Self>, ctx: &()) -> Result<Matrix<Self>, DcError> {
        let mut w = m.clone();
        let pivots = rref(&mut w);
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        let cols: Vec<Vec<GaussRat>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![GaussRat::zero(ctx); m.cols];
                v[f] = GaussRat::one(ctx);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = w.get(r, f).neg();
                }
                v
            })
            .collect();
        Ok(Matrix::from_columns(m.cols, &cols, ctx))
    }

    fn image(m: &Matrix<Self>, ctx: &()) -> Result<Matrix<Self>, DcError> {
        let mut w = m.clone();
        let pivots = rref(&mut w);
        let cols: Vec<Vec<GaussRat>> = pivots.iter().map(|&c| m.column(c)).collect();
        Ok(Matrix::from_columns(m.rows, &cols, ctx))
    }
}

fn dot64(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// One-sided Jacobi in double precision; returns the accumulated
/// right factor as columns.
fn jacobi64(mut cols: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let n = cols.len();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect())
        .collect();
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = dot64(&cols[i], &cols[i]).re;
                let beta = dot64(&cols[j], &cols[j]).re;
                let gamma = dot64(&cols[i], &cols[j]);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for vecs in [&mut cols, &mut v] {
                    for k in 0..vecs[i].len() {
                        let ai = vecs[i][k];
                        let aj = vecs[j][k] * e.conj();
                        vecs[i][k] = ai * c - aj * s;
                        vecs[j][k] = ai * s + aj * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    v
}

struct Svd {
    /// A V, columns with pairwise orthogonal entries
    av: Vec<Vec<Complex>>,
    v: Vec<Vec<Complex>>,
    sigma: Vec<Float>,
}

fn dot(a: &[Complex], b: &[Complex], bits: u32) -> Complex {
    let mut re = Float::new(bits);
    let mut im = Float::new(bits);
    for (x, y) in a.iter().zip(b) {
        let (xr, xi) = (x.real(), x.imag());
        let (yr, yi) = (y.real(), y.imag());
        re += Float::with_val(bits, xr * yr);
        re += Float::with_val(bits, xi * yi);
        im += Float::with_val(bits, xr * yi);
        im -= Float::with_val(bits, xi * yr);
    }
    Complex::with_val(bits, (re, im))
}

fn norm2(a: &[Complex], bits: u32) -> Float {
    let mut s = Float::new(bits);
    for x in a {
        s += Float::with_val(bits, x.norm_ref());
    }
    s
}

fn svd(m: &Matrix<MpC>, bits: u32) -> Svd {
    let (rows, n) = (m.rows, m.cols);
    let cols64: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..rows).map(|i| {
            let z = &m.get(i, j).0;
            Complex64::new(z.real().to_f64(), z.imag().to_f64())
        }).collect())
        .collect();
    let v64 = jacobi64(cols64);
    // orthonormalize the double-precision factor at full precision
    let mut v: Vec<Vec<Complex>> = v64
        .iter()
        .map(|c| c.iter().map(|z| Complex::with_val(bits, (z.re, z.im))).collect())
        .collect();
    for j in 0..n {
        for _ in 0..2 {
            for i in 0..j {
                let h = dot(&v[i], &v[j], bits);
                for k in 0..n {
                    let d = Complex::with_val(bits, &h * &v[i][k]);
                    v[j][k] -= d;
                }
            }
        }
        let nrm = norm2(&v[j], bits).sqrt();
        for x in v[j].iter_mut() {
            *x /= &nrm;
        }
    }
    let mut av: Vec<Vec<Complex>> = (0..n)
        .map(|j| {
            (0..rows)
                .map(|i| {
                    let mut acc = Complex::new(bits);
                    for k in 0..n {
                        let a = &m.get(i, k).0;
                        if a.real().is_zero() && a.imag().is_zero() {
                            continue;
                        }
                        acc += Complex::with_val(bits, a * &v[j][k]);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let tol = Float::with_val(bits, 1) >> (bits - 8);
    for _ in 0..40 {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = norm2(&av[i], bits);
                let beta = norm2(&av[j], bits);
                let gamma = dot(&av[i], &av[j], bits);
                let g = Float::with_val(bits, gamma.abs_ref());
                if g.is_zero() || g <= Float::with_val(bits, &alpha * &beta).sqrt() * &tol {
                    continue;
                }
                rotated = true;
                let e = Complex::with_val(bits, &gamma / &g);
                let ec = Complex::with_val(bits, e.conj_ref());
                let zeta = Float::with_val(bits, &beta - &alpha) / (Float::with_val(bits, &g) * 2u32);
                let root = (Float::with_val(bits, zeta.square_ref()) + 1u32).sqrt();
                let mut t = Float::with_val(bits, 1) / (Float::with_val(bits, zeta.abs_ref()) + root);
                if zeta.is_sign_negative() && !zeta.is_zero() {
                    t = -t;
                }
                let c = (Float::with_val(bits, t.square_ref()) + 1u32).sqrt().recip();
                let s = Float::with_val(bits, &c * &t);
                for vecs in [&mut av, &mut v] {
                    for k in 0..vecs[i].len() {
                        let ai = vecs[i][k].clone();
                        let aj = Complex::with_val(bits, &vecs[j][k] * &ec);
                        vecs[i][k] = Complex::with_val(bits, &ai * &c) - Complex::with_val(bits, &aj * &s);
                        vecs[j][k] = Complex::with_val(bits, &ai * &s) + Complex::with_val(bits, &aj * &c);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = av.iter().map(|c| norm2(c, bits).sqrt()).collect();
    Svd { av, v, sigma }
}

/// Splits singular values into zero and nonzero ones, refusing values
/// inside the band between the two tolerances.
fn split(sigma: &[Float], prec: &Precision) -> Result<Vec<bool>, DcError> {
    let bits = prec.bits();
    let mut scale = Float::with_val(bits, 1);
    for s in sigma {
        scale.max_mut(s);
    }
    let lo = prec.eps() * &scale;
    let hi = prec.sqrt_eps() * &scale;
    sigma
        .iter()
        .map(|s| {
            if *s <= lo {
                Ok(false)
            } else if *s >= hi {
                Ok(true)
            } else {
                Err(DcError::RankUnstable { sigma: s.to_f64(), scale: scale.to_f64() })
            }
        })
        .collect()
}

impl LinAlg for MpC {
    fn rank(m: &Matrix<Self>, ctx: &Precision) -> Result<usize, DcError> {
        if m.rows == 0 || m.cols == 0 {
            return Ok(0);
        }
        // the Gram side is cheaper when the matrix is wide
        if m.cols > m.rows {
            let t = transpose_conj(m, ctx);
            return Self::rank(&t, ctx);
        }
        let d = svd(m, ctx.bits());
        Ok(split(&d.sigma, ctx)?.iter().filter(|&&b| b).count())
    }

    fn kernel(m: &Matrix<Self>, ctx: &Precision) -> Result<Matrix<Self>, DcError> {
        if m.rows == 0 || m.cols == 0 {
            return Ok(Matrix::identity(m.cols, ctx));
        }
        let d = svd(m, ctx.bits());
        let keep = split(&d.sigma, ctx)?;
        let cols: Vec<Vec<MpC>> = d
            .v
            .into_iter()
            .zip(&keep)
            .filter(|(_, &k)| !k)
            .map(|(c, _)| c.into_iter().map(MpC).collect())
            .collect();
        Ok(Matrix::from_columns(m.cols, &cols, ctx))
    }

    fn image(m: &Matrix<Self>, ctx: &Precision) -> Result<Matrix<Self>, DcError> {
        if m.rows == 0 || m.cols == 0 {
            return Ok(Matrix::zeros(m.rows, 0, ctx));
        }
        let d = svd(m, ctx.bits());
        let keep = split(&d.sigma, ctx)?;
        let cols: Vec<Vec<MpC>> = d
            .av
            .into_iter()
            .zip(d.sigma.iter().zip(&keep))
            .filter(|(_, (_, &k))| k)
            .map(|(c, (s, _))| c.into_iter().map(|z| MpC(z / s)).collect())
            .collect();
        Ok(Matrix::from_columns(m.rows, &cols, ctx))
    }
}

fn transpose_conj(m: &Matrix<MpC>, ctx: &Precision) -> Matrix<MpC> {
    let mut t = Matrix::zeros(m.cols, m.rows, ctx);
    for i in 0..m.rows {
        for j in 0..m.cols {
            t.set(j, i, MpC(Complex::with_val(ctx.bits(), m.get(i, j).0.conj_ref())));
        }
    }
    t
}
