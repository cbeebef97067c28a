//! Finite bounded double complexes over Q(i) or multiprecision complex
//! numbers: cohomologies, Frölicher pages, refined Betti numbers and
//! the decomposition into zigzags and squares.

mod cohomology;
mod complex;
pub mod fixture;
mod linalg;
mod matrix;
mod pages;
mod scalar;
pub mod shape;
pub mod synth;
mod zigzag;

use thiserror::Error;

pub use cohomology::{aeppli_dims, bott_chern_dims, column_cohomology, de_rham_dims, row_cohomology, DimTable};
pub use complex::{build_double_complex, DoubleComplex, TotalDegree};
pub use linalg::LinAlg;
pub use matrix::Matrix;
pub use pages::{frolicher_pages, refined_betti, FrolicherPages, Page};
pub use scalar::{Field, GaussRat, MpC};
pub use shape::{Bidegree, Orientation, Shape};
pub use zigzag::{zigzag_decompose, ResidualCheck, ZigzagDecomposition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DcError {
    #[error("{map} at {bidegree:?} has shape {got:?}, expected {expected:?}")]
    ShapeMismatch { map: String, bidegree: Bidegree, expected: (usize, usize), got: (usize, usize) },
    #[error("{relation} does not vanish at {bidegree:?} (residual {residual:e})")]
    NotAComplex { bidegree: Bidegree, relation: String, residual: f64 },
    #[error("singular value {sigma:e} (scale {scale:e}) is inside the refusal band")]
    RankUnstable { sigma: f64, scale: f64 },
    #[error("residual check failed: {0}")]
    ResidualCheckFailed(String),
    #[error("fixture line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
