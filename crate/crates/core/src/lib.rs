//! Algorithms for the cohomology of Oeljeklaus-Toma manifolds.
//!
//! The pipeline runs from an integer polynomial and a list of units
//! through numerical invariants, relation counting, closed-form
//! cohomology and an independent double-complex computation that
//! cross-checks the closed forms.

pub mod dcomplex;
pub mod invariants;
pub mod otcomplex;
pub mod polyfield;
pub mod precision;
pub mod relations;
pub mod units;

pub use dcomplex::{DoubleComplex, GaussRat, MpC, ZigzagDecomposition};
pub use invariants::CohomologyReport;
pub use polyfield::{FieldDatum, Polynomial, RootSet};
pub use precision::{Closeness, Precision};
pub use relations::RelationSet;
pub use units::{MetricVerdict, UnitSystem, Verdict};
