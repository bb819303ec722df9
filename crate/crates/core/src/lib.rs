//! Exact symbolic computation of Macdonald polynomials of type A, the
//! Baker-Akhiezer series that specializes to them, Laumon localization
//! series, and the global Euler characteristics built from those series.
//!
//! Every identity is checked with exact rational arithmetic; no floating
//! point is used anywhere.

pub mod algebra;
pub mod baker;
pub mod checks;
pub mod diffop;
pub mod error;
pub mod global;
pub mod laumon;
pub mod macdonald;
pub mod qcalc;
pub mod report;
pub mod tableaux;

pub use algebra::{
    FactoredRational, LaurentPolynomial, Monomial, QtSeries, RationalFunction, Vars, XSeries,
};
pub use checks::EqualityMode;
pub use error::{Error, Result};
pub use global::GLWeight;
pub use report::{Status, VerificationReport, Witness};
pub use tableaux::{CompositionAlpha, Partition, ThetaMatrix};

/// Version string folded into cache keys.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
