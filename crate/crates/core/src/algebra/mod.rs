//! Exact arithmetic: Laurent polynomials, factored and expanded rational
//! functions, and truncated series.

mod factored;
mod mono;
mod poly;
mod ratfunc;
mod series;
mod vars;
mod xseries;

pub use factored::{
    ratfunc_eq_probabilistic, rational_eq, rational_eq_probabilistic, FactoredRational,
};
pub use mono::Monomial;
pub use poly::{fmt_rat, rat, rat_pow, Coeff, LaurentPolynomial};
pub use ratfunc::RationalFunction;
pub use series::{graded_indices, QtSeries};
pub use vars::Vars;
pub use xseries::XSeries;
