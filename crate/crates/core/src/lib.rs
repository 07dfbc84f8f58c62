//! Exact computations with characteristic classes, genera, Grothendieck
//! rings of varieties and stringy invariants.

pub mod error;
pub mod genus;
pub mod jets;
pub mod k0;
pub mod projmodel;
pub mod ring;
pub mod stringy;
pub mod symm;

pub use error::{Error, Result};
pub use ring::poly::MultiPoly;
pub use ring::ratfunc::RationalFunction;
pub use ring::series::TruncSeries;
pub use ring::Rational;

/// Power series with rational coefficients.
pub type Series = TruncSeries<Rational>;
/// Power series whose coefficients are polynomials in parameters such as `y`.
pub type ParamSeries = TruncSeries<MultiPoly>;
