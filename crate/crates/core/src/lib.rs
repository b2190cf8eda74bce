//! Newton-polytope bounds for the bifurcation set of a rational function.

pub mod error;
pub mod faces;
pub mod critvals;
pub mod lattice;
pub mod nondegen;
pub mod numeric;
pub mod parse;
pub mod poly;
pub mod polytope;
pub mod probe;
pub mod rational;
pub mod report;
pub mod resultant;
pub mod svg;
pub mod upoly;
pub mod values;

pub use error::{Error, ParseError, Result};
pub use poly::{ExponentVector, LaurentPoly};
