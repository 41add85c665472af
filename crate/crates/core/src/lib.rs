//! Exact-arithmetic laboratory for regular and backward continued fractions.
//!
//! Everything here is computed over unbounded integers and rationals: digit
//! expansions of rationals and quadratic surds, convergent tables, the
//! RCF/BCF digit transformation, Good's criterion for Jarník-set membership,
//! the Möbius iterated function systems generating the expansions, pressure
//! bisection brackets for Hausdorff dimension, and the 2-block insertion
//! construction that plants points of prescribed irrationality exponent
//! inside digit-restricted fractal sets.
//!
//! Transcendental quantities (exp, log, rational powers) are only ever
//! produced as certified dyadic enclosures with directed rounding, so every
//! inequality reported by this crate is either an exact integer/rational
//! comparison or carries a proven error bound.

pub mod cf;
pub mod dimension;
pub mod diophantine;
pub mod error;
pub mod ifs;
pub mod insertion;
pub mod numeric;
pub mod transform;

pub use error::{Error, Result};
pub use numeric::{DyadicInterval, MobiusMatrix, QuadraticSurd, Rational};
