//! Computational toolkit for projective varieties over prime fields: Gröbner
//! bases, Hilbert series, graded free resolutions, local cohomology and the
//! constructions of surfaces and threefolds on rational normal scrolls.

pub mod arith;
pub mod error;
pub mod groebner;
mod heap;
pub mod hilbert;
pub mod linalg;
pub mod oracles;
pub mod geometry;
pub mod resolution;
pub mod poly;
pub mod report;

pub use arith::{field_inverse, FieldElement, PrimeField};
pub use error::{Error, Result};
pub use groebner::{buchberger, colon, eliminate, intersect, saturate, saturate_by_variable, saturate_irrelevant, GradedIdeal, GroebnerBasis};
pub use poly::{Monomial, PolyRing, Polynomial, TermOrder};
