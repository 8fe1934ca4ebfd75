//! Exact computations with one-dimensional formal group laws over
//! unramified `p`-adic rings: Lubin-Tate and functional-equation groups,
//! division polynomials, torsion fields, ramification breaks and
//! endomorphism rings.

pub mod corpus;
pub mod endo;
pub mod error;
pub mod formal_group;
pub mod matrix;
pub mod padic;
pub mod report;
pub mod series;
pub mod torsion;
pub mod weierstrass;

pub use error::{Error, Result};
