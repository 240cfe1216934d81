//! Exact symbolic computation for the free metabelian group and its IA-automorphisms.

pub mod error;
pub mod ideal;
pub mod laurent;
pub mod magnus;
pub mod matrix;
pub mod generators;
pub mod decompose;
pub mod cli;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly, Monomial, QuotientPoly, RingContext};
