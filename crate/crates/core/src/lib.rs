//! Exact symbolic exterior calculus over quotient polynomial rings, with
//! classifiers for SU(2)-, SU(3)- and G2-structures given by explicit
//! coframes, and the cone / sin-cone constructions relating them.
//!
//! The computational model is deliberately small: coefficients live in a
//! commutative ring presented by a triangular rewriting system over the
//! rationals (pure powers of a generator rewrite into earlier generators,
//! plus inverse pairs g·g⁻¹ = 1), and forms are sparse maps from graded
//! basis monomials to such coefficients.  Every verdict produced by this
//! crate is an exact zero-test of a normal form; floating point appears
//! only in the optional positivity sampling check.

pub mod catalog;
mod error;
pub mod exterior;
pub mod liealg;
pub mod lifts;
pub mod ring;
pub mod structures;

pub use error::{Error, Result};
