//! Computational laboratory for finite modules: exact decision procedures,
//! with machine-checkable certificates, for lattice-theoretic module
//! properties (extending/lifting, Rickart/Baer and their CS relaxations,
//! summand intersection/sum properties, nonsingularity conditions) over
//! finite abelian groups, optionally equipped with a finite ring action.

pub mod abelian;
pub mod arith;
pub mod error;

pub use error::{Error, Result};
