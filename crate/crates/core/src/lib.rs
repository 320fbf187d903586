//! Invariant exterior calculus for Hermitian structures with torsion on Lie
//! algebras: torsion invariants, SKT-type classification and torus twists.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod exterior;
pub mod model;
pub mod skt;
pub mod twist;

pub use error::{Error, Result};
