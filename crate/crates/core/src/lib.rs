//! Polytope-volume bounds on connected components of semi-algebraic sets,
//! and certified solvers for sparse univariate sums and binomial systems.
//!
//! - [`polytope`]: exact convex hulls and normalized volumes.
//! - [`bounds`]: component bounds from Newton-polytope volumes, fewnomial
//!   counts and classical degree bounds.
//! - [`ksum`] and [`roots1d`]: real-exponent sums with one sign alternation
//!   and a solver whose evaluation count grows with `log d`.
//! - [`lattice`] and [`binomial`]: Smith normal form and positive roots of
//!   binomial systems.
//! - [`cli`]: the `sparsereal` command.

pub mod binomial;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod json;
pub mod ksum;
pub mod lattice;
mod linalg;
mod numeric;
pub mod parse;
pub mod polytope;
pub mod roots1d;
pub mod system;

pub use error::{Error, ParseError, Result};
