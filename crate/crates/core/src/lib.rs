//! Exact-arithmetic engine for the trajectory densities of the 3x+1 and
//! 5x+1 problems.
//!
//! Everything is computed over arbitrary-precision integers and exact
//! rationals: residue-class families of map trajectories solved through
//! linear Diophantine equations, geometric-series coverage of the integers
//! by sequence length, the multi-level rising-fraction function, and the
//! stopping-time distribution built from a recursive survivor triangle.
//!
//! The crate is organized as a stack of small modules:
//!
//! * [`numtheory`] — extended gcd, the linear Diophantine solver, residue
//!   classes, binomial/multinomial coefficients, geometric sums.
//! * [`maps`] — the piecewise map functions (Collatz, compressed,
//!   accelerated, grouped and auxiliary variants) and trajectory iteration.
//! * [`affine`] — operation words, their composition into a single affine
//!   relation, and the endpoint comparator.
//! * [`families`] — enumeration of sequence families per length and the
//!   exact density dynamic program.
//! * [`stopping`] — stopping times, the survivor triangle, and the
//!   distribution functions F(k) and G(k).
//! * [`trees`] — branch and tree construction with DOT export.
//! * [`verify`] — empirical slice experiments and consistency audits.
//! * [`render`] — decimal/percent rendering of exact rationals.

pub mod affine;
mod error;
pub mod families;
pub mod maps;
pub mod numtheory;
pub mod render;
pub mod stopping;
pub mod trees;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
