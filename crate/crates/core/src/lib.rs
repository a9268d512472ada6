//! Toeplitz operators on weighted Bergman spaces of a domain and of its
//! quotient by a finite pseudoreflection group.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: reflection groups and their one-dimensional characters,
//! sparse polynomial arithmetic, isotypic projections, exact finite sections
//! of Toeplitz operators on the polydisc and the ball, tensor quadrature
//! oracles, and the checks that relate operators on `A²_ω(Ω)` to operators
//! on `A²_{ω_χ}(θ(Ω))`.
//!
//! File formats, reports and the command line live in the companion
//! `qtoeplitz-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bergman;
pub mod error;
pub mod groups;
pub mod isotypic;
pub mod linalg;
pub mod poly;
pub mod quotient;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Coefficients with modulus below this are dropped from sparse polynomials.
pub const PRUNE_TOL: f64 = 1e-15;

/// Entrywise tolerance for group element comparison.
pub const GROUP_TOL: f64 = 1e-12;

/// Coefficientwise tolerance for relative-invariance checks and division remainders.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// Minimum |J_θ(z)| accepted off the branch locus.
pub const BRANCH_TOL: f64 = 1e-12;

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
