//! Numerical laboratory for the fractional GJMS operators on hyperbolic space.
//!
//! The crate is `no_std` (with `alloc`). It covers the Gamma-ratio spectral multipliers,
//! the radial spherical transform on ℍⁿ, the Euclidean bubble family and its conformal
//! lift to the ball model, and Rayleigh-quotient minimization over trial families.
#![no_std]
// NaN must fail the parameter checks, so they are written as negated comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bubbles;
mod error;
pub mod fit;
pub mod geometry;
pub mod multipliers;
pub mod optimize;
mod params;
pub mod quadrature;
pub mod quotient;
pub mod radial;
pub mod special;
pub mod spherical;
pub mod spline;

pub use error::{Error, Result};
pub use params::{MultiplierKind, Params, Tolerances, TOLERANCES};
