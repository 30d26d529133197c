//! Numerical core for the limit law of the distribution of smooth divisors.
//!
//! For an integer `n` and a real `y > 1`, pick a `y`-smooth divisor `d` of `n`
//! uniformly at random and look at `log d / log n`. Averaged over `n <= x`
//! with `u = log x / log y` held fixed, the distribution of that ratio tends
//! to a law `F(u, v)` built from the Dickman function `rho`, its fractional
//! convolution power `rho_{1/2}` and the Buchstab function `omega`. This crate
//! computes all of those pieces:
//!
//! - [`special_fn`]: delay differential-difference equations solved by the
//!   method of steps on aligned grids, with exact heads, integration and
//!   singularity-aware convolution.
//! - [`limit_law`]: `F(u, v)` by nested singular quadrature, the closed forms
//!   for `1 < u <= 2`, the large-`u` main term and the auxiliary integrals.
//! - [`arithmetic`]: exact integer ground truth (sieve, smooth divisors, the
//!   empirical mean distribution, `Psi`, `Phi` and the multiplicative
//!   identities around `tau(d)/tau(dn)`).
//!
//! The crate is `no_std` and only needs `alloc`; transcendental functions come
//! from `libm`.

#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arithmetic;
mod error;
pub mod limit_law;
pub mod math;
pub mod quadrature;
pub mod special_fn;

pub use error::{Error, Result};
pub use math::{EulerGamma, EULER_GAMMA};
