//! Dickman, fractional Dickman and Buchstab functions on aligned grids.

mod convolution;
mod grid;
mod solver;

pub use convolution::{convolve, convolve_fns, convolve_partial, convolve_with};
pub use grid::{GridFunction, Kind};
pub use solver::{build_omega, build_omega_deviation, build_rho, build_rho_k};
