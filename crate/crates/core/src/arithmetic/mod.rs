//! Exact integer ground truth: sieve, smooth divisors, the mean
//! distribution, `Psi`, `Phi` and the multiplicative identities.

mod counting;
mod distribution;
mod divisors;
mod euler;
mod sieve;

pub use counting::{
    phi_count, phi_main_term, phi_prefix, psi_count, psi_ratio, smooth_rough_total,
};
pub use distribution::{mean_distribution, DistributionAccumulator, EmpiricalCdf};
pub use divisors::{
    empirical_f, smooth_divisors, smooth_divisors_of, tau_smooth, tau_smooth_of, within_power,
    BOUNDARY_SLACK,
};
pub use euler::{
    b_at_one, bh_factor_identity, g_d_at_one, g_local, g_multiplicative, gamma_d, MIN_SERIES_TERMS,
};
pub use sieve::{Factorization, SpfSieve, SIEVE_GUARD};
