use num_rational::Ratio;

use crate::math::{powf, sqrt};
use crate::{Error, Result};

use super::sieve::{Factorization, SpfSieve};

/// Series length below which local factors are refused.
pub const MIN_SERIES_TERMS: usize = 40;

fn check_terms(terms: usize) -> Result<()> {
    if terms < MIN_SERIES_TERMS {
        return Err(Error::Domain {
            what: "series_terms must be at least 40",
            value: terms as f64,
        });
    }
    Ok(())
}

/// `tau(d) / tau(dn)` as an exact fraction.
pub fn gamma_d(d: u64, n: u64, sieve: &SpfSieve) -> Result<Ratio<u64>> {
    let fd = sieve.factorize(d)?;
    let fdn = fd.mul(&sieve.factorize(n)?);
    Ok(Ratio::new(fd.tau(), fdn.tau()))
}

/// `sum_{0 <= a < terms} 1 / ((shift + a + 1) p^a)`.
fn shifted_series(shift: u32, p: u64, terms: usize) -> f64 {
    let x = 1.0 / p as f64;
    let mut xa = 1.0;
    let mut acc = 0.0;
    for a in 0..terms {
        acc += xa / (shift as f64 + a as f64 + 1.0);
        xa *= x;
    }
    acc
}

/// Local factor of `g` at `p^beta`.
pub fn g_local(p: u64, beta: u32, terms: usize) -> Result<f64> {
    check_terms(terms)?;
    Ok(shifted_series(beta, p, terms) / shifted_series(0, p, terms))
}

/// `g(d) = prod_{p^b || d} (sum_a 1/((b+a+1) p^a)) / (sum_a 1/((a+1) p^a))`.
pub fn g_multiplicative(d: u64, terms: usize) -> Result<f64> {
    check_terms(terms)?;
    let f = Factorization::trial_division(d)?;
    let mut acc = 1.0;
    for &(p, b) in f.pairs() {
        acc *= g_local(p, b, terms)?;
    }
    Ok(acc)
}

/// Per-prime factor of `B(1) H(1)`:
/// `(1 - 1/p)^{1/2} sum_j 1/((j+1) p^j)` times
/// `(1 - 1/p)^{1/2} sum_a g(p^a) / p^a`. Equals `1`.
pub fn bh_factor_identity(p: u64, terms: usize) -> Result<f64> {
    check_terms(terms)?;
    let half = sqrt(1.0 - 1.0 / p as f64);
    let b = half * shifted_series(0, p, terms);
    let x = 1.0 / p as f64;
    let mut h_sum = 0.0;
    for a in 0..terms {
        h_sum += g_local(p, a as u32, terms)? * powf(x, a as f64);
    }
    Ok(b * half * h_sum)
}

/// `B(1) = prod_p (1 - 1/p)^{1/2} sum_j 1/((j+1) p^j)` over the sieve's
/// primes.
pub fn b_at_one(sieve: &SpfSieve, terms: usize) -> Result<f64> {
    check_terms(terms)?;
    let mut acc = 1.0;
    for &p in sieve.primes() {
        let p = p as u64;
        acc *= sqrt(1.0 - 1.0 / p as f64) * shifted_series(0, p, terms);
    }
    Ok(acc)
}

/// `G_d(1) = tau(d) g(d) B(1)`.
pub fn g_d_at_one(d: u64, sieve: &SpfSieve, terms: usize) -> Result<f64> {
    let tau = Factorization::trial_division(d)?.tau();
    Ok(tau as f64 * g_multiplicative(d, terms)? * b_at_one(sieve, terms)?)
}
