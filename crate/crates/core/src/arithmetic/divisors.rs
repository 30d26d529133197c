use alloc::vec;
use alloc::vec::Vec;

use crate::math::ln;
use crate::{Error, Result};

use super::sieve::{Factorization, SpfSieve};

/// Slack in the test `log d <= v log n`, so that exact ties count.
pub const BOUNDARY_SLACK: f64 = 1e-12;

pub(crate) fn check_y(y: f64) -> Result<()> {
    if !(y > 1.0) {
        return Err(Error::Domain {
            what: "y must exceed 1",
            value: y,
        });
    }
    Ok(())
}

fn is_smooth_prime(p: u64, y: f64) -> bool {
    p as f64 <= y
}

/// Divisors of the number whose prime factors are all `<= y`, increasing.
pub fn smooth_divisors_of(f: &Factorization, y: f64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in f.pairs() {
        if !is_smooth_prime(p, y) {
            continue;
        }
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// `y`-smooth divisors of `n`, increasing.
pub fn smooth_divisors(n: u64, y: f64, sieve: &SpfSieve) -> Result<Vec<u64>> {
    check_y(y)?;
    Ok(smooth_divisors_of(&sieve.factorize(n)?, y))
}

/// Number of `y`-smooth divisors of the number.
pub fn tau_smooth_of(f: &Factorization, y: f64) -> u64 {
    f.pairs()
        .iter()
        .filter(|&&(p, _)| is_smooth_prime(p, y))
        .map(|&(_, e)| e as u64 + 1)
        .product()
}

/// `tau(n, y)`, the number of `y`-smooth divisors of `n`.
pub fn tau_smooth(n: u64, y: f64, sieve: &SpfSieve) -> Result<u64> {
    check_y(y)?;
    Ok(tau_smooth_of(&sieve.factorize(n)?, y))
}

/// Whether `d <= n^v`, decided as `log d <= v log n + 1e-12`.
#[inline]
pub fn within_power(ln_d: f64, ln_n: f64, v: f64) -> bool {
    ln_d <= v * ln_n + BOUNDARY_SLACK
}

/// Share of the `y`-smooth divisors `d` of `n` with `d <= n^v`. For `n = 1`
/// the only divisor sits at `0`, so the value is `1`.
pub fn empirical_f(n: u64, y: f64, v: f64, sieve: &SpfSieve) -> Result<f64> {
    let divs = smooth_divisors(n, y, sieve)?;
    let ln_n = ln(n as f64);
    let hits = divs
        .iter()
        .filter(|&&d| within_power(ln(d as f64), ln_n, v))
        .count();
    Ok(hits as f64 / divs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = SpfSieve::new(100).unwrap();
        assert_eq!(smooth_divisors(12, 2.0, &s).unwrap(), [1, 2, 4]);
        assert_eq!(smooth_divisors(12, 12.0, &s).unwrap(), [1, 2, 3, 4, 6, 12]);
        assert_eq!(smooth_divisors(1, 2.0, &s).unwrap(), [1]);
        assert_eq!(tau_smooth(12, 2.0, &s).unwrap(), 3);
        assert_eq!(tau_smooth(1, 7.5, &s).unwrap(), 1);
        assert_eq!(tau_smooth(97, 50.0, &s).unwrap(), 1);
        assert_eq!(tau_smooth(60, 5.0, &s).unwrap(), 12);
        assert!(tau_smooth(101, 5.0, &s).is_err());
        assert!(tau_smooth(12, 1.0, &s).is_err());
    }

    #[test]
    fn empirical_examples() {
        let s = SpfSieve::new(100).unwrap();
        assert!((empirical_f(12, 2.0, 0.5, &s).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((empirical_f(4, 2.0, 0.5, &s).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(empirical_f(1, 2.0, 0.0, &s).unwrap(), 1.0);
        assert_eq!(empirical_f(30, 5.0, 1.0, &s).unwrap(), 1.0);
    }
}
