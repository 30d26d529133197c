use alloc::vec::Vec;

use crate::math::ln;
use crate::special_fn::GridFunction;
use crate::Result;

use super::divisors::check_y;
use super::sieve::SpfSieve;

/// `Psi(x, y)`: integers `n <= x` with every prime factor `<= y`, `n = 1`
/// included.
pub fn psi_count(x: u64, y: f64, sieve: &SpfSieve) -> Result<u64> {
    check_y(y)?;
    if x == 0 {
        return Ok(0);
    }
    sieve.check(x)?;
    let mut count = 0;
    for n in 1..=x {
        if sieve.largest_prime_factor(n)? as f64 <= y {
            count += 1;
        }
    }
    Ok(count)
}

fn is_rough(n: u64, y: f64, sieve: &SpfSieve) -> Result<bool> {
    Ok(match sieve.smallest_prime_factor(n)? {
        None => true,
        Some(p) => p as f64 > y,
    })
}

/// `Phi(x, y)`: integers `n <= x` with every prime factor `> y`, `n = 1`
/// included.
pub fn phi_count(x: u64, y: f64, sieve: &SpfSieve) -> Result<u64> {
    check_y(y)?;
    if x == 0 {
        return Ok(0);
    }
    sieve.check(x)?;
    let mut count = 0;
    for n in 1..=x {
        if is_rough(n, y, sieve)? {
            count += 1;
        }
    }
    Ok(count)
}

/// `Phi(m, y)` for every `0 <= m <= x`.
pub fn phi_prefix(x: u64, y: f64, sieve: &SpfSieve) -> Result<Vec<u64>> {
    check_y(y)?;
    let mut out = Vec::with_capacity(x as usize + 1);
    out.push(0);
    if x == 0 {
        return Ok(out);
    }
    sieve.check(x)?;
    let mut count = 0;
    for n in 1..=x {
        if is_rough(n, y, sieve)? {
            count += 1;
        }
        out.push(count);
    }
    Ok(out)
}

/// `sum_{a <= x, P(a) <= y} Phi(x / a, y)`. Every `n <= x` splits uniquely
/// as `n = ab` with `a` smooth and `b` rough, so this equals `x`.
pub fn smooth_rough_total(x: u64, y: f64, sieve: &SpfSieve) -> Result<u64> {
    let phi = phi_prefix(x, y, sieve)?;
    let mut total = 0;
    for a in 1..=x {
        if sieve.largest_prime_factor(a)? as f64 <= y {
            total += phi[(x / a) as usize];
        }
    }
    Ok(total)
}

/// `Psi(x, y) / (x rho(u))`.
pub fn psi_ratio(x: u64, y: f64, sieve: &SpfSieve, rho: &GridFunction) -> Result<f64> {
    let psi = psi_count(x, y, sieve)?;
    let u = ln(x as f64) / ln(y);
    Ok(psi as f64 / (x as f64 * rho.eval(u)?))
}

/// `x omega(u) / log y - y / log y`.
pub fn phi_main_term(x: u64, y: f64, omega: &GridFunction) -> Result<f64> {
    check_y(y)?;
    let ly = ln(y);
    let u = ln(x as f64) / ly;
    Ok(x as f64 * omega.eval(u)? / ly - y / ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let s = SpfSieve::new(10_000).unwrap();
        assert_eq!(psi_count(30, 5.0, &s).unwrap(), 18);
        assert_eq!(phi_count(30, 5.0, &s).unwrap(), 8);
        assert_eq!(psi_count(50, 50.0, &s).unwrap(), 50);
        assert_eq!(psi_count(50, 60.0, &s).unwrap(), 50);
        assert_eq!(phi_count(50, 50.0, &s).unwrap(), 1);
        assert_eq!(phi_prefix(30, 5.0, &s).unwrap()[30], 8);
        assert_eq!(smooth_rough_total(10_000, 30.0, &s).unwrap(), 10_000);
        assert_eq!(smooth_rough_total(777, 2.5, &s).unwrap(), 777);
    }
}
