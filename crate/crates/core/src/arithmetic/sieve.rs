use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest sieve limit accepted (about 400 MB of `u32`).
pub const SIEVE_GUARD: u64 = 100_000_000;

/// Smallest-prime-factor table for `2 <= n <= limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfSieve {
    /// Linear sieve up to `x`.
    pub fn new(x: u64) -> Result<Self> {
        if x > SIEVE_GUARD {
            return Err(Error::SieveTooLarge {
                requested: x,
                guard: SIEVE_GUARD,
            });
        }
        if x < 2 {
            return Err(Error::Domain {
                what: "sieve limit must be at least 2",
                value: x as f64,
            });
        }
        let n = x as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(SpfSieve {
            limit: x,
            spf,
            primes,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primes up to the limit, increasing.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn check(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.limit {
            return Err(Error::SieveRange {
                n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Smallest prime factor of `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        if n < 2 {
            return Err(Error::Domain {
                what: "1 has no prime factor",
                value: 1.0,
            });
        }
        Ok(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check(n)?;
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            pairs.push((p as u64, e));
        }
        Ok(Factorization { pairs })
    }

    /// Largest prime factor, `P(1) = 1`.
    pub fn largest_prime_factor(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        let mut m = n as usize;
        let mut last = 1;
        while m > 1 {
            let p = self.spf[m] as usize;
            last = p;
            m /= p;
        }
        Ok(last as u64)
    }

    /// Smallest prime factor, `None` for `n = 1` (where it is `+inf`).
    pub fn smallest_prime_factor(&self, n: u64) -> Result<Option<u64>> {
        self.check(n)?;
        Ok((n > 1).then(|| self.spf[n as usize] as u64))
    }
}

/// `n = prod p_i^e_i` with `p_1 < p_2 < ...` and every `e_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factorization of `n >= 1` by trial division.
    pub fn trial_division(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain {
                what: "0 has no factorization",
                value: 0.0,
            });
        }
        let mut pairs = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            if m.is_multiple_of(p) {
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                pairs.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            pairs.push((m, 1));
        }
        Ok(Factorization { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// The integer itself.
    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.pairs.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Exponent of `p`, zero if absent.
    pub fn valuation(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Factorization of the product.
    pub fn mul(&self, other: &Factorization) -> Factorization {
        let (a, b) = (&self.pairs, &other.pairs);
        let (mut i, mut j) = (0, 0);
        let mut pairs = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                pairs.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                pairs.push(b[j]);
                j += 1;
            } else {
                pairs.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Factorization { pairs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sieve() {
        let s = SpfSieve::new(10).unwrap();
        assert_eq!(s.spf(10).unwrap(), 2);
        assert_eq!(s.primes(), &[2, 3, 5, 7]);
        let s = SpfSieve::new(49).unwrap();
        assert_eq!(s.spf(49).unwrap(), 7);
        assert!(s.spf(50).is_err());
        assert!(s.spf(1).is_err());
    }

    #[test]
    fn prime_count_to_a_million() {
        let s = SpfSieve::new(1_000_000).unwrap();
        assert_eq!(s.primes().len(), 78_498);
    }

    #[test]
    fn guard_and_lower_bound() {
        assert!(matches!(
            SpfSieve::new(SIEVE_GUARD + 1),
            Err(Error::SieveTooLarge { .. })
        ));
        assert!(SpfSieve::new(1).is_err());
    }

    #[test]
    fn factorizations() {
        let s = SpfSieve::new(1000).unwrap();
        let f = s.factorize(360).unwrap();
        assert_eq!(f.pairs(), &[(2, 3), (3, 2), (5, 1)]);
        assert_eq!(f.tau(), 24);
        assert_eq!(f.value(), 360);
        assert_eq!(f, Factorization::trial_division(360).unwrap());
        assert_eq!(s.factorize(1).unwrap().pairs(), &[]);
        assert_eq!(s.largest_prime_factor(1).unwrap(), 1);
        assert_eq!(s.largest_prime_factor(360).unwrap(), 5);
        assert_eq!(s.smallest_prime_factor(1).unwrap(), None);
        assert_eq!(s.smallest_prime_factor(91).unwrap(), Some(7));
        let g = f.mul(&s.factorize(147).unwrap());
        assert_eq!(g.value(), 360 * 147);
        assert_eq!(g.valuation(3), 3);
        assert_eq!(g.valuation(11), 0);
    }
}
