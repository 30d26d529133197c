use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::limit_law::validate_v_grid;
use crate::math::{ln, CompensatedSum};
use crate::{Error, Result};

use super::divisors::{check_y, smooth_divisors_of, within_power};
use super::sieve::SpfSieve;

/// The mean distribution `(1/x) sum_{n <= x} F_{n,y}(v)` on a `v`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    pub x: u64,
    pub y: f64,
    pub v_grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl EmpiricalCdf {
    /// `log x / log y`.
    pub fn u(&self) -> f64 {
        ln(self.x as f64) / ln(self.y)
    }
}

/// Exact partial sums behind an [`EmpiricalCdf`].
///
/// For every value `t` of `tau(n, y)` it keeps, per grid point, the total
/// number of hits over the `n` seen so far. The sums are integers, so
/// merging accumulators in any order gives the same state, and the final
/// division is done once in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionAccumulator {
    grid_len: usize,
    count: u64,
    by_tau: BTreeMap<u64, Vec<u64>>,
}

impl DistributionAccumulator {
    pub fn new(grid_len: usize) -> Self {
        DistributionAccumulator {
            grid_len,
            count: 0,
            by_tau: BTreeMap::new(),
        }
    }

    /// Number of integers added.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Adds every `n` in `lo..=hi`.
    pub fn add_range(
        &mut self,
        lo: u64,
        hi: u64,
        y: f64,
        v_grid: &[f64],
        sieve: &SpfSieve,
    ) -> Result<()> {
        check_y(y)?;
        if v_grid.len() != self.grid_len {
            return Err(Error::InvalidGrid {
                reason: "grid length differs from the accumulator",
            });
        }
        if lo > hi {
            return Ok(());
        }
        sieve.check(lo)?;
        sieve.check(hi)?;
        let mut logs = Vec::new();
        for n in lo..=hi {
            let f = sieve.factorize(n)?;
            let divs = smooth_divisors_of(&f, y);
            let ln_n = ln(n as f64);
            logs.clear();
            logs.extend(divs.iter().map(|&d| ln(d as f64)));
            let row = self
                .by_tau
                .entry(divs.len() as u64)
                .or_insert_with(|| vec![0; v_grid.len()]);
            // divisors and grid are both increasing
            let mut hits = 0usize;
            for (slot, &v) in row.iter_mut().zip(v_grid) {
                while hits < logs.len() && within_power(logs[hits], ln_n, v) {
                    hits += 1;
                }
                *slot += hits as u64;
            }
            self.count += 1;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &DistributionAccumulator) {
        for (&t, row) in &other.by_tau {
            let mine = self
                .by_tau
                .entry(t)
                .or_insert_with(|| vec![0; self.grid_len]);
            for (a, b) in mine.iter_mut().zip(row) {
                *a += b;
            }
        }
        self.count += other.count;
    }

    /// Divides by `tau` and by `x`.
    pub fn finish(&self, x: u64, y: f64, v_grid: &[f64]) -> Result<EmpiricalCdf> {
        if self.count != x {
            return Err(Error::Domain {
                what: "accumulator does not cover 1..=x",
                value: self.count as f64,
            });
        }
        let values = (0..self.grid_len)
            .map(|i| {
                let mut acc = CompensatedSum::default();
                for (&t, row) in &self.by_tau {
                    acc.add(row[i] as f64 / t as f64);
                }
                acc.value() / x as f64
            })
            .collect();
        Ok(EmpiricalCdf {
            x,
            y,
            v_grid: v_grid.to_vec(),
            values,
        })
    }
}

/// `(1/x) sum_{n <= x} F_{n,y}(v)` for every `v` in the grid.
pub fn mean_distribution(x: u64, y: f64, v_grid: &[f64], sieve: &SpfSieve) -> Result<EmpiricalCdf> {
    validate_v_grid(v_grid)?;
    let mut acc = DistributionAccumulator::new(v_grid.len());
    acc.add_range(1, x, y, v_grid, sieve)?;
    acc.finish(x, y, v_grid)
}
