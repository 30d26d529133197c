use divlaw_core::arithmetic::{DistributionAccumulator, EmpiricalCdf, SpfSieve};
use divlaw_core::limit_law::validate_v_grid;
use divlaw_core::Result;
use rayon::prelude::*;

const CHUNK: u64 = 1 << 15;

/// [`mean_distribution`](divlaw_core::arithmetic::mean_distribution) with the
/// range `1..=x` split across threads. The per-chunk sums are integers, so
/// the result does not depend on the split.
pub fn parallel_mean_distribution(
    x: u64,
    y: f64,
    v_grid: &[f64],
    sieve: &SpfSieve,
) -> Result<EmpiricalCdf> {
    validate_v_grid(v_grid)?;
    sieve.check(x)?;
    let chunks = x.div_ceil(CHUNK);
    let acc = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(x);
            let mut acc = DistributionAccumulator::new(v_grid.len());
            acc.add_range(lo, hi, y, v_grid, sieve).map(|()| acc)
        })
        .try_reduce(
            || DistributionAccumulator::new(v_grid.len()),
            |mut a, b| {
                a.merge(&b);
                Ok(a)
            },
        )?;
    acc.finish(x, y, v_grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use divlaw_core::arithmetic::mean_distribution;

    #[test]
    fn matches_serial() {
        let s = SpfSieve::new(200_000).unwrap();
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let a = parallel_mean_distribution(200_000, 300.0, &grid, &s).unwrap();
        let b = mean_distribution(200_000, 300.0, &grid, &s).unwrap();
        assert_eq!(a, b);
        assert!(parallel_mean_distribution(200_001, 300.0, &grid, &s).is_err());
    }
}
