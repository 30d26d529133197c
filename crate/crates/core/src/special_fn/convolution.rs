use alloc::vec::Vec;

use crate::math;
use crate::quadrature::{integrate_endpoint_singular, QuadratureConfig};
use crate::{Error, Result};

use super::grid::GridFunction;

/// `(f * g)(u) = int_0^u f(s) g(u - s) ds` at the default tolerance.
pub fn convolve(f: &GridFunction, g: &GridFunction, u: f64) -> Result<f64> {
    convolve_with(f, g, u, &QuadratureConfig::default())
}

pub fn convolve_with(
    f: &GridFunction,
    g: &GridFunction,
    u: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    convolve_partial(f, g, u, u, cfg)
}

/// `int_0^min(upper, u) f(s) g(u - s) ds`.
///
/// At `u = 0` the right limit is returned: two power heads `w^(a-1)/Gamma(a)`
/// and `w^(b-1)/Gamma(b)` convolve to `w^(a+b-1)/Gamma(a+b)`, which tends to
/// `1` when `a + b = 1`.
pub fn convolve_partial(
    f: &GridFunction,
    g: &GridFunction,
    u: f64,
    upper: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::Domain {
            what: "convolution argument must be nonnegative",
            value: u,
        });
    }
    f.ensure_covers(upper.min(u))?;
    g.ensure_covers(u)?;
    if u == 0.0 && upper >= 0.0 {
        return origin_limit(f, g);
    }
    convolve_fns(|s| f.value(s), |t| g.value(t), u, upper, cfg)
}

fn origin_limit(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    match (f.origin_power(), g.origin_power()) {
        (Some(a), Some(b)) if a + b < 1.0 => Err(Error::Divergent { parameter: 0.0 }),
        (Some(a), Some(b)) if a + b == 1.0 => Ok(1.0),
        _ => Ok(0.0),
    }
}

/// Convolution of two closures that are smooth between integers.
///
/// The range is split at every integer and every `u - integer`, so each
/// panel sees at most square-root behaviour at its ends, which the
/// `sin^2` substitution removes.
pub fn convolve_fns<F, G>(
    mut f: F,
    mut g: G,
    u: f64,
    upper: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    let hi = upper.min(u);
    if !(hi > 0.0) {
        return Ok(0.0);
    }
    let cuts = breakpoints(u, hi);
    let mut total = math::CompensatedSum::default();
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let panel_cfg = QuadratureConfig {
            abs_tol: cfg.abs_tol * (b - a) / hi,
            ..*cfg
        };
        total.add(integrate_endpoint_singular(
            |s| f(s) * g(u - s),
            a,
            b,
            &panel_cfg,
        )?);
    }
    Ok(total.value())
}

/// Sorted cut points in `[0, hi]`: the ends, integers and `u - integer`.
pub(crate) fn breakpoints(u: f64, hi: f64) -> Vec<f64> {
    let mut cuts = Vec::new();
    cuts.push(0.0);
    let mut i = 1.0;
    while i < hi {
        cuts.push(i);
        i += 1.0;
    }
    let mut m = math::ceil(u - hi);
    while m < u {
        let c = u - m;
        if c > 0.0 && c < hi {
            cuts.push(c);
        }
        m += 1.0;
    }
    cuts.push(hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    cuts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::{build_rho, build_rho_k};

    #[test]
    fn cut_points() {
        assert_eq!(breakpoints(2.5, 2.5), [0.0, 0.5, 1.0, 1.5, 2.0, 2.5]);
        assert_eq!(breakpoints(3.0, 1.2), [0.0, 1.0, 1.2]);
        assert_eq!(breakpoints(0.7, 0.7), [0.0, 0.7]);
    }

    #[test]
    fn small_arguments() {
        let half = build_rho_k(0.5, 4.0, 1e-3).unwrap();
        let rho = build_rho(4.0, 1e-3).unwrap();
        let v = convolve(&half, &half, 0.5).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "{v}");
        let v = convolve(&rho, &rho, 0.5).unwrap();
        assert!((v - 0.5).abs() < 1e-10, "{v}");
        assert_eq!(convolve(&rho, &rho, 0.0).unwrap(), 0.0);
        assert_eq!(convolve(&half, &half, 0.0).unwrap(), 1.0);
        assert_eq!(convolve(&half, &rho, 0.0).unwrap(), 0.0);
        assert!(convolve(&rho, &rho, 4.5).is_err());
    }

    #[test]
    fn square_root_identity() {
        let half = build_rho_k(0.5, 4.0, 1e-3).unwrap();
        let rho = build_rho(4.0, 1e-3).unwrap();
        for &u in &[1.0, 1.5, 2.0, 2.7, 3.5] {
            let v = convolve(&half, &half, u).unwrap();
            assert!((v - rho.eval(u).unwrap()).abs() < 1e-7, "{u}: {v}");
        }
    }
}
