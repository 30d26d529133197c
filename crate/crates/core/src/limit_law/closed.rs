use core::f64::consts::{FRAC_1_PI, FRAC_2_PI, PI};

use crate::math::{asin, ln, sqrt};
use crate::quadrature::{integrate, integrate_endpoint_singular, QuadratureConfig};
use crate::{Error, Result};

use super::{LawParams, PieceId};

/// Arcsine law `(2/pi) arcsin(sqrt(v))`, the `u = 1` case.
///
/// The upper half is evaluated by reflection, so `F(v) + F(1 - v)` is
/// exactly `1` whenever `1 - v` is exact.
pub fn f_arcsine(v: f64) -> f64 {
    if v >= 1.0 {
        return 1.0;
    }
    if v <= 0.0 {
        return 0.0;
    }
    if v > 0.5 {
        return 1.0 - FRAC_2_PI * asin(sqrt(1.0 - v));
    }
    FRAC_2_PI * asin(sqrt(v))
}

fn asin_sqrt(x: f64) -> f64 {
    asin(sqrt(x.clamp(0.0, 1.0)))
}

fn check_closed_range(u: f64) -> Result<()> {
    if !(u > 1.0 && u <= 2.0) {
        return Err(Error::UnsupportedClosedForm { u });
    }
    Ok(())
}

/// One closed-form piece evaluated at `(u, v)` regardless of which interval
/// `v` falls in.
pub fn f_piece(piece: PieceId, u: f64, v: f64) -> f64 {
    let base = f_arcsine(v);
    match piece {
        PieceId::P1 => {
            let l = ln(u) + ln(1.0 - v);
            base + FRAC_1_PI * l * asin_sqrt(u * v / (u - 1.0)) - 0.5 * ln(1.0 - v)
        }
        PieceId::P2 => base + 0.5 * ln(u),
        PieceId::P3 => {
            let l = ln(u) + ln(v);
            base + FRAC_1_PI * l * asin_sqrt(u * (1.0 - v) / (u - 1.0)) - 0.5 * ln(v)
        }
    }
}

/// Three-piece closed form of `F(u, v)` for `1 < u <= 2`.
pub fn f_closed(p: LawParams) -> Result<f64> {
    check_closed_range(p.u)?;
    Ok(f_piece(PieceId::select(p.u, p.v), p.u, p.v))
}

/// `F(u, v)` for `1 < u <= 2` through the arcsine term plus half of the
/// reduced integral `S`, taken numerically by [`s_integral`]. Agrees with
/// [`f_closed`] on the middle piece.
pub fn f_semi_closed(p: LawParams, cfg: &QuadratureConfig) -> Result<f64> {
    check_closed_range(p.u)?;
    let (u, v) = (p.u, p.v);
    let base = f_arcsine(v);
    Ok(match PieceId::select(u, v) {
        PieceId::P1 => base + 0.5 * s_integral(u, v, cfg)?,
        PieceId::P2 => base + 0.5 * ln(u),
        PieceId::P3 => base + 0.5 * s_integral(u, 1.0 - v, cfg)?,
    })
}

fn check_beta(u: f64, beta: f64) -> Result<f64> {
    check_closed_range(u)?;
    let top = 1.0 - 1.0 / u;
    if !(beta >= 0.0 && beta <= top + 1e-12) {
        return Err(Error::Domain {
            what: "beta must lie in [0, 1 - 1/u]",
            value: beta,
        });
    }
    Ok(top)
}

/// Closed form `(2/pi)(log u + log(1-b)) arcsin(sqrt(u b/(u-1))) - log(1-b)`.
pub fn s_closed(u: f64, beta: f64) -> Result<f64> {
    check_beta(u, beta)?;
    if beta == 0.0 {
        return Ok(0.0);
    }
    let l = ln(u) + ln(1.0 - beta);
    Ok(FRAC_2_PI * l * asin_sqrt(u * beta / (u - 1.0)) - ln(1.0 - beta))
}

/// `S(beta)` reduced to one dimension:
/// `-log(1-b) + (2/pi) int_b^{1-1/u} arcsin(sqrt(b/r)) / (1-r) dr`.
pub fn s_integral(u: f64, beta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let top = check_beta(u, beta)?;
    if beta == 0.0 {
        return Ok(0.0);
    }
    let beta = beta.min(top);
    let rest = integrate_endpoint_singular(|r| asin_sqrt(beta / r) / (1.0 - r), beta, top, cfg)?;
    Ok(-ln(1.0 - beta) + FRAC_2_PI * rest)
}

fn check_xi(xi: f64) -> Result<()> {
    if xi >= 1.0 {
        return Err(Error::Divergent { parameter: xi });
    }
    if !(xi >= 0.0) {
        return Err(Error::Domain {
            what: "xi must lie in [0, 1)",
            value: xi,
        });
    }
    Ok(())
}

/// `-log(1 - xi)`.
pub fn r_closed(xi: f64) -> Result<f64> {
    check_xi(xi)?;
    Ok(-ln(1.0 - xi))
}

/// `(1/pi) int int_{s, z >= 0, s + z <= xi} ds dz / (sqrt(s) sqrt(z) (1 - s - z))`
/// by nested quadrature in `w = s + z` and `s` on `[0, w]`.
pub fn r_integral(xi: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_xi(xi)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    let inner_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-2,
        ..*cfg
    };
    let mut failure = None;
    let outer = integrate(
        |w| {
            let inner =
                integrate_endpoint_singular(|s| 1.0 / (sqrt(s) * sqrt(w - s)), 0.0, w, &inner_cfg);
            match inner {
                Ok(v) => v / (PI * (1.0 - w)),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        xi,
        cfg,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(outer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(u: f64, v: f64) -> LawParams {
        LawParams::new(u, v).unwrap()
    }

    #[test]
    fn arcsine_values() {
        assert_eq!(f_arcsine(0.0), 0.0);
        assert!((f_arcsine(0.5) - 0.5).abs() < 1e-15);
        assert!((f_arcsine(0.25) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f_arcsine(1.0), 1.0);
    }

    #[test]
    fn closed_form_examples() {
        let v = f_closed(lp(1.5, 1.0 / 3.0)).unwrap();
        assert!((v - 0.594_559_106_084_689).abs() < 1e-12);
        assert_eq!(f_closed(lp(1.5, 1.0)).unwrap(), 1.0);
        let v = f_closed(lp(2.0, 0.5)).unwrap();
        assert!((v - 0.846_573_590_279_973).abs() < 1e-12);
        assert_eq!(f_closed(lp(1.5, 0.0)).unwrap(), 0.0);
        assert!(matches!(
            f_closed(lp(1.0, 0.3)),
            Err(Error::UnsupportedClosedForm { .. })
        ));
        assert!(f_closed(lp(2.5, 0.3)).is_err());
    }

    #[test]
    fn pieces_meet_at_boundaries() {
        for &u in &[1.1, 1.25, 1.5, 1.75, 2.0] {
            let a = (u - 1.0) / u;
            let b = 1.0 / u;
            let d1 = (f_piece(PieceId::P1, u, a) - f_piece(PieceId::P2, u, a)).abs();
            let d2 = (f_piece(PieceId::P2, u, b) - f_piece(PieceId::P3, u, b)).abs();
            assert!(d1 <= 1e-12 && d2 <= 1e-12, "{u}: {d1} {d2}");
        }
    }

    #[test]
    fn s_endpoints() {
        assert_eq!(s_closed(1.5, 0.0).unwrap(), 0.0);
        let v = s_closed(1.5, 1.0 / 3.0).unwrap();
        assert!((v - ln(1.5)).abs() < 1e-12);
        let v = s_closed(2.0, 0.25).unwrap();
        assert!((v - 0.490_414_626_505_863).abs() < 1e-12);
        assert!(s_closed(1.5, 0.5).is_err());
        let cfg = QuadratureConfig::with_abs_tol(1e-12);
        let v = s_integral(1.5, 1.0 / 3.0, &cfg).unwrap();
        assert!((v - ln(1.5)).abs() < 1e-12);
    }

    #[test]
    fn semi_closed_matches_reference_values() {
        let cfg = QuadratureConfig::with_abs_tol(1e-12);
        let cases = [
            (0.2, 0.469_184_875_778),
            (0.7, 0.830_328_446_162),
            (0.8, 0.878_850_405_176),
            (0.9, 0.923_641_888_106),
        ];
        for (v, want) in cases {
            let got = f_semi_closed(lp(1.5, v), &cfg).unwrap();
            assert!((got - want).abs() < 1e-10, "{v}: {got}");
        }
    }

    #[test]
    fn r_matches_log() {
        let cfg = QuadratureConfig::default();
        assert_eq!(r_integral(0.0, &cfg).unwrap(), 0.0);
        for &xi in &[0.1, 0.5, 0.9] {
            let d = (r_integral(xi, &cfg).unwrap() - r_closed(xi).unwrap()).abs();
            assert!(d < 1e-8, "{xi}: {d}");
        }
        assert!(matches!(
            r_integral(1.0, &cfg),
            Err(Error::Divergent { .. })
        ));
        assert!(r_closed(-0.1).is_err());
    }
}
