use crate::math::{self, CompensatedSum};
use crate::quadrature::{fixed_rule, GL6_NODES, GL6_WEIGHTS};
use crate::{Error, Result, EULER_GAMMA};

use super::grid::{steps_per_unit, GridFunction, Head, Kind};

/// Delay equation in integrated form: `(w^a f(w))' = c w^b f(w - 1)`.
#[derive(Debug, Clone, Copy)]
struct DelayLaw {
    a: f64,
    b: f64,
    c: f64,
}

fn pow_int_or_real(w: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        w
    } else if e == -1.0 {
        1.0 / w
    } else {
        math::powf(w, e)
    }
}

fn is_integer(x: f64) -> bool {
    math::abs(x - math::round(x)) < 1e-12
}

/// Method of steps. On each unit segment `[m, m + 1]`,
/// `w^a f(w) = m^a f(m) + c * int_m^w t^b f(t - 1) dt`, where the delayed
/// values come from the finished previous segment. Each cell integral is a
/// 6-point Gauss rule in `sigma = sqrt(t - m)`, which absorbs the
/// square-root onsets of the integrand right after `m`.
fn solve(gf: &mut GridFunction, law: DelayLaw) {
    let steps = gf.steps;
    let segments = (gf.values.len() - 1 - gf.head_index) / steps;
    for seg in 0..segments {
        let m = gf.head_end + seg as f64;
        let base = gf.head_index + seg * steps;
        let mut acc = CompensatedSum::new(pow_int_or_real(m, law.a) * gf.values[base]);
        for j in 0..steps {
            let s0 = math::sqrt(j as f64 / steps as f64);
            let s1 = math::sqrt((j + 1) as f64 / steps as f64);
            let q = {
                let g = &*gf;
                fixed_rule(
                    |s| {
                        let t = m + s * s;
                        2.0 * s * pow_int_or_real(t, law.b) * g.value(t - 1.0)
                    },
                    s0,
                    s1,
                    &GL6_NODES,
                    &GL6_WEIGHTS,
                )
            };
            acc.add(law.c * q);
            let w = m + (j + 1) as f64 / steps as f64;
            gf.values[base + j + 1] = acc.value() / pow_int_or_real(w, law.a);
        }
    }
    gf.finish();
}

fn grid_end_for(u_max: f64) -> f64 {
    math::ceil(u_max - 1e-12)
}

/// Dickman's function on `[0, ceil(u_max)]`.
pub fn build_rho(u_max: f64, h: f64) -> Result<GridFunction> {
    let steps = steps_per_unit(h)?;
    if !(u_max >= 1.0) || !u_max.is_finite() {
        return Err(Error::Domain {
            what: "u_max must be at least 1",
            value: u_max,
        });
    }
    let mut gf = GridFunction::with_head(
        Kind::Rho,
        Head::One,
        0.0,
        false,
        1.0,
        0.0,
        grid_end_for(u_max),
        steps,
        false,
    );
    solve(
        &mut gf,
        DelayLaw {
            a: 0.0,
            b: -1.0,
            c: -1.0,
        },
    );
    Ok(gf)
}

/// `rho_k`, the `k`-th convolution power of `rho`, on `[0, ceil(u_max)]`.
///
/// For `k < 1` the head `w^(k-1)/Gamma(k)` is unbounded at `0`; the grid then
/// starts at `1` and the head is only ever evaluated analytically.
pub fn build_rho_k(k: f64, u_max: f64, h: f64) -> Result<GridFunction> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain {
            what: "k must be positive",
            value: k,
        });
    }
    let steps = steps_per_unit(h)?;
    if !(u_max >= 1.0) || !u_max.is_finite() {
        return Err(Error::Domain {
            what: "u_max must be at least 1",
            value: u_max,
        });
    }
    let head = Head::Power {
        k,
        inv_gamma: 1.0 / math::gamma(k),
    };
    let grid_start = if k < 1.0 { 1.0 } else { 0.0 };
    let mut gf = GridFunction::with_head(
        Kind::RhoK(k),
        head,
        0.0,
        true,
        1.0,
        grid_start,
        grid_end_for(u_max),
        steps,
        !is_integer(k),
    );
    solve(
        &mut gf,
        DelayLaw {
            a: 1.0 - k,
            b: -k,
            c: -k,
        },
    );
    Ok(gf)
}

/// Buchstab's function on `[1, ceil(v_max)]`.
pub fn build_omega(v_max: f64, h: f64) -> Result<GridFunction> {
    let steps = steps_per_unit(h)?;
    if !(v_max >= 2.0) || !v_max.is_finite() {
        return Err(Error::Domain {
            what: "v_max must be at least 2",
            value: v_max,
        });
    }
    let mut gf = GridFunction::with_head(
        Kind::Omega,
        Head::Reciprocal,
        1.0,
        false,
        2.0,
        1.0,
        grid_end_for(v_max),
        steps,
        false,
    );
    solve(
        &mut gf,
        DelayLaw {
            a: 1.0,
            b: 0.0,
            c: 1.0,
        },
    );
    Ok(gf)
}

/// `omega(v) - exp(-gamma)` on `[1, ceil(v_max)]`, zero below `1`.
///
/// Solved from its own head rather than subtracted from [`build_omega`], so
/// the small values far out keep their relative accuracy.
pub fn build_omega_deviation(v_max: f64, h: f64) -> Result<GridFunction> {
    let steps = steps_per_unit(h)?;
    if !(v_max >= 2.0) || !v_max.is_finite() {
        return Err(Error::Domain {
            what: "v_max must be at least 2",
            value: v_max,
        });
    }
    let mut gf = GridFunction::with_head(
        Kind::Derived,
        Head::ShiftedReciprocal {
            shift: EULER_GAMMA.e_neg_gamma,
        },
        1.0,
        false,
        2.0,
        1.0,
        grid_end_for(v_max),
        steps,
        false,
    );
    solve(
        &mut gf,
        DelayLaw {
            a: 1.0,
            b: 0.0,
            c: 1.0,
        },
    );
    Ok(gf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{ln, sqrt};
    use core::f64::consts::PI;

    fn rho_half_closed(w: f64) -> f64 {
        (1.0 - ln(sqrt(w) + sqrt(w - 1.0))) / (sqrt(PI) * sqrt(w))
    }

    #[test]
    fn rho_on_first_segments() {
        let rho = build_rho(3.0, 1e-3).unwrap();
        assert_eq!(rho.eval(0.5).unwrap(), 1.0);
        assert_eq!(rho.eval(-1.0).unwrap(), 0.0);
        assert!((rho.eval(2.0).unwrap() - (1.0 - ln(2.0))).abs() < 1e-12);
        for i in 0..=50 {
            let w = 1.0 + i as f64 / 50.0;
            assert!((rho.eval(w).unwrap() - (1.0 - ln(w))).abs() < 1e-12, "{w}");
        }
        assert_eq!(rho.node_count(), 3001);
        assert!(rho.eval(3.1).is_err());
    }

    #[test]
    fn rho_half_matches_closed_form() {
        let r = build_rho_k(0.5, 3.0, 1e-3).unwrap();
        let mut worst: f64 = 0.0;
        for i in 1..=400 {
            let w = 1.0 + i as f64 / 400.0;
            worst = worst.max((r.eval(w).unwrap() - rho_half_closed(w)).abs());
        }
        assert!(worst < 1e-7, "{worst}");
        assert!((r.eval(0.25).unwrap() - 2.0 / sqrt(PI)).abs() < 1e-12);
        assert_eq!(r.eval(0.0).unwrap(), 0.0);
        assert_eq!(r.grid_start(), 1.0);
    }

    #[test]
    fn rho_k_one_is_rho() {
        let a = build_rho(6.0, 1e-3).unwrap();
        let b = build_rho_k(1.0, 6.0, 1e-3).unwrap();
        for i in 1..=60 {
            let w = i as f64 / 10.0;
            assert!((a.eval(w).unwrap() - b.eval(w).unwrap()).abs() < 1e-13);
        }
        // rho_k vanishes at 0, rho does not
        assert_eq!(b.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn rho_two_head() {
        let r2 = build_rho_k(2.0, 4.0, 1e-3).unwrap();
        assert!((r2.eval(0.5).unwrap() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn omega_values() {
        let om = build_omega(15.0, 1e-3).unwrap();
        assert!((om.eval(1.5).unwrap() - 1.0 / 1.5).abs() < 1e-12);
        assert_eq!(om.eval(0.5).unwrap(), 0.0);
        assert_eq!(om.eval(1.0).unwrap(), 1.0);
        let exact = (1.0 + ln(1.5)) / 2.5;
        assert!((om.eval(2.5).unwrap() - exact).abs() < 1e-12);
        assert!((om.eval(15.0).unwrap() - EULER_GAMMA.e_neg_gamma).abs() < 1e-9);
    }

    #[test]
    fn omega_deviation_tracks_omega() {
        let om = build_omega(12.0, 1e-3).unwrap();
        let dev = build_omega_deviation(12.0, 1e-3).unwrap();
        for i in 0..=110 {
            let v = 1.0 + i as f64 / 10.0;
            let d = om.eval(v).unwrap() - EULER_GAMMA.e_neg_gamma - dev.eval(v).unwrap();
            assert!(d.abs() < 1e-13, "{v}: {d}");
        }
        assert_eq!(dev.eval(0.5).unwrap(), 0.0);
    }

    #[test]
    fn masses() {
        let rho = build_rho(40.0, 1e-3).unwrap();
        let half = build_rho_k(0.5, 40.0, 1e-3).unwrap();
        let m = rho.integrate(0.0, 40.0).unwrap();
        assert!((m - EULER_GAMMA.e_gamma).abs() < 1e-9, "{m}");
        let m = half.integrate(0.0, 40.0).unwrap();
        assert!((m - EULER_GAMMA.e_half_gamma).abs() < 1e-9, "{m}");
        let head = half.integrate(0.0, 1.0).unwrap();
        assert!((head - 2.0 / sqrt(PI)).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(build_rho(0.5, 1e-3).is_err());
        assert!(build_rho(3.0, 0.003).is_err());
        assert!(build_rho_k(0.0, 3.0, 1e-3).is_err());
        assert!(build_rho_k(-1.0, 3.0, 1e-3).is_err());
        assert!(build_omega(1.5, 1e-3).is_err());
    }
}
