use std::sync::OnceLock;

use divlaw_core::arithmetic::{
    g_multiplicative, gamma_d, smooth_divisors, tau_smooth, Factorization, SpfSieve,
};
use divlaw_core::limit_law::{f_arcsine, LawContext, LawParams};
use divlaw_core::special_fn::{build_omega, build_rho, build_rho_k, convolve, GridFunction};
use proptest::prelude::*;

fn sieve() -> &'static SpfSieve {
    static S: OnceLock<SpfSieve> = OnceLock::new();
    S.get_or_init(|| SpfSieve::new(100_000).unwrap())
}

fn rho() -> &'static GridFunction {
    static G: OnceLock<GridFunction> = OnceLock::new();
    G.get_or_init(|| build_rho(12.0, 1e-3).unwrap())
}

fn rho_half() -> &'static GridFunction {
    static G: OnceLock<GridFunction> = OnceLock::new();
    G.get_or_init(|| build_rho_k(0.5, 12.0, 1e-3).unwrap())
}

fn ctx() -> &'static LawContext {
    static C: OnceLock<LawContext> = OnceLock::new();
    C.get_or_init(|| LawContext::new(6.0, 1e-3).unwrap())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_round_trip(n in 1u64..=100_000) {
        let f = sieve().factorize(n).unwrap();
        prop_assert_eq!(f.value(), n);
        prop_assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(f.pairs().iter().all(|&(p, e)| e >= 1 && sieve().is_prime(p)));
        prop_assert_eq!(&f, &Factorization::trial_division(n).unwrap());
    }

    #[test]
    fn tau_is_multiplicative(a in 1u64..=316, b in 1u64..=316, y in 1.5f64..40.0) {
        prop_assume!(gcd(a, b) == 1);
        let s = sieve();
        prop_assert_eq!(
            tau_smooth(a * b, y, s).unwrap(),
            tau_smooth(a, y, s).unwrap() * tau_smooth(b, y, s).unwrap()
        );
    }

    #[test]
    fn tau_counts_all_divisors_when_smooth(n in 1u64..=100_000) {
        let s = sieve();
        let p = s.largest_prime_factor(n).unwrap();
        let full = s.factorize(n).unwrap().tau();
        prop_assert_eq!(tau_smooth(n, p.max(2) as f64, s).unwrap(), full);
        let divs = smooth_divisors(n, p.max(2) as f64, s).unwrap();
        prop_assert!(divs.iter().all(|d| n % d == 0));
        prop_assert_eq!(divs.len() as u64, full);
    }

    #[test]
    fn gamma_d_identity(d in 1u64..=10_000, n in 1u64..=10_000) {
        let s = SpfSieve::new(10_000).unwrap();
        let r = gamma_d(d, n, &s).unwrap();
        let dn = Factorization::trial_division(d * n).unwrap().tau();
        let td = Factorization::trial_division(d).unwrap().tau();
        prop_assert_eq!(r * dn, td.into());
    }

    #[test]
    fn g_in_unit_interval_and_multiplicative(a in 1u64..=2_000, b in 1u64..=2_000) {
        let ga = g_multiplicative(a, 60).unwrap();
        prop_assert!(ga > 0.0 && ga <= 1.0);
        prop_assume!(gcd(a, b) == 1);
        let gb = g_multiplicative(b, 60).unwrap();
        let gab = g_multiplicative(a * b, 60).unwrap();
        prop_assert!((gab - ga * gb).abs() <= 1e-15);
    }

    #[test]
    fn arcsine_symmetry(v in 0.5f64..=1.0) {
        let w = 1.0 - v;
        prop_assert_eq!(f_arcsine(v) + f_arcsine(w), 1.0);
        prop_assert_eq!(f_arcsine(w) + f_arcsine(v), 1.0);
    }

    #[test]
    fn integrate_is_additive(a in 0.0f64..10.0, m in 0.0f64..1.0, b in 0.0f64..10.0) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let c = a + m * (b - a);
        for g in [rho(), rho_half()] {
            let whole = g.integrate(a, b).unwrap();
            let split = g.integrate(a, c).unwrap() + g.integrate(c, b).unwrap();
            prop_assert!((whole - split).abs() <= 1e-12, "{} {}", whole, split);
        }
    }

    #[test]
    fn evaluation_below_support_is_zero(w in -50.0f64..0.0) {
        prop_assert_eq!(rho().eval(w).unwrap(), 0.0);
        prop_assert_eq!(rho_half().eval(w).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convolution_is_symmetric(u in 0.0f64..10.0) {
        let a = convolve(rho_half(), rho(), u).unwrap();
        let b = convolve(rho(), rho_half(), u).unwrap();
        prop_assert!((a - b).abs() <= 1e-10, "{} {}", a, b);
    }

    #[test]
    fn node_count(u_max in 1.0f64..30.0, i in 0usize..4) {
        let h = [1e-3, 2e-3, 5e-3, 1e-2][i];
        let g = build_rho(u_max, h).unwrap();
        let expect = ((g.grid_end() - g.grid_start()) / h).round() as usize + 1;
        prop_assert_eq!(g.node_count(), expect);
        prop_assert_eq!(g.values().len(), expect);
        prop_assert!(g.grid_end() >= u_max);
    }

    #[test]
    fn f_quad_monotone_in_v(u in 1.0f64..5.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let f_lo = ctx().f_quad(LawParams::new(u, lo).unwrap()).unwrap();
        let f_hi = ctx().f_quad(LawParams::new(u, hi).unwrap()).unwrap();
        prop_assert!(f_lo <= f_hi + 1e-9, "{} {}", f_lo, f_hi);
        prop_assert!((0.0..=1.0).contains(&f_lo) && (0.0..=1.0).contains(&f_hi));
    }
}

#[test]
fn grid_invariants() {
    let r = rho();
    assert!(r
        .values()
        .iter()
        .all(|&x| x.is_finite() && x > 0.0 && x <= 1.0));
    let first = ((1.0 - r.grid_start()) / r.h()).round() as usize;
    assert!(r.values()[first..].windows(2).all(|w| w[1] < w[0]));

    let rh = rho_half();
    let first = ((1.0 - rh.grid_start()) / rh.h()).round() as usize;
    assert!(rh.values()[first..].windows(2).all(|w| w[1] < w[0]));

    let om = build_omega(20.0, 1e-3).unwrap();
    assert!(om.values().iter().all(|&x| (0.5..=1.0).contains(&x)));
    assert_eq!(om.eval(0.999).unwrap(), 0.0);

    for g in [r, rh, &om] {
        for i in 0..g.node_count() {
            let w = g.node(i);
            if let Some(head) = g.head_value(w) {
                if w > 0.0 {
                    assert!((head - g.values()[i]).abs() <= 1e-12, "{w}");
                }
            }
        }
    }
}
