//! Adaptive Gauss-Kronrod quadrature and fixed Gauss-Legendre panels.
//!
//! Integrands here have algebraic endpoint singularities of square-root type
//! (`rho_{1/2}` near integers, `sqrt` onsets of convolutions). The
//! [`integrate_endpoint_singular`] entry point removes them with the map
//! `x = a + (b - a) sin^2(theta / 2)`, which behaves like `x - a = t^2` at the
//! left end and `b - x = t^2` at the right end.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::{abs, cos, sin, CompensatedSum};
use crate::{Error, Result};

/// 15-point Kronrod abscissae on `[-1, 1]`, largest first; odd indices are
/// the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 3-point Gauss-Legendre rule (exact through degree 5).
pub const GL3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
pub const GL3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// 6-point Gauss-Legendre rule (exact through degree 11).
pub const GL6_NODES: [f64; 6] = [
    -0.932_469_514_203_152,
    -0.661_209_386_466_264_5,
    -0.238_619_186_083_196_9,
    0.238_619_186_083_196_9,
    0.661_209_386_466_264_5,
    0.932_469_514_203_152,
];
pub const GL6_WEIGHTS: [f64; 6] = [
    0.171_324_492_379_170_34,
    0.360_761_573_048_138_6,
    0.467_913_934_572_691_04,
    0.467_913_934_572_691_04,
    0.360_761_573_048_138_6,
    0.171_324_492_379_170_34,
];

/// Tolerances for the adaptive integrator.
///
/// A panel is accepted when its Kronrod-minus-Gauss estimate is below its
/// width-proportional share of `abs_tol`, or below `rel_tol` times its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-9,
            rel_tol: 0.0,
            max_depth: 40,
        }
    }
}

impl QuadratureConfig {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            ..Self::default()
        }
    }
}

/// Fixed-rule integral of `f` over `[a, b]` with the given Gauss-Legendre rule.
#[inline]
pub fn fixed_rule<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    nodes: &[f64],
    weights: &[f64],
) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// One Gauss-Kronrod 7/15 panel: `(kronrod, |kronrod - gauss|, sum |f| w)`.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = abs(kronrod);
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (abs(f1) + abs(f2));
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let scale = abs(half);
    (
        kronrod * half,
        abs((kronrod - gauss) * half),
        res_abs * scale,
    )
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` by recursive bisection.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let width = b - a;
    let mut total = CompensatedSum::default();
    let mut stack: Vec<(f64, f64, u32)> = Vec::with_capacity(64);
    stack.push((a, b, 0));
    while let Some((lo, hi, depth)) = stack.pop() {
        let (value, err, res_abs) = gk15(&mut f, lo, hi);
        let share = abs((hi - lo) / width);
        let tol = (cfg.abs_tol * share).max(cfg.rel_tol * abs(value));
        let roundoff = 50.0 * f64::EPSILON * res_abs;
        if err <= tol || err <= roundoff {
            total.add(value);
            continue;
        }
        if depth >= cfg.max_depth {
            return Err(Error::Quadrature {
                a: lo,
                b: hi,
                error_estimate: err,
            });
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi, depth + 1));
        stack.push((lo, mid, depth + 1));
    }
    Ok(total.value())
}

/// Adaptive integral of `f` over `[a, b]` where `f` may carry integrable
/// `(x - a)^{-1/2}` or `(b - x)^{-1/2}` behaviour (or milder square-root
/// terms) at either end.
pub fn integrate_endpoint_singular<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let len = b - a;
    integrate(
        |theta| {
            let s = sin(0.5 * theta);
            let c = cos(0.5 * theta);
            // keep the distance to the nearer end exact
            let x = if theta <= 0.5 * PI {
                a + len * s * s
            } else {
                b - len * c * c
            };
            f(x) * 0.5 * len * sin(theta)
        },
        0.0,
        PI,
        cfg,
    )
}
