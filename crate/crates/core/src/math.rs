//! Scalar helpers: `libm`-backed elementary functions, the Gamma function and
//! Euler's constant with its exponentials.

use core::f64::consts::PI;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn asin(x: f64) -> f64 {
    libm::asin(x)
}

#[inline]
pub fn asinh(x: f64) -> f64 {
    libm::asinh(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Euler's constant and the exponentials that appear in the limit law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerGamma {
    pub gamma: f64,
    /// `exp(gamma)`, the total mass of `rho`.
    pub e_gamma: f64,
    /// `exp(-gamma)`, the limit of `omega`.
    pub e_neg_gamma: f64,
    /// `exp(gamma / 2)`, the total mass of `rho_{1/2}`.
    pub e_half_gamma: f64,
}

pub const EULER_GAMMA: EulerGamma = EulerGamma {
    gamma: 0.577_215_664_901_532_9,
    e_gamma: 1.781_072_417_990_198,
    e_neg_gamma: 0.561_459_483_566_885_2,
    e_half_gamma: 1.334_568_251_529_384_3,
};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function (Lanczos, g = 7), reflected below 1/2. Exact at small
/// positive integers.
pub fn gamma(x: f64) -> f64 {
    if (1.0..=30.0).contains(&x) && x == floor(x) {
        let mut acc = 1.0;
        let mut i = 2.0;
        while i < x {
            acc *= i;
            i += 1.0;
        }
        return acc;
    }
    if x < 0.5 {
        return PI / (sin(PI * x) * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    sqrt(2.0 * PI) * powf(t, x + 0.5) * exp(-t) * acc
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new(start: f64) -> Self {
        CompensatedSum {
            sum: start,
            carry: 0.0,
        }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
