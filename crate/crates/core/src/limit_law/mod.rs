//! The limit law `F(u, v)` of `log d / log n` for a random `y`-smooth divisor
//! `d` of a random `n <= x`, with `u = log x / log y`.
//!
//! ```text
//! F(u, v) = int_0^{uv} rho_half(s) (rho_half * omega)(u - s) ds
//!         + int_0^{uv} rho_half(s) rho_half(u - s) ds
//! ```

use core::cell::Cell;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::quadrature::QuadratureConfig;
use crate::special_fn::{
    build_omega, build_omega_deviation, build_rho_k, convolve_fns, GridFunction, Kind,
};
use crate::{Error, Result, EULER_GAMMA};

mod closed;
mod table;

pub use closed::{
    f_arcsine, f_closed, f_piece, f_semi_closed, r_closed, r_integral, s_closed, s_integral,
};
pub use table::{
    law_row, make_law_table, validate_v_grid, Column, LawRow, LawTable, TableCell, TableOptions,
};

/// Probabilities this far outside `[0, 1]` are clamped and counted; beyond
/// it they are errors.
pub const CLAMP_BAND: f64 = 1e-9;

/// Truncation length used by [`LawContext::i_tail`].
pub const TAIL_LENGTH: f64 = 40.0;

/// A point `(u, v)` with `u >= 1` and `0 <= v <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawParams {
    pub u: f64,
    pub v: f64,
}

impl LawParams {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(u >= 1.0) || !u.is_finite() {
            return Err(Error::Domain {
                what: "u must be at least 1",
                value: u,
            });
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                what: "v must lie in [0, 1]",
                value: v,
            });
        }
        Ok(LawParams { u, v })
    }
}

/// The three `v`-intervals of the closed form for `1 < u <= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PieceId {
    /// `[0, (u-1)/u]`
    P1,
    /// `[(u-1)/u, 1/u]`
    P2,
    /// `[1/u, 1]`
    P3,
}

impl PieceId {
    /// Piece containing `v`; a shared boundary goes to the lower piece.
    pub fn select(u: f64, v: f64) -> PieceId {
        if v <= (u - 1.0) / u {
            PieceId::P1
        } else if v <= 1.0 / u {
            PieceId::P2
        } else {
            PieceId::P3
        }
    }
}

/// The grids and tolerances the law is computed from.
///
/// Immutable apart from the clamp counter, so it can be shared across
/// threads.
#[derive(Debug)]
pub struct LawContext {
    rho_half: GridFunction,
    omega: GridFunction,
    omega_dev: GridFunction,
    cfg: QuadratureConfig,
    clamp_warnings: AtomicUsize,
}

/// Runs `body` with a sink for errors raised inside quadrature closures.
fn with_error_sink<T>(body: impl FnOnce(&dyn Fn(Error)) -> Result<T>) -> Result<T> {
    let sink: Cell<Option<Error>> = Cell::new(None);
    let record = |e: Error| {
        let old = sink.take();
        sink.set(Some(old.unwrap_or(e)));
    };
    let out = body(&record);
    match sink.into_inner() {
        Some(e) => Err(e),
        None => out,
    }
}

impl LawContext {
    /// Builds `rho_{1/2}` and `omega` on `[0, u_max]` with step `h`.
    pub fn new(u_max: f64, h: f64) -> Result<Self> {
        let rho_half = build_rho_k(0.5, u_max, h)?;
        let omega = build_omega(u_max.max(2.0), h)?;
        Self::from_grids(rho_half, omega, QuadratureConfig::default())
    }

    pub fn from_grids(
        rho_half: GridFunction,
        omega: GridFunction,
        cfg: QuadratureConfig,
    ) -> Result<Self> {
        if rho_half.kind() != Kind::RhoK(0.5) {
            return Err(Error::Domain {
                what: "first grid must hold rho_{1/2}",
                value: 0.0,
            });
        }
        if omega.kind() != Kind::Omega {
            return Err(Error::Domain {
                what: "second grid must hold omega",
                value: 0.0,
            });
        }
        let omega_dev = build_omega_deviation(omega.grid_end(), omega.h())?;
        Ok(LawContext {
            rho_half,
            omega,
            omega_dev,
            cfg,
            clamp_warnings: AtomicUsize::new(0),
        })
    }

    pub fn with_quadrature(mut self, cfg: QuadratureConfig) -> Self {
        self.cfg = cfg;
        self
    }

    pub fn rho_half(&self) -> &GridFunction {
        &self.rho_half
    }

    pub fn omega(&self) -> &GridFunction {
        &self.omega
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Number of results pulled back into `[0, 1]` so far.
    pub fn clamp_warnings(&self) -> usize {
        self.clamp_warnings.load(Ordering::Relaxed)
    }

    fn inner_cfg(&self) -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: self.cfg.abs_tol * 1e-2,
            ..self.cfg
        }
    }

    fn check_probability(&self, value: f64) -> Result<f64> {
        if !(-CLAMP_BAND..=1.0 + CLAMP_BAND).contains(&value) {
            return Err(Error::ProbabilityOutOfRange { value });
        }
        if !(0.0..=1.0).contains(&value) {
            self.clamp_warnings.fetch_add(1, Ordering::Relaxed);
            return Ok(value.clamp(0.0, 1.0));
        }
        Ok(value)
    }

    /// `(rho_half * omega)(t) = int_0^{t-1} rho_half(z) omega(t - z) dz`.
    pub fn rho_half_omega(&self, t: f64) -> Result<f64> {
        self.rho_half.ensure_covers(t)?;
        self.omega.ensure_covers(t)?;
        self.j_unchecked(t, &self.inner_cfg())
    }

    fn j_unchecked(&self, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if t <= 1.0 {
            return Ok(0.0);
        }
        convolve_fns(
            |z| self.rho_half.value(z),
            |w| self.omega.value(w),
            t,
            t - 1.0,
            cfg,
        )
    }

    /// The two integrals of `F(u, v)`: `(double integral, convolution term)`.
    pub fn f_quad_parts(&self, p: LawParams) -> Result<(f64, f64)> {
        let (u, v) = (p.u, p.v);
        let top = u * v;
        if top == 0.0 {
            return Ok((0.0, 0.0));
        }
        self.rho_half.ensure_covers(u)?;
        self.omega.ensure_covers(u)?;
        let conv = convolve_fns(
            |s| self.rho_half.value(s),
            |t| self.rho_half.value(t),
            u,
            top,
            &self.cfg,
        )?;
        let inner_cfg = self.inner_cfg();
        let double = with_error_sink(|record| {
            convolve_fns(
                |s| self.rho_half.value(s),
                |t| match self.j_unchecked(t, &inner_cfg) {
                    Ok(j) => j,
                    Err(e) => {
                        record(e);
                        0.0
                    }
                },
                u,
                top.min(u - 1.0),
                &self.cfg,
            )
        })?;
        Ok((double, conv))
    }

    /// `F(u, v)` by nested quadrature, checked against `[0, 1]`.
    pub fn f_quad(&self, p: LawParams) -> Result<f64> {
        if p.u * p.v == 0.0 {
            return Ok(0.0);
        }
        let (a, b) = self.f_quad_parts(p)?;
        self.check_probability(a + b)
    }

    /// Large-`u` main term `exp(-gamma/2) int_0^{uv} rho_half`.
    pub fn f_asymptotic(&self, p: LawParams) -> Result<f64> {
        let mass = self.rho_half.integrate(0.0, p.u * p.v)?;
        Ok(mass / EULER_GAMMA.e_half_gamma)
    }

    /// `D(t) = rho_half(t) + (rho_half * omega)(t) - exp(-gamma/2)`, written
    /// through `omega - exp(-gamma)` and the tail of `rho_half` so that it
    /// stays accurate when it is tiny.
    fn gap_kernel(&self, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let r = self.rho_half.value(t);
        if t <= 1.0 {
            return Ok(r - 1.0 / EULER_GAMMA.e_half_gamma);
        }
        let conv = convolve_fns(
            |z| self.rho_half.value(z),
            |w| self.omega_dev.value(w),
            t,
            t - 1.0,
            cfg,
        )?;
        let tail = self.rho_half.integrate(t - 1.0, self.rho_half.grid_end())?;
        Ok(r + conv - EULER_GAMMA.e_neg_gamma * tail)
    }

    /// `F(u, v) - F_asymptotic(u, v)` computed directly as
    /// `int_0^{uv} rho_half(s) D(u - s) ds`, with relative tolerances, so it
    /// stays meaningful far below the absolute accuracy of [`f_quad`].
    ///
    /// The tail of `rho_half` past the grid end is dropped; keep the grid a
    /// dozen units beyond `u`.
    ///
    /// [`f_quad`]: Self::f_quad
    pub fn asymptotic_gap(&self, p: LawParams) -> Result<f64> {
        let (u, v) = (p.u, p.v);
        let top = u * v;
        if top == 0.0 {
            return Ok(0.0);
        }
        self.rho_half.ensure_covers(u)?;
        self.omega.ensure_covers(u)?;
        // the gap is of the size of rho_half(u); tolerances follow it
        let scale = self.rho_half.value(u).max(f64::MIN_POSITIVE);
        let cfg = QuadratureConfig {
            abs_tol: 1e-4 * scale,
            rel_tol: 1e-6,
            max_depth: self.cfg.max_depth,
        };
        let inner_cfg = QuadratureConfig {
            abs_tol: 1e-7 * scale,
            rel_tol: 1e-9,
            max_depth: self.cfg.max_depth,
        };
        with_error_sink(|record| {
            convolve_fns(
                |s| self.rho_half.value(s),
                |t| match self.gap_kernel(t, &inner_cfg) {
                    Ok(d) => d,
                    Err(e) => {
                        record(e);
                        0.0
                    }
                },
                u,
                top,
                &cfg,
            )
        })
    }

    /// `exp(-gamma) int_0^{uv} (int_0^{u-s-1} rho_half) rho_half(s) ds`.
    pub fn h_integral(&self, p: LawParams) -> Result<f64> {
        let (u, v) = (p.u, p.v);
        let top = (u * v).min(u - 1.0);
        if top <= 0.0 {
            return Ok(0.0);
        }
        self.rho_half.ensure_covers(u)?;
        let total = with_error_sink(|record| {
            convolve_fns(
                |s| self.rho_half.value(s),
                |t| match self.rho_half.integrate(0.0, t - 1.0) {
                    Ok(m) => m,
                    Err(e) => {
                        record(e);
                        0.0
                    }
                },
                u,
                top,
                &self.cfg,
            )
        })?;
        Ok(EULER_GAMMA.e_neg_gamma * total)
    }

    /// `int_w^inf rho_half`, truncated at `w + 40`.
    pub fn i_tail(&self, w: f64) -> Result<f64> {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::Domain {
                what: "tail start must be nonnegative",
                value: w,
            });
        }
        let cut = w + TAIL_LENGTH;
        self.rho_half.ensure_covers(cut)?;
        // rho_half(t + 1) <= rho_half(t) / t past 1, so the remainder is
        // at most rho_half(cut) * cut / (cut - 1)
        let edge = self.rho_half.value(cut).abs();
        let bound = edge * cut / (cut - 1.0);
        if bound > 1e-12 {
            return Err(Error::TailNotNegligible { cutoff: cut, bound });
        }
        self.rho_half.integrate(w, cut)
    }
}
