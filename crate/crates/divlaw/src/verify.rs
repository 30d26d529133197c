//! Named numerical checks, one per acceptance criterion.

use std::fmt;
use std::time::{Duration, Instant};

use divlaw_core::arithmetic::{
    bh_factor_identity, mean_distribution, phi_count, phi_main_term, psi_count, psi_ratio,
    smooth_rough_total, tau_smooth, SpfSieve,
};
use divlaw_core::limit_law::{
    f_arcsine, f_closed, f_piece, f_semi_closed, r_integral, s_closed, LawContext, LawParams,
    PieceId,
};
use divlaw_core::quadrature::QuadratureConfig;
use divlaw_core::special_fn::{build_omega, build_rho, build_rho_k, convolve};
use divlaw_core::{Error, EULER_GAMMA};
use rayon::prelude::*;

use crate::config::{default_u_max, DEFAULT_H};
use crate::scan::parallel_mean_distribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Informational line; does not affect the verdict.
    Report,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Report => "REPORT",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub label: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.label, self.status, self.detail)
    }
}

fn bound(label: &str, err: f64, tol: f64) -> Outcome {
    Outcome {
        label: label.into(),
        status: if err <= tol {
            Status::Pass
        } else {
            Status::Fail
        },
        detail: format!("max_err {err:.3e}, tol {tol:.0e}"),
    }
}

fn exact(label: &str, ok: bool, detail: String) -> Outcome {
    Outcome {
        label: label.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn report(label: &str, detail: String) -> Outcome {
    Outcome {
        label: label.into(),
        status: Status::Report,
        detail,
    }
}

fn failed(label: &str, e: Error) -> Outcome {
    Outcome {
        label: label.into(),
        status: Status::Fail,
        detail: format!("error: {e}"),
    }
}

/// Grid step and an optional tolerance that replaces every check's own.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub h: f64,
    pub tolerance: Option<f64>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            h: DEFAULT_H,
            tolerance: None,
        }
    }
}

impl Settings {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Check {
    pub key: &'static str,
    pub criterion: u32,
    /// Wall-clock budget of the criterion.
    pub budget: Duration,
    run: fn(&Settings) -> Outcomes,
}

impl Check {
    pub fn run(&self, settings: &Settings) -> CheckResult {
        let start = Instant::now();
        let outcomes = match (self.run)(settings) {
            Ok(o) => o,
            Err((label, e)) => vec![failed(&label, e)],
        };
        CheckResult {
            check: *self,
            outcomes,
            elapsed: start.elapsed(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub check: Check,
    pub outcomes: Vec<Outcome>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.check.budget
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CHECKS: [Check; 12] = [
    Check {
        key: "special-values",
        criterion: 1,
        budget: secs(5),
        run: special_values,
    },
    Check {
        key: "mass",
        criterion: 2,
        budget: secs(5),
        run: mass,
    },
    Check {
        key: "convolution",
        criterion: 3,
        budget: secs(30),
        run: convolution,
    },
    Check {
        key: "buchstab",
        criterion: 4,
        budget: secs(5),
        run: buchstab,
    },
    Check {
        key: "closed-form",
        criterion: 5,
        budget: secs(60),
        run: closed_form,
    },
    Check {
        key: "arcsine",
        criterion: 6,
        budget: secs(10),
        run: arcsine,
    },
    Check {
        key: "simplex-integrals",
        criterion: 7,
        budget: secs(60),
        run: simplex_integrals,
    },
    Check {
        key: "tail-recurrence",
        criterion: 8,
        budget: secs(60),
        run: tail_recurrence,
    },
    Check {
        key: "euler-factor",
        criterion: 9,
        budget: secs(60),
        run: euler_factor,
    },
    Check {
        key: "arithmetic",
        criterion: 10,
        budget: secs(5),
        run: arithmetic,
    },
    Check {
        key: "asymptotic",
        criterion: 11,
        budget: secs(120),
        run: asymptotic,
    },
    Check {
        key: "empirical",
        criterion: 12,
        budget: secs(300),
        run: empirical,
    },
];

pub fn find(key: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.key == key)
}

/// Attaches a label to an error so the failing step is named.
trait Label<T> {
    fn at(self, label: &str) -> Result<T, (String, Error)>;
}

impl<T> Label<T> for Result<T, Error> {
    fn at(self, label: &str) -> Result<T, (String, Error)> {
        self.map_err(|e| (label.to_string(), e))
    }
}

type Outcomes = Result<Vec<Outcome>, (String, Error)>;

fn rho_half_closed(w: f64) -> f64 {
    let pi = std::f64::consts::PI;
    (1.0 - (w.sqrt() + (w - 1.0).sqrt()).ln()) / (pi * w).sqrt()
}

fn v_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn special_values(s: &Settings) -> Outcomes {
    let l = "special functions";
    let rho = build_rho(3.0, s.h).at(l)?;
    let omega = build_omega(3.0, s.h).at(l)?;
    let rho_half = build_rho_k(0.5, 3.0, s.h).at(l)?;
    let e_rho = (rho.eval(2.0).at(l)? - (1.0 - 2f64.ln())).abs();
    let e_omega = (omega.eval(2.5).at(l)? - (1.0 + 1.5f64.ln()) / 2.5).abs();
    let mut e_half = 0.0f64;
    for i in 0..=1000 {
        let w = 1.0 + i as f64 / 1000.0;
        e_half = e_half.max((rho_half.eval(w).at(l)? - rho_half_closed(w)).abs());
    }
    Ok(vec![
        bound("ρ(2) = 1 - log 2", e_rho, s.tol(1e-8)),
        bound("ω(2.5) = (1 + log 1.5)/2.5", e_omega, s.tol(1e-8)),
        bound("ρ_half grid vs closed form on [1,2]", e_half, s.tol(1e-6)),
    ])
}

fn mass(s: &Settings) -> Outcomes {
    let l = "mass";
    let rho = build_rho(40.0, s.h).at(l)?;
    let rho_half = build_rho_k(0.5, 40.0, s.h).at(l)?;
    let m = rho.integrate(0.0, 40.0).at(l)?;
    let m_half = rho_half.integrate(0.0, 40.0).at(l)?;
    Ok(vec![
        bound("∫ρ = e^γ", (m - EULER_GAMMA.e_gamma).abs(), s.tol(1e-6)),
        bound(
            "∫ρ_half = e^{γ/2}",
            (m_half - EULER_GAMMA.e_half_gamma).abs(),
            s.tol(1e-6),
        ),
    ])
}

fn convolution(s: &Settings) -> Outcomes {
    let l = "convolution";
    let rho = build_rho(10.0, s.h).at(l)?;
    let rho_half = build_rho_k(0.5, 10.0, s.h).at(l)?;
    let rho_two = build_rho_k(2.0, 10.0, s.h).at(l)?;
    let us: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
    let sup = |f: &(dyn Fn(f64) -> Result<f64, Error> + Sync)| -> Result<f64, (String, Error)> {
        let errs: Result<Vec<f64>, Error> = us.par_iter().map(|&u| f(u)).collect();
        Ok(errs.at(l)?.into_iter().fold(0.0, f64::max))
    };
    let e_sqrt = sup(&|u| Ok((convolve(&rho_half, &rho_half, u)? - rho.eval(u)?).abs()))?;
    let e_square = sup(&|u| Ok((convolve(&rho, &rho, u)? - rho_two.eval(u)?).abs()))?;
    Ok(vec![
        bound("convolution ρ_half∗ρ_half=ρ", e_sqrt, s.tol(1e-6)),
        bound("convolution ρ∗ρ=ρ_2", e_square, s.tol(1e-6)),
    ])
}

fn buchstab(s: &Settings) -> Outcomes {
    let omega = build_omega(15.0, s.h).at("buchstab")?;
    let err = (0..omega.node_count())
        .filter(|&i| omega.node(i) >= 10.0 - 1e-12)
        .map(|i| (omega.values()[i] - EULER_GAMMA.e_neg_gamma).abs())
        .fold(0.0, f64::max);
    Ok(vec![bound(
        "buchstab ω → e^{-γ} on [10,15]",
        err,
        s.tol(1e-6),
    )])
}

fn closed_form(s: &Settings) -> Outcomes {
    let l = "closed form";
    let ctx = LawContext::new(14.0, s.h).at(l)?;
    let grid = v_grid(101);
    let cfg = QuadratureConfig::default();
    let mut e_closed = 0.0f64;
    let mut e_reduced = 0.0f64;
    let mut e_cont = 0.0f64;
    let mut ends_exact = true;
    for u in [1.25, 1.5, 1.75, 2.0] {
        let rows: Result<Vec<(f64, f64, f64)>, Error> = grid
            .par_iter()
            .map(|&v| {
                let p = LawParams::new(u, v)?;
                Ok((ctx.f_quad(p)?, f_closed(p)?, f_semi_closed(p, &cfg)?))
            })
            .collect();
        for (q, c, r) in rows.at(l)? {
            e_closed = e_closed.max((q - c).abs());
            e_reduced = e_reduced.max((q - r).abs());
        }
        let a = (u - 1.0) / u;
        let b = 1.0 / u;
        e_cont = e_cont
            .max((f_piece(PieceId::P1, u, a) - f_piece(PieceId::P2, u, a)).abs())
            .max((f_piece(PieceId::P2, u, b) - f_piece(PieceId::P3, u, b)).abs());
        ends_exact &= f_closed(LawParams::new(u, 1.0).at(l)?).at(l)? == 1.0;
    }
    Ok(vec![
        bound("F_quad vs F_closed", e_closed, s.tol(1e-6)),
        bound("closed-form piece continuity", e_cont, s.tol(1e-12)),
        exact("F_closed(u, 1) = 1", ends_exact, "exact".into()),
        report(
            "F_quad vs arcsine + S reduced numerically",
            format!("max_err {e_reduced:.3e}"),
        ),
    ])
}

fn arcsine(s: &Settings) -> Outcomes {
    let ctx = LawContext::new(14.0, s.h).at("arcsine")?;
    let errs: Result<Vec<f64>, Error> = v_grid(101)
        .par_iter()
        .map(|&v| Ok((ctx.f_quad(LawParams::new(1.0, v)?)? - f_arcsine(v)).abs()))
        .collect();
    let err = errs.at("arcsine")?.into_iter().fold(0.0, f64::max);
    Ok(vec![bound(
        "arcsine reduction F_quad(1, v)",
        err,
        s.tol(1e-8),
    )])
}

fn simplex_integrals(s: &Settings) -> Outcomes {
    let cfg = QuadratureConfig::default();
    let mut e_r = 0.0f64;
    for i in 1..=9 {
        let xi = i as f64 / 10.0;
        e_r = e_r.max((r_integral(xi, &cfg).at("R integral")? + (1.0 - xi).ln()).abs());
    }
    let mut e_s = 0.0f64;
    for u in [1.25, 1.5, 1.75, 2.0] {
        e_s = e_s.max(s_closed(u, 0.0).at("S closed")?.abs());
        e_s = e_s.max((s_closed(u, 1.0 - 1.0 / u).at("S closed")? - u.ln()).abs());
    }
    Ok(vec![
        bound("R(ξ) = -log(1-ξ)", e_r, s.tol(1e-5)),
        bound("S endpoint identities", e_s, s.tol(1e-12)),
    ])
}

fn tail_recurrence(s: &Settings) -> Outcomes {
    let l = "tail recurrence";
    let ctx = LawContext::new(default_u_max(6.0), s.h).at(l)?;
    let mut err = 0.0f64;
    for w in [1.0, 2.0, 5.0] {
        let lhs = ctx.i_tail(w).at(l)? - ctx.i_tail(w + 1.0).at(l)?;
        let rhs = 2.0 * (w + 1.0) * ctx.rho_half().eval(w + 1.0).at(l)?;
        err = err.max((lhs - rhs).abs());
    }
    let near_zero = (ctx.i_tail(0.0).at(l)? - EULER_GAMMA.e_half_gamma).abs();
    Ok(vec![
        bound("I(w) - I(w+1) = 2(w+1)ρ_half(w+1)", err, s.tol(1e-8)),
        bound("I(0) = e^{γ/2}", near_zero, s.tol(1e-6)),
    ])
}

fn euler_factor(s: &Settings) -> Outcomes {
    let mut err = 0.0f64;
    for p in [2, 3, 5, 7] {
        err = err.max((bh_factor_identity(p, 60).at("euler factor")? - 1.0).abs());
    }
    Ok(vec![bound(
        "per-prime B(1)H(1) factor = 1",
        err,
        s.tol(1e-12),
    )])
}

fn arithmetic(s: &Settings) -> Outcomes {
    let l = "arithmetic";
    let small = SpfSieve::new(10_000).at(l)?;
    let psi = psi_count(30, 5.0, &small).at(l)?;
    let phi = phi_count(30, 5.0, &small).at(l)?;
    let tau = tau_smooth(12, 2.0, &small).at(l)?;
    let mean = mean_distribution(4, 2.0, &[0.5], &small).at(l)?.values[0];
    let total = smooth_rough_total(10_000, 30.0, &small).at(l)?;
    let mean_err = (mean - 19.0 / 24.0).abs();

    let big = SpfSieve::new(1_000_000).at(l)?;
    let rho = build_rho(4.0, s.h).at(l)?;
    let omega = build_omega(4.0, s.h).at(l)?;
    let ratio = psi_ratio(1_000_000, 100.0, &big, &rho).at(l)?;
    let phi_big = phi_count(1_000_000, 100.0, &big).at(l)?;
    let main = phi_main_term(1_000_000, 100.0, &omega).at(l)?;
    Ok(vec![
        exact("Ψ(30,5) = 18", psi == 18, format!("got {psi}")),
        exact("Φ(30,5) = 8", phi == 8, format!("got {phi}")),
        exact("τ(12,2) = 3", tau == 3, format!("got {tau}")),
        exact(
            "mean distribution (4, 2, 0.5) = 19/24",
            mean_err <= 1e-15,
            format!("err {mean_err:.1e}"),
        ),
        exact(
            "Σ Φ(x/a, y) = x at (10^4, 30)",
            total == 10_000,
            format!("got {total}"),
        ),
        report(
            "Ψ(10^6, 100) / (x ρ(3))",
            format!(
                "{ratio:.6}, {} band (0.8, 1.25)",
                if ratio > 0.8 && ratio < 1.25 {
                    "inside"
                } else {
                    "outside"
                }
            ),
        ),
        report(
            "Φ(10^6, 100) vs x ω(u)/log y - y/log y",
            format!(
                "count {phi_big}, main term {main:.1}, rel dev {:.3e}",
                phi_big as f64 / main - 1.0
            ),
        ),
    ])
}

fn asymptotic(s: &Settings) -> Outcomes {
    let l = "asymptotic";
    let ctx = LawContext::new(default_u_max(10.0), s.h).at(l)?;
    let rho_two = build_rho_k(2.0, 10.0, s.h).at(l)?;
    let grid = v_grid(21);
    let mut ratios = Vec::new();
    let mut direct = Vec::new();
    for u in 4..=10 {
        let u = u as f64;
        let rows: Result<Vec<(f64, f64)>, Error> = grid
            .par_iter()
            .map(|&v| {
                let p = LawParams::new(u, v)?;
                let gap = ctx.asymptotic_gap(p)?;
                let diff = ctx.f_quad(p)? - ctx.f_asymptotic(p)?;
                Ok((gap.abs(), diff.abs()))
            })
            .collect();
        let rows = rows.at(l)?;
        let r2 = rho_two.eval(u).at(l)?;
        ratios.push(rows.iter().map(|r| r.0).fold(0.0, f64::max) / r2);
        direct.push(rows.iter().map(|r| r.1).fold(0.0, f64::max) / r2);
    }
    let finite = direct.iter().all(|r| r.is_finite());
    let steady = direct.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    let list = |xs: &[f64]| {
        xs.iter()
            .map(|r| format!("{r:.2e}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    Ok(vec![
        exact(
            "sup_v |F_quad - F_asymptotic| / ρ_2(u), u = 4..10",
            finite && steady,
            format!("ratios [{}]", list(&direct)),
        ),
        report(
            "same ratio with the difference integrated directly",
            format!("ratios [{}]", list(&ratios)),
        ),
    ])
}

fn empirical(s: &Settings) -> Outcomes {
    let l = "empirical";
    let ctx = LawContext::new(14.0, s.h).at(l)?;
    let sieve = SpfSieve::new(1_000_000).at(l)?;
    let grid = v_grid(21);
    let law: Result<Vec<f64>, Error> = grid
        .par_iter()
        .map(|&v| ctx.f_quad(LawParams::new(1.5, v)?))
        .collect();
    let law = law.at(l)?;
    let arc: Vec<f64> = grid.iter().map(|&v| f_arcsine(v)).collect();
    let mut d15 = Vec::new();
    let mut d1 = Vec::new();
    for e in 3..=6 {
        let x = 10u64.pow(e);
        let sup = |y: f64, target: &[f64]| -> Result<f64, (String, Error)> {
            let cdf = parallel_mean_distribution(x, y, &grid, &sieve).at(l)?;
            Ok(cdf
                .values
                .iter()
                .zip(target)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max))
        };
        d15.push(sup((x as f64).powf(2.0 / 3.0), &law)?);
        d1.push(sup(x as f64, &arc)?);
    }
    let list = |xs: &[f64]| {
        xs.iter()
            .map(|r| format!("{r:.4e}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let strict = |xs: &[f64]| xs.windows(2).all(|w| w[1] < w[0]);
    Ok(vec![
        exact(
            "u = 1.5 sup distance decreasing, x = 10^3..10^6",
            strict(&d15),
            format!("[{}]", list(&d15)),
        ),
        exact(
            "u = 1 sup distance to arcsine decreasing, x = 10^3..10^6",
            strict(&d1),
            format!("[{}]", list(&d1)),
        ),
    ])
}

/// Runs the selected checks, all of them when `only` is empty.
pub fn run_selected(settings: &Settings, only: &[String]) -> Result<Vec<CheckResult>, String> {
    let selected: Vec<&Check> = if only.is_empty() {
        CHECKS.iter().collect()
    } else {
        only.iter()
            .map(|k| {
                find(k).ok_or_else(|| {
                    let keys: Vec<&str> = CHECKS.iter().map(|c| c.key).collect();
                    format!("unknown check `{k}`; available: {}", keys.join(", "))
                })
            })
            .collect::<Result<_, _>>()?
    };
    Ok(selected.iter().map(|c| c.run(settings)).collect())
}
