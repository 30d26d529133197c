use alloc::vec;
use alloc::vec::Vec;

use crate::math::{self, CompensatedSum};
use crate::quadrature::{fixed_rule, GL3_NODES, GL3_WEIGHTS, GL6_NODES, GL6_WEIGHTS};
use crate::{Error, Result};

/// Slack allowed past the last node before a request counts as out of grid.
const EDGE_SLACK: f64 = 1e-12;

/// Which function a grid holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// Dickman's `rho`.
    Rho,
    /// Fractional convolution power `rho_k`, `k > 0`.
    RhoK(f64),
    /// Buchstab's `omega`.
    Omega,
    /// Arbitrary samples with no analytic head.
    Derived,
}

/// Closed-form rule on the head segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Head {
    /// `1` on `[0, 1]`.
    One,
    /// `w^(k-1) / Gamma(k)` on `(0, 1]`.
    Power {
        k: f64,
        inv_gamma: f64,
    },
    /// `1 / v` on `[1, 2]`.
    Reciprocal,
    /// `1 / v - shift` on `[1, 2]`.
    ShiftedReciprocal {
        shift: f64,
    },
    Empty,
}

impl Head {
    fn value(self, w: f64) -> f64 {
        match self {
            Head::One => 1.0,
            Head::Power { k, inv_gamma } => {
                if k == 1.0 {
                    inv_gamma
                } else {
                    math::powf(w, k - 1.0) * inv_gamma
                }
            }
            Head::Reciprocal => 1.0 / w,
            Head::ShiftedReciprocal { shift } => 1.0 / w - shift,
            Head::Empty => 0.0,
        }
    }

    /// Integral from the left end of the support up to `w`.
    fn primitive(self, w: f64) -> f64 {
        match self {
            Head::One => w,
            Head::Power { k, inv_gamma } => math::powf(w, k) * inv_gamma / k,
            Head::Reciprocal => math::ln(w),
            Head::ShiftedReciprocal { shift } => math::ln(w) - shift * w,
            Head::Empty => 0.0,
        }
    }
}

/// A special function tabulated on a uniform grid, with an analytic head.
///
/// Nodes sit at `grid_start + i * h`. Integers are always nodes: the
/// functions stored here lose smoothness only at integer abscissae, so the
/// interpolation stencils never straddle one. For non-integer `k`, `rho_k`
/// carries `(w - m)^{1/2}`-type terms right after each integer `m`; those
/// grids interpolate in `sqrt(w - m)` instead of `w`.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub(crate) kind: Kind,
    pub(crate) head: Head,
    pub(crate) support_start: f64,
    /// `true` when the support excludes its left end (`rho_k(0) = 0`).
    pub(crate) open_support: bool,
    pub(crate) head_end: f64,
    pub(crate) grid_start: f64,
    pub(crate) grid_end: f64,
    pub(crate) steps: usize,
    pub(crate) segment_cells: usize,
    pub(crate) sqrt_nodes: bool,
    pub(crate) head_index: usize,
    pub(crate) values: Vec<f64>,
    /// `prefix[i]` is the integral from `head_end` to node `head_index + i`.
    pub(crate) prefix: Vec<f64>,
    /// `suffix[i]` is the integral from node `head_index + i` to `grid_end`.
    pub(crate) suffix: Vec<f64>,
    pub(crate) head_mass: f64,
}

/// Validates `h` and returns the number of cells per unit length.
pub(crate) fn steps_per_unit(h: f64) -> Result<usize> {
    if !(h > 0.0 && h <= 0.01) {
        return Err(Error::GridAlignment { h });
    }
    let inv = 1.0 / h;
    let n = math::round(inv);
    if math::abs(inv - n) > 1e-9 * n {
        return Err(Error::GridAlignment { h });
    }
    Ok(n as usize)
}

impl GridFunction {
    /// Samples `f` at the nodes of `[start, end]` with step `h`.
    ///
    /// The result has kind [`Kind::Derived`]: no head, plain cubic
    /// interpolation across the whole range, zero below `start`.
    pub fn tabulate<F: FnMut(f64) -> f64>(start: f64, end: f64, h: f64, mut f: F) -> Result<Self> {
        let steps = steps_per_unit(h)?;
        let cells = math::round((end - start) * steps as f64);
        if !(cells >= 3.0) || math::abs(cells / steps as f64 - (end - start)) > 1e-9 {
            return Err(Error::Domain {
                what: "tabulation range must span at least three aligned steps",
                value: end - start,
            });
        }
        let cells = cells as usize;
        let values = (0..=cells)
            .map(|i| f(start + i as f64 / steps as f64))
            .collect();
        let mut gf = GridFunction {
            kind: Kind::Derived,
            head: Head::Empty,
            support_start: start,
            open_support: false,
            head_end: start,
            grid_start: start,
            grid_end: start + cells as f64 / steps as f64,
            steps,
            segment_cells: cells,
            sqrt_nodes: false,
            head_index: 0,
            values,
            prefix: Vec::new(),
            suffix: Vec::new(),
            head_mass: 0.0,
        };
        gf.finish();
        Ok(gf)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn with_head(
        kind: Kind,
        head: Head,
        support_start: f64,
        open_support: bool,
        head_end: f64,
        grid_start: f64,
        grid_end: f64,
        steps: usize,
        sqrt_nodes: bool,
    ) -> Self {
        let head_index = math::round((head_end - grid_start) * steps as f64) as usize;
        let segments = math::round(grid_end - head_end) as usize;
        let count = head_index + segments * steps + 1;
        let mut values = vec![0.0; count];
        for (i, slot) in values.iter_mut().enumerate().take(head_index + 1) {
            *slot = head.value(grid_start + i as f64 / steps as f64);
        }
        let head_mass = head.primitive(head_end) - head.primitive(support_start);
        GridFunction {
            kind,
            head,
            support_start,
            open_support,
            head_end,
            grid_start,
            grid_end,
            steps,
            segment_cells: steps,
            sqrt_nodes,
            head_index,
            values,
            prefix: Vec::new(),
            suffix: Vec::new(),
            head_mass,
        }
    }

    /// Builds the prefix and suffix integral tables once all node values
    /// are final.
    pub(crate) fn finish(&mut self) {
        let cells = self.values.len() - 1 - self.head_index;
        let pieces: Vec<f64> = (0..cells)
            .map(|cell| {
                let a = self.node(self.head_index + cell);
                let b = self.node(self.head_index + cell + 1);
                self.cell_integral(a, b)
            })
            .collect();
        let mut prefix = Vec::with_capacity(cells + 1);
        let mut acc = CompensatedSum::default();
        prefix.push(0.0);
        for &q in &pieces {
            acc.add(q);
            prefix.push(acc.value());
        }
        let mut suffix = vec![0.0; cells + 1];
        let mut acc = CompensatedSum::default();
        for (i, &q) in pieces.iter().enumerate().rev() {
            acc.add(q);
            suffix[i] = acc.value();
        }
        self.prefix = prefix;
        self.suffix = suffix;
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn h(&self) -> f64 {
        1.0 / self.steps as f64
    }

    pub fn head_end(&self) -> f64 {
        self.head_end
    }

    pub fn grid_start(&self) -> f64 {
        self.grid_start
    }

    pub fn grid_end(&self) -> f64 {
        self.grid_end
    }

    /// Left end of the support; the function is zero below it.
    pub fn support_start(&self) -> f64 {
        self.support_start
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    /// Abscissa of node `i`.
    pub fn node(&self, i: usize) -> f64 {
        self.grid_start + i as f64 / self.steps as f64
    }

    /// Closed-form value when `w` lies on the head segment.
    pub fn head_value(&self, w: f64) -> Option<f64> {
        if self.head == Head::Empty || !self.in_support(w) || w > self.head_end {
            return None;
        }
        Some(self.head.value(w))
    }

    /// `k` when the function is `w^(k-1) / Gamma(k)` just right of `0`.
    pub(crate) fn origin_power(&self) -> Option<f64> {
        if self.support_start != 0.0 {
            return None;
        }
        match self.head {
            Head::One => Some(1.0),
            Head::Power { k, .. } => Some(k),
            _ => None,
        }
    }

    fn in_support(&self, w: f64) -> bool {
        if self.open_support {
            w > self.support_start
        } else {
            w >= self.support_start
        }
    }

    pub(crate) fn ensure_covers(&self, w: f64) -> Result<()> {
        if w > self.grid_end + EDGE_SLACK {
            return Err(Error::OutOfGrid {
                requested: w,
                grid_end: self.grid_end,
            });
        }
        Ok(())
    }

    /// Value at `w`: zero below the support, the closed form on the head,
    /// cubic interpolation on the grid. Fails only beyond the grid end.
    pub fn eval(&self, w: f64) -> Result<f64> {
        self.ensure_covers(w)?;
        Ok(self.value(w))
    }

    /// [`eval`](Self::eval) without the range check; arguments past the grid
    /// end are clamped to it.
    pub(crate) fn value(&self, w: f64) -> f64 {
        if !self.in_support(w) {
            return 0.0;
        }
        if w <= self.head_end && self.head != Head::Empty {
            return self.head.value(w);
        }
        self.interpolate(w.min(self.grid_end))
    }

    /// Stencil length: cubic in `w`, quintic in `sqrt(w - m)`.
    fn stencil(&self) -> usize {
        if self.sqrt_nodes {
            6
        } else {
            4
        }
    }

    /// Locates the cell holding `w`: `(segment, first stencil node, local cell)`.
    fn locate(&self, w: f64) -> (usize, usize, usize) {
        let cells = self.values.len() - 1 - self.head_index;
        let pos = (w - self.head_end) * self.steps as f64;
        let cell = if pos <= 0.0 {
            0
        } else {
            (math::floor(pos) as usize).min(cells - 1)
        };
        let n = self.segment_cells;
        let len = self.stencil();
        let seg = cell / n;
        let local = cell - seg * n;
        let first = local.saturating_sub(len / 2 - 1).min(n + 1 - len);
        (seg, first, local)
    }

    fn interpolate(&self, w: f64) -> f64 {
        let (seg, first, local) = self.locate(w);
        let n = self.segment_cells;
        let len = self.stencil();
        let base = self.head_index + seg * n + first;
        let y = &self.values[base..base + len];
        let seg_start = self.head_end + (seg * n) as f64 / self.steps as f64;
        let mut x = [0.0; 6];
        let t;
        if self.sqrt_nodes {
            for (j, xj) in x.iter_mut().enumerate().take(len) {
                *xj = math::sqrt((first + j) as f64 / self.steps as f64);
            }
            t = math::sqrt((w - seg_start).max(0.0));
        } else {
            for (j, xj) in x.iter_mut().enumerate().take(len) {
                *xj = (first + j) as f64;
            }
            t = (w - seg_start) * self.steps as f64;
        }
        let p = lagrange(&x[..len], y, t);
        clamp_monotone(p, y, local - first)
    }

    /// Exact integral of the interpolant between two points of one cell.
    fn cell_integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        if self.sqrt_nodes {
            let (seg, _, _) = self.locate(0.5 * (a + b));
            let seg_start = self.head_end + (seg * self.segment_cells) as f64 / self.steps as f64;
            let sa = math::sqrt((a - seg_start).max(0.0));
            let sb = math::sqrt((b - seg_start).max(0.0));
            fixed_rule(
                |s| 2.0 * s * self.interpolate(seg_start + s * s),
                sa,
                sb,
                &GL6_NODES,
                &GL6_WEIGHTS,
            )
        } else {
            fixed_rule(|x| self.interpolate(x), a, b, &GL3_NODES, &GL3_WEIGHTS)
        }
    }

    /// Integral from the left end of the support up to `w`.
    fn primitive(&self, w: f64) -> f64 {
        if w <= self.support_start {
            return 0.0;
        }
        if w <= self.head_end {
            return self.head.primitive(w) - self.head.primitive(self.support_start);
        }
        let w = w.min(self.grid_end);
        let pos = (w - self.head_end) * self.steps as f64;
        let cells = self.prefix.len() - 1;
        let cell = (math::floor(pos) as usize).min(cells - 1);
        let left = self.node(self.head_index + cell);
        self.head_mass + self.prefix[cell] + self.cell_integral(left, w)
    }

    /// Integral from `w >= head_end` to the grid end, summed from the right
    /// so that small tails keep their relative accuracy.
    fn tail(&self, w: f64) -> f64 {
        let w = w.min(self.grid_end);
        let cells = self.suffix.len() - 1;
        let pos = (w - self.head_end) * self.steps as f64;
        let cell = (math::floor(pos.max(0.0)) as usize).min(cells - 1);
        let right = self.node(self.head_index + cell + 1);
        self.suffix[cell + 1] + self.cell_integral(w, right)
    }

    /// Integral over `[a, b]`. Head segments are integrated in closed form
    /// (including the `w^{-1/2}` head of `rho_{1/2}`), grid segments exactly
    /// on the interpolant.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        if !(a <= b) {
            return Err(Error::Domain {
                what: "integration bounds must satisfy a <= b",
                value: a - b,
            });
        }
        self.ensure_covers(b)?;
        if a == b {
            return Ok(0.0);
        }
        if a >= self.head_end && self.suffix.len() > 1 {
            return Ok(self.tail(a) - self.tail(b));
        }
        Ok(self.primitive(b) - self.primitive(a))
    }
}

fn lagrange(x: &[f64], y: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        let mut li = 1.0;
        for j in 0..x.len() {
            if i != j {
                li *= (t - x[j]) / (x[i] - x[j]);
            }
        }
        acc += li * y[i];
    }
    acc
}

/// Keeps the interpolant inside its bracketing nodes when the stencil data
/// are monotone.
fn clamp_monotone(p: f64, y: &[f64], bracket: usize) -> f64 {
    let increasing = y.windows(2).all(|w| w[0] <= w[1]);
    let decreasing = y.windows(2).all(|w| w[0] >= w[1]);
    if !(increasing || decreasing) {
        return p;
    }
    let (a, b) = (y[bracket], y[bracket + 1]);
    p.max(a.min(b)).min(a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_validation() {
        assert_eq!(steps_per_unit(1e-3).unwrap(), 1000);
        assert_eq!(steps_per_unit(5e-4).unwrap(), 2000);
        assert_eq!(steps_per_unit(0.01).unwrap(), 100);
        assert!(steps_per_unit(0.003).is_err());
        assert!(steps_per_unit(0.02).is_err());
        assert!(steps_per_unit(0.0).is_err());
        assert!(steps_per_unit(-1e-3).is_err());
        assert!(steps_per_unit(f64::NAN).is_err());
    }

    #[test]
    fn tabulated_cubic_is_reproduced() {
        let p = |x: f64| 0.5 * x * x * x - x + 2.0;
        let gf = GridFunction::tabulate(0.0, 2.0, 0.01, p).unwrap();
        assert_eq!(gf.kind(), Kind::Derived);
        assert_eq!(gf.node_count(), 201);
        for &x in &[0.0, 0.013, 0.5, 1.234_567, 1.999, 2.0] {
            assert!((gf.eval(x).unwrap() - p(x)).abs() < 1e-12, "{x}");
        }
        // antiderivative x^4/8 - x^2/2 + 2x
        let exact = |x: f64| x.powi(4) / 8.0 - x * x / 2.0 + 2.0 * x;
        let v = gf.integrate(0.25, 1.75).unwrap();
        assert!((v - (exact(1.75) - exact(0.25))).abs() < 1e-12);
        assert_eq!(gf.eval(-0.5).unwrap(), 0.0);
        assert!(gf.eval(2.5).is_err());
    }

    #[test]
    fn monotone_clamp_only_acts_on_monotone_stencils() {
        assert_eq!(clamp_monotone(5.0, &[1.0, 2.0, 3.0, 4.0], 1), 3.0);
        assert_eq!(clamp_monotone(0.5, &[4.0, 3.0, 2.0, 1.0], 2), 1.0);
        assert_eq!(clamp_monotone(5.0, &[1.0, 3.0, 2.0, 4.0], 1), 5.0);
    }
}
