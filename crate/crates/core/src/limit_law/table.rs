use alloc::vec::Vec;

use crate::math::abs;
use crate::{Error, Result};

use super::{f_closed, LawContext, LawParams};

/// Checks that a `v`-grid is strictly increasing inside `[0, 1]`.
pub fn validate_v_grid(v_grid: &[f64]) -> Result<()> {
    for &v in v_grid {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidGrid {
                reason: "v values must lie in [0, 1]",
            });
        }
    }
    if v_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid {
            reason: "v values must be strictly increasing",
        });
    }
    Ok(())
}

/// A computed value, or the error that stopped it.
#[derive(Debug, Clone, PartialEq)]
pub enum TableCell {
    Value(f64),
    Failed(Error),
}

impl TableCell {
    pub fn value(&self) -> Option<f64> {
        match self {
            TableCell::Value(v) => Some(*v),
            TableCell::Failed(_) => None,
        }
    }

    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => TableCell::Value(v),
            Err(e) => TableCell::Failed(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Quad,
    Closed,
    Asymptotic,
    Empirical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawRow {
    pub v: f64,
    pub f_quad: TableCell,
    pub f_closed: Option<TableCell>,
    pub f_asymptotic: Option<TableCell>,
    pub empirical: Option<f64>,
}

impl LawRow {
    pub fn get(&self, col: Column) -> Option<f64> {
        match col {
            Column::Quad => self.f_quad.value(),
            Column::Closed => self.f_closed.as_ref().and_then(TableCell::value),
            Column::Asymptotic => self.f_asymptotic.as_ref().and_then(TableCell::value),
            Column::Empirical => self.empirical,
        }
    }

    /// `|a - b|` when both cells hold values.
    pub fn abs_err(&self, a: Column, b: Column) -> Option<f64> {
        Some(abs(self.get(a)? - self.get(b)?))
    }

    pub fn has_failure(&self) -> bool {
        let failed = |c: &TableCell| matches!(c, TableCell::Failed(_));
        failed(&self.f_quad)
            || self.f_closed.as_ref().is_some_and(failed)
            || self.f_asymptotic.as_ref().is_some_and(failed)
    }
}

#[derive(Debug, Clone, Default)]
pub struct TableOptions {
    pub asymptotic: bool,
    /// Empirical values aligned with the `v`-grid.
    pub empirical: Option<Vec<f64>>,
}

/// Values of `F(u, .)` on a `v`-grid from the available methods.
#[derive(Debug, Clone, PartialEq)]
pub struct LawTable {
    pub u: f64,
    pub has_closed: bool,
    pub has_asymptotic: bool,
    pub has_empirical: bool,
    pub rows: Vec<LawRow>,
}

impl LawTable {
    /// Largest `|a - b|` over rows where both are present.
    pub fn max_abs_err(&self, a: Column, b: Column) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.abs_err(a, b))
            .fold(None, |m, e| Some(m.map_or(e, |m: f64| m.max(e))))
    }

    pub fn has_failure(&self) -> bool {
        self.rows.iter().any(LawRow::has_failure)
    }
}

/// One table row. Exposed so callers can fill rows in parallel.
pub fn law_row(ctx: &LawContext, u: f64, v: f64, options: &TableOptions, index: usize) -> LawRow {
    let params = LawParams::new(u, v);
    let cell =
        |f: &dyn Fn(LawParams) -> Result<f64>| TableCell::from_result(params.clone().and_then(f));
    let closed = u > 1.0 && u <= 2.0;
    LawRow {
        v,
        f_quad: cell(&|p| ctx.f_quad(p)),
        f_closed: closed.then(|| cell(&f_closed)),
        f_asymptotic: options.asymptotic.then(|| cell(&|p| ctx.f_asymptotic(p))),
        empirical: options.empirical.as_ref().map(|e| e[index]),
    }
}

/// Fills `F_quad` for every `v`, `F_closed` when `1 < u <= 2`, and the
/// optional columns. Failed cells are recorded in place.
pub fn make_law_table(
    ctx: &LawContext,
    u: f64,
    v_grid: &[f64],
    options: &TableOptions,
) -> Result<LawTable> {
    validate_v_grid(v_grid)?;
    if let Some(e) = &options.empirical {
        if e.len() != v_grid.len() {
            return Err(Error::InvalidGrid {
                reason: "empirical column length differs from the v-grid",
            });
        }
    }
    let rows = v_grid
        .iter()
        .enumerate()
        .map(|(i, &v)| law_row(ctx, u, v, options, i))
        .collect();
    Ok(LawTable {
        u,
        has_closed: u > 1.0 && u <= 2.0,
        has_asymptotic: options.asymptotic,
        has_empirical: options.empirical.is_some(),
        rows,
    })
}
