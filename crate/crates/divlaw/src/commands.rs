use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use divlaw_core::arithmetic::{SpfSieve, SIEVE_GUARD};
use divlaw_core::limit_law::{
    f_closed, f_semi_closed, law_row, validate_v_grid, Column, LawContext, LawParams, LawRow,
    PieceId, TableCell, TableOptions,
};
use divlaw_core::quadrature::QuadratureConfig;
use divlaw_core::special_fn::{build_omega, build_rho, build_rho_k, GridFunction};
use divlaw_core::Error;
use rayon::prelude::*;

use crate::cli::{Cli, Command, Function, GridArgs, ScanArgs};
use crate::config::{default_u_max, parse_range, parse_v_grid, resolve_smoothness};
use crate::output::{fmt_sig, CsvTable};
use crate::scan::parallel_mean_distribution;
use crate::verify::{self, Settings, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parses `args` (program name first) and runs the command. Returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\nRun `divlaw --help` for usage.");
            EXIT_USAGE
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Special {
            function,
            k,
            w_grid,
            grid,
        } => cmd_special(function, k, &w_grid, &grid, stdout),
        Command::Law {
            u,
            v_grid,
            asymptotic,
            tolerance,
            grid,
        } => cmd_law(u, &v_grid, asymptotic, tolerance, &grid, stdout),
        Command::Closed { u, v_grid, out } => cmd_closed(u, &v_grid, out.as_deref(), stdout),
        Command::Empirical { scan, grid } => cmd_empirical(&scan, &grid, stdout),
        Command::Compare {
            scan,
            asymptotic,
            grid,
        } => cmd_compare(&scan, asymptotic, &grid, stdout),
        Command::Verify {
            only,
            tolerance,
            h,
            list,
        } => cmd_verify(&only, tolerance, h, list, stdout),
    }
}

fn emit(table: &CsvTable, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write_to(&mut w)?;
            w.flush()?;
        }
        None => table.write_to(&mut *stdout)?,
    }
    Ok(())
}

fn cell(c: &TableCell) -> String {
    match c {
        TableCell::Value(v) => fmt_sig(*v),
        TableCell::Failed(_) => "failed".into(),
    }
}

fn check_grid_args(grid: &GridArgs, need: f64) -> Result<f64, Failure> {
    let u_max = grid.u_max.unwrap_or_else(|| default_u_max(need));
    if !(u_max >= need) || !u_max.is_finite() {
        return Err(usage(format!("--u-max {u_max} does not cover {need}")));
    }
    Ok(u_max)
}

fn context(grid: &GridArgs, need: f64) -> Result<(LawContext, f64), Failure> {
    let u_max = check_grid_args(grid, need)?;
    let ctx = LawContext::new(u_max, grid.h).map_err(usage)?;
    Ok((ctx, u_max))
}

fn cmd_special(
    function: Function,
    k: Option<f64>,
    w_grid: &str,
    grid: &GridArgs,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let ws = parse_range(w_grid).map_err(usage)?;
    let w_max = ws.iter().copied().fold(1.0, f64::max);
    let u_max = check_grid_args(grid, w_max)?;
    let (g, name): (GridFunction, String) = match function {
        Function::Rho => (build_rho(u_max, grid.h).map_err(usage)?, "rho".into()),
        Function::RhoHalf => (
            build_rho_k(0.5, u_max, grid.h).map_err(usage)?,
            "rho_half".into(),
        ),
        Function::RhoTwo => (
            build_rho_k(2.0, u_max, grid.h).map_err(usage)?,
            "rho_2".into(),
        ),
        Function::RhoK => {
            let k = k.ok_or_else(|| usage("--function rho-k needs --k"))?;
            (
                build_rho_k(k, u_max, grid.h).map_err(usage)?,
                format!("rho_k(k={k})"),
            )
        }
        Function::Omega => (
            build_omega(u_max.max(2.0), grid.h).map_err(usage)?,
            "omega".into(),
        ),
    };
    let mut table = CsvTable::new(&["w", "value"]);
    table.comment(format!(
        "divlaw special function={name} h={} u_max={}",
        grid.h,
        g.grid_end()
    ));
    for &w in &ws {
        let v = g.eval(w).map_err(usage)?;
        table.push(vec![fmt_sig(w), fmt_sig(v)]);
    }
    emit(&table, grid.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn law_rows(ctx: &LawContext, u: f64, v_grid: &[f64], options: &TableOptions) -> Vec<LawRow> {
    v_grid
        .par_iter()
        .enumerate()
        .map(|(i, &v)| law_row(ctx, u, v, options, i))
        .collect()
}

fn law_header(closed: bool, asymptotic: bool) -> Vec<&'static str> {
    let mut header = vec!["u", "v", "F_quad"];
    if closed {
        header.push("F_closed");
    }
    if asymptotic {
        header.push("F_asymptotic");
    }
    header
}

fn law_cells(u: f64, row: &LawRow) -> Vec<String> {
    let mut cells = vec![fmt_sig(u), fmt_sig(row.v), cell(&row.f_quad)];
    cells.extend(row.f_closed.iter().map(cell));
    cells.extend(row.f_asymptotic.iter().map(cell));
    cells
}

fn cmd_law(
    u: f64,
    v_grid: &str,
    asymptotic: bool,
    tolerance: Option<f64>,
    grid: &GridArgs,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    LawParams::new(u, 0.0).map_err(usage)?;
    let vs = parse_v_grid(v_grid).map_err(usage)?;
    let (ctx, u_max) = context(grid, u)?;
    let options = TableOptions {
        asymptotic,
        empirical: None,
    };
    let rows = law_rows(&ctx, u, &vs, &options);
    let closed = u > 1.0 && u <= 2.0;
    let mut table = CsvTable::new(&law_header(closed, asymptotic));
    table.comment(format!("divlaw law u={u} h={} u_max={u_max}", grid.h));
    let mut failures = 0;
    let mut beyond = 0;
    for row in &rows {
        failures += row.has_failure() as usize;
        if let (Some(tol), Some(err)) = (tolerance, row.abs_err(Column::Quad, Column::Closed)) {
            beyond += (err > tol) as usize;
        }
        table.push(law_cells(u, row));
    }
    table.comment(format!("clamp_warnings={}", ctx.clamp_warnings()));
    emit(&table, grid.out.as_deref(), stdout)?;
    if failures > 0 {
        return Err(Failure::Numerical(format!("{failures} row(s) failed")));
    }
    if beyond > 0 {
        return Err(Failure::Numerical(format!(
            "{beyond} row(s) with |F_quad - F_closed| above tolerance"
        )));
    }
    Ok(EXIT_OK)
}

fn cmd_closed(
    u: f64,
    v_grid: &str,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let vs = parse_v_grid(v_grid).map_err(usage)?;
    if !(u > 1.0 && u <= 2.0) {
        return Err(usage(Error::UnsupportedClosedForm { u }));
    }
    let cfg = QuadratureConfig::default();
    let mut table = CsvTable::new(&["u", "v", "piece", "F_closed", "F_reduced"]);
    table.comment(format!("divlaw closed u={u}"));
    for &v in &vs {
        let p = LawParams::new(u, v).map_err(usage)?;
        let piece = match PieceId::select(u, v) {
            PieceId::P1 => "1",
            PieceId::P2 => "2",
            PieceId::P3 => "3",
        };
        let closed = f_closed(p).map_err(usage)?;
        let reduced = f_semi_closed(p, &cfg).map_err(|e| Failure::Numerical(e.to_string()))?;
        table.push(vec![
            fmt_sig(u),
            fmt_sig(v),
            piece.into(),
            fmt_sig(closed),
            fmt_sig(reduced),
        ]);
    }
    emit(&table, out, stdout)?;
    Ok(EXIT_OK)
}

struct Scan {
    x: u64,
    y: f64,
    u: f64,
    vs: Vec<f64>,
    values: Vec<f64>,
}

fn scan(args: &ScanArgs) -> Result<Scan, Failure> {
    let vs = parse_v_grid(&args.v_grid).map_err(usage)?;
    validate_v_grid(&vs).map_err(usage)?;
    let s = resolve_smoothness(args.x, args.y, args.u).map_err(usage)?;
    if args.x > SIEVE_GUARD {
        return Err(Failure::Numerical(
            Error::SieveTooLarge {
                requested: args.x,
                guard: SIEVE_GUARD,
            }
            .to_string(),
        ));
    }
    let sieve = SpfSieve::new(args.x).map_err(|e| Failure::Numerical(e.to_string()))?;
    let cdf = parallel_mean_distribution(args.x, s.y, &vs, &sieve)
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    Ok(Scan {
        x: args.x,
        y: s.y,
        u: s.u,
        vs,
        values: cdf.values,
    })
}

fn cmd_empirical(args: &ScanArgs, grid: &GridArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let s = scan(args)?;
    let u_law = s.u.max(1.0);
    let (ctx, u_max) = context(grid, u_law)?;
    let quad: Vec<TableCell> =
        s.vs.par_iter()
            .map(
                |&v| match LawParams::new(u_law, v).and_then(|p| ctx.f_quad(p)) {
                    Ok(f) => TableCell::Value(f),
                    Err(e) => TableCell::Failed(e),
                },
            )
            .collect();
    let mut table = CsvTable::new(&["x", "y", "u", "v", "empirical", "F_quad", "abs_err"]);
    table.comment(format!(
        "divlaw empirical x={} y={} u={} h={} u_max={u_max}",
        s.x,
        fmt_sig(s.y),
        fmt_sig(s.u),
        grid.h
    ));
    let mut failures = 0;
    for ((&v, &e), q) in s.vs.iter().zip(&s.values).zip(&quad) {
        let err = q
            .value()
            .map(|q| fmt_sig((e - q).abs()))
            .unwrap_or_else(|| "failed".into());
        failures += q.value().is_none() as usize;
        table.push(vec![
            s.x.to_string(),
            fmt_sig(s.y),
            fmt_sig(s.u),
            fmt_sig(v),
            fmt_sig(e),
            cell(q),
            err,
        ]);
    }
    emit(&table, grid.out.as_deref(), stdout)?;
    if failures > 0 {
        return Err(Failure::Numerical(format!("{failures} row(s) failed")));
    }
    Ok(EXIT_OK)
}

fn cmd_compare(
    args: &ScanArgs,
    asymptotic: bool,
    grid: &GridArgs,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let s = scan(args)?;
    let u_law = s.u.max(1.0);
    let (ctx, u_max) = context(grid, u_law)?;
    let options = TableOptions {
        asymptotic,
        empirical: Some(s.values.clone()),
    };
    let rows = law_rows(&ctx, u_law, &s.vs, &options);
    let closed = u_law > 1.0 && u_law <= 2.0;
    let mut header = law_header(closed, asymptotic);
    header.extend(["empirical", "abs_err"]);
    let mut table = CsvTable::new(&header);
    table.comment(format!(
        "divlaw compare x={} y={} u={} h={} u_max={u_max}",
        s.x,
        fmt_sig(s.y),
        fmt_sig(s.u),
        grid.h
    ));
    let mut failures = 0;
    for row in &rows {
        failures += row.has_failure() as usize;
        let mut cells = law_cells(u_law, row);
        cells.push(fmt_sig(row.empirical.unwrap_or(f64::NAN)));
        cells.push(
            row.abs_err(Column::Quad, Column::Empirical)
                .map(fmt_sig)
                .unwrap_or_else(|| "failed".into()),
        );
        table.push(cells);
    }
    emit(&table, grid.out.as_deref(), stdout)?;
    if failures > 0 {
        return Err(Failure::Numerical(format!("{failures} row(s) failed")));
    }
    Ok(EXIT_OK)
}

fn cmd_verify(
    only: &[String],
    tolerance: Option<f64>,
    h: f64,
    list: bool,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    if list {
        for c in &verify::CHECKS {
            writeln!(stdout, "{}", c.key)?;
        }
        return Ok(EXIT_OK);
    }
    if let Some(t) = tolerance {
        if !(t > 0.0) {
            return Err(usage(format!("--tolerance must be positive (got {t})")));
        }
    }
    let settings = Settings { h, tolerance };
    let results = verify::run_selected(&settings, only).map_err(usage)?;
    let mut failed = 0;
    for r in &results {
        for o in &r.outcomes {
            writeln!(stdout, "{o}")?;
            failed += (o.status == Status::Fail) as usize;
        }
    }
    writeln!(stdout, "{} check(s), {failed} failure(s)", results.len())?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_NUMERICAL })
}
