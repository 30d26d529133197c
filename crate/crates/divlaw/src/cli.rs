use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "divlaw",
    version,
    about = "Limit law of y-smooth divisors: special functions, F(u, v), exact ground truth"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Rho,
    RhoHalf,
    RhoTwo,
    /// `rho_k` for the `--k` given.
    RhoK,
    Omega,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Grid step; 1/h must be an integer.
    #[arg(long, default_value_t = crate::config::DEFAULT_H)]
    pub h: f64,
    /// Grid end; defaults to max(u, 12) + 40.
    #[arg(long)]
    pub u_max: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate rho, rho_{1/2}, rho_2, rho_k or omega.
    Special {
        #[arg(long, value_enum)]
        function: Function,
        #[arg(long)]
        k: Option<f64>,
        /// Abscissae as start:stop:step.
        #[arg(long)]
        w_grid: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// F(u, v) by quadrature, with the closed form when 1 < u <= 2.
    Law {
        #[arg(long)]
        u: f64,
        /// v values as start:stop:step inside [0, 1].
        #[arg(long)]
        v_grid: String,
        /// Add the large-u main term column.
        #[arg(long)]
        asymptotic: bool,
        /// Flag rows whose F_quad and F_closed differ by more than this.
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Closed form for 1 < u <= 2 next to the numerically reduced one.
    Closed {
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean distribution over n <= x against F_quad.
    Empirical {
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Law table joined with the mean distribution.
    Compare {
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long)]
        asymptotic: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the numerical checks and print PASS/FAIL lines.
    Verify {
        /// Run only the named check; repeatable.
        #[arg(long)]
        only: Vec<String>,
        /// Replace every check's tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = crate::config::DEFAULT_H)]
        h: f64,
        /// List the available checks and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub x: u64,
    /// Smoothness bound; wins over --u.
    #[arg(long)]
    pub y: Option<f64>,
    /// Sets y = x^{1/u} when --y is absent.
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub v_grid: String,
}
