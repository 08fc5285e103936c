//! `rk`: analyse Runge–Kutta tableaux and run invariant-drift experiments.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use psrk::analysis::{MethodAnalysis, DEFAULT_Q_MAX};
use psrk::tableau::{family_tableau, zeta};
use psrk_harness::output::{self, fmt17};
use psrk_harness::report::{self, check_q_max, describe, render_table1};
use psrk_harness::{drift_experiment, drift_speed_slope, format_tableau, resolve_method, HarnessError, Problem};

#[derive(Parser)]
#[command(name = "rk", version, about = "Runge-Kutta tableau analysis and drift experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orders, error coefficients and structural flags of one method
    Analyze {
        /// Catalog id (rk4, gl4, eq2, eq3, pointR) or tableau file
        #[arg(long)]
        method: String,
        /// Largest |t1| + |t2| checked for pseudo-symplecticity
        #[arg(long, default_value_t = DEFAULT_Q_MAX)]
        qmax: usize,
        /// Print a CSV header and row instead of text
        #[arg(long)]
        csv: bool,
    },
    /// Comparison table over the built-in and supplied methods
    Table1 {
        /// Directory holding external tableaux as <ID>.tab
        #[arg(long)]
        methods_dir: Option<PathBuf>,
        /// Also write the available rows as CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant deviations along one long trajectory
    Drift {
        #[arg(long)]
        problem: Problem,
        #[arg(long)]
        method: String,
        /// Step per stage; the step is s*h1
        #[arg(long)]
        h1: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long)]
        sample_dt: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Drift speed against h1 and its log-log slope
    Slope {
        #[arg(long)]
        problem: Problem,
        #[arg(long)]
        method: String,
        /// Comma-separated step-per-stage values
        #[arg(long, value_delimiter = ',', required = true)]
        h1: Vec<f64>,
        #[arg(long)]
        t_end: f64,
        /// Moving-average window; defaults to t_end/10
        #[arg(long)]
        window: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the zeta polynomial
    Zeta {
        #[arg(long, allow_negative_numbers = true)]
        c2: f64,
        #[arg(long, allow_negative_numbers = true)]
        c3: f64,
    },
    /// Print a member of the one-parameter family as a tableau file
    Family {
        #[arg(long, allow_negative_numbers = true)]
        psi: f64,
    },
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let io_err = |source| HarnessError::Io {
        path: "<stdout>".into(),
        source,
    };
    match cli.command {
        Command::Analyze { method, qmax, csv } => {
            let qmax = check_q_max(qmax)?;
            let tab = resolve_method(&method)?;
            let analysis = MethodAnalysis::with_q_max(&tab, qmax);
            if csv {
                let row = report::Table1Row {
                    id: tab.name().into(),
                    analysis: Some(analysis),
                    source: None,
                };
                output::write_table1(&[row], out)?;
            } else {
                write!(out, "{}", describe(&analysis)).map_err(io_err)?;
            }
        }
        Command::Table1 { methods_dir, out: csv } => {
            let rows = report::table1_report(methods_dir.as_deref())?;
            write!(out, "{}", render_table1(&rows)).map_err(io_err)?;
            if let Some(path) = csv {
                output::to_file(&path, |f| output::write_table1(&rows, f))?;
            }
        }
        Command::Drift {
            problem,
            method,
            h1,
            t_end,
            sample_dt,
            out: path,
        } => {
            let tab = resolve_method(&method)?;
            let series = drift_experiment(problem, &tab, h1, t_end, sample_dt)?;
            output::to_file(&path, |f| output::write_series(&series, f))?;
            writeln!(
                out,
                "{} on {problem}: h = {}, {} steps, {} rhs evaluations, max |deviation| = {:e}",
                series.method,
                series.h,
                series.steps,
                series.rhs_evaluations,
                series.max_abs_deviation()
            )
            .map_err(io_err)?;
        }
        Command::Slope {
            problem,
            method,
            h1,
            t_end,
            window,
            out: path,
        } => {
            let tab = resolve_method(&method)?;
            let fit = drift_speed_slope(problem, &tab, &h1, t_end, window)?;
            writeln!(out, "{:>12} {:>12} {:>24} {:>12}", "h1", "h", "speed", "floor").map_err(io_err)?;
            for p in &fit.points {
                writeln!(out, "{:>12.6e} {:>12.6e} {:>24} {:>12}", p.h1, p.h, fmt17(p.speed), p.floor)
                    .map_err(io_err)?;
            }
            writeln!(out, "{}", fit.estimate).map_err(io_err)?;
            if let Some(path) = path {
                output::to_file(&path, |f| output::write_fit(&fit, f))?;
            }
        }
        Command::Zeta { c2, c3 } => {
            writeln!(out, "{}", fmt17(zeta(c2, c3))).map_err(io_err)?;
        }
        Command::Family { psi } => {
            let tab = family_tableau(psi)?;
            write!(out, "{}", format_tableau(&tab)).map_err(io_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
