//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::problems::{
    all_problems, error_report, get_problem, Dimensionality, ErrorSummary, GridSpec, NamedProblem,
};
use crate::solver::{solve, Discretization, Node, SolveReport, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Exit status for invalid input.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status when Newton iteration does not converge.
pub const EXIT_NO_CONVERGENCE: i32 = 3;

pub const SUMMARY_HEADER: &str =
    "problem,grid,max_error,two_norm_error,newton_iterations,wall_time_ms";

#[derive(Debug, Parser)]
#[command(
    name = "chebdisk",
    version,
    about = "Spectral collocation solver for interval and disk problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one registered problem on one grid.
    Solve(SolveArgs),
    /// Solve one problem on several grids and write one summary row per grid.
    Table(TableArgs),
    /// List the registered problems.
    List,
}

#[derive(Debug, Clone, Args)]
pub struct SolverOptions {
    /// Disk radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Newton tolerance on the residual infinity norm.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Maximum number of Newton updates.
    #[arg(long = "max-iter", default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Problem identifier (see `list`).
    #[arg(long)]
    pub problem: String,
    /// Number of panels on an interval.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of rings, (N_r + 1) / 2, on the disk.
    #[arg(long = "nr-half")]
    pub nr_half: Option<usize>,
    /// Number of angles on the disk (even).
    #[arg(long)]
    pub ntheta: Option<usize>,
    #[command(flatten)]
    pub options: SolverOptions,
    /// Solution CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary CSV path; printed to stdout when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Also measure the interpolant error on a refined k x k grid.
    #[arg(long = "eval-grid")]
    pub eval_grid: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Problem identifier (see `list`).
    #[arg(long)]
    pub problem: String,
    /// Comma-separated grids, `N` on an interval or `RINGSxANGLES` on the disk.
    #[arg(long, default_value = "")]
    pub grids: String,
    /// Use the grids with reported reference errors instead of `--grids`.
    #[arg(long = "reference-grids")]
    pub reference_grids: bool,
    #[command(flatten)]
    pub options: SolverOptions,
    /// Table CSV path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        Error::InvalidGrid(_)
        | Error::InvalidOrder { .. }
        | Error::OutOfDomain { .. }
        | Error::InvalidRobin(_)
        | Error::DimensionMismatch { .. }
        | Error::UnknownProblem { .. }
        | Error::NoExactSolution(_) => EXIT_VALIDATION,
        _ => 1,
    }
}

/// Parses a grid label for `problem`.
pub fn parse_grid(label: &str, dim: Dimensionality, radius: f64) -> Result<GridSpec> {
    let bad = || Error::InvalidGrid(format!("cannot parse grid `{label}`"));
    let label = label.trim();
    match dim {
        Dimensionality::Line => Ok(GridSpec::Line {
            n: label.parse().map_err(|_| bad())?,
        }),
        Dimensionality::Disk => {
            let (a, b) = label.split_once(['x', 'X']).ok_or_else(bad)?;
            Ok(GridSpec::Disk {
                n_rings: a.trim().parse().map_err(|_| bad())?,
                n_theta: b.trim().parse().map_err(|_| bad())?,
                radius,
            })
        }
    }
}

fn validate_options(o: &SolverOptions) -> Result<()> {
    if o.tol.is_nan() || o.tol <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "tol must be positive, got {}",
            o.tol
        )));
    }
    if !(o.radius > 0.0 && o.radius.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "radius must be positive, got {}",
            o.radius
        )));
    }
    Ok(())
}

fn check_grid(grid: &GridSpec) -> Result<()> {
    match *grid {
        GridSpec::Line { n } if n < 2 => {
            Err(Error::InvalidGrid(format!("n must be at least 2, got {n}")))
        }
        GridSpec::Disk { n_theta, .. } if n_theta % 2 != 0 => Err(Error::InvalidGrid(format!(
            "ntheta must be even, got {n_theta}"
        ))),
        GridSpec::Disk { .. } => grid.disk_grid().map(|_| ()),
        _ => Ok(()),
    }
}

fn solve_grid(problem: &NamedProblem, args: &SolveArgs) -> Result<GridSpec> {
    let grid = match (problem.dimensionality, problem.default_grid) {
        (Dimensionality::Line, GridSpec::Line { n }) => {
            if args.nr_half.is_some() || args.ntheta.is_some() {
                return Err(Error::InvalidGrid(format!(
                    "{} is an interval problem; use --n",
                    problem.id
                )));
            }
            GridSpec::Line {
                n: args.n.unwrap_or(n),
            }
        }
        (
            _,
            GridSpec::Disk {
                n_rings, n_theta, ..
            },
        ) => {
            if args.n.is_some() {
                return Err(Error::InvalidGrid(format!(
                    "{} is a disk problem; use --nr-half and --ntheta",
                    problem.id
                )));
            }
            GridSpec::Disk {
                n_rings: args.nr_half.unwrap_or(n_rings),
                n_theta: args.ntheta.unwrap_or(n_theta),
                radius: args.options.radius,
            }
        }
        (_, g) => g,
    };
    check_grid(&grid)?;
    Ok(grid)
}

/// One solve with its timing and errors.
pub struct RunResult {
    pub grid: GridSpec,
    pub report: SolveReport,
    pub summary: ErrorSummary,
    pub wall_time_ms: f64,
}

/// Builds and solves `problem` on `grid`.
pub fn run_one(
    problem: &NamedProblem,
    grid: GridSpec,
    options: &SolverOptions,
    eval_grid: Option<usize>,
) -> Result<RunResult> {
    let start = Instant::now();
    let def = problem.build(&grid)?;
    let report = solve(&def, options.tol, options.max_iter)?;
    drop(def);
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let summary = error_report(problem, &report, eval_grid)?;
    Ok(RunResult {
        grid,
        report,
        summary,
        wall_time_ms,
    })
}

fn warn_if_ill_conditioned(r: &RunResult) {
    if r.report.is_ill_conditioned() {
        eprintln!(
            "warning: grid {}: system is singular to working precision (rcond {:e}); the solution may carry a null-space component",
            r.grid, r.report.rcond
        );
    }
}

/// Summary row without a trailing newline.
pub fn summary_row(problem: &str, r: &RunResult) -> String {
    format!(
        "{problem},{},{:e},{:e},{},{:.3}",
        r.grid.label(),
        r.summary.max_error,
        r.summary.two_norm_error,
        r.report.newton_iterations,
        r.wall_time_ms
    )
}

/// The solution CSV for a report.
pub fn solution_csv(report: &SolveReport) -> String {
    let mut s = String::new();
    let nodes = report.discretization.nodes();
    match report.discretization {
        Discretization::Line(_) => {
            s.push_str("x,value\n");
            for (node, v) in nodes.iter().zip(&report.full) {
                if let Node::Line { x } = node {
                    let _ = writeln!(s, "{x},{v}");
                }
            }
        }
        Discretization::Disk(_) => {
            s.push_str("r,theta,x,y,value\n");
            for (node, v) in nodes.iter().zip(&report.full) {
                if let Node::Polar { r, theta } = *node {
                    let (x, y) = node.cartesian();
                    let _ = writeln!(s, "{r},{theta},{x},{y},{v}");
                }
            }
        }
    }
    s
}

/// Reads a solution CSV back into `(node, value)` pairs.
pub fn read_solution(path: &Path) -> Result<Vec<(Node, f64)>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Io("empty solution file".into()))?;
    let polar = match header.trim() {
        "x,value" => false,
        "r,theta,x,y,value" => true,
        other => return Err(Error::Io(format!("unrecognized header `{other}`"))),
    };
    lines
        .map(|line| {
            let fields: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|f| f.trim().parse::<f64>()).collect();
            let fields = fields.map_err(|e| Error::Io(format!("bad row `{line}`: {e}")))?;
            match (polar, fields.as_slice()) {
                (false, [x, v]) => Ok((Node::Line { x: *x }, *v)),
                (true, [r, t, _, _, v]) => Ok((Node::Polar { r: *r, theta: *t }, *v)),
                _ => Err(Error::Io(format!("bad row `{line}`"))),
            }
        })
        .collect()
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs `solve`; returns the exit status.
pub fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    validate_options(&args.options)?;
    let problem = get_problem(&args.problem)?;
    let grid = solve_grid(&problem, args)?;
    let result = run_one(&problem, grid, &args.options, args.eval_grid)?;
    if let Some(out) = &args.out {
        fs::write(out, solution_csv(&result.report))?;
    }
    let mut text = String::new();
    if let Some(refined) = result.summary.refined_max_error {
        let _ = writeln!(
            text,
            "# refined_max_error={refined:e} eval_grid={}",
            args.eval_grid.unwrap_or(0)
        );
    }
    let _ = writeln!(text, "{SUMMARY_HEADER}");
    let _ = writeln!(text, "{}", summary_row(problem.id, &result));
    write_text(args.summary.as_deref(), &text)?;
    warn_if_ill_conditioned(&result);
    if !result.report.converged {
        eprintln!(
            "error: {}",
            Error::NoConvergence {
                iterations: result.report.newton_iterations,
                residual: result.report.residual_norm,
            }
        );
        return Ok(EXIT_NO_CONVERGENCE);
    }
    Ok(0)
}

/// Runs `table`; returns the exit status.
pub fn cmd_table(args: &TableArgs) -> Result<i32> {
    validate_options(&args.options)?;
    let problem = get_problem(&args.problem)?;
    let grids: Vec<GridSpec> = if args.reference_grids {
        problem
            .reference_runs
            .iter()
            .map(|r| match r.grid {
                GridSpec::Disk {
                    n_rings, n_theta, ..
                } => GridSpec::Disk {
                    n_rings,
                    n_theta,
                    radius: args.options.radius,
                },
                g => g,
            })
            .collect()
    } else {
        args.grids
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_grid(s, problem.dimensionality, args.options.radius))
            .collect::<Result<_>>()?
    };
    for g in &grids {
        check_grid(g)?;
    }
    let mut text = format!("{SUMMARY_HEADER}\n");
    let mut status = 0;
    for grid in grids {
        let result = run_one(&problem, grid, &args.options, None).map_err(|e| match e {
            Error::Io(m) => Error::Io(format!("grid {grid}: {m}")),
            other => other,
        })?;
        warn_if_ill_conditioned(&result);
        if !result.report.converged {
            eprintln!("warning: grid {grid} did not converge");
            status = EXIT_NO_CONVERGENCE;
        }
        let _ = writeln!(text, "{}", summary_row(problem.id, &result));
    }
    write_text(args.out.as_deref(), &text)?;
    Ok(status)
}

fn cmd_list() -> Result<i32> {
    let mut text = String::new();
    for p in all_problems() {
        let _ = writeln!(text, "{:<22} {}", p.id, p.description);
    }
    write_text(None, &text)?;
    Ok(0)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Table(a) => cmd_table(a),
        Command::List => cmd_list(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_labels_parse() {
        assert_eq!(
            parse_grid("500", Dimensionality::Line, 1.0).unwrap(),
            GridSpec::Line { n: 500 }
        );
        assert_eq!(
            parse_grid(" 11x30", Dimensionality::Disk, 1.0).unwrap(),
            GridSpec::disk(11, 30)
        );
        assert!(parse_grid("11", Dimensionality::Disk, 1.0).is_err());
        assert!(parse_grid("ax", Dimensionality::Line, 1.0).is_err());
    }

    #[test]
    fn validation_errors_map_to_two() {
        assert_eq!(exit_code(&Error::InvalidGrid("x".into())), 2);
        assert_eq!(exit_code(&Error::InvalidRobin("x".into())), 2);
        assert_eq!(
            exit_code(&Error::NoConvergence {
                iterations: 1,
                residual: 1.0
            }),
            3
        );
        assert_eq!(exit_code(&Error::Io("x".into())), 1);
    }

    #[test]
    fn odd_angle_count_is_rejected() {
        assert!(check_grid(&GridSpec::disk(11, 31))
            .unwrap_err()
            .to_string()
            .contains("ntheta must be even"));
    }
}
