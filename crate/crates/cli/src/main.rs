//! `bkm`: run the boundary knot method benchmarks or a problem file.

mod expr;
mod layout;
mod problem;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bkm::bench_cases::{run_case, CaseId, RunOptions};
use bkm::{solve, BkmError};
use clap::{Args, CommandFactory, Parser, Subcommand};

use layout::InteriorArg;
use report::{Format, MarkdownOptions, Row, Run};

#[derive(Parser)]
#[command(
    name = "bkm",
    version,
    about = "Boundary knot method solver and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one benchmark case
    Run {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(CaseId::ALL.map(CaseId::name)))]
        case: String,
        #[command(flatten)]
        opts: RunArgs,
    },
    /// Run every benchmark case
    RunAll {
        #[command(flatten)]
        opts: RunArgs,
    },
    /// List the benchmark cases
    List,
    /// Solve the problem described by a TOML file
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        opts: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Number of boundary knots (at least 3)
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
    boundary_knots: Option<u32>,
    /// Interior knots: none, ring:<scale>:<count> or file:<path>; repeatable
    #[arg(long)]
    interior: Vec<InteriorArg>,
    /// Multiquadric shape parameter
    #[arg(long, value_parser = parse_shape)]
    shape: Option<f64>,
    #[arg(long, value_enum, default_value = "markdown")]
    format: Format,
    /// Also write the output to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print published reference columns and the acceptance verdict
    #[arg(long)]
    compare_paper: bool,
    /// Print the condition estimate of the collocation system
    #[arg(long)]
    show_condition: bool,
}

fn parse_shape(s: &str) -> Result<f64, String> {
    let c: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if c > 0.0 && c.is_finite() {
        Ok(c)
    } else {
        Err(format!("shape parameter must be positive, got {s}"))
    }
}

/// Exit 2 with the usage text on stderr.
fn usage_error(message: impl std::fmt::Display) -> ! {
    eprintln!("error: {message}\n\n{}", Cli::command().render_usage());
    std::process::exit(2)
}

/// The condition estimate implied by a failed solve, for diagnostics.
fn failure_condition(e: &BkmError) -> &'static str {
    match e {
        BkmError::Case { source, .. } => failure_condition(source),
        BkmError::SingularSystem { .. } | BkmError::SingularMatrix { .. } => "inf (zero pivot)",
        _ => "unavailable",
    }
}

fn solver_failure(e: &BkmError) -> ExitCode {
    eprintln!("error: {e}\ncondition estimate: {}", failure_condition(e));
    ExitCode::from(1)
}

impl RunArgs {
    fn run_options(&self) -> RunOptions {
        let interior = layout::combine(&self.interior, Path::new("."))
            .unwrap_or_else(|e| usage_error(format!("--interior: {e}")));
        RunOptions {
            boundary_knots: self.boundary_knots.map(|n| n as usize),
            interior,
            shape: self.shape,
            rbf: None,
        }
    }

    fn emit(&self, runs: &[Run]) -> ExitCode {
        let text = match self.format {
            Format::Markdown => report::markdown(
                runs,
                &MarkdownOptions {
                    compare_paper: self.compare_paper,
                    show_condition: self.show_condition,
                },
            ),
            Format::Csv => report::csv(runs).expect("csv serialisation of plain records"),
            Format::Json => report::json(runs).expect("json serialisation of plain records"),
        };
        let mut stdout = std::io::stdout().lock();
        if let Err(e) = stdout.write_all(text.as_bytes()) {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(1);
        }
        if let Some(path) = &self.out {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        ExitCode::SUCCESS
    }
}

fn run_one(id: CaseId, options: &RunOptions) -> Result<Run, BkmError> {
    let case = id.case();
    let interior = options
        .interior
        .clone()
        .unwrap_or_else(|| case.default_interior.clone());
    let result = run_case(&case, options)?;
    Ok(Run::from_case(&case, &result, interior))
}

fn cmd_list() -> ExitCode {
    for case in bkm::bench_cases::all_cases() {
        println!(
            "{:<18} {:<8} {}",
            case.name(),
            case.reference_table,
            case.description
        );
    }
    ExitCode::SUCCESS
}

fn cmd_run(name: &str, args: &RunArgs) -> ExitCode {
    let id = CaseId::from_name(name).expect("case names are validated by the parser");
    match run_one(id, &args.run_options()) {
        Ok(run) => args.emit(&[run]),
        Err(e) => solver_failure(&e),
    }
}

fn cmd_run_all(args: &RunArgs) -> ExitCode {
    let options = args.run_options();
    let results: Vec<Result<Run, BkmError>> = std::thread::scope(|s| {
        let handles: Vec<_> = CaseId::ALL
            .iter()
            .map(|&id| {
                let options = &options;
                s.spawn(move || run_one(id, options))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("case thread panicked"))
            .collect()
    });
    let mut runs = Vec::new();
    let mut failed = None;
    for r in results {
        match r {
            Ok(run) => runs.push(run),
            Err(e) => {
                eprintln!("error: {e}\ncondition estimate: {}", failure_condition(&e));
                failed = Some(ExitCode::from(1));
            }
        }
    }
    let code = args.emit(&runs);
    failed.unwrap_or(code)
}

fn cmd_solve(path: &Path, args: &RunArgs) -> ExitCode {
    let interior = layout::combine(&args.interior, Path::new("."))
        .unwrap_or_else(|e| usage_error(format!("--interior: {e}")));
    let overrides = problem::Overrides {
        boundary_knots: args.boundary_knots.map(|n| n as usize),
        interior,
        shape: args.shape,
    };
    let p = match problem::load(path, &overrides) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let sol = match solve(&p.spec) {
        Ok(s) => s,
        Err(e) => return solver_failure(&e),
    };
    let mut points = Vec::with_capacity(p.points.len());
    for &pt in &p.points {
        let computed = match sol.evaluate(pt) {
            Ok(v) => v,
            Err(e) => return solver_failure(&e),
        };
        let exact = p.exact.as_ref().map(|e| {
            e.eval(&expr::Env {
                x: pt.x,
                y: pt.y,
                ..Default::default()
            })
        });
        let abs_err = exact.map(|e| (computed - e).abs());
        let rel_err = match (exact, abs_err) {
            (Some(e), Some(a)) if e != 0.0 => Some(a / e.abs()),
            _ => None,
        };
        points.push(Row {
            case: p.name.clone(),
            x: pt.x,
            y: pt.y,
            computed,
            exact,
            abs_err,
            rel_err,
            paper_bkm: None,
            paper_competitor: None,
        });
    }
    let run = Run {
        case: p.name.clone(),
        reference_table: None,
        competitor_label: None,
        relative_reference: false,
        config: report::Config {
            boundary_knots: p.spec.boundary_knots,
            interior_knots: sol.interior_knots().len(),
            interior: p.spec.interior.clone(),
            shape: p.shape,
            basis: p.basis.as_ref().map(report::basis_name),
        },
        summary: report::summarize(&points),
        points,
        condition_estimate: sol.diagnostics().condition_estimate,
        criterion: None,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    args.emit(&[run])
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let rendered = e.render().to_string();
            eprint!("{rendered}");
            if !rendered.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    match &cli.command {
        Command::List => cmd_list(),
        Command::Run { case, opts } => cmd_run(case, opts),
        Command::RunAll { opts } => cmd_run_all(opts),
        Command::Solve { problem, opts } => cmd_solve(problem, opts),
    }
}
