//! Subcommands behind the `covgrid` binary. Each `cmd_*` writes its normal
//! output to `out`, diagnostics to `err`, and reports failures as
//! [`CliError`]; [`run`] turns those into exit codes.
//!
//! Exit codes: 0 success, 1 unreadable/invalid input or I/O failure,
//! 2 degenerate polygon, 3 cell count above the exact-solver cap.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use covgrid::compare::{compare_methods_with, CompareOptions, ComparisonRow};
use covgrid::corpus::{corpus, CorpusSpec};
use covgrid::io::{
    parse_scenario, read_decomposition, read_plan, render_svg, write_decomposition, write_plan,
    IoError, PlanDocument, Scenario, DEFAULT_SPEED,
};
use covgrid::planner::heuristic_path_with;
use covgrid::{
    agd_decompose_with, sgd_decompose, solve_paper_mode, solve_valid_path, AgdOptions, ChannelSpan,
    Decomposition, DecompositionError, DistanceMatrix, Method, PlanMode, PlannerError, Polygon,
    SolverConfig,
};
use rayon::prelude::*;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_SIZE_LIMIT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: String, source: IoError },
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error("{0}")]
    Usage(String),
    #[error("{failed} of {total} cases failed")]
    Batch {
        failed: usize,
        total: usize,
        code: i32,
    },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input {
                source: IoError::Geometry(_),
                ..
            }
            | CliError::Decomposition(DecompositionError::Geometry(_)) => EXIT_DEGENERATE,
            CliError::Planner(PlannerError::SizeLimitExceeded { .. }) => EXIT_SIZE_LIMIT,
            CliError::Batch { code, .. } => *code,
            _ => EXIT_INPUT,
        }
    }
}

impl From<covgrid::Error> for CliError {
    fn from(e: covgrid::Error) -> Self {
        match e {
            covgrid::Error::Decomposition(d) => d.into(),
            covgrid::Error::Planner(p) => p.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "covgrid",
    version,
    about = "Grid decomposition and coverage paths for polygonal areas"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a polygon into camera-footprint cells
    Decompose(DecomposeArgs),
    /// Order the cells of a decomposition into a coverage path
    Plan(PlanArgs),
    /// Compare AGD and SGD over one or more polygons, as CSV
    Compare(CompareArgs),
    /// Draw a decomposition (and optionally a plan) as SVG
    Render(RenderArgs),
}

/// Overrides shared by every subcommand that builds a decomposition.
#[derive(Debug, Clone, Args, Default)]
pub struct GridOpts {
    /// Camera footprint radius (overrides the scenario)
    #[arg(long = "r")]
    pub r: Option<f64>,
    /// How AGD channels measure their span
    #[arg(long, value_parser = parse_span)]
    pub span: Option<ChannelSpan>,
}

/// Solver settings.
#[derive(Debug, Clone, Args, Default)]
pub struct SolverOpts {
    /// Airspeed (overrides the scenario)
    #[arg(long = "v")]
    pub v: Option<f64>,
    /// Let the solver choose the first and last cell
    #[arg(long)]
    pub free_endpoints: bool,
    /// Largest cell count handed to the exact solvers
    #[arg(long, env = "COVGRID_EXACT_CAP")]
    pub exact_cap: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    /// Scenario JSON or WKT polygon
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the decomposition JSON (stdout if absent)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub method: Option<Method>,
    #[command(flatten)]
    pub grid: GridOpts,
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    /// Scenario JSON, WKT polygon, or decomposition JSON
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the plan JSON
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub mode: Option<PlanMode>,
    /// Fall back to the heuristic instead of failing above the cap
    #[arg(long)]
    pub heuristic_fallback: bool,
    #[command(flatten)]
    pub grid: GridOpts,
    #[command(flatten)]
    pub solver: SolverOpts,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Scenario JSON or WKT polygon; repeat for several cases
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Also generate this many random convex polygons
    #[arg(long, default_value_t = 0)]
    pub cases: usize,
    /// Seed for the random polygons
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the CSV (stdout if absent)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridOpts,
    #[command(flatten)]
    pub solver: SolverOpts,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    /// Decomposition JSON (a scenario is decomposed on the fly)
    #[arg(long)]
    pub input: PathBuf,
    /// Plan JSON whose visit order is drawn as a route
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Where to write the SVG (stdout if absent)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub method: Option<Method>,
    #[command(flatten)]
    pub grid: GridOpts,
}

fn parse_span(s: &str) -> Result<ChannelSpan, String> {
    match s {
        "top-line" => Ok(ChannelSpan::TopLine),
        "adjusted-band" => Ok(ChannelSpan::AdjustedBand),
        other => Err(format!(
            "unknown span `{other}` (expected top-line or adjusted-band)"
        )),
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a, out, err),
        Command::Plan(a) => cmd_plan(a, out, err),
        Command::Compare(a) => cmd_compare(a, out, err),
        Command::Render(a) => cmd_render(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn load_scenario(path: &Path, grid: &GridOpts) -> Result<Scenario, CliError> {
    let mut s = parse_scenario(&read_text(path)?).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })?;
    if let Some(r) = grid.r {
        s.r = r;
    }
    if let Some(span) = grid.span {
        s.span = span;
    }
    Ok(s)
}

fn decompose(
    p: &Polygon,
    r: f64,
    method: Method,
    span: ChannelSpan,
) -> Result<Decomposition, CliError> {
    Ok(match method {
        Method::Agd => agd_decompose_with(
            p,
            r,
            &AgdOptions {
                span,
                ..AgdOptions::default()
            },
        )?,
        Method::Sgd => sgd_decompose(p, r)?,
    })
}

/// A decomposition document as-is, or a scenario decomposed now.
fn load_decomposition(
    path: &Path,
    method: Option<Method>,
    grid: &GridOpts,
) -> Result<(Decomposition, Option<Scenario>), CliError> {
    let text = read_text(path)?;
    if let Ok(d) = read_decomposition(&text) {
        return Ok((d, None));
    }
    let s = load_scenario(path, grid)?;
    let d = decompose(&s.polygon, s.r, method.unwrap_or(s.method), s.span)?;
    Ok((d, Some(s)))
}

pub fn cmd_decompose(
    a: &DecomposeArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let s = load_scenario(&a.input, &a.grid)?;
    let d = decompose(&s.polygon, s.r, a.method.unwrap_or(s.method), s.span)?;
    let json = write_decomposition(&d);
    let mut summary = format!(
        "{}: {} cells, {} channels\n",
        d.method.to_string().to_uppercase(),
        d.cells.len(),
        d.channels.len()
    );
    for (k, t) in d.channels.iter().enumerate() {
        let _ = writeln!(
            summary,
            "channel {}: y_b={:.3} l={:.3} n={} e={:.3} delta={:.3} y_t_adj={:.3}",
            k + 1,
            t.y_b,
            t.l,
            t.n,
            t.e,
            t.delta,
            t.y_t_adj
        );
    }
    match &a.output {
        Some(path) => {
            write_text(path, &json)?;
            out.write_all(summary.as_bytes())?;
        }
        None => {
            out.write_all(json.as_bytes())?;
            err.write_all(summary.as_bytes())?;
        }
    }
    Ok(())
}

fn solver_config(opts: &SolverOpts, scenario: Option<&Scenario>) -> SolverConfig {
    SolverConfig {
        exact_cap: opts
            .exact_cap
            .or(scenario.map(|s| s.exact_cap))
            .unwrap_or(covgrid::planner::DEFAULT_EXACT_CAP),
        free_endpoints: opts.free_endpoints || scenario.is_some_and(|s| s.free_endpoints),
    }
}

fn check_speed(v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--v must be positive, got {v}")))
    }
}

pub fn cmd_plan(a: &PlanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (d, scenario) = load_decomposition(&a.input, a.method, &a.grid)?;
    let v = check_speed(
        a.solver
            .v
            .or(scenario.as_ref().map(|s| s.v))
            .unwrap_or(DEFAULT_SPEED),
    )?;
    let cfg = solver_config(&a.solver, scenario.as_ref());
    let mode = a
        .mode
        .or(scenario.as_ref().map(|s| s.mode))
        .unwrap_or_default();
    let m = DistanceMatrix::new(&d.centers(), v)?;

    let heuristic = || PlanDocument::from_path(&heuristic_path_with(&m, cfg.free_endpoints), v);
    let fallback = |e: PlannerError, err: &mut dyn Write| match e {
        PlannerError::SizeLimitExceeded { cells, cap } if a.heuristic_fallback => {
            let _ = writeln!(
                err,
                "note: {cells} cells exceed the exact cap {cap}; using the heuristic"
            );
            Ok(heuristic())
        }
        e => Err(CliError::from(e)),
    };
    let doc = match mode {
        PlanMode::Heuristic => heuristic(),
        PlanMode::Valid => match solve_valid_path(&m, &cfg) {
            Ok(plan) => PlanDocument::from_path(&plan, v),
            Err(e) => fallback(e, err)?,
        },
        PlanMode::Paper => match solve_paper_mode(&m, &cfg) {
            Ok(sol) => PlanDocument::from_arcs(&sol, v),
            Err(e) => fallback(e, err)?,
        },
    };

    writeln!(
        out,
        "t_cov = {:.2} s ({} mode, {} cells{})",
        doc.t_cov,
        doc.mode,
        m.len(),
        if doc.optimal { ", optimal" } else { "" }
    )?;
    if !doc.single_path {
        writeln!(err, "note: the relaxed optimum contains detached cycles; it is a lower bound, not a flyable path")?;
    }
    if let Some(path) = &a.output {
        write_text(path, &write_plan(&doc))?;
    }
    Ok(())
}

pub const CSV_HEADER: &str = "case,area,n_sgd,n_agd,cell_reduction,z_sgd,z_agd,relative_improvement_pct,absolute_gap,z_agd_paper,z_agd_optimal";

fn csv_row(name: &str, row: &ComparisonRow) -> String {
    format!(
        "{},{:.2},{},{},{},{:.3},{:.3},{:.3},{:.3},{},{}",
        name,
        row.area,
        row.n_sgd,
        row.n_agd,
        row.cell_reduction,
        row.z_sgd,
        row.z_agd,
        100.0 * row.relative_improvement,
        row.absolute_gap,
        row.z_agd_paper
            .map(|z| format!("{z:.3}"))
            .unwrap_or_default(),
        row.z_agd_optimal
    )
}

struct Case {
    name: String,
    input: Result<(Polygon, f64, f64, CompareOptions), CliError>,
}

pub fn cmd_compare(
    a: &CompareArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    if a.input.is_empty() && a.cases == 0 {
        return Err(CliError::Usage("compare needs --input or --cases".into()));
    }
    let base = |s: Option<&Scenario>| -> Result<(f64, CompareOptions), CliError> {
        let v = check_speed(a.solver.v.or(s.map(|s| s.v)).unwrap_or(DEFAULT_SPEED))?;
        let agd = AgdOptions {
            span: a.grid.span.or(s.map(|s| s.span)).unwrap_or_default(),
            ..AgdOptions::default()
        };
        Ok((
            v,
            CompareOptions {
                solver: solver_config(&a.solver, s),
                agd,
            },
        ))
    };

    let mut cases: Vec<Case> = a
        .input
        .iter()
        .map(|path| Case {
            name: path.file_stem().map_or_else(
                || path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            ),
            input: load_scenario(path, &a.grid).and_then(|s| {
                let (v, opts) = base(Some(&s))?;
                Ok((s.polygon, s.r, v, opts))
            }),
        })
        .collect();
    let r = a.grid.r.unwrap_or(covgrid::io::DEFAULT_RADIUS);
    for (k, p) in corpus(a.seed, a.cases, &CorpusSpec::default())
        .into_iter()
        .enumerate()
    {
        cases.push(Case {
            name: format!("seed{}-{}", a.seed, k + 1),
            input: base(None).map(|(v, opts)| (p, r, v, opts)),
        });
    }

    let total = cases.len();
    let results: Vec<(String, Result<ComparisonRow, CliError>)> = cases
        .into_par_iter()
        .map(|c| {
            let row = c.input.and_then(|(p, r, v, opts)| {
                compare_methods_with(&p, r, v, &opts).map_err(CliError::from)
            });
            (c.name, row)
        })
        .collect();

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut failed = 0;
    let mut code = EXIT_OK;
    let mut improvements = Vec::new();
    for (name, result) in results {
        match result {
            Ok(row) => {
                improvements.push(row.relative_improvement);
                csv.push_str(&csv_row(&name, &row));
                csv.push('\n');
            }
            Err(e) => {
                writeln!(err, "case {name}: {e}")?;
                failed += 1;
                code = code.max(e.exit_code());
            }
        }
    }
    match &a.output {
        Some(path) => write_text(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    if !improvements.is_empty() {
        let mean = improvements.iter().sum::<f64>() / improvements.len() as f64;
        writeln!(
            err,
            "mean relative improvement {:.2}% over {} cases",
            100.0 * mean,
            improvements.len()
        )?;
    }
    if failed > 0 {
        return Err(CliError::Batch {
            failed,
            total,
            code,
        });
    }
    Ok(())
}

pub fn cmd_render(
    a: &RenderArgs,
    out: &mut dyn Write,
    _err: &mut dyn Write,
) -> Result<(), CliError> {
    let (d, _) = load_decomposition(&a.input, a.method, &a.grid)?;
    let route = match &a.plan {
        Some(path) => {
            let plan = read_plan(&read_text(path)?).map_err(|source| CliError::Input {
                path: path.display().to_string(),
                source,
            })?;
            plan.order
        }
        None => None,
    };
    let svg = render_svg(&d, route.as_deref());
    match &a.output {
        Some(path) => write_text(path, &svg),
        None => Ok(out.write_all(svg.as_bytes())?),
    }
}
