//! Command-line front end for `firefighter-core`.
//!
//! Every command produces a JSON report (or CSV for scans and trends)
//! carrying a `provenance` block that echoes the parsed arguments, the seed
//! and the library version. Wall-clock time lives under a separate
//! `metadata` key so reports are otherwise reproducible byte for byte.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use firefighter_core::analysis::{
    fit_through_origin, growth_projection, rho_exact, rho_monte_carlo, s_closed, s_recurrence,
    s_recurrence_y_side, Sampling,
};
use firefighter_core::discharging::{discharge, report_with_bound};
use firefighter_core::engine::NoProtection;
use firefighter_core::expansion::{
    check_joint_expansion, check_side_expansion, scan_eps, CheckOptions, RateFn, EPS_JOINT,
    EPS_ONE_SIDE,
};
use firefighter_core::graph::{Graph, Side};
use firefighter_core::io::{parse_edge_list, write_edge_list};
use firefighter_core::pairing::{sample_simple_counted, simplicity_rate, PairingConfig};
use firefighter_core::rational::parse_q;
use firefighter_core::strategies::{
    solve, ExactStrategy, Greedy, SolverOptions, DEFAULT_NODE_BUDGET,
};
use num::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SEED_ENV: &str = "FIREFIGHTER_SEED";

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "firefighter",
    version,
    about = "k-firefighter experiments on graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Sample a simple (d, d+2)-biregular graph from the pairing model.
    Gen(GenArgs),
    /// Exact sn_k for one ignition vertex, or for all of them.
    Solve(SolveArgs),
    /// Surviving rate of a graph, or a trend over sampled biregular graphs.
    Rate(RateArgs),
    /// Vertex classes, discharging weights and the density bound.
    Classify(ClassifyArgs),
    /// Vertex expansion check on a biregular graph.
    Expand(ExpandArgs),
    /// Fire-growth recurrence, closed form and growth timeline.
    Recur(RecurArgs),
    /// Probability that a pairing projects to a simple graph.
    Simplicity(SimplicityArgs),
    /// Largest expansion constant keeping a rate function below one.
    ScanEps(ScanArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// RNG seed.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    /// Maximum number of pairings drawn before giving up.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Ignition vertex; every vertex when absent.
    #[arg(long)]
    pub vertex: Option<usize>,
    /// Search node budget per ignition vertex.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    Greedy,
    Exact,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct RateArgs {
    /// Input graph. Without it, `--n` lists pairing-model sizes for a trend.
    #[arg(long, required_unless_present = "n")]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Protection policy for Monte Carlo runs.
    #[arg(long, value_enum, default_value_t = Policy::Greedy)]
    pub strategy: Policy,
    /// Sampled ignition vertices; all vertices when absent.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Trend sizes, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "graph")]
    pub n: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Graphs sampled per trend size.
    #[arg(long, default_value_t = 4)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// Density slack as `p/q` or a decimal; enables the bound check.
    #[arg(long)]
    pub eps: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ExpandSide {
    X,
    Y,
    Joint,
}

#[derive(Debug, Args, Serialize)]
pub struct ExpandArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = ExpandSide::Joint)]
    pub which: ExpandSide,
    /// Expansion constant; 0.237 for one side, 0.088 for joint by default.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Random subsets per sampled size class.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Largest exhaustively enumerated subset size.
    #[arg(long, default_value_t = 8)]
    pub exact_max: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Ignition {
    X,
    Y,
}

#[derive(Debug, Args, Serialize)]
pub struct RecurArgs {
    #[arg(long)]
    pub k: usize,
    /// Number of even steps r; the trace covers s_1 .. s_{2r}.
    #[arg(long, default_value_t = 10)]
    pub rounds: usize,
    /// Graph size for p_t and the growth timeline.
    #[arg(long)]
    pub n: Option<u64>,
    /// Joint expansion constant for the growth timeline.
    #[arg(long, default_value_t = EPS_JOINT)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = Ignition::X)]
    pub ignition: Ignition,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct SimplicityArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 20_000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    F,
    G,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = Which::F)]
    pub which: Which,
    #[arg(long, default_value_t = 1000)]
    pub c_grid: usize,
    #[arg(long, default_value_t = 1000)]
    pub eps_grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] firefighter_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: String,
        source: firefighter_core::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "precondition",
            CliError::Io { .. } => "io",
            CliError::Input { .. } => "parse",
            CliError::Usage(_) => "usage",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Finished output of a command.
#[derive(Debug)]
pub enum Output {
    Json(Value),
    Text(String),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Solve(_) => "solve",
            Command::Rate(_) => "rate",
            Command::Classify(_) => "classify",
            Command::Expand(_) => "expand",
            Command::Recur(_) => "recur",
            Command::Simplicity(_) => "simplicity",
            Command::ScanEps(_) => "scan-eps",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Gen(a) => &a.common,
            Command::Solve(a) => &a.common,
            Command::Rate(a) => &a.common,
            Command::Classify(a) => &a.common,
            Command::Expand(a) => &a.common,
            Command::Recur(a) => &a.common,
            Command::Simplicity(a) => &a.common,
            Command::ScanEps(a) => &a.common,
        }
    }
}

pub fn provenance(cmd: &Command) -> Value {
    json!({
        "command": cmd.name(),
        "config": serde_json::to_value(cmd).expect("arguments serialize"),
        "seed": cmd.common().seed,
        "version": VERSION,
    })
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_output(path: Option<&Path>, body: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => match std::io::stdout().lock().write_all(body.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
                path: "<stdout>".into(),
                source: e,
            }),
            _ => Ok(()),
        },
    }
}

fn report(cmd: &Command, result: impl Serialize, started: Instant) -> Output {
    Output::Json(json!({
        "provenance": provenance(cmd),
        "result": serde_json::to_value(result).expect("reports serialize"),
        "metadata": { "wall_time_s": started.elapsed().as_secs_f64() },
    }))
}

/// `# key: value` lines that open CSV and edge-list outputs.
fn comment_header(cmd: &Command) -> String {
    let prov = provenance(cmd);
    format!(
        "# provenance: {}\n",
        serde_json::to_string(&prov).expect("provenance serializes")
    )
}

/// Runs a parsed command. Writes nothing itself except for `gen`, whose
/// graph goes to `--out`; the caller prints or stores the returned output.
pub fn run(cmd: &Command) -> CliResult<Output> {
    let started = Instant::now();
    match cmd {
        Command::Gen(a) => {
            let cfg = PairingConfig::new(a.n, a.d, a.common.seed)?.with_max_tries(a.trials)?;
            let (g, tries) = sample_simple_counted(&cfg, &mut cfg.rng())?;
            let text = format!("{}{}", comment_header(cmd), write_edge_list(&g));
            let summary = json!({
                "n_total": g.n(),
                "m": g.m(),
                "x_vertices": cfg.x_buckets(),
                "y_vertices": cfg.y_buckets(),
                "pairings_drawn": tries,
                "biregular": g.validate_biregular(a.d)?,
            });
            match &a.common.out {
                Some(path) => {
                    write_output(Some(path), &text)?;
                    Ok(report(cmd, summary, started))
                }
                None => Ok(Output::Text(text)),
            }
        }
        Command::Solve(a) => {
            let g = read_graph(&a.graph)?;
            let opts = SolverOptions {
                node_budget: a.budget,
                ..Default::default()
            };
            let vertices: Vec<usize> = match a.vertex {
                Some(v) => vec![v],
                None => (0..g.n()).collect(),
            };
            let results = vertices
                .into_iter()
                .map(|v| solve(&g, v, a.k, opts))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(report(cmd, results, started))
        }
        Command::Rate(a) => run_rate(cmd, a, started),
        Command::Classify(a) => {
            let g = read_graph(&a.graph)?;
            let rep = match &a.eps {
                Some(e) => report_with_bound(&g, a.k, parse_q(e)?)?,
                None => discharge(&g, a.k),
            };
            Ok(report(cmd, rep, started))
        }
        Command::Expand(a) => {
            let g = read_graph(&a.graph)?;
            let opts = CheckOptions {
                exact_max: a.exact_max,
                samples: a.samples,
                seed: a.common.seed,
                ..Default::default()
            };
            let rep = match a.which {
                ExpandSide::Joint => check_joint_expansion(&g, a.eps.unwrap_or(EPS_JOINT), &opts),
                ExpandSide::X => {
                    check_side_expansion(&g, a.d, Side::X, a.eps.unwrap_or(EPS_ONE_SIDE), &opts)?
                }
                ExpandSide::Y => {
                    check_side_expansion(&g, a.d, Side::Y, a.eps.unwrap_or(EPS_ONE_SIDE), &opts)?
                }
            };
            Ok(report(cmd, rep, started))
        }
        Command::Recur(a) => {
            let mut trace = match a.ignition {
                Ignition::X => s_recurrence(a.k, a.rounds)?,
                Ignition::Y => s_recurrence_y_side(a.k, a.rounds)?,
            };
            if let Some(n) = a.n {
                trace = trace.with_n(&BigInt::from(n));
            }
            let closed = (1..=a.rounds)
                .map(|r| s_closed(a.k, r).map(|v| v.to_integer().to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            let growth = match a.n {
                Some(n) => Some(growth_projection(a.k, a.eps, n as f64, 1.0)?),
                None => None,
            };
            Ok(report(
                cmd,
                json!({ "trace": trace, "closed_form_even": closed, "growth": growth }),
                started,
            ))
        }
        Command::Simplicity(a) => {
            let cfg = PairingConfig::new(a.n, a.d, a.common.seed)?;
            Ok(report(cmd, simplicity_rate(&cfg, a.trials)?, started))
        }
        Command::ScanEps(a) => {
            let which = match a.which {
                Which::F => RateFn::F,
                Which::G => RateFn::G,
            };
            let scan = scan_eps(a.d, which, a.c_grid, a.eps_grid)?;
            match a.format {
                Format::Json => Ok(report(cmd, scan, started)),
                Format::Csv => {
                    let mut out = comment_header(cmd);
                    out.push_str("eps,sup_rate,argmax_c\n");
                    for r in &scan.rows {
                        out.push_str(&format!("{},{},{}\n", r.eps, r.sup_rate, r.argmax_c));
                    }
                    Ok(Output::Text(out))
                }
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct TrendRow {
    n_total: usize,
    rho_estimate: f64,
    stderr: f64,
    c_fit: f64,
}

fn run_rate(cmd: &Command, a: &RateArgs, started: Instant) -> CliResult<Output> {
    let opts = SolverOptions {
        node_budget: a.budget,
        ..Default::default()
    };
    let sampling = match a.samples {
        Some(s) => Sampling::Random(s),
        None => Sampling::All,
    };
    let mc = |g: &Graph, seed: u64| match a.strategy {
        Policy::Greedy => rho_monte_carlo(g, a.k, &Greedy, "greedy", sampling, seed),
        Policy::Exact => rho_monte_carlo(g, a.k, &ExactStrategy { opts }, "exact", sampling, seed),
        Policy::None => rho_monte_carlo(g, a.k, &NoProtection, "none", sampling, seed),
    };
    if let Some(path) = &a.graph {
        let g = read_graph(path)?;
        if a.format == Format::Csv {
            return Err(CliError::Usage(
                "CSV output is only available for trends (--n)".into(),
            ));
        }
        let rep = match a.mode {
            Mode::Exact => rho_exact(&g, a.k, opts)?,
            Mode::MonteCarlo => mc(&g, a.common.seed)?,
        };
        return Ok(report(cmd, rep, started));
    }
    if a.mode == Mode::Exact {
        return Err(CliError::Usage("trends use --mode monte-carlo".into()));
    }
    let sizes = a.n.clone().unwrap_or_default();
    if sizes.is_empty() || a.trials == 0 {
        return Err(CliError::Usage(
            "a trend needs at least one size and one trial".into(),
        ));
    }
    let mut points = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let mut rhos = Vec::new();
        let mut n_total = 0;
        for t in 0..a.trials {
            let seed = a.common.seed.wrapping_add((i * a.trials + t) as u64);
            let cfg = PairingConfig::new(n, a.d, seed)?;
            let (g, _) = sample_simple_counted(&cfg, &mut cfg.rng())?;
            n_total = g.n();
            rhos.push(mc(&g, seed)?.rho);
        }
        let m = rhos.len() as f64;
        let mean = rhos.iter().sum::<f64>() / m;
        let stderr = if rhos.len() > 1 {
            (rhos.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (m - 1.0) / m).sqrt()
        } else {
            0.0
        };
        points.push((n_total, mean, stderr));
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|&(n, _, _)| (n as f64).ln() / n as f64)
        .collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r, _)| r).collect();
    let (c, residuals) = fit_through_origin(&xs, &ys);
    let rows: Vec<TrendRow> = points
        .iter()
        .map(|&(n_total, rho_estimate, stderr)| TrendRow {
            n_total,
            rho_estimate,
            stderr,
            c_fit: c,
        })
        .collect();
    match a.format {
        Format::Csv => {
            let mut out = comment_header(cmd);
            out.push_str("n,rho_estimate,stderr,c_fit\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.n_total, r.rho_estimate, r.stderr, r.c_fit
                ));
            }
            Ok(Output::Text(out))
        }
        Format::Json => Ok(report(
            cmd,
            json!({ "rows": rows, "c_fit": c, "relative_residuals": residuals }),
            started,
        )),
    }
}

/// Machine-readable error report.
pub fn error_report(kind: &str, message: &str, cmd: Option<&Command>) -> Value {
    json!({
        "error": { "kind": kind, "message": message },
        "provenance": cmd.map(provenance),
        "version": VERSION,
    })
}
