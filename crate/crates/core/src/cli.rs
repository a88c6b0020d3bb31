//! Command-line front end: `potts <subcommand> [options]`.
//!
//! Every subcommand reads graphs in the JSON format of [`parse_graph`] and
//! writes JSON (CSV for ensemble tables) to standard output or `--out`.
//! Exit codes: 0 success, 1 verification failure, 2 refused rigorous run,
//! 3 input error, 4 budget exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::cluster::{fk_coeffs_connected_with, ClusterOptions, DEFAULT_CLUSTER_BUDGET};
use crate::coeffs::{fk_coeffs_direct_with_budget, CoeffError, DEFAULT_SUBSET_BUDGET};
use crate::condition::{alpha_star, default_triangle_free};
use crate::exact::{exact_poly_with_budget, OracleError, DEFAULT_ENUM_BUDGET};
use crate::graph::{parse_graph, ListGraph};
use crate::interpolator::{interpolate, rigorous_constants, InterpError, InterpOptions, Mode, PrecisionChoice, DEFAULT_ORDER_CAP};
use crate::numeric::{HpComplex, Scalar};
use crate::probes::{run_probe, ProbeKind, ProbeReport};
use crate::scan::{scan_ensemble_with, write_csv, write_roots_json, zero_report_with, EnsembleSpec, ScanError, ZeroReport};
use crate::zeros::DEFAULT_MAX_ITER;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Directory of bundled desk-scale graphs.
pub const BUNDLED_SUITE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/suite");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Refused(_) => EXIT_REFUSED,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CoeffError> for CliError {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::Series(_) => CliError::Input(e.to_string()),
            _ => CliError::Budget(e.to_string()),
        }
    }
}

impl From<InterpError> for CliError {
    fn from(e: InterpError) -> Self {
        match e {
            InterpError::Refused { .. } | InterpError::ConditionUnmet(_) => CliError::Refused(e.to_string()),
            InterpError::PhiCertification { .. } | InterpError::OrderBudget { .. } => CliError::Budget(e.to_string()),
            InterpError::Coeff(c) => c.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Generation { .. } => CliError::Budget(e.to_string()),
            ScanError::Oracle { source, .. } => source.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "potts", version, about = "Potts partition functions of list-colored graphs")]
pub struct RunConfig {
    /// Significand bits for high-precision arithmetic (at least 53).
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Cap on enumerated color assignments.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_BUDGET)]
    pub budget_enum: u128,
    /// Cap on enumerated edge subsets.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSET_BUDGET)]
    pub budget_subsets: u128,
    /// Cap on clusters held in memory at one level.
    #[arg(long, global = true, default_value_t = DEFAULT_CLUSTER_BUDGET)]
    pub budget_clusters: usize,
    /// Cap on root-finder iterations.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ITER)]
    pub budget_iterations: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Graph file in the JSON list-graph format.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Direct,
    Connected,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Rigorous,
    Practical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeArg {
    Recurrence,
    Niceness,
    Induction,
    Fkappa,
    Geometry,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact monochromatic-edge polynomial, optionally evaluated at `w`.
    Exact {
        #[command(flatten)]
        graph: GraphArg,
        /// Evaluation point `RE[,IM]`.
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
    /// Taylor coefficients of `Z(1 + x)` and of its logarithm.
    Coeffs {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Engine::Both)]
        engine: Engine,
        /// Cross-validate the two engines; mismatch exits with code 1.
        #[arg(long)]
        check: bool,
    },
    /// Approximate `Z(w)` by interpolation from `w = 1`.
    Interpolate {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Practical)]
        mode: ModeArg,
        /// Rectangle half-width in practical mode.
        #[arg(long, alias = "tau-prime", default_value_t = 0.05)]
        tau: f64,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        order_cap: usize,
        /// Use this truncation order instead of the formula value.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Complex zeros of one graph or of a random ensemble.
    Zeros {
        #[arg(long, conflicts_with = "ensemble", required_unless_present = "ensemble")]
        graph: Option<PathBuf>,
        /// `n=..,delta=..,q=..,count=..,triangle-free=bool,seed=..`
        #[arg(long)]
        ensemble: Option<String>,
        /// Roots sidecar; defaults to the `--out` path with extension `roots.json`.
        #[arg(long)]
        roots: Option<PathBuf>,
    },
    /// Numeric falsification probes.
    Verify {
        #[arg(long, value_enum, default_value_t = ProbeArg::All)]
        probe: ProbeArg,
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Directory of graph files for the niceness probe.
        #[arg(long)]
        suite: Option<PathBuf>,
    },
    /// Constants of the zero-free region for maximum degree `Delta`.
    Constants {
        #[arg(long)]
        delta: usize,
        /// Uniformly large lists.
        #[arg(long)]
        uniform: bool,
    },
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision.is_some_and(|p| p < 53) {
            return Err(CliError::Input("--precision must be at least 53".into()));
        }
        if self.workers == Some(0) {
            return Err(CliError::Input("--workers must be positive".into()));
        }
        if self.budget_enum == 0 || self.budget_subsets == 0 || self.budget_clusters == 0 || self.budget_iterations == 0 {
            return Err(CliError::Input("budgets must be positive".into()));
        }
        Ok(())
    }

    fn bits(&self) -> usize {
        self.precision.unwrap_or(256)
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => fs::write(p, text)?,
            None => {
                let mut so = std::io::stdout().lock();
                so.write_all(text.as_bytes())?;
            }
        }
        Ok(())
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn read_graph(path: &Path) -> Result<ListGraph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Every `*.json` graph in `dir`, keyed by file stem and sorted by name.
pub fn load_suite(dir: &Path) -> Result<Vec<(String, ListGraph)>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, read_graph(p)?))
        })
        .collect()
}

/// Parses `RE` or `RE,IM`.
pub fn parse_w(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Input(format!("cannot parse w = {text:?}; expected RE[,IM]"));
    let mut parts = text.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(s) => s.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn cmd_exact(cfg: &RunConfig, graph: &Path, w: Option<&str>) -> Result<(), CliError> {
    let g = read_graph(graph)?;
    let poly = exact_poly_with_budget(&g, cfg.budget_enum)?;
    let mut out = json!({ "poly": poly.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>() });
    if let Some(w) = w {
        let w = parse_w(w)?;
        let v = poly.eval(&HpComplex::new(cfg.bits(), w.re, w.im)).to_c64();
        out["w"] = json!({ "re": w.re, "im": w.im });
        out["value"] = json!({ "re": v.re, "im": v.im });
    }
    cfg.emit(&to_json(&out))
}

fn cmd_coeffs(cfg: &RunConfig, graph: &Path, order: usize, engine: Engine, check: bool) -> Result<(), CliError> {
    let g = read_graph(graph)?;
    let mut out = json!({ "order": order });
    let direct = if engine != Engine::Connected || check {
        let a = fk_coeffs_direct_with_budget(&g, order, cfg.budget_subsets)?;
        let c = a.log().map_err(CoeffError::from)?;
        out["a"] = json!(a.a.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        out["c"] = serde_json::to_value(&c).expect("series serializes")["c"].clone();
        Some(c)
    } else {
        None
    };
    if engine != Engine::Direct || check {
        let opts = ClusterOptions {
            max_order: order.max(ClusterOptions::default().max_order),
            cluster_budget: cfg.budget_clusters,
        };
        let (c, stats) = fk_coeffs_connected_with(&g, order, opts)?;
        if engine == Engine::Connected {
            out["c"] = serde_json::to_value(&c).expect("series serializes")["c"].clone();
        } else {
            out["c_connected"] = serde_json::to_value(&c).expect("series serializes")["c"].clone();
        }
        out["cluster_stats"] = serde_json::to_value(&stats).expect("stats serialize");
        if let Some(d) = &direct {
            let agree = *d == c;
            out["engines_agree"] = json!(agree);
            cfg.emit(&to_json(&out))?;
            if check && !agree {
                return Err(CliError::Verification("coefficient engines disagree".into()));
            }
            return Ok(());
        }
    }
    cfg.emit(&to_json(&out))
}

#[allow(clippy::too_many_arguments)]
fn cmd_interpolate(
    cfg: &RunConfig,
    graph: &Path,
    w: &str,
    eps: f64,
    mode: ModeArg,
    tau: f64,
    order_cap: usize,
    k: Option<usize>,
) -> Result<(), CliError> {
    let g = read_graph(graph)?;
    let w = parse_w(w)?;
    let mut opts = match mode {
        ModeArg::Practical => InterpOptions::practical(tau, eps),
        ModeArg::Rigorous => InterpOptions::rigorous(eps),
    };
    opts.order_cap = order_cap;
    opts.k_override = k;
    opts.subset_budget = cfg.budget_subsets;
    if let Some(b) = cfg.precision {
        opts.precision = PrecisionChoice::Bits(b);
    }
    let r = interpolate(&g, w, &opts)?;
    let d = &r.diagnostics;
    let out = json!({
        "estimate": { "re": r.estimate.re, "im": r.estimate.im },
        "k": d.k,
        "N": d.degree,
        "delta": d.delta,
        "mode": match opts.mode { Mode::Rigorous => "rigorous", Mode::Practical { .. } => "practical" },
        "diagnostics": d,
    });
    cfg.emit(&to_json(&out))
}

fn sidecar_path(cfg: &RunConfig, roots: Option<&Path>) -> Option<PathBuf> {
    roots
        .map(Path::to_path_buf)
        .or_else(|| cfg.out.as_ref().map(|p| p.with_extension("roots.json")))
}

fn cmd_zeros(cfg: &RunConfig, graph: Option<&Path>, ensemble: Option<&str>, roots: Option<&Path>) -> Result<(), CliError> {
    let reports: Vec<ZeroReport> = match (graph, ensemble) {
        (Some(p), None) => {
            let g = read_graph(p)?;
            let id = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            vec![zero_report_with(&id, &g, cfg.budget_enum, cfg.budget_iterations)?]
        }
        (None, Some(spec)) => {
            let spec: EnsembleSpec = spec.parse()?;
            scan_ensemble_with(&spec, cfg.budget_enum, cfg.budget_iterations)?
        }
        _ => return Err(CliError::Input("give exactly one of --graph and --ensemble".into())),
    };
    let mut table = Vec::new();
    write_csv(&reports, &mut table)?;
    cfg.emit(&String::from_utf8(table).expect("csv is utf-8"))?;
    if let Some(path) = sidecar_path(cfg, roots) {
        write_roots_json(&reports, fs::File::create(&path)?)?;
    }
    let min_gap = reports.iter().map(|r| r.clearance).fold(f64::INFINITY, f64::min);
    eprintln!("{} graphs, smallest clearance {min_gap:.6e}", reports.len());
    if let Some(r) = reports.iter().find(|r| !r.converged) {
        return Err(CliError::Budget(format!("root finder did not converge on {}", r.graph_id)));
    }
    if let Some(r) = reports.iter().find(|r| r.violation) {
        return Err(CliError::Verification(format!(
            "{} has a zero at distance {:.3e} < tau_Delta = {:.3e}",
            r.graph_id, r.clearance, r.tau_delta
        )));
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, probe: ProbeArg, count: usize, suite: Option<&Path>) -> Result<(), CliError> {
    let kinds: Vec<ProbeKind> = match probe {
        ProbeArg::Recurrence => vec![ProbeKind::Recurrence],
        ProbeArg::Niceness => vec![ProbeKind::Niceness],
        ProbeArg::Induction => vec![ProbeKind::Induction],
        ProbeArg::Fkappa => vec![ProbeKind::Fkappa],
        ProbeArg::Geometry => vec![ProbeKind::Geometry],
        ProbeArg::All => ProbeKind::ALL.to_vec(),
    };
    let graphs = if kinds.contains(&ProbeKind::Niceness) {
        load_suite(suite.unwrap_or(Path::new(BUNDLED_SUITE)))?
    } else {
        Vec::new()
    };
    let reports: Vec<ProbeReport> = kinds.iter().flat_map(|&k| run_probe(k, &graphs, cfg.seed, count)).collect();
    cfg.emit(&to_json(&reports))?;
    for r in &reports {
        eprintln!(
            "{} {} [{}]: samples {}, max violation {:.3e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.probe,
            r.instance,
            r.samples,
            r.max_violation
        );
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} of {} probe reports failed", reports.len())));
    }
    Ok(())
}

fn cmd_constants(cfg: &RunConfig, delta: usize, uniform: bool) -> Result<(), CliError> {
    let c = rigorous_constants(delta, uniform)?;
    let tf = default_triangle_free();
    let out = json!({
        "constants": c,
        "alpha_star": alpha_star(),
        "triangle_free": tf,
    });
    cfg.emit(&to_json(&out))
}

/// Dispatches one parsed command.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let body = || match &cfg.command {
        Command::Exact { graph, w } => cmd_exact(cfg, &graph.graph, w.as_deref()),
        Command::Coeffs { graph, order, engine, check } => cmd_coeffs(cfg, &graph.graph, *order, *engine, *check),
        Command::Interpolate {
            graph,
            w,
            eps,
            mode,
            tau,
            order_cap,
            k,
        } => cmd_interpolate(cfg, &graph.graph, w, *eps, *mode, *tau, *order_cap, *k),
        Command::Zeros { graph, ensemble, roots } => cmd_zeros(cfg, graph.as_deref(), ensemble.as_deref(), roots.as_deref()),
        Command::Verify { probe, count, suite } => cmd_verify(cfg, *probe, *count, suite.as_deref()),
        Command::Constants { delta, uniform } => cmd_constants(cfg, *delta, *uniform),
    };
    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Input(e.to_string()))?
            .install(body),
        None => body(),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(&cfg) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
