//! Zero scans over single graphs and random ensembles.

use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::condition::satisfied_variant;
use crate::exact::{exact_poly_with_budget, OracleError, DEFAULT_ENUM_BUDGET};
use crate::graph::ListGraph;
use crate::interpolator::rigorous_constants;
use crate::zeros::{clearance, roots_with, Root, DEFAULT_MAX_ITER};

pub const DEFAULT_RETRY_CAP: usize = 1000;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid ensemble description: {0}")]
    InvalidSpec(String),
    #[error("no graph with n = {n}, max degree {delta}{tf} after {attempts} attempts", tf = if *.triangle_free { ", triangle-free" } else { "" })]
    Generation {
        n: usize,
        delta: usize,
        triangle_free: bool,
        attempts: usize,
    },
    #[error("{graph_id}: {source}")]
    Oracle { graph_id: String, source: OracleError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Parameters of a random ensemble: graphs on `delta + 1 ..= n` vertices
/// with maximum degree exactly `delta` and the list `{1..=q}` everywhere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub delta: usize,
    pub q: u32,
    pub count: usize,
    pub triangle_free: bool,
    pub seed: u64,
    pub retry_cap: usize,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        EnsembleSpec {
            n: 9,
            delta: 3,
            q: 6,
            count: 200,
            triangle_free: false,
            seed: 0,
            retry_cap: DEFAULT_RETRY_CAP,
        }
    }
}

impl FromStr for EnsembleSpec {
    type Err = ScanError;

    /// Parses `n=9,delta=3,q=6,count=200,triangle-free=false,seed=7`; omitted
    /// keys keep their defaults.
    fn from_str(s: &str) -> Result<Self, ScanError> {
        let mut spec = EnsembleSpec::default();
        let bad = |k: &str, v: &str| ScanError::InvalidSpec(format!("bad value {v:?} for {k}"));
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| ScanError::InvalidSpec(format!("expected key=value, got {item:?}")))?;
            match k.trim() {
                "n" => spec.n = v.parse().map_err(|_| bad(k, v))?,
                "delta" => spec.delta = v.parse().map_err(|_| bad(k, v))?,
                "q" => spec.q = v.parse().map_err(|_| bad(k, v))?,
                "count" => spec.count = v.parse().map_err(|_| bad(k, v))?,
                "triangle-free" => spec.triangle_free = v.parse().map_err(|_| bad(k, v))?,
                "seed" => spec.seed = v.parse().map_err(|_| bad(k, v))?,
                "retries" => spec.retry_cap = v.parse().map_err(|_| bad(k, v))?,
                other => return Err(ScanError::InvalidSpec(format!("unknown key {other:?}"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<(), ScanError> {
        if self.delta == 0 {
            return Err(ScanError::InvalidSpec("delta must be at least 1".into()));
        }
        if self.n < self.delta + 1 {
            return Err(ScanError::InvalidSpec(format!("n = {} cannot carry degree {}", self.n, self.delta)));
        }
        if self.q == 0 || self.retry_cap == 0 {
            return Err(ScanError::InvalidSpec("q and retries must be positive".into()));
        }
        Ok(())
    }
}

/// Result of one zero scan.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroReport {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub q_min: usize,
    pub q_max: usize,
    pub roots: Vec<Root>,
    pub clearance: f64,
    /// Width of the proven zero-free strip for general lists at this `Delta`.
    pub tau_delta: f64,
    pub condition_ok: bool,
    /// `clearance < tau_delta` although the large-lists condition holds.
    pub violation: bool,
    pub converged: bool,
    pub max_residual: f64,
}

impl ZeroReport {
    /// `log10(clearance / tau_delta)`, the logged gap to the proven width.
    pub fn log10_gap(&self) -> f64 {
        (self.clearance / self.tau_delta).log10()
    }
}

/// Exact polynomial, roots and clearance of one graph.
pub fn zero_report(graph_id: &str, g: &ListGraph, budget: u128) -> Result<ZeroReport, ScanError> {
    zero_report_with(graph_id, g, budget, DEFAULT_MAX_ITER)
}

/// [`zero_report`] with a cap on root-finder iterations.
pub fn zero_report_with(graph_id: &str, g: &ListGraph, budget: u128, max_iter: usize) -> Result<ZeroReport, ScanError> {
    let poly = exact_poly_with_budget(g, budget).map_err(|source| ScanError::Oracle {
        graph_id: graph_id.to_string(),
        source,
    })?;
    let (roots, converged) = match roots_with(&poly, max_iter) {
        Ok(r) => (r.roots, r.converged),
        Err(_) => (Vec::new(), true),
    };
    let values: Vec<_> = roots.iter().map(|r| r.value).collect();
    let clear = clearance(&values);
    let delta = g.max_degree();
    let tau_delta = rigorous_constants(delta.max(1), false).expect("degree is positive").tau_delta;
    let condition_ok = satisfied_variant(g).is_some();
    let sizes = (0..g.vertex_count()).map(|v| g.list(v).len());
    Ok(ZeroReport {
        graph_id: graph_id.to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        delta,
        q_min: sizes.clone().min().unwrap_or(0),
        q_max: sizes.max().unwrap_or(0),
        max_residual: roots.iter().map(|r| r.residual).fold(0.0, f64::max),
        roots,
        clearance: clear,
        tau_delta,
        condition_ok,
        violation: condition_ok && clear < tau_delta,
        converged,
    })
}

/// Random graph on `n` vertices with maximum degree exactly `delta`, built by
/// greedy insertion of shuffled vertex pairs at a random density.
pub fn random_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    delta: usize,
    q: u32,
    triangle_free: bool,
    retry_cap: usize,
) -> Result<ListGraph, ScanError> {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    for _ in 0..retry_cap {
        pairs.shuffle(rng);
        let p: f64 = rng.gen_range(0.3..=1.0);
        let mut adj = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for &(a, b) in &pairs {
            if adj[a].len() >= delta || adj[b].len() >= delta || !rng.gen_bool(p) {
                continue;
            }
            if triangle_free && adj[a].iter().any(|x| adj[b].contains(x)) {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
            edges.push((a, b));
        }
        if adj.iter().map(Vec::len).max() == Some(delta) {
            return Ok(ListGraph::uniform(n, q, &edges).expect("generated graph is simple"));
        }
    }
    Err(ScanError::Generation {
        n,
        delta,
        triangle_free,
        attempts: retry_cap,
    })
}

/// The graphs of an ensemble, in id order. Instance `i` draws from stream `i`
/// of a ChaCha generator seeded with `spec.seed`.
pub fn ensemble_graphs(spec: &EnsembleSpec) -> Result<Vec<(String, ListGraph)>, ScanError> {
    spec.validate()?;
    (0..spec.count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(i as u64);
            let n = rng.gen_range(spec.delta + 1..=spec.n);
            let g = random_graph(&mut rng, n, spec.delta, spec.q, spec.triangle_free, spec.retry_cap)?;
            Ok((format!("s{}-{:04}", spec.seed, i), g))
        })
        .collect()
}

/// Zero reports for every graph of the ensemble, computed in parallel.
pub fn scan_ensemble(spec: &EnsembleSpec, budget: u128) -> Result<Vec<ZeroReport>, ScanError> {
    scan_ensemble_with(spec, budget, DEFAULT_MAX_ITER)
}

pub fn scan_ensemble_with(spec: &EnsembleSpec, budget: u128, max_iter: usize) -> Result<Vec<ZeroReport>, ScanError> {
    ensemble_graphs(spec)?
        .par_iter()
        .map(|(id, g)| zero_report_with(id, g, budget, max_iter))
        .collect()
}

pub fn scan_ensemble_default(spec: &EnsembleSpec) -> Result<Vec<ZeroReport>, ScanError> {
    scan_ensemble(spec, DEFAULT_ENUM_BUDGET)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    graph_id: &'a str,
    n: usize,
    m: usize,
    delta: usize,
    q: usize,
    clearance: f64,
    tau_delta: f64,
    condition_ok: bool,
}

/// Table with columns `graph_id,n,m,delta,q,clearance,tau_delta,condition_ok`.
pub fn write_csv<W: Write>(reports: &[ZeroReport], out: W) -> Result<(), ScanError> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(CsvRow {
            graph_id: &r.graph_id,
            n: r.n,
            m: r.m,
            delta: r.delta,
            q: r.q_min,
            clearance: r.clearance,
            tau_delta: r.tau_delta,
            condition_ok: r.condition_ok,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RootsEntry<'a> {
    graph_id: &'a str,
    roots: &'a [Root],
    converged: bool,
    max_residual: f64,
}

/// JSON sidecar listing the roots of every report.
pub fn write_roots_json<W: Write>(reports: &[ZeroReport], mut out: W) -> Result<(), ScanError> {
    let entries: Vec<RootsEntry> = reports
        .iter()
        .map(|r| RootsEntry {
            graph_id: &r.graph_id,
            roots: &r.roots,
            converged: r.converged,
            max_residual: r.max_residual,
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &entries).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}
