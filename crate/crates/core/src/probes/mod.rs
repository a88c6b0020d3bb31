//! Numeric falsification probes for the marginal-ratio recurrence, niceness,
//! the induction hypotheses of the zero-freeness proof and two analytic
//! lemmas.
//!
//! Every probe reads marginals from the exact oracle, never from the
//! recurrence, and reports the largest signed slack it observed: a negative
//! value means every sampled inequality held with room to spare.

mod analytic;
mod induction;
mod niceness;
mod recurrence;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::graph::{Color, ListGraph};

pub use analytic::{fkappa_bounds_probe, fkappa_suite, geometric_proj_check, geometry_probe, GeometricCheck};
pub use induction::{induction_probe, induction_suite, random_condition_graph, Regime};
pub use niceness::{niceness_probe, niceness_suite, uniform_lists_probe};
pub use recurrence::{recurrence_suite, verify_recurrence, verify_recurrence_rational, RecurrenceOutcome};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub probe: String,
    pub instance: String,
    pub samples: usize,
    /// Largest observed `lhs - bound`; `null` when nothing was sampled.
    pub max_violation: f64,
    pub tolerance: f64,
    /// Bounds are strict, so a violation equal to the tolerance fails.
    pub strict: bool,
    pub pass: bool,
    pub seed: Option<u64>,
    pub skipped: usize,
    pub notes: Vec<String>,
}

impl ProbeReport {
    pub fn new(probe: &str, instance: impl Into<String>, tolerance: f64, seed: Option<u64>) -> Self {
        ProbeReport {
            probe: probe.to_string(),
            instance: instance.into(),
            samples: 0,
            max_violation: f64::NEG_INFINITY,
            tolerance,
            strict: false,
            pass: true,
            seed,
            skipped: 0,
            notes: Vec::new(),
        }
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self.update();
        self
    }

    /// Records one sampled inequality with slack `violation = lhs - bound`.
    pub fn record(&mut self, violation: f64) {
        self.samples += 1;
        if violation.is_nan() {
            self.max_violation = f64::NAN;
        } else if !self.max_violation.is_nan() {
            self.max_violation = self.max_violation.max(violation);
        }
        self.update();
    }

    /// Records `n` samples whose largest slack is `worst`.
    pub fn record_batch(&mut self, worst: f64, n: usize) {
        if n == 0 {
            return;
        }
        self.record(worst);
        self.samples += n - 1;
    }

    pub fn skip(&mut self, reason: impl Into<String>) {
        self.skipped += 1;
        let reason = reason.into();
        if !self.notes.contains(&reason) {
            self.notes.push(reason);
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Folds another report of the same probe into this one.
    pub fn absorb(&mut self, other: &ProbeReport) {
        self.samples += other.samples;
        self.skipped += other.skipped;
        if other.max_violation.is_nan() || self.max_violation.is_nan() {
            self.max_violation = f64::NAN;
        } else {
            self.max_violation = self.max_violation.max(other.max_violation);
        }
        for n in &other.notes {
            if !self.notes.contains(n) {
                self.notes.push(n.clone());
            }
        }
        self.update();
    }

    fn update(&mut self) {
        self.pass = if self.max_violation.is_nan() {
            false
        } else if self.strict {
            self.max_violation < self.tolerance
        } else {
            self.max_violation <= self.tolerance
        };
    }
}

/// Random list graph with at most `n_max` vertices, lists drawn from
/// `{1..=palette}` and each vertex pinned with probability `pin_prob`.
pub fn random_list_graph<R: Rng>(rng: &mut R, n_max: usize, palette: u32, pin_prob: f64) -> ListGraph {
    let n = rng.gen_range(2..=n_max.max(2));
    let p: f64 = rng.gen_range(0.25..=0.9);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let colors: Vec<Color> = (1..=palette).collect();
    let mut lists = Vec::with_capacity(n);
    let mut pins = Vec::with_capacity(n);
    for _ in 0..n {
        let size = rng.gen_range(1..=palette as usize);
        let list: Vec<Color> = colors.choose_multiple(rng, size).copied().collect();
        let pin = if rng.gen_bool(pin_prob) { list.choose(rng).copied() } else { None };
        lists.push(list);
        pins.push(pin);
    }
    ListGraph::new(lists, pins, &edges).expect("random graph is valid")
}

/// Uniform sample from `[lo, hi]` with the upper end included.
pub(crate) fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo >= hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Which probe `verify` should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    Recurrence,
    Niceness,
    Induction,
    Fkappa,
    Geometry,
}

impl ProbeKind {
    pub const ALL: [ProbeKind; 5] = [
        ProbeKind::Recurrence,
        ProbeKind::Niceness,
        ProbeKind::Induction,
        ProbeKind::Fkappa,
        ProbeKind::Geometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProbeKind::Recurrence => "recurrence",
            ProbeKind::Niceness => "niceness",
            ProbeKind::Induction => "induction",
            ProbeKind::Fkappa => "fkappa",
            ProbeKind::Geometry => "geometry",
        }
    }
}

/// Runs one probe family. `count` is the number of random instances for the
/// graph probes and a multiplier of 200 samples for the analytic ones;
/// `suite` holds the bundled graphs used by the niceness probe.
pub fn run_probe(kind: ProbeKind, suite: &[(String, ListGraph)], seed: u64, count: usize) -> Vec<ProbeReport> {
    match kind {
        ProbeKind::Recurrence => recurrence_suite(seed, count, 10),
        ProbeKind::Niceness => niceness_suite(suite, 0.05),
        ProbeKind::Induction => induction_suite(seed, count, 20),
        ProbeKind::Fkappa => fkappa_suite(seed, 200 * count.max(1)),
        ProbeKind::Geometry => vec![geometry_probe(seed, 200 * count.max(1))],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn report_pass_logic() {
        let mut r = ProbeReport::new("t", "x", 1e-12, Some(1));
        assert!(r.pass);
        r.record(-0.5);
        r.record(5e-13);
        assert!(r.pass);
        r.record(1e-3);
        assert!(!r.pass);
        let mut s = ProbeReport::new("t", "y", 0.0, None).strict();
        s.record(0.0);
        assert!(!s.pass);
        let mut t = ProbeReport::new("t", "z", 0.0, None);
        t.record(f64::NAN);
        assert!(!t.pass);
        let mut u = ProbeReport::new("t", "all", 1e-12, None);
        u.absorb(&r);
        assert_eq!(u.samples, 3);
        assert!(!u.pass);
    }

    #[test]
    fn random_graphs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let g = random_list_graph(&mut rng, 7, 4, 0.2);
            assert!(g.vertex_count() <= 7);
            assert!((0..g.vertex_count()).all(|v| !g.list(v).is_empty()));
        }
    }
}
