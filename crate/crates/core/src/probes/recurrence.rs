//! Direct check of the telescoping marginal-ratio recurrence.

use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{random_list_graph, uniform, ProbeReport};
use crate::exact::{ColorResolved, OracleError};
use crate::graph::{Color, ListGraph, Vertex};
use crate::numeric::{rational_to_f64, ser_complex, HpComplex, Scalar};
use crate::surgery::build_g_k;

const BITS: usize = 256;
pub const RECURRENCE_TOL: f64 = 1e-9;
const ILL_DEFINED: &str = "recurrence ill-defined here: a denominator vanishes";

#[derive(Debug, Clone, Serialize)]
pub enum RecurrenceOutcome {
    Residual {
        #[serde(serialize_with = "ser_complex")]
        lhs: Complex64,
        #[serde(serialize_with = "ser_complex")]
        rhs: Complex64,
        /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
        relative: f64,
    },
    /// A denominator of the recurrence vanishes at this `w`.
    IllDefined(String),
}

impl RecurrenceOutcome {
    pub fn relative(&self) -> Option<f64> {
        match self {
            RecurrenceOutcome::Residual { relative, .. } => Some(*relative),
            RecurrenceOutcome::IllDefined(_) => None,
        }
    }
}

fn ill(e: OracleError) -> Result<RecurrenceOutcome, OracleError> {
    match e {
        OracleError::IllDefined(what) => Ok(RecurrenceOutcome::IllDefined(what)),
        other => Err(other),
    }
}

/// Marginal of color `c` at `v`, zero when `c` is not in the list of `v`.
fn marginal_or_zero(cr: &ColorResolved, g: &ListGraph, v: Vertex, c: Color, w: &HpComplex) -> Result<HpComplex, OracleError> {
    if g.in_list(v, c) {
        cr.marginal(v, c, w, BITS)
    } else if cr.poly.eval(w).abs() <= cr.poly.majorant(w.abs()) * (2f64).powi(6 - BITS as i32) {
        Err(OracleError::IllDefined("Z_G(w)".into()))
    } else {
        Ok(w.zero_like())
    }
}

/// Compares `R^{i,j}_{G,u}(w)` with the product over the neighbors `v_k` of
/// `(1 - gamma Pr_{G_k}[c(v_k) = i]) / (1 - gamma Pr_{G_k}[c(v_k) = j])`,
/// `gamma = 1 - w`, every factor taken from the exact oracle at 256 bits.
pub fn verify_recurrence(g: &ListGraph, u: Vertex, i: Color, j: Color, w: Complex64) -> Result<RecurrenceOutcome, OracleError> {
    let wh = HpComplex::new(BITS, w.re, w.im);
    let lhs = match ColorResolved::new(g)?.ratio(u, i, j, &wh, BITS) {
        Ok(r) => r,
        Err(e) => return ill(e),
    };
    let one = wh.one_like();
    let gamma = one.sub(&wh);
    let (mut num, mut den) = (one.clone(), one.clone());
    for (k, &v) in g.neighbors(u).iter().enumerate() {
        let split = build_g_k(g, u, i, j, k + 1)?;
        let (h, vk) = (&split.graph, split.image(v));
        let cr = ColorResolved::new(h)?;
        let (pi, pj) = match (marginal_or_zero(&cr, h, vk, i, &wh), marginal_or_zero(&cr, h, vk, j, &wh)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return ill(e),
        };
        let fj = one.sub(&gamma.mul(&pj));
        if fj.abs() <= (2f64).powi(8 - BITS as i32) {
            return Ok(RecurrenceOutcome::IllDefined(format!("1 - gamma Pr[c(v_{}) = {j}]", k + 1)));
        }
        num = num.mul(&one.sub(&gamma.mul(&pi)));
        den = den.mul(&fj);
    }
    let rhs = num.div(&den);
    let scale = lhs.abs().max(rhs.abs());
    let diff = lhs.sub(&rhs).abs();
    Ok(RecurrenceOutcome::Residual {
        lhs: lhs.to_c64(),
        rhs: rhs.to_c64(),
        relative: if scale == 0.0 { 0.0 } else { diff / scale },
    })
}

/// The same comparison in exact rational arithmetic.
pub fn verify_recurrence_rational(g: &ListGraph, u: Vertex, i: Color, j: Color, w: &BigRational) -> Result<RecurrenceOutcome, OracleError> {
    let lhs = match ColorResolved::new(g)?.ratio_rational(u, i, j, w) {
        Ok(r) => r,
        Err(e) => return ill(e),
    };
    let gamma = BigRational::one() - w;
    let (mut num, mut den) = (BigRational::one(), BigRational::one());
    for (k, &v) in g.neighbors(u).iter().enumerate() {
        let split = build_g_k(g, u, i, j, k + 1)?;
        let (h, vk) = (&split.graph, split.image(v));
        let cr = ColorResolved::new(h)?;
        if cr.poly.eval_rational(w).is_zero() {
            return Ok(RecurrenceOutcome::IllDefined("Z_(G_k)(w)".into()));
        }
        let pr = |c: Color| -> Result<BigRational, OracleError> {
            if h.in_list(vk, c) {
                cr.marginal_rational(vk, c, w)
            } else {
                Ok(BigRational::zero())
            }
        };
        let fj = BigRational::one() - &gamma * pr(j)?;
        if fj.is_zero() {
            return Ok(RecurrenceOutcome::IllDefined(format!("1 - gamma Pr[c(v_{}) = {j}]", k + 1)));
        }
        num *= BigRational::one() - &gamma * pr(i)?;
        den *= fj;
    }
    let rhs = num / den;
    let scale = lhs.abs().max(rhs.abs());
    let diff = (&lhs - &rhs).abs();
    Ok(RecurrenceOutcome::Residual {
        lhs: Complex64::new(rational_to_f64(&lhs), 0.0),
        rhs: Complex64::new(rational_to_f64(&rhs), 0.0),
        relative: if scale.is_zero() { 0.0 } else { rational_to_f64(&(diff / scale)) },
    })
}

struct Case {
    graph: ListGraph,
    points: Vec<(Vertex, Color, Color, Complex64)>,
}

fn draw_case<R: Rng>(rng: &mut R, per_graph: usize) -> Case {
    loop {
        let g = random_list_graph(rng, 7, 4, 0.2);
        let centres: Vec<Vertex> = g
            .unpinned()
            .filter(|&v| g.degree(v) >= 1 && g.list(v).len() >= 2)
            .collect();
        if centres.is_empty() {
            continue;
        }
        let points = (0..per_graph)
            .map(|_| {
                let u = *centres.choose(rng).unwrap();
                let ij: Vec<Color> = g.list(u).choose_multiple(rng, 2).copied().collect();
                let w = Complex64::new(uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0));
                (u, ij[0], ij[1], w)
            })
            .collect();
        return Case { graph: g, points };
    }
}

/// `count` random list graphs on at most 7 vertices with `per_graph` random
/// `(u, i, j, w)` each, `w` uniform in the unit square. A second report
/// covers `w = 0` with good colors on the unconflicted instances, exactly.
pub fn recurrence_suite(seed: u64, count: usize, per_graph: usize) -> Vec<ProbeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<Case> = (0..count).map(|_| draw_case(&mut rng, per_graph)).collect();
    let results: Vec<(ProbeReport, ProbeReport)> = cases
        .par_iter()
        .enumerate()
        .map(|(idx, case)| {
            let g = &case.graph;
            let mut float = ProbeReport::new("recurrence", format!("random-{idx}"), RECURRENCE_TOL, Some(seed));
            for &(u, i, j, w) in &case.points {
                match verify_recurrence(g, u, i, j, w) {
                    Ok(RecurrenceOutcome::Residual { relative, .. }) => float.record(relative),
                    Ok(RecurrenceOutcome::IllDefined(_)) => float.skip(ILL_DEFINED),
                    Err(e) => float.skip(format!("oracle error: {e}")),
                }
            }
            let mut exact = ProbeReport::new("recurrence-w0", format!("random-{idx}"), 1e-12, Some(seed));
            if g.is_unconflicted() {
                for u in g.unpinned().filter(|&v| g.degree(v) >= 1) {
                    let good = g.good_colors(u).expect("unpinned");
                    if let [i, j, ..] = good[..] {
                        match verify_recurrence_rational(g, u, i, j, &BigRational::zero()) {
                            Ok(RecurrenceOutcome::Residual { relative, .. }) => exact.record(relative),
                            Ok(RecurrenceOutcome::IllDefined(_)) => exact.skip(ILL_DEFINED),
                            Err(e) => exact.skip(format!("oracle error: {e}")),
                        }
                    }
                }
            }
            (float, exact)
        })
        .collect();
    let mut float = ProbeReport::new("recurrence", format!("{count} random graphs"), RECURRENCE_TOL, Some(seed));
    let mut exact = ProbeReport::new("recurrence-w0", format!("{count} random graphs"), 1e-12, Some(seed));
    for (f, e) in &results {
        float.absorb(f);
        exact.absorb(e);
    }
    vec![float, exact]
}
