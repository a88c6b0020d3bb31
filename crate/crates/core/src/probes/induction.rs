//! The public items of the two induction hypotheses behind zero-freeness,
//! checked against exact restricted partition functions.
//!
//! Near the origin (`|w| <= nu_w`, unconflicted graphs) ratios are compared
//! with their value at `w = 0`; on the thin rectangle around `[nu_w/2, 1]`
//! they are compared with the value at the nearest real point `w~`.

use std::fmt;

use astro_float::{BigFloat, RoundingMode};
use num::complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{uniform, ProbeReport};
use crate::condition::satisfied_variant;
use crate::exact::{ColorResolved, OracleError};
use crate::graph::{Color, ListGraph, Vertex};
use crate::interpolator::{rigorous_constants, RigorousConstants};
use crate::numeric::{HpComplex, Scalar};

const BITS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `|w| <= nu_w`.
    Origin,
    /// `Re w in [nu_w/2, 1 + nu_w^2/8]`, `|Im w| <= nu_w^2/8`.
    Interval,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Origin => "origin",
            Regime::Interval => "interval",
        })
    }
}

#[derive(Debug, Error)]
pub enum InductionError {
    #[error("w = {w} is outside the {regime} regime")]
    RegimeMismatch { w: Complex64, regime: Regime },
    #[error("the origin regime needs an unconflicted graph")]
    Conflicted,
    #[error("the large-lists condition does not hold")]
    ConditionUnmet,
    #[error("vertex {0} is pinned")]
    Pinned(Vertex),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Item names, in the order of [`ItemSlack`].
const ITEMS: [&str; 5] = ["nonzero", "pinned-neighbors", "real-part", "imaginary-part", "bad-color"];

/// Largest relative slack `observed / bound - 1` per item.
#[derive(Debug, Clone, Copy)]
struct ItemSlack([f64; 5]);

impl ItemSlack {
    fn new() -> Self {
        ItemSlack([f64::NEG_INFINITY; 5])
    }

    fn put(&mut self, item: usize, slack: f64, report: &mut ProbeReport) {
        self.0[item] = self.0[item].max(slack);
        report.record(slack);
    }

    fn merge(&mut self, o: &ItemSlack) {
        for (a, b) in self.0.iter_mut().zip(o.0.iter()) {
            *a = a.max(*b);
        }
    }

    fn describe(&self) -> String {
        ITEMS
            .iter()
            .zip(self.0.iter())
            .filter(|(_, s)| s.is_finite())
            .map(|(n, s)| format!("{n} {s:.3e}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn hp_real(x: &BigFloat) -> HpComplex {
    let mut z = HpComplex::new(BITS, 0.0, 0.0);
    z.re = x.clone();
    z
}

/// `(Re ln q, Im ln q)` for `q` near 1 without cancellation.
fn ln_near_one(q: &HpComplex) -> (f64, f64) {
    let x = q.sub(&q.one_like()).to_c64();
    let re = 0.5 * (2.0 * x.re + x.norm_sqr()).ln_1p();
    let im = x.im.atan2(1.0 + x.re);
    (re, im)
}

/// Exact oracle of one graph plus the constants at its maximum degree.
struct Context<'a> {
    g: &'a ListGraph,
    cr: ColorResolved,
    c: RigorousConstants,
}

impl<'a> Context<'a> {
    fn new(g: &'a ListGraph, c: RigorousConstants) -> Result<Self, InductionError> {
        if satisfied_variant(g).is_none() {
            return Err(InductionError::ConditionUnmet);
        }
        Ok(Context { g, cr: ColorResolved::new(g)?, c })
    }

    fn regime_of(&self, w: &HpComplex, regime: Regime) -> Result<(), InductionError> {
        let z = w.to_c64();
        let nu = self.c.nu_w;
        let strip = nu * nu / 8.0;
        let ok = match regime {
            Regime::Origin => z.norm() <= nu,
            Regime::Interval => {
                let upper = BigFloat::from_f64(1.0, BITS).add(&BigFloat::from_f64(strip, BITS), BITS, RoundingMode::ToEven);
                z.re >= nu / 2.0 && w.re <= upper && z.im.abs() <= strip
            }
        };
        if ok {
            Ok(())
        } else {
            Err(InductionError::RegimeMismatch { w: z, regime })
        }
    }

    /// `Z^c_{G,u}` at `w` for every color of `u`.
    fn restricted(&self, u: Vertex, w: &HpComplex) -> Result<Vec<HpComplex>, OracleError> {
        self.g.list(u).iter().map(|&c| self.cr.restricted(u, c, w)).collect()
    }

    fn check(&self, u: Vertex, pairs: &[(Color, Color)], w: &HpComplex, regime: Regime, report: &mut ProbeReport, slack: &mut ItemSlack) -> Result<(), InductionError> {
        let g = self.g;
        if g.is_pinned(u) {
            return Err(InductionError::Pinned(u));
        }
        self.regime_of(w, regime)?;
        if regime == Regime::Origin && !g.is_unconflicted() {
            return Err(InductionError::Conflicted);
        }
        let list = g.list(u);
        let idx = |c: Color| list.binary_search(&c).expect("color of u");
        let d = g.unpinned_degree(u) as f64;
        let good = g.good_colors(u).expect("unpinned");
        let is_good = |c: Color| regime == Regime::Interval || good.binary_search(&c).is_ok();
        let zw = self.restricted(u, w)?;
        let anchor = match regime {
            Regime::Origin => w.zero_like(),
            Regime::Interval => {
                let one = BigFloat::from_f64(1.0, BITS);
                hp_real(if w.re > one { &one } else { &w.re })
            }
        };
        let za = self.restricted(u, &anchor)?;
        let (c, bits_floor) = (&self.c, (2f64).powi(8 - BITS as i32));
        for (&col, z) in list.iter().zip(&zw) {
            if is_good(col) {
                slack.put(0, if z.is_zero() { 1.0 } else { -1.0 }, report);
            }
        }
        for &(i, j) in pairs {
            let (zi, zj) = (&zw[idx(i)], &zw[idx(j)]);
            if !is_good(j) || zj.is_zero() {
                continue;
            }
            let r = zi.div(zj);
            if !is_good(i) {
                slack.put(4, r.abs() / c.eps_w - 1.0, report);
                continue;
            }
            let (ai, aj) = (&za[idx(i)], &za[idx(j)]);
            if ai.is_zero() || aj.is_zero() {
                report.skip("anchor ratio vanishes");
                continue;
            }
            let q = r.div(&ai.div(aj));
            let (re, im) = ln_near_one(&q);
            if d == 0.0 {
                match regime {
                    Regime::Origin => {
                        let dev = r.sub(&r.one_like()).abs() + ai.div(aj).sub(&r.one_like()).abs();
                        slack.put(1, dev / bits_floor - 1.0, report);
                    }
                    Regime::Interval => slack.put(1, re.hypot(im) / c.eps_w - 1.0, report),
                }
            } else {
                slack.put(2, re.abs() / d / c.eps_r - 1.0, report);
                slack.put(3, im.abs() / d / c.eps_i - 1.0, report);
            }
        }
        Ok(())
    }
}

/// Checks the items of the induction hypothesis for `(u, i, j)` at one point.
/// Every sample records `observed / bound - 1`, so the report passes iff all
/// items hold strictly.
pub fn induction_probe(
    g: &ListGraph,
    u: Vertex,
    i: Color,
    j: Color,
    w: &HpComplex,
    regime: Regime,
    constants: &RigorousConstants,
) -> Result<ProbeReport, InductionError> {
    let ctx = Context::new(g, *constants)?;
    let mut report = ProbeReport::new("induction", format!("{regime} u={u} i={i} j={j}"), 0.0, None).strict();
    let mut slack = ItemSlack::new();
    ctx.check(u, &[(i, j)], w, regime, &mut report, &mut slack)?;
    report.note(slack.describe());
    Ok(report)
}

/// Random unconflicted graph on at most `n_max` vertices, maximum degree at
/// most `delta_max`, whose unpinned lists meet `|L(v)| >= max(2, 2 deg v)`
/// and whose pinned vertices are leaves.
pub fn random_condition_graph<R: Rng>(rng: &mut R, n_max: usize, delta_max: usize) -> ListGraph {
    loop {
        let n = rng.gen_range(2..=n_max.max(2));
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        pairs.shuffle(rng);
        let p = uniform(rng, 0.3, 1.0);
        let mut deg = vec![0; n];
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if deg[a] < delta_max && deg[b] < delta_max && rng.gen_bool(p) {
                deg[a] += 1;
                deg[b] += 1;
                edges.push((a, b));
            }
        }
        if edges.is_empty() {
            continue;
        }
        let palette = (2 * delta_max + 3) as u32;
        let colors: Vec<Color> = (1..=palette).collect();
        let mut pins: Vec<Option<Color>> = vec![None; n];
        for v in 0..n {
            let neighbor_pinned = edges
                .iter()
                .any(|&(a, b)| (a == v && pins[b].is_some()) || (b == v && pins[a].is_some()));
            if deg[v] == 1 && !neighbor_pinned && rng.gen_bool(0.3) {
                pins[v] = Some(*colors.choose(rng).unwrap());
            }
        }
        if pins.iter().all(Option::is_some) {
            continue;
        }
        let lists = (0..n)
            .map(|v| match pins[v] {
                Some(p) => vec![p],
                None => {
                    let need = (2 * deg[v]).max(2) + rng.gen_range(0..=1);
                    colors.choose_multiple(rng, need.min(palette as usize)).copied().collect()
                }
            })
            .collect();
        let g = ListGraph::new(lists, pins, &edges).expect("valid random graph");
        debug_assert!(g.is_unconflicted() && satisfied_variant(&g).is_some());
        return g;
    }
}

fn sample_point<R: Rng>(rng: &mut R, regime: Regime, nu: f64) -> HpComplex {
    match regime {
        Regime::Origin => {
            // log-radial down to nu/100
            let r = nu * 10f64.powf(-2.0 * uniform(rng, 0.0, 1.0));
            let t = uniform(rng, -std::f64::consts::PI, std::f64::consts::PI);
            HpComplex::new(BITS, r * t.cos(), r * t.sin())
        }
        Regime::Interval => {
            let strip = nu * nu / 8.0;
            let im = uniform(rng, -strip, strip);
            match rng.gen_range(0..5) {
                0 => {
                    let one = HpComplex::new(BITS, 1.0, 0.0);
                    one.add(&HpComplex::new(BITS, uniform(rng, 0.0, strip), im))
                }
                1 => HpComplex::new(BITS, 0.5 * nu * 10f64.powf(uniform(rng, 0.0, 2.0)), im),
                _ => HpComplex::new(BITS, uniform(rng, nu / 2.0, 1.0), im),
            }
        }
    }
}

/// Both regimes on `count` random condition-satisfying unconflicted graphs
/// with at most 6 vertices, `per_regime` sampled `w` each, every unpinned
/// `u` and every ordered color pair. One report per regime.
pub fn induction_suite(seed: u64, count: usize, per_regime: usize) -> Vec<ProbeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(ListGraph, Vec<HpComplex>, Vec<HpComplex>)> = (0..count)
        .map(|_| {
            let g = random_condition_graph(&mut rng, 6, 3);
            let nu = rigorous_constants(g.max_degree().max(1), false).expect("degree >= 1").nu_w;
            let o = (0..per_regime).map(|_| sample_point(&mut rng, Regime::Origin, nu)).collect();
            let t = (0..per_regime).map(|_| sample_point(&mut rng, Regime::Interval, nu)).collect();
            (g, o, t)
        })
        .collect();
    let per_case: Vec<[(ProbeReport, ItemSlack); 2]> = cases
        .par_iter()
        .enumerate()
        .map(|(idx, (g, origin, interval))| {
            let c = rigorous_constants(g.max_degree().max(1), false).expect("degree >= 1");
            let run = |regime: Regime, ws: &[HpComplex]| {
                let mut report = ProbeReport::new("induction", format!("{regime} random-{idx}"), 0.0, Some(seed)).strict();
                let mut slack = ItemSlack::new();
                match Context::new(g, c) {
                    Ok(ctx) => {
                        for u in g.unpinned() {
                            let l = g.list(u);
                            let pairs: Vec<(Color, Color)> = l.iter().flat_map(|&i| l.iter().map(move |&j| (i, j))).collect();
                            for w in ws {
                                if let Err(e) = ctx.check(u, &pairs, w, regime, &mut report, &mut slack) {
                                    report.skip(e.to_string());
                                }
                            }
                        }
                    }
                    Err(e) => report.skip(e.to_string()),
                }
                (report, slack)
            };
            [run(Regime::Origin, origin), run(Regime::Interval, interval)]
        })
        .collect();
    [Regime::Origin, Regime::Interval]
        .iter()
        .enumerate()
        .map(|(t, regime)| {
            let mut report = ProbeReport::new("induction", format!("{regime} regime, {count} random graphs"), 0.0, Some(seed)).strict();
            let mut slack = ItemSlack::new();
            for case in &per_case {
                report.absorb(&case[t].0);
                slack.merge(&case[t].1);
            }
            report.note(format!("max relative slack per item: {}", slack.describe()));
            report
        })
        .collect()
}
