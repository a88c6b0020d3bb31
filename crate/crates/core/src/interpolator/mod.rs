//! Interpolation of `Z_G(w)` from the easy point `w = 1`.
//!
//! With `g(z) = Z_G(z (w - 1) + 1)` we have `g(0) = prod |L(v)|` and
//! `g(1) = Z_G(w)`. A map `phi` sends a disk of radius `1 + delta` into the
//! zero-free rectangle with `phi(0) = 0`, `phi(1) = 1`, so `f = g o phi` has no
//! zeros on that disk and `log f(1)` is approximated by the first `k` Taylor
//! coefficients of `log f` at the origin.

mod constants;
mod phi;

use std::f64::consts::LN_2;

use num::bigint::{BigInt, BigUint};
use num::complex::Complex64;
use num::Signed;
use serde::Serialize;
use thiserror::Error;

pub use constants::{rigorous_constants, RigorousConstants, C_CLOSED_FORM};
pub use phi::{build_phi, estimate_phi, DiskToRegionMap, PhiBudget, PhiEstimate};

use crate::coeffs::{fk_coeffs_direct_with_budget, CoeffError, DEFAULT_SUBSET_BUDGET};
use crate::condition::{has_uniformly_large_lists, satisfied_variant};
use crate::graph::ListGraph;
use crate::numeric::{biguint_log2, HpComplex, Scalar};
use crate::series::{compose_series, log_series_float, SeriesError};

/// Constant in `k = ceil(C / delta * ln(deg / (eps delta)))`.
pub const K_CONSTANT: f64 = 3.0;
/// Largest `k` evaluated in double precision under [`PrecisionChoice::Auto`].
pub const AUTO_DOUBLE_MAX_K: usize = 60;
/// Significand width used above [`AUTO_DOUBLE_MAX_K`].
pub const HIGH_PRECISION_BITS: usize = 256;
/// Default cap on the truncation order.
pub const DEFAULT_ORDER_CAP: usize = 5_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("w = {w} lies outside the rectangle of half-width {tau}")]
    OutsideRegion { w: Complex64, tau: f64 },
    #[error("no certified map for tau' = {tau_prime}: {reason} (best margin {best_margin:e})")]
    PhiCertification {
        tau_prime: f64,
        best_margin: f64,
        reason: String,
    },
    #[error("truncation order k = {k} exceeds the cap {cap}")]
    OrderBudget { k: String, cap: usize },
    #[error("refused: {reason} (ln N = {ln_degree:.4e}, log10 k = {log10_k:.4e})")]
    Refused {
        reason: String,
        ln_degree: f64,
        log10_k: f64,
    },
    #[error("large-lists condition fails: {0}")]
    ConditionUnmet(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Real-valued `C / delta * ln(exp(ln_deg) / (eps delta))`, before rounding.
pub fn k_formula(delta: f64, ln_deg: f64, eps: f64, c: f64) -> f64 {
    c / delta * (ln_deg - eps.ln() - delta.ln())
}

/// `ceil(3 / delta * ln(deg / (eps delta)))`.
pub fn choose_k(delta: f64, deg: u128, eps: f64) -> Result<u64, InterpError> {
    if !(delta > 0.0) || !(eps > 0.0 && eps < 1.0) || deg < 1 {
        return Err(InterpError::InvalidArgument(format!(
            "choose_k needs delta > 0, 0 < eps < 1, deg >= 1 (got {delta}, {eps}, {deg})"
        )));
    }
    Ok(k_formula(delta, (deg as f64).ln(), eps, K_CONSTANT).ceil().max(1.0) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Mode {
    /// Constants of the zero-free theorem for the graph's maximum degree.
    Rigorous,
    /// A user-chosen rectangle half-width `tau'`.
    Practical { tau_prime: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PrecisionChoice {
    /// Double up to [`AUTO_DOUBLE_MAX_K`], [`HIGH_PRECISION_BITS`] above.
    Auto,
    Bits(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct InterpOptions {
    pub eps: f64,
    pub mode: Mode,
    pub order_cap: usize,
    pub precision: PrecisionChoice,
    /// Evaluate with this `k` instead of the formula value.
    pub k_override: Option<usize>,
    pub k_constant: f64,
    pub phi_budget: PhiBudget,
    pub subset_budget: u128,
}

impl InterpOptions {
    pub fn practical(tau_prime: f64, eps: f64) -> Self {
        InterpOptions {
            eps,
            mode: Mode::Practical { tau_prime },
            order_cap: DEFAULT_ORDER_CAP,
            precision: PrecisionChoice::Auto,
            k_override: None,
            k_constant: K_CONSTANT,
            phi_budget: PhiBudget::default(),
            subset_budget: DEFAULT_SUBSET_BUDGET,
        }
    }

    pub fn rigorous(eps: f64) -> Self {
        InterpOptions {
            mode: Mode::Rigorous,
            ..Self::practical(0.5, eps)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub k: usize,
    /// real-valued formula value of `k` (before rounding or override)
    pub k_formula: f64,
    pub k_constant: f64,
    pub tau_prime: f64,
    pub delta: f64,
    pub ln_degree: f64,
    /// `N` as a decimal string, when it fits in 128 bits
    pub degree: Option<String>,
    pub s: f64,
    pub edges: usize,
    pub precision_bits: usize,
    /// `|c_k| + |c_{k-1}|` of `log f`; heuristic only
    pub tail_estimate: f64,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Interpolation {
    #[serde(serialize_with = "crate::numeric::ser_complex")]
    pub estimate: Complex64,
    pub diagnostics: Diagnostics,
}

fn ln_big(n: &BigUint) -> f64 {
    biguint_log2(n) * LN_2
}

fn in_rectangle(w: Complex64, tau: f64) -> bool {
    w.re >= -tau && w.re <= 1.0 + tau && w.im.abs() <= tau
}

fn precision_for(choice: PrecisionChoice, k: usize) -> usize {
    match choice {
        PrecisionChoice::Auto if k <= AUTO_DOUBLE_MAX_K => 53,
        PrecisionChoice::Auto => HIGH_PRECISION_BITS,
        PrecisionChoice::Bits(b) => b.max(53),
    }
}

/// `(sum_{j=1}^k c_j, |c_k| + |c_{k-1}|)` for `log f`, `f = g o phi`.
fn log_sum<S: Scalar>(proto: &S, a: &[BigInt], w: Complex64, phi: &DiskToRegionMap, k: usize) -> Result<(Complex64, f64), SeriesError> {
    let wm1 = proto.from_c64(w - 1.0);
    let mut pw = proto.one_like();
    let mut g = Vec::with_capacity(a.len());
    for aj in a {
        g.push(proto.from_bigint(aj).mul(&pw));
        pw = pw.mul(&wm1);
    }
    let phic = phi.coeffs(proto, k + 1);
    let f = compose_series(&g, &phic, k);
    let c = log_series_float(&f)?;
    let total = c.iter().fold(proto.zero_like(), |acc, x| acc.add(x));
    let tail = c.iter().rev().take(2).map(|x| x.abs()).sum();
    Ok((total.to_c64(), tail))
}

/// Approximates `Z_G(w)` for `w` in the rectangle
/// `{-tau' <= Re w <= 1 + tau', |Im w| <= tau'}`. Containment of
/// `z (w - 1) + 1` in the rectangle for every `z` in it is automatic for real
/// `w` in `[0, 1]`; other points of the rectangle are accepted as given.
pub fn interpolate(g: &ListGraph, w: Complex64, opts: &InterpOptions) -> Result<Interpolation, InterpError> {
    run(g, w, opts, None)
}

/// [`interpolate`] with a map certified beforehand by [`build_phi`], so that
/// sweeps over `k` or `w` certify only once. The map must have been built
/// for the half-width the options select.
pub fn interpolate_with_map(
    g: &ListGraph,
    w: Complex64,
    opts: &InterpOptions,
    phi: &DiskToRegionMap,
) -> Result<Interpolation, InterpError> {
    run(g, w, opts, Some(phi))
}

fn run(g: &ListGraph, w: Complex64, opts: &InterpOptions, given: Option<&DiskToRegionMap>) -> Result<Interpolation, InterpError> {
    if !(opts.eps > 0.0 && opts.eps < 1.0) {
        return Err(InterpError::InvalidArgument(format!("eps = {} must lie in (0, 1)", opts.eps)));
    }
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(InterpError::InvalidArgument("w must be finite".into()));
    }
    let a0 = BigUint::from(g.assignment_count().ok_or(CoeffError::Overflow)?);
    let m = g.edge_count();
    let tau = match opts.mode {
        Mode::Practical { tau_prime } => {
            if !(tau_prime > 0.0 && tau_prime < 1.0) {
                return Err(InterpError::InvalidArgument(format!("tau' = {tau_prime} must lie in (0, 1)")));
            }
            tau_prime
        }
        Mode::Rigorous => {
            if satisfied_variant(g).is_none() {
                return Err(InterpError::ConditionUnmet(
                    "neither the two-degree nor the triangle-free list bound holds".into(),
                ));
            }
            rigorous_constants(g.max_degree().max(1), has_uniformly_large_lists(g))?.tau_prime
        }
    };
    if !in_rectangle(w, tau) {
        return Err(InterpError::OutsideRegion { w, tau });
    }

    let exact_answer = |note: &str| Interpolation {
        estimate: Complex64::new(crate::numeric::biguint_to_f64(&a0), 0.0),
        diagnostics: Diagnostics {
            k: 0,
            k_formula: 0.0,
            k_constant: opts.k_constant,
            tau_prime: tau,
            delta: f64::NAN,
            ln_degree: 0.0,
            degree: None,
            s: f64::NAN,
            edges: m,
            precision_bits: 53,
            tail_estimate: 0.0,
            note: note.into(),
        },
    };
    if w == Complex64::new(1.0, 0.0) {
        return Ok(exact_answer("w = 1: Z(1) is the product of list sizes"));
    }
    if m == 0 {
        return Ok(exact_answer("no edges: Z is constant"));
    }

    if opts.mode == Mode::Rigorous {
        let est = estimate_phi(tau);
        let ln_deg = (m as f64).ln() + est.ln_degree;
        let delta = est.ln_delta.exp();
        // k ~ C/delta * ln(deg/(eps delta)), in log space
        let log10_k = (opts.k_constant.ln() - est.ln_delta + (ln_deg - opts.eps.ln() - est.ln_delta).ln())
            / std::f64::consts::LN_10;
        let k = k_formula(delta, ln_deg, opts.eps, opts.k_constant);
        if est.ln_degree > opts.phi_budget.max_ln_degree || !(k <= opts.order_cap as f64) {
            return Err(InterpError::Refused {
                reason: format!("tau' = {tau:.4e} needs a map of degree e^{:.4e}", est.ln_degree),
                ln_degree: est.ln_degree,
                log10_k,
            });
        }
    }

    let built;
    let phi = match given {
        Some(p) if p.tau_prime == tau => p,
        Some(p) => {
            return Err(InterpError::InvalidArgument(format!(
                "map was certified for tau' = {}, the options select {tau}",
                p.tau_prime
            )))
        }
        None => {
            built = build_phi(tau, &opts.phi_budget)?;
            &built
        }
    };
    let ln_deg = (m as f64).ln() + phi.ln_degree;
    let kf = k_formula(phi.delta, ln_deg, opts.eps, opts.k_constant);
    let k = match opts.k_override {
        Some(k) => k,
        None => {
            if !(kf <= opts.order_cap as f64) {
                return Err(InterpError::OrderBudget {
                    k: format!("{:.0}", kf.ceil()),
                    cap: opts.order_cap,
                });
            }
            (kf.ceil() as usize).max(1)
        }
    };
    if k > opts.order_cap {
        return Err(InterpError::OrderBudget {
            k: k.to_string(),
            cap: opts.order_cap,
        });
    }

    let a = fk_coeffs_direct_with_budget(g, k.min(m), opts.subset_budget)?.a;
    let bits = precision_for(opts.precision, k);
    let (sum, tail) = if bits <= 53 {
        log_sum(&Complex64::new(0.0, 0.0), &a, w, phi, k)?
    } else {
        log_sum(&HpComplex::new(bits, 0.0, 0.0), &a, w, phi, k)?
    };
    let estimate = (Complex64::new(ln_big(&a0), 0.0) + sum).exp();
    debug_assert!(!a[0].is_negative());
    Ok(Interpolation {
        estimate,
        diagnostics: Diagnostics {
            k,
            k_formula: kf,
            k_constant: opts.k_constant,
            tau_prime: tau,
            delta: phi.delta,
            ln_degree: phi.ln_degree,
            degree: phi.degree.map(|n| n.to_string()),
            s: phi.s,
            edges: m,
            precision_bits: bits,
            tail_estimate: tail,
            note: format!(
                "practical run; C = {} and the map search budget are engineering choices",
                opts.k_constant
            ),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_k_values() {
        assert_eq!(choose_k(0.1, 100, 1e-3).unwrap(), 415);
        assert!(choose_k(0.1, 200, 1e-3).unwrap() >= 415);
        assert!(choose_k(0.1, 100, 5e-4).unwrap() >= 415);
        assert!(choose_k(0.0, 100, 1e-3).is_err());
        assert!(choose_k(0.1, 0, 1e-3).is_err());
        assert!(choose_k(0.1, 100, 1.0).is_err());
    }

    #[test]
    fn easy_point_is_exact() {
        let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let r = interpolate(&k3, Complex64::new(1.0, 0.0), &InterpOptions::practical(0.05, 1e-3)).unwrap();
        assert_eq!(r.estimate, Complex64::new(27.0, 0.0));
        assert_eq!(r.diagnostics.k, 0);
    }

    #[test]
    fn wide_rectangle_converges() {
        let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let r = interpolate(&k3, Complex64::new(0.5, 0.0), &InterpOptions::practical(0.9, 1e-3)).unwrap();
        assert!((r.estimate.re / 15.375 - 1.0).abs() < 1e-3, "{:?}", r);
    }

    #[test]
    fn region_and_argument_checks() {
        let e = ListGraph::uniform(2, 2, &[(0, 1)]).unwrap();
        let o = InterpOptions::practical(0.5, 1e-3);
        assert!(matches!(
            interpolate(&e, Complex64::new(2.0, 0.0), &o),
            Err(InterpError::OutsideRegion { .. })
        ));
        assert!(matches!(
            interpolate(&e, Complex64::new(0.5, 0.0), &InterpOptions::practical(0.5, 2.0)),
            Err(InterpError::InvalidArgument(_))
        ));
    }

    #[test]
    fn rigorous_mode_refuses() {
        let k4 = ListGraph::uniform(4, 6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        match interpolate(&k4, Complex64::new(0.5, 0.0), &InterpOptions::rigorous(1e-3)) {
            Err(InterpError::Refused { ln_degree, log10_k, .. }) => {
                assert!(ln_degree > 1e20);
                assert!(log10_k > 1e19);
            }
            other => panic!("{other:?}"),
        }
        let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(matches!(
            interpolate(&k3, Complex64::new(0.5, 0.0), &InterpOptions::rigorous(1e-3)),
            Err(InterpError::ConditionUnmet(_))
        ));
    }
}
