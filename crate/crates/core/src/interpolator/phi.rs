//! Polynomial maps from a disk into the rectangle around `[0, 1]`.
//!
//! The map is `phi(z) = p_N(sigma z) / p_N(sigma)` with
//! `p_N(y) = sum_{j=1}^{N} y^j / j`, the truncated series of `-log(1 - y)`.
//! It is parametrized by `s = -ln(1 - sigma)` (so `rho = 1 - sigma = e^{-s}`)
//! and evaluated in closed form, `phi ~ -log(1 - sigma z) / s`, with a
//! rigorous bound on the truncation tail. This keeps every operation cheap
//! even when `N` is far too large to expand, and only the first `k + 1`
//! coefficients are ever materialized.

use std::f64::consts::{FRAC_PI_2, PI};

use num::complex::Complex64;
use serde::Serialize;

use super::InterpError;
use crate::numeric::Scalar;

/// Target relative size of the truncation tail of `p_N`.
const TAIL_TOL: f64 = 1e-20;
/// Absolute allowance for floating error in a boundary evaluation.
const EVAL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiBudget {
    /// Largest admissible `ln N`.
    pub max_ln_degree: f64,
    /// Uniform boundary arcs before adaptive refinement.
    pub samples: usize,
    /// Cap on the total number of arcs examined by one certification.
    pub max_arcs: usize,
    /// Required clearance from the rectangle boundary, as a fraction of `tau'`.
    pub safety: f64,
}

impl Default for PhiBudget {
    fn default() -> Self {
        PhiBudget {
            max_ln_degree: 80.0,
            samples: 10_000,
            max_arcs: 2_000_000,
            safety: 1e-3,
        }
    }
}

/// A certified map of the disk of radius `1 + delta` into
/// `{-tau' <= Re <= 1 + tau', |Im| <= tau'}`.
#[derive(Debug, Clone, Serialize)]
pub struct DiskToRegionMap {
    pub tau_prime: f64,
    /// `-ln(1 - sigma)`
    pub s: f64,
    /// `1 - sigma`
    pub rho: f64,
    pub sigma: f64,
    pub delta: f64,
    /// `ln N`
    pub ln_degree: f64,
    /// `N`, when it fits in 128 bits
    pub degree: Option<u128>,
    /// smallest certified distance from the image of the boundary circle
    /// to the rectangle boundary
    pub margin: f64,
    /// boundary arcs examined by the certificate
    pub arcs: usize,
}

/// Parameters of the map family predicted without certification.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiEstimate {
    pub s: f64,
    pub ln_delta: f64,
    pub ln_degree: f64,
}

/// `1 - sigma R` for `R = 1 + delta`, free of cancellation.
fn gap(rho: f64, delta: f64) -> f64 {
    rho * (1.0 + delta) - delta
}

/// `(ln N, N)` with `N` the smallest degree whose tail bound
/// `|y|^{N+1} / ((N+1)(1-|y|))` at `|y| = 1 - u` is below `TAIL_TOL * s`.
fn degree_for(u: f64, s: f64) -> (f64, Option<u128>) {
    let per_term = -(-u).ln_1p();
    let target = -(TAIL_TOL * s).ln() - u.ln();
    let n1 = (target / per_term).ceil().max(2.0);
    let n = n1 - 1.0;
    let exact = if n < 1e38 { Some(n as u128) } else { None };
    (n.ln(), exact)
}

/// `ln` of the tail bound of `p_N` at modulus `1 - u`.
fn ln_tail(u: f64, ln_degree: f64) -> f64 {
    let n1 = ln_degree.exp() + 1.0;
    n1 * (-u).ln_1p() - n1.ln() - u.ln()
}

/// Model radius margin of the untruncated map for a given `s`.
fn model_delta(s: f64, tau: f64) -> f64 {
    let rho = (-s).exp();
    let sigma = -(-s).exp_m1();
    // Re phi <= 1 + tau  <=>  sigma R <= 1 - rho^{1 + tau}
    let d_re = rho * (-(tau * -s).exp_m1()) / sigma;
    // |arg(1 - sigma z)| <= s tau; binding only when s tau < pi/2
    let d_im = if s * tau >= FRAC_PI_2 {
        f64::INFINITY
    } else {
        let one_minus_sin = 2.0 * (PI / 4.0 - s * tau / 2.0).sin().powi(2);
        (rho - one_minus_sin) / sigma
    };
    // Re phi >= -tau  <=>  ln(1 + sigma R) <= s tau
    let d_lo = ((s * tau).exp_m1() - 1.0 + rho) / sigma;
    d_re.min(d_im).min(d_lo)
}

fn s_grid(tau: f64) -> impl Iterator<Item = f64> {
    let sc = FRAC_PI_2 / tau;
    (0..=70).map(move |i| sc * (0.6 + 0.02 * i as f64))
}

/// Predicted `(s, ln delta, ln N)` for very small `tau'`, in log space.
pub fn estimate_phi(tau: f64) -> PhiEstimate {
    let s = FRAC_PI_2 / tau;
    // rho tiny: delta ~ rho (1 - rho^tau), 1 - sigma R ~ rho^{1 + tau}
    let ln_delta = -s + (-(-s * tau).exp_m1()).ln();
    let ln_u = -s * (1.0 + tau);
    let ln_degree = (-(TAIL_TOL * s).ln() - ln_u).ln() - ln_u;
    PhiEstimate { s, ln_delta, ln_degree }
}

struct Certificate {
    margin: f64,
    arcs: usize,
}

impl DiskToRegionMap {
    fn with_params(tau: f64, s: f64, delta: f64) -> Self {
        let rho = (-s).exp();
        let (ln_degree, degree) = degree_for(gap(rho, delta), s);
        DiskToRegionMap {
            tau_prime: tau,
            s,
            rho,
            sigma: -(-s).exp_m1(),
            delta,
            ln_degree,
            degree,
            margin: f64::NAN,
            arcs: 0,
        }
    }

    /// `1 - sigma z` at `z = (1 + delta) e^{i theta}`.
    fn one_minus_sigma_z(&self, theta: f64) -> Complex64 {
        let u = gap(self.rho, self.delta);
        let h = (theta / 2.0).sin();
        Complex64::new(2.0 * h * h + u * theta.cos(), -self.sigma * (1.0 + self.delta) * theta.sin())
    }

    /// Bound on `|phi - (-log(1 - sigma z))/s|` on the boundary circle.
    fn tail_error(&self, log_mod: f64) -> f64 {
        let t_z = ln_tail(gap(self.rho, self.delta), self.ln_degree).exp();
        let t_1 = ln_tail(self.rho, self.ln_degree).exp();
        (t_z + log_mod * t_1 / self.s) / (self.s - t_1)
    }

    fn boundary_value(&self, theta: f64) -> (Complex64, Complex64) {
        let w = self.one_minus_sigma_z(theta);
        (-w.ln() / self.s, w)
    }

    /// Signed distance to the rectangle boundary (positive inside).
    fn inside(&self, p: Complex64) -> f64 {
        let t = self.tau_prime;
        (p.re + t).min(1.0 + t - p.re).min(t - p.im.abs())
    }

    /// Adaptive arc certificate on `theta in [0, pi]`; conjugate symmetry
    /// covers the lower half.
    fn certify(&self, budget: &PhiBudget) -> Result<Certificate, f64> {
        let r = 1.0 + self.delta;
        let need = budget.safety * self.tau_prime;
        let step = PI / budget.samples as f64;
        let mut stack: Vec<(f64, f64)> = (0..budget.samples)
            .rev()
            .map(|i| (i as f64 * step, (i + 1) as f64 * step))
            .collect();
        let mut arcs = 0usize;
        let mut worst = f64::INFINITY;
        while let Some((a, b)) = stack.pop() {
            arcs += 1;
            if arcs > budget.max_arcs {
                return Err(worst);
            }
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let (p, w) = self.boundary_value(mid);
            let m = self.inside(p) - self.tail_error(w.norm().ln().abs() + PI) - EVAL_SLACK;
            worst = worst.min(m);
            if m < 0.0 {
                return Err(worst);
            }
            // |phi'| <= 2 sigma / (|1 - sigma z| p_N(sigma)) along the arc
            let dist = w.norm() - self.sigma * r * half;
            let drift = if dist > 0.0 {
                2.0 * self.sigma * r * half / (dist * self.s * (1.0 - 1e-12))
            } else {
                f64::INFINITY
            };
            if m - drift >= need {
                continue;
            }
            if half * r <= 1e-6 * w.norm() * f64::EPSILON {
                return Err(worst);
            }
            stack.push((mid, b));
            stack.push((a, mid));
        }
        Ok(Certificate { margin: worst, arcs })
    }

    /// `phi(z)` for any `z` (closed form; the truncation tail is below
    /// `1e-20` relative on the certified disk).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        -((one - z) + z * self.rho).ln() / self.s
    }

    /// Largest signed excursion outside the rectangle over `samples` uniform
    /// points of the circle `|z| = 1 + delta` (non-positive when contained).
    pub fn boundary_excursion(&self, samples: usize) -> f64 {
        (0..=samples)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / samples as f64;
                let (p, _) = self.boundary_value(theta);
                -self.inside(p)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Coefficients `phi_0..phi_{len-1}` in the scalar type of `proto`.
    pub fn coeffs<S: Scalar>(&self, proto: &S, len: usize) -> Vec<S> {
        let zero = proto.zero_like();
        let mut out = vec![zero.clone(); len];
        let sigma = proto.one_like().sub(&proto.from_c64(Complex64::new(self.rho, 0.0)));
        let p = proto.from_c64(Complex64::new(self.s, 0.0));
        let top = match self.degree {
            Some(n) => (len.saturating_sub(1) as u128).min(n) as usize,
            None => len.saturating_sub(1),
        };
        let mut pw = proto.one_like();
        for (j, slot) in out.iter_mut().enumerate().take(top + 1).skip(1) {
            pw = pw.mul(&sigma);
            *slot = pw.div(&p.mul_real(j as f64));
        }
        out
    }
}

/// Searches `s` on a grid around `pi / (2 tau')`, then bisects on `delta` for
/// the largest radius whose boundary image certifies inside the rectangle.
pub fn build_phi(tau: f64, budget: &PhiBudget) -> Result<DiskToRegionMap, InterpError> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(InterpError::InvalidArgument(format!("tau' = {tau} must lie in (0, 1)")));
    }
    let mut cands: Vec<(f64, f64)> = s_grid(tau).map(|s| (model_delta(s, tau), s)).filter(|c| c.0 > 0.0).collect();
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best_margin = f64::NEG_INFINITY;
    let mut reason = String::from("no positive radius margin on the parameter grid");
    for &(d_model, s) in cands.iter().take(5) {
        let base = DiskToRegionMap::with_params(tau, s, 0.0);
        if base.ln_degree > budget.max_ln_degree {
            reason = format!("degree N = e^{:.1} exceeds the budget e^{}", base.ln_degree, budget.max_ln_degree);
            continue;
        }
        let mut lo = match base.certify(budget) {
            Ok(c) => (0.0, c),
            Err(m) => {
                best_margin = best_margin.max(m);
                reason = "unit circle image leaves the rectangle".into();
                continue;
            }
        };
        let mut hi = d_model;
        for _ in 0..40 {
            let mid = 0.5 * (lo.0 + hi);
            let cand = DiskToRegionMap::with_params(tau, s, mid);
            if cand.ln_degree > budget.max_ln_degree {
                hi = mid;
                continue;
            }
            match cand.certify(budget) {
                Ok(c) => lo = (mid, c),
                Err(m) => {
                    best_margin = best_margin.max(m);
                    hi = mid;
                }
            }
        }
        if lo.0 > 0.0 {
            let mut map = DiskToRegionMap::with_params(tau, s, lo.0);
            map.margin = lo.1.margin;
            map.arcs = lo.1.arcs;
            return Ok(map);
        }
    }
    Err(InterpError::PhiCertification {
        tau_prime: tau,
        best_margin,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        for tau in [0.9, 0.5, 0.2, 0.05] {
            let phi = build_phi(tau, &PhiBudget::default()).unwrap();
            assert_eq!(phi.eval(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
            assert!((phi.eval(Complex64::new(1.0, 0.0)) - 1.0).norm() <= 1e-12, "tau {tau}");
            assert!(phi.delta > 0.0 && phi.margin > 0.0);
        }
    }

    #[test]
    fn dense_resampling_stays_inside() {
        for tau in [0.5, 0.05] {
            let phi = build_phi(tau, &PhiBudget::default()).unwrap();
            assert!(phi.boundary_excursion(100_000) <= 0.0, "tau {tau}");
        }
    }

    #[test]
    fn radius_is_near_the_conformal_limit() {
        // no holomorphic map of the disk of radius 1 + delta into a strip of
        // half-width tau can send 0 to 0 and 1 to 1 unless
        // delta <= 2 / (e^{pi/(2 tau)} - 1)
        for tau in [0.9, 0.5, 0.2, 0.1, 0.05] {
            let phi = build_phi(tau, &PhiBudget::default()).unwrap();
            let limit = 2.0 / (FRAC_PI_2 / tau).exp_m1();
            assert!(phi.delta <= limit, "tau {tau}");
            assert!(phi.delta >= 0.1 * limit, "tau {tau}: {} vs {limit}", phi.delta);
        }
    }

    #[test]
    fn coefficients_sum_to_one() {
        let phi = build_phi(0.9, &PhiBudget::default()).unwrap();
        let n = phi.degree.unwrap() as usize;
        let c = phi.coeffs(&Complex64::new(0.0, 0.0), n + 1);
        let total: f64 = c.iter().map(|x| x.re).sum();
        assert!((total - 1.0).abs() < 1e-12, "{total}");
        assert_eq!(c[0], Complex64::new(0.0, 0.0));
        // truncated evaluation agrees with the closed form inside the disk
        let z = Complex64::new(0.3, 0.4);
        let horner = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, x| acc * z + x);
        assert!((horner - phi.eval(z)).norm() < 1e-12);
    }

    #[test]
    fn estimate_tracks_the_built_map() {
        for tau in [0.2, 0.05] {
            let phi = build_phi(tau, &PhiBudget::default()).unwrap();
            let est = estimate_phi(tau);
            assert!((phi.delta.ln() - est.ln_delta).abs() < 1.5, "tau {tau}");
            assert!((phi.ln_degree - est.ln_degree).abs() / est.ln_degree < 0.3, "tau {tau}");
        }
    }

    #[test]
    fn rejects_bad_width() {
        assert!(build_phi(0.0, &PhiBudget::default()).is_err());
        assert!(build_phi(1.0, &PhiBudget::default()).is_err());
        // N = e^{Theta(1/tau)} overflows any budget for tiny widths
        assert!(matches!(
            build_phi(1e-3, &PhiBudget::default()),
            Err(InterpError::PhiCertification { .. })
        ));
    }
}
