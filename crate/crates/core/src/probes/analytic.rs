//! Sampled checks of the analytic lemmas on `f_kappa(z) = -ln(1 - kappa e^z)`
//! and of the cone projection bound `|sum z_i| >= cos(alpha/2) sum |z_i|`.

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::ProbeReport;

pub const ANALYTIC_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("need 0 < tau < 1/2, zeta > 0 and tau^2 + e^-zeta < 1; got tau = {tau}, zeta = {zeta}")]
    Domain { tau: f64, zeta: f64 },
    #[error("kappa = {0} is outside [0, 1]")]
    Kappa(f64),
}

fn f(kappa: f64, z: Complex64) -> Complex64 {
    -(Complex64::new(1.0, 0.0) - kappa * z.exp()).ln()
}

fn f_prime(kappa: f64, z: Complex64) -> Complex64 {
    let e = kappa * z.exp();
    e / (1.0 - e)
}

/// Point of `{Re z < -zeta, |Im z| < tau}`; every tenth point is real.
fn sample_z<R: Rng>(rng: &mut R, zeta: f64, tau: f64, real: bool) -> Complex64 {
    let depth = if rng.gen_bool(0.5) {
        3.0 * (1.0 - rng.gen::<f64>())
    } else {
        -5.0 * (1.0 - rng.gen::<f64>()).ln() + f64::MIN_POSITIVE
    };
    let im = if real { 0.0 } else { tau * (2.0 * rng.gen::<f64>() - 1.0) * (1.0 - 1e-12) };
    Complex64::new(-zeta - depth.max(1e-15), im)
}

/// Slack of the two mean-value inequalities for the pair `(z1, z2)`.
fn mean_value_slack(kappa: f64, z1: Complex64, z2: Complex64, rho_r: f64, rho_i: f64) -> (f64, f64) {
    let (df, dz) = (f(kappa, z1) - f(kappa, z2), z1 - z2);
    let r = rho_i * dz.im.abs();
    let real = if dz.re.abs() < 1e-300 {
        df.re.abs() - r
    } else {
        // admissible C solve |df.re - C dz.re| <= r; intersect with [0, rho_r]
        let (a, b) = ((df.re - r) / dz.re, (df.re + r) / dz.re);
        let (lo, hi) = (a.min(b), a.max(b));
        (lo.max(0.0) - hi.min(rho_r)) * dz.re.abs()
    };
    let width = if z1.im * z2.im <= 0.0 { dz.im.abs() } else { z1.im.abs().max(z2.im.abs()) };
    (real, df.im.abs() - rho_r * width)
}

/// Samples `D = {Re z < -zeta, |Im z| < tau}` and checks the bounds on
/// `f'_kappa`, the sign of `Im f_kappa`, the perturbation bound in `kappa`,
/// and both mean-value inequalities on sampled pairs.
pub fn fkappa_bounds_probe(kappa: f64, zeta: f64, tau: f64, samples: usize, seed: u64) -> Result<ProbeReport, AnalyticError> {
    if !(tau > 0.0 && tau < 0.5 && zeta > 0.0 && tau * tau + (-zeta).exp() < 1.0) {
        return Err(AnalyticError::Domain { tau, zeta });
    }
    if !(0.0..=1.0).contains(&kappa) {
        return Err(AnalyticError::Kappa(kappa));
    }
    let e = (-zeta).exp();
    let rho_r = e / (1.0 - e);
    let rho_i = tau * e / ((1.0 - e) * (1.0 - e));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbeReport::new("fkappa", format!("kappa={kappa}, zeta={zeta:.6}, tau={tau}"), ANALYTIC_TOL, Some(seed));
    let mut worst = [f64::NEG_INFINITY; 7];
    let mut put = |k: usize, v: f64, report: &mut ProbeReport| {
        worst[k] = worst[k].max(v);
        report.record(v);
    };
    let mut prev = sample_z(&mut rng, zeta, tau, false);
    for s in 0..samples {
        let z = sample_z(&mut rng, zeta, tau, s % 10 == 0);
        let d = f_prime(kappa, z);
        put(0, -d.re, &mut report);
        put(1, d.re - rho_r, &mut report);
        put(2, d.im.abs() - rho_i, &mut report);
        let fi = f(kappa, z).im;
        let sign = if z.im > 0.0 {
            -fi
        } else if z.im < 0.0 {
            fi
        } else {
            fi.abs()
        };
        put(3, sign, &mut report);
        let eps = (e.recip() - 1.0) * rng.gen_range(1e-6..0.95);
        let kappa2 = kappa + eps * (2.0 * rng.gen::<f64>() - 1.0) * (1.0 - 1e-12);
        put(4, (f(kappa2, z) - f(kappa, z)).norm() - eps / (e.recip() - 1.0 - eps), &mut report);
        let partner = match s % 3 {
            0 => Complex64::new(prev.re, z.im),
            1 => Complex64::new(z.re, prev.im),
            _ => prev,
        };
        let (m1, m2) = mean_value_slack(kappa, z, partner, rho_r, rho_i);
        put(5, m1, &mut report);
        put(6, m2, &mut report);
        prev = z;
    }
    let names = ["Re f' >= 0", "Re f' <= rho_R", "|Im f'| <= rho_I", "sign Im f", "kappa perturbation", "mean value (real)", "mean value (imaginary)"];
    report.note(format!("rho_R = {rho_r:.6}, rho_I = {rho_i:.6e}"));
    report.note(
        names
            .iter()
            .zip(worst.iter())
            .map(|(n, w)| format!("{n}: {w:.3e}"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    Ok(report)
}

/// A fixed set of domains, including `kappa = 1, zeta = ln 3, tau = 0.01`
/// where `rho_R = 1/2`.
pub fn fkappa_suite(seed: u64, samples: usize) -> Vec<ProbeReport> {
    let configs = [
        (1.0, 3f64.ln(), 0.01),
        (0.0, 1.0, 0.3),
        (0.5, 0.5, 0.4),
        (0.9, 2.0, 0.49),
        (1.0, 0.1, 0.2),
    ];
    configs
        .iter()
        .enumerate()
        .map(|(t, &(k, z, tau))| fkappa_bounds_probe(k, z, tau, samples, seed.wrapping_add(t as u64)).expect("valid domain"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricCheck {
    /// Largest pairwise angle between non-zero entries.
    pub alpha: f64,
    /// `alpha < pi/2`, so the bound applies.
    pub applicable: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs >= rhs - 1e-12`; inapplicable inputs report `true`.
    pub holds: bool,
}

/// Measures the cone angle of `zs` and compares `|sum z_i|` with
/// `cos(alpha/2) sum |z_i|`.
pub fn geometric_proj_check(zs: &[Complex64]) -> GeometricCheck {
    let nz: Vec<Complex64> = zs.iter().copied().filter(|z| z.norm() > 0.0).collect();
    let mut alpha: f64 = 0.0;
    for (a, x) in nz.iter().enumerate() {
        for y in &nz[a + 1..] {
            alpha = alpha.max((x * y.conj()).arg().abs());
        }
    }
    let lhs = zs.iter().sum::<Complex64>().norm();
    let rhs = (alpha / 2.0).cos() * zs.iter().map(|z| z.norm()).sum::<f64>();
    let applicable = alpha < std::f64::consts::FRAC_PI_2;
    GeometricCheck {
        alpha,
        applicable,
        lhs,
        rhs,
        holds: !applicable || lhs >= rhs - ANALYTIC_TOL,
    }
}

/// Random cones of half-opening at most 0.75, up to 8 vectors each, some of
/// them zero.
pub fn geometry_probe(seed: u64, samples: usize) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbeReport::new("geometry", "random cones, alpha <= 1.5", 0.0, Some(seed));
    let mut inapplicable = 0;
    for _ in 0..samples {
        let width = 1.5 * rng.gen::<f64>();
        let centre = std::f64::consts::TAU * rng.gen::<f64>();
        let n = rng.gen_range(1..=8);
        let zs: Vec<Complex64> = (0..n)
            .map(|_| {
                let r = if rng.gen_bool(0.1) { 0.0 } else { rng.gen::<f64>() };
                Complex64::from_polar(r, centre + width * (rng.gen::<f64>() - 0.5))
            })
            .collect();
        let c = geometric_proj_check(&zs);
        if c.applicable {
            report.record(c.rhs - ANALYTIC_TOL - c.lhs);
        } else {
            inapplicable += 1;
        }
    }
    if inapplicable > 0 {
        report.note(format!("{inapplicable} inapplicable cones"));
    }
    report
}
