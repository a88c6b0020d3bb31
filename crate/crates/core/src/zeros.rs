//! Complex zeros of partition-function polynomials.
//!
//! The polynomial is first split exactly into square-free factors over the
//! rationals (Yun's algorithm), so every factor has simple roots and the
//! multiplicities are exact. Each factor is solved by Aberth–Ehrlich
//! iteration on max-normalized double coefficients and polished by Newton
//! steps; residuals are measured on the original integer polynomial at 256
//! bits.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::MonoEdgePoly;
use crate::numeric::{rational_to_f64, ser_complex, HpComplex, Scalar};

/// Roots closer than this (relative to `max(1, |z|)`) are merged and flagged.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Tolerance for matching a root with the conjugate of another.
pub const PAIR_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 1000;
const RESIDUAL_BITS: usize = 256;
const POLISH_STEPS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeroError {
    #[error("polynomial has degree {0}; need at least 1")]
    DegreeTooSmall(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct Root {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub multiplicity: usize,
    /// `|p(value)| / max_j |p_j|`.
    pub residual: f64,
    /// Several numerically distinct roots were merged into this one.
    pub cluster: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSet {
    pub degree: usize,
    pub roots: Vec<Root>,
    /// Every factor met the convergence test before the iteration cap.
    pub converged: bool,
    pub iterations: usize,
    /// Largest distance from a root to the nearest conjugate of a root.
    pub pairing_defect: f64,
}

impl RootSet {
    pub fn values(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    pub fn multiplicity_sum(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Distance from `z` to the closed real segment `[0, 1]`.
pub fn segment_distance(z: Complex64) -> f64 {
    let x = z.re.clamp(0.0, 1.0);
    Complex64::new(z.re - x, z.im).norm()
}

/// Minimum distance of the roots to `[0, 1]`; `+inf` for no roots.
pub fn clearance(roots: &[Complex64]) -> f64 {
    roots.iter().map(|&z| segment_distance(z)).fold(f64::INFINITY, f64::min)
}

/// All complex roots of a monochromatic-edge polynomial.
pub fn roots(p: &MonoEdgePoly) -> Result<RootSet, ZeroError> {
    roots_with(p, DEFAULT_MAX_ITER)
}

/// [`roots`] with a cap on Aberth iterations per square-free factor.
pub fn roots_with(p: &MonoEdgePoly, max_iter: usize) -> Result<RootSet, ZeroError> {
    let c: Vec<BigRational> = p.coeffs.iter().map(|c| BigRational::from_integer(BigInt::from(c.clone()))).collect();
    roots_rational_with(&c, max_iter)
}

/// All complex roots of `sum_j c[j] w^j`.
pub fn roots_rational(c: &[BigRational]) -> Result<RootSet, ZeroError> {
    roots_rational_with(c, DEFAULT_MAX_ITER)
}

pub fn roots_rational_with(c: &[BigRational], max_iter: usize) -> Result<RootSet, ZeroError> {
    let p = trim(c.to_vec());
    let degree = p.len().saturating_sub(1);
    if degree < 1 {
        return Err(ZeroError::DegreeTooSmall(degree));
    }
    let mut raw: Vec<(Complex64, usize)> = Vec::new();
    let mut converged = true;
    let mut iterations = 0;
    for (mult, factor) in squarefree_factors(&p) {
        let zero_mult = factor.iter().take_while(|x| x.is_zero()).count();
        if zero_mult > 0 {
            raw.push((Complex64::new(0.0, 0.0), mult));
        }
        let f = &factor[zero_mult..];
        if f.len() < 2 {
            continue;
        }
        let fc = normalized(f);
        let (zs, ok, it) = aberth(&fc, max_iter);
        converged &= ok;
        iterations = iterations.max(it);
        for z in zs {
            raw.push((polish(&fc, z), mult));
        }
    }
    let scale = p.iter().map(|x| rational_to_f64(&x.abs())).fold(0.0, f64::max);
    let hp: Vec<HpComplex> = {
        let proto = HpComplex::new(RESIDUAL_BITS, 0.0, 0.0);
        p.iter().map(|x| proto.from_rational(x)).collect()
    };
    let roots = merge_clusters(raw)
        .into_iter()
        .map(|(value, multiplicity, cluster)| Root {
            value,
            multiplicity,
            residual: eval_hp(&hp, value).abs() / scale,
            cluster,
        })
        .collect::<Vec<_>>();
    let values: Vec<Complex64> = roots.iter().map(|r| r.value).collect();
    Ok(RootSet {
        degree,
        pairing_defect: pairing_defect(&values),
        roots,
        converged,
        iterations,
    })
}

fn eval_hp(c: &[HpComplex], z: Complex64) -> HpComplex {
    let w = c[0].from_c64(z);
    let mut acc = w.zero_like();
    for x in c.iter().rev() {
        acc = acc.mul(&w).add(x);
    }
    acc
}

fn pairing_defect(zs: &[Complex64]) -> f64 {
    zs.iter()
        .map(|z| zs.iter().map(|y| (z.conj() - y).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

fn merge_clusters(raw: Vec<(Complex64, usize)>) -> Vec<(Complex64, usize, bool)> {
    let mut groups: Vec<Vec<(Complex64, usize)>> = Vec::new();
    for (z, m) in raw {
        let near = groups
            .iter_mut()
            .find(|g| g.iter().any(|(y, _)| (z - y).norm() <= CLUSTER_TOL * z.norm().max(1.0)));
        match near {
            Some(g) => g.push((z, m)),
            None => groups.push(vec![(z, m)]),
        }
    }
    let mut out: Vec<(Complex64, usize, bool)> = groups
        .into_iter()
        .map(|g| {
            let mult: usize = g.iter().map(|(_, m)| m).sum();
            let centre = g.iter().map(|(z, m)| z * *m as f64).sum::<Complex64>() / mult as f64;
            (centre, mult, g.len() > 1)
        })
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j)))
        .collect()
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|j| a.get(j).unwrap_or(&z) - b.get(j).unwrap_or(&z)).collect())
}

/// Quotient and remainder of polynomial division; `b` must be non-zero.
fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let t = r.last().unwrap() / b.last().unwrap();
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &t * bj;
        }
        q[shift] = t;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: Vec<BigRational>) -> Vec<BigRational> {
    let lead = p.last().cloned().unwrap_or_else(BigRational::one);
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

/// `(multiplicity, factor)` pairs with `p = lead * prod factor^multiplicity`.
fn squarefree_factors(p: &[BigRational]) -> Vec<(usize, Vec<BigRational>)> {
    let dp = derivative(p);
    let a0 = gcd(p, &dp);
    let mut b = divrem(p, &a0).0;
    let mut c = divrem(&dp, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut mult = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        if a.len() > 1 {
            out.push((mult, a.clone()));
        }
        b = divrem(&b, &a).0;
        c = divrem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        mult += 1;
    }
    out
}

fn normalized(p: &[BigRational]) -> Vec<Complex64> {
    let max = p.iter().map(|x| x.abs()).max().expect("non-empty");
    p.iter().map(|x| Complex64::new(rational_to_f64(&(x / &max)), 0.0)).collect()
}

fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Aberth–Ehrlich iteration for a polynomial with non-zero constant term. A
/// root is frozen once its step is at rounding level or `|p(z)|` falls within
/// rounding error of `sum_j |c_j| |z|^j`.
fn aberth(c: &[Complex64], max_iter: usize) -> (Vec<Complex64>, bool, usize) {
    let n = c.len() - 1;
    let r = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut frozen = vec![false; n];
    for it in 1..=max_iter {
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(c, z[i]);
            let bound = 8.0 * f64::EPSILON * (n as f64 + 1.0) * majorant(c, z[i].norm());
            if p.norm() <= bound {
                frozen[i] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                    frozen[i] = true;
                }
            }
        }
        if frozen.iter().all(|&f| f) {
            return (z, true, it);
        }
    }
    (z, false, max_iter)
}

fn majorant(c: &[Complex64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut best = eval_with_derivative(c, z).0.norm();
    for _ in 0..POLISH_STEPS {
        let (p, dp) = eval_with_derivative(c, z);
        let next = z - p / dp;
        if !next.is_finite() {
            break;
        }
        let r = eval_with_derivative(c, next).0.norm();
        if r >= best {
            break;
        }
        best = r;
        z = next;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigUint;

    fn poly(c: &[u64]) -> MonoEdgePoly {
        MonoEdgePoly { coeffs: c.iter().map(|&x| BigUint::from(x)).collect() }
    }

    fn rat(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn single_edge_root() {
        let r = roots(&poly(&[2, 2])).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0].value - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((clearance(&r.values()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn k3_roots() {
        let r = roots(&poly(&[6, 18, 0, 3])).unwrap();
        assert_eq!(r.multiplicity_sum(), 3);
        // w^3 + 6w + 2 = 0 by bisection on the real root
        let (mut lo, mut hi) = (-1.0f64, 0.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid.powi(3) + 6.0 * mid + 2.0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let real: Vec<_> = r.roots.iter().filter(|x| x.value.im.abs() < 1e-12).collect();
        assert_eq!(real.len(), 1);
        assert!((real[0].value.re - lo).abs() < 1e-13);
        assert!((lo + 0.327).abs() < 1e-3);
        assert!((clearance(&r.values()) + lo).abs() < 1e-13);
        assert!(r.pairing_defect < PAIR_TOL);
        assert!(r.max_residual() < 1e-12);
        // no w^2 term, so the roots sum to zero
        let s: Complex64 = r.values().iter().sum();
        assert!(s.norm() < 1e-13);
    }

    #[test]
    fn factored_quadratic() {
        let r = roots_rational(&rat(&[1, -3, 2])).unwrap();
        let v = r.values();
        assert!((v[0] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((v[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(clearance(&v), 0.0);
    }

    #[test]
    fn exact_multiplicities() {
        // (w + 2)^3 (w - 1)^2 w
        let base = rat(&[2, 1]);
        let mut p = rat(&[0, 1]);
        let mul = |a: &[BigRational], b: &[BigRational]| {
            let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        for _ in 0..3 {
            p = mul(&p, &base);
        }
        for _ in 0..2 {
            p = mul(&p, &rat(&[-1, 1]));
        }
        let r = roots_rational(&p).unwrap();
        let got: Vec<(f64, usize)> = r.roots.iter().map(|x| (x.value.re, x.multiplicity)).collect();
        assert_eq!(got.len(), 3);
        assert!((got[0].0 + 2.0).abs() < 1e-14 && got[0].1 == 3);
        assert!(got[1].0.abs() < 1e-14 && got[1].1 == 1);
        assert!((got[2].0 - 1.0).abs() < 1e-14 && got[2].1 == 2);
        assert!(r.roots.iter().all(|x| !x.cluster));
        assert_eq!(r.multiplicity_sum(), 6);
    }

    #[test]
    fn near_double_root_is_flagged() {
        // (w - 1)(w - 1 - 1e-9) scaled to integers
        let p = vec![
            BigRational::new(BigInt::from(1_000_000_001i64), BigInt::from(1_000_000_000i64)),
            BigRational::new(BigInt::from(-2_000_000_001i64), BigInt::from(1_000_000_000i64)),
            BigRational::one(),
        ];
        let r = roots_rational(&p).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!(r.roots[0].cluster);
        assert_eq!(r.roots[0].multiplicity, 2);
    }

    #[test]
    fn clearance_cases() {
        assert_eq!(clearance(&[]), f64::INFINITY);
        assert!((clearance(&[Complex64::new(0.5, 0.2)]) - 0.2).abs() < 1e-15);
        assert!((clearance(&[Complex64::new(1.3, -0.4)]) - 0.5).abs() < 1e-15);
        assert!(roots(&poly(&[7])).is_err());
    }

    #[test]
    fn wilkinson_like_degree_twelve() {
        // prod_{k=1}^{12} (w + k)
        let mut p = rat(&[1]);
        for k in 1..=12 {
            let mut next = vec![BigRational::zero(); p.len() + 1];
            for (i, x) in p.iter().enumerate() {
                next[i] += x * BigRational::from_integer(BigInt::from(k));
                next[i + 1] += x;
            }
            p = next;
        }
        let r = roots_rational(&p).unwrap();
        assert!(r.converged);
        for (k, root) in r.roots.iter().enumerate() {
            assert!((root.value.re + (12 - k) as f64).abs() < 1e-8, "{:?}", root.value);
        }
    }
}
