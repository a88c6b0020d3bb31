//! Truncated power series: exact log/exp transforms and floating composition.
//!
//! The log and exp transforms are tied together by the Newton recurrence
//! `j a_j = sum_{i=1}^{j} i c_i a_{j-i}`, where `a` are the coefficients of a
//! series with `a_0 != 0` and `c` those of `log(a(x) / a_0)`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numeric::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term is zero; the logarithm is undefined")]
    ZeroConstant,
    #[error("coefficient {0} of the exponential is not an integer")]
    NonIntegral(usize),
}

/// Coefficients `c_1..c_k` of `log(a(x)/a_0)`; `c[0]` holds `c_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogSeries {
    #[serde(serialize_with = "ser_rationals")]
    pub c: Vec<BigRational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| format!("{}/{}", r.numer(), r.denom())))
}

impl LogSeries {
    pub fn order(&self) -> usize {
        self.c.len()
    }

    /// `c_j` for `j >= 1`.
    pub fn coeff(&self, j: usize) -> &BigRational {
        &self.c[j - 1]
    }

    /// Termwise sum; the log of a product.
    pub fn add(&self, other: &LogSeries) -> LogSeries {
        let n = self.c.len().max(other.c.len());
        let get = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
        LogSeries {
            c: (0..n).map(|i| get(&self.c, i) + get(&other.c, i)).collect(),
        }
    }
}

/// `log(a(x)/a_0)` to the order of `a` (`a.len() - 1` terms).
pub fn log_series(a: &[BigInt]) -> Result<LogSeries, SeriesError> {
    let a: Vec<BigRational> = a.iter().cloned().map(BigRational::from_integer).collect();
    log_series_rational(&a)
}

pub fn log_series_rational(a: &[BigRational]) -> Result<LogSeries, SeriesError> {
    let a0 = a.first().ok_or(SeriesError::ZeroConstant)?;
    if a0.is_zero() {
        return Err(SeriesError::ZeroConstant);
    }
    let k = a.len() - 1;
    let mut c: Vec<BigRational> = Vec::with_capacity(k);
    for j in 1..=k {
        // j c_j a_0 = j a_j - sum_{i=1}^{j-1} i c_i a_{j-i}
        let mut acc = &a[j] * BigRational::from_integer(BigInt::from(j));
        for i in 1..j {
            acc -= &c[i - 1] * &a[j - i] * BigRational::from_integer(BigInt::from(i));
        }
        c.push(acc / (a0 * BigRational::from_integer(BigInt::from(j))));
    }
    Ok(LogSeries { c })
}

/// `a_0 exp(sum c_j x^j)` to order `c.len()`, as rationals.
pub fn exp_series_rational(c: &LogSeries, a0: &BigRational) -> Vec<BigRational> {
    let k = c.c.len();
    let mut a = Vec::with_capacity(k + 1);
    a.push(a0.clone());
    for j in 1..=k {
        let mut acc = BigRational::zero();
        for i in 1..=j {
            acc += &c.c[i - 1] * &a[j - i] * BigRational::from_integer(BigInt::from(i));
        }
        a.push(acc / BigRational::from_integer(BigInt::from(j)));
    }
    a
}

/// Inverse of [`log_series`]; fails if a coefficient is not an integer.
pub fn exp_series(c: &LogSeries, a0: &BigInt) -> Result<Vec<BigInt>, SeriesError> {
    exp_series_rational(c, &BigRational::from_integer(a0.clone()))
        .into_iter()
        .enumerate()
        .map(|(j, r)| {
            if r.denom().is_one() {
                Ok(r.to_integer())
            } else {
                Err(SeriesError::NonIntegral(j))
            }
        })
        .collect()
}

/// Product of two series truncated to `len` terms.
pub fn mul_trunc<S: Scalar>(a: &[S], b: &[S], len: usize) -> Vec<S> {
    let zero = a.first().or(b.first()).map(|x| x.zero_like());
    let Some(zero) = zero else { return Vec::new() };
    let mut out = vec![zero; len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// `g(phi(z)) mod z^{k+1}` for `phi(0) = 0`, by Horner's rule in `g`.
/// Only `g[0..=k]` matter; the cost is `deg g` truncated products.
pub fn compose_series<S: Scalar>(g: &[S], phi: &[S], k: usize) -> Vec<S> {
    assert!(!g.is_empty(), "empty outer series");
    let zero = g[0].zero_like();
    debug_assert!(phi.first().map_or(true, |p| p.is_zero()), "phi(0) must vanish");
    let top = g.len().min(k + 1);
    let phi: Vec<S> = phi.iter().take(k + 1).cloned().collect();
    let mut acc = vec![zero.clone(); k + 1];
    for gj in g[..top].iter().rev() {
        acc = mul_trunc(&acc, &phi, k + 1);
        acc[0] = acc[0].add(gj);
    }
    acc
}

/// `log(f(z)/f_0)` coefficients `c_1..c_k` of a floating series.
pub fn log_series_float<S: Scalar>(f: &[S]) -> Result<Vec<S>, SeriesError> {
    let f0 = f.first().ok_or(SeriesError::ZeroConstant)?;
    if f0.is_zero() {
        return Err(SeriesError::ZeroConstant);
    }
    let k = f.len() - 1;
    let mut c: Vec<S> = Vec::with_capacity(k);
    for j in 1..=k {
        let mut acc = f[j].mul_real(j as f64);
        for i in 1..j {
            acc = acc.sub(&c[i - 1].mul(&f[j - i]).mul_real(i as f64));
        }
        c.push(acc.div(&f0.mul_real(j as f64)));
    }
    Ok(c)
}
