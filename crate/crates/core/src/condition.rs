//! The large-lists condition and its triangle-free constants.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ListGraph, Vertex};

const BISECTION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConditionError {
    #[error("alpha = {0} does not exceed alpha* = {1}; no finite beta exists")]
    AlphaTooSmall(f64, f64),
    #[error("beta = {beta} is below 2*alpha = {}", 2.0 * alpha)]
    BetaBelowTwoAlpha { alpha: f64, beta: f64 },
    #[error("alpha = {alpha}, beta = {beta} violate alpha*exp(-(1+1/beta)/alpha) >= 1")]
    ExponentialBound { alpha: f64, beta: f64 },
}

/// Which item of the large-lists condition to check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ConditionVariant {
    /// `|L(v)| >= max(2, 2 deg(v))` for every unpinned vertex.
    TwoDeg,
    /// Triangle-free and `|L(v)| >= alpha deg(v) + beta` for every unpinned vertex.
    TriangleFree { alpha: f64, beta: f64 },
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub variant: ConditionVariant,
    pub satisfied: bool,
    /// `(vertex, |L(v)| - required)` for every unpinned vertex.
    pub slack: Vec<(Vertex, f64)>,
    /// `Some(..)` for the triangle-free variant.
    pub triangle: Option<[Vertex; 3]>,
}

/// Root of `x e^{-1/x} = 1`, i.e. of `x ln x = 1`.
pub fn alpha_star() -> f64 {
    let f = |x: f64| x * x.ln() - 1.0;
    bisect(f, 1.0, 3.0)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    debug_assert!(flo * f(hi) <= 0.0);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if (f(mid) <= 0.0) == (flo <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn exp_bound(alpha: f64, beta: f64) -> f64 {
    alpha * (-(1.0 + 1.0 / beta) / alpha).exp()
}

/// Smallest `beta >= 2 alpha` with `alpha e^{-(1+1/beta)/alpha} >= 1`.
pub fn min_beta(alpha: f64) -> Result<f64, ConditionError> {
    let astar = alpha_star();
    if !(alpha > astar) {
        return Err(ConditionError::AlphaTooSmall(alpha, astar));
    }
    let lo = 2.0 * alpha;
    if exp_bound(alpha, lo) >= 1.0 {
        return Ok(lo);
    }
    // exp_bound increases in beta towards alpha e^{-1/alpha} > 1
    let mut hi = 2.0 * lo;
    while exp_bound(alpha, hi) < 1.0 {
        hi *= 2.0;
    }
    let b = bisect(|b| exp_bound(alpha, b) - 1.0, lo, hi);
    // report the upper end of the final bracket so the inequality holds
    Ok(if exp_bound(alpha, b) >= 1.0 { b } else { b + BISECTION_TOL })
}

/// Validates a triangle-free `(alpha, beta)` pair.
pub fn validate_alpha_beta(alpha: f64, beta: f64) -> Result<(), ConditionError> {
    let astar = alpha_star();
    if !(alpha > astar) {
        return Err(ConditionError::AlphaTooSmall(alpha, astar));
    }
    if !(beta >= 2.0 * alpha) {
        return Err(ConditionError::BetaBelowTwoAlpha { alpha, beta });
    }
    if !(exp_bound(alpha, beta) >= 1.0) {
        return Err(ConditionError::ExponentialBound { alpha, beta });
    }
    Ok(())
}

/// Some triangle of `g`, by neighbor intersection.
pub fn find_triangle(g: &ListGraph) -> Option<[Vertex; 3]> {
    for &(a, b) in g.edges() {
        let (na, nb) = (g.neighbors(a), g.neighbors(b));
        let (mut i, mut j) = (0, 0);
        while i < na.len() && j < nb.len() {
            match na[i].cmp(&nb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some([a, b, na[i]]),
            }
        }
    }
    None
}

/// Checks one item of the large-lists condition. Only unpinned vertices carry
/// a list requirement.
pub fn check_large_lists(g: &ListGraph, variant: ConditionVariant) -> Result<ConditionReport, ConditionError> {
    let required: Box<dyn Fn(usize) -> f64> = match variant {
        ConditionVariant::TwoDeg => Box::new(|d| (2.0f64).max(2.0 * d as f64)),
        ConditionVariant::TriangleFree { alpha, beta } => {
            validate_alpha_beta(alpha, beta)?;
            Box::new(move |d| alpha * d as f64 + beta)
        }
        ConditionVariant::None => Box::new(|_| 0.0),
    };
    let slack: Vec<(Vertex, f64)> = g
        .unpinned()
        .map(|v| (v, g.list(v).len() as f64 - required(g.degree(v))))
        .collect();
    let lists_ok = slack.iter().all(|&(_, s)| s >= 0.0);
    let triangle = match variant {
        ConditionVariant::TriangleFree { .. } => find_triangle(g),
        _ => None,
    };
    let satisfied = match variant {
        ConditionVariant::None => false,
        ConditionVariant::TwoDeg => lists_ok,
        ConditionVariant::TriangleFree { .. } => lists_ok && triangle.is_none(),
    };
    Ok(ConditionReport {
        variant,
        satisfied,
        slack,
        triangle,
    })
}

/// Default triangle-free parameters: `alpha = 1.8` with its minimal beta.
pub fn default_triangle_free() -> ConditionVariant {
    let alpha = 1.8;
    ConditionVariant::TriangleFree {
        alpha,
        beta: min_beta(alpha).expect("1.8 exceeds alpha*"),
    }
}

/// First satisfied variant among two-deg and the default triangle-free pair.
pub fn satisfied_variant(g: &ListGraph) -> Option<ConditionVariant> {
    [ConditionVariant::TwoDeg, default_triangle_free()]
        .into_iter()
        .find(|&v| check_large_lists(g, v).map(|r| r.satisfied).unwrap_or(false))
}

/// Uniformly large lists: every unpinned list has at least `2 Delta` colors.
pub fn has_uniformly_large_lists(g: &ListGraph) -> bool {
    let delta = g.max_degree().max(1);
    g.unpinned().all(|v| g.list(v).len() >= 2 * delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize, q: u32) -> ListGraph {
        let mut e = vec![];
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        ListGraph::uniform(n, q, &e).unwrap()
    }

    fn cycle(n: usize, q: u32) -> ListGraph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ListGraph::uniform(n, q, &e).unwrap()
    }

    #[test]
    fn alpha_star_bracket() {
        let a = alpha_star();
        assert!((1.763..=1.764).contains(&a), "{a}");
        assert!((a * (-1.0 / a).exp() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn min_beta_matches_closed_form() {
        // alpha e^{-(1+1/b)/alpha} = 1  <=>  b = 1 / (alpha ln alpha - 1)
        for &alpha in &[1.77, 1.8, 1.9, 2.0, 2.5, 3.0] {
            let closed: f64 = (1.0 / (alpha * f64::ln(alpha) - 1.0)).max(2.0 * alpha);
            let b = min_beta(alpha).unwrap();
            assert!((b - closed).abs() < 1e-9, "{alpha}: {b} vs {closed}");
            assert!(b >= 3.5);
            assert!(validate_alpha_beta(alpha, b).is_ok());
        }
        assert!((min_beta(1.8).unwrap() - 17.2366).abs() < 1e-3);
        assert!(min_beta(1.7).is_err());
    }

    #[test]
    fn two_deg_examples() {
        assert!(check_large_lists(&complete(4, 6), ConditionVariant::TwoDeg).unwrap().satisfied);
        let r = check_large_lists(&complete(3, 3), ConditionVariant::TwoDeg).unwrap();
        assert!(!r.satisfied);
        assert!(r.slack.iter().all(|&(_, s)| s == -1.0));
    }

    #[test]
    fn triangle_free_examples() {
        let tf = ConditionVariant::TriangleFree { alpha: 1.8, beta: 17.3 };
        assert!(check_large_lists(&cycle(5, 21), tf).unwrap().satisfied);
        assert!(!check_large_lists(&cycle(5, 20), tf).unwrap().satisfied);
        let r = check_large_lists(&complete(3, 30), tf).unwrap();
        assert!(!r.satisfied);
        assert!(r.triangle.is_some());
        let bad = ConditionVariant::TriangleFree { alpha: 1.8, beta: 10.0 };
        assert!(matches!(
            check_large_lists(&cycle(5, 21), bad),
            Err(ConditionError::ExponentialBound { .. })
        ));
    }

    #[test]
    fn triangle_search_agrees_with_brute_force() {
        let g = complete(4, 1);
        assert!(find_triangle(&g).is_some());
        assert!(find_triangle(&cycle(6, 1)).is_none());
        assert!(find_triangle(&cycle(3, 1)).is_some());
    }
}
