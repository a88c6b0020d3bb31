//! Exhaustive enumeration of list colorings.
//!
//! [`exact_poly`] counts assignments by their number of monochromatic edges.
//! [`ColorResolved`] additionally splits the count by the color of every
//! vertex, which is all that restricted partition functions, marginals and
//! marginal ratios need.

use num::bigint::BigUint;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Color, GraphError, ListGraph, Vertex};
use crate::numeric::Scalar;

/// Default cap on the number of enumerated assignments.
pub const DEFAULT_ENUM_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration needs {needed} assignments, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u128 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("ill-defined at this w: {0} vanishes")]
    IllDefined(String),
}

/// `coeffs[j]` is the number of assignments with exactly `j` monochromatic
/// edges, so that `Z(w) = sum_j coeffs[j] w^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoEdgePoly {
    #[serde(serialize_with = "ser_decimal")]
    pub coeffs: Vec<BigUint>,
}

fn ser_decimal<S: serde::Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl MonoEdgePoly {
    fn from_counts(counts: &[u64]) -> Self {
        let mut coeffs: Vec<BigUint> = counts.iter().map(|&c| BigUint::from(c)).collect();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        MonoEdgePoly { coeffs }
    }

    pub fn zero() -> Self {
        MonoEdgePoly { coeffs: vec![BigUint::zero()] }
    }

    /// Index of the highest non-zero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Value at `w = 1`, the number of assignments.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Horner evaluation in any scalar type; `w` also fixes the precision.
    pub fn eval<S: Scalar>(&self, w: &S) -> S {
        let mut acc = w.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(w).add(&w.from_biguint(c));
        }
        acc
    }

    pub fn eval_c64(&self, w: Complex64) -> Complex64 {
        self.eval(&w)
    }

    pub fn eval_rational(&self, w: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * w + BigRational::from_integer(BigInt::from(c.clone()));
        }
        acc
    }

    /// `sum_j coeffs[j] r^j`, the modulus majorant at `|w| = r`.
    pub fn majorant(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + crate::numeric::biguint_to_f64(c))
    }

    /// Coefficients of `Z(1 + x)`.
    pub fn shift_by_one(&self) -> Vec<BigUint> {
        let n = self.coeffs.len();
        let mut out = vec![BigUint::zero(); n];
        // binomial re-expansion, row by row of Pascal's triangle
        let mut row = vec![BigUint::one()];
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                let mut next = vec![BigUint::one(); j + 1];
                for t in 1..j {
                    next[t] = &row[t - 1] + &row[t];
                }
                row = next;
            }
            for (t, b) in row.iter().enumerate() {
                out[t] += c * b;
            }
        }
        out
    }
}

fn check_budget(g: &ListGraph, budget: u128) -> Result<(), OracleError> {
    match g.assignment_count() {
        Some(n) if n <= budget => Ok(()),
        Some(n) => Err(OracleError::BudgetExceeded {
            needed: n.to_string(),
            budget,
        }),
        None => Err(OracleError::BudgetExceeded {
            needed: "more than 2^128".into(),
            budget,
        }),
    }
}

/// Histogram layout: the plain count by monochromatic edges, plus (when
/// resolved) one histogram per `(vertex, color index)` pair.
struct Tally {
    width: usize,
    offsets: Vec<usize>,
    resolved: bool,
    plain: Vec<u64>,
    split: Vec<u64>,
}

impl Tally {
    fn new(g: &ListGraph, resolved: bool) -> Self {
        let width = g.edge_count() + 1;
        let mut offsets = Vec::with_capacity(g.vertex_count());
        let mut total = 0;
        for v in 0..g.vertex_count() {
            offsets.push(total);
            total += g.effective_list(v).len() * width;
        }
        Tally {
            width,
            offsets,
            resolved,
            plain: vec![0; width],
            split: if resolved { vec![0; total] } else { Vec::new() },
        }
    }

    #[inline]
    fn record(&mut self, mono: usize, cidx: &[usize]) {
        self.plain[mono] += 1;
        if self.resolved {
            for (v, &ci) in cidx.iter().enumerate() {
                self.split[self.offsets[v] + ci * self.width + mono] += 1;
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.plain.iter_mut().zip(other.plain) {
            *a += b;
        }
        for (a, b) in self.split.iter_mut().zip(other.split) {
            *a += b;
        }
        self
    }
}

/// Mixed-radix odometer over the unpinned vertices with an incrementally
/// maintained monochromatic-edge count.
fn enumerate(g: &ListGraph, resolved: bool) -> Tally {
    let free: Vec<Vertex> = g.unpinned().collect();
    let base_col: Vec<Color> = (0..g.vertex_count()).map(|v| g.effective_list(v)[0]).collect();
    let mono_of = |col: &[Color]| g.edges().iter().filter(|&&(a, b)| col[a] == col[b]).count();
    let Some((&outer, rest)) = free.split_first() else {
        let mut t = Tally::new(g, resolved);
        t.record(mono_of(&base_col), &vec![0; g.vertex_count()]);
        return t;
    };
    let outer_list = g.list(outer);
    (0..outer_list.len())
        .into_par_iter()
        .map(|c0| {
            let mut tally = Tally::new(g, resolved);
            let mut col = base_col.clone();
            let mut cidx = vec![0usize; g.vertex_count()];
            col[outer] = outer_list[c0];
            cidx[outer] = c0;
            let mut mono = mono_of(&col);
            let recolor = |col: &mut Vec<Color>, mono: &mut usize, v: Vertex, new: Color| {
                let old = col[v];
                for &u in g.neighbors(v) {
                    if col[u] == old {
                        *mono -= 1;
                    }
                    if col[u] == new {
                        *mono += 1;
                    }
                }
                col[v] = new;
            };
            'outer: loop {
                tally.record(mono, &cidx);
                let mut p = 0;
                loop {
                    let Some(&v) = rest.get(p) else { break 'outer };
                    let list = g.list(v);
                    let d = cidx[v] + 1;
                    if d < list.len() {
                        recolor(&mut col, &mut mono, v, list[d]);
                        cidx[v] = d;
                        break;
                    }
                    recolor(&mut col, &mut mono, v, list[0]);
                    cidx[v] = 0;
                    p += 1;
                }
            }
            tally
        })
        .reduce_with(Tally::merge)
        .expect("non-empty color list")
}

/// The monochromatic-edge polynomial under the default budget.
pub fn exact_poly(g: &ListGraph) -> Result<MonoEdgePoly, OracleError> {
    exact_poly_with_budget(g, DEFAULT_ENUM_BUDGET)
}

pub fn exact_poly_with_budget(g: &ListGraph, budget: u128) -> Result<MonoEdgePoly, OracleError> {
    check_budget(g, budget)?;
    Ok(MonoEdgePoly::from_counts(&enumerate(g, false).plain))
}

/// `Z_G(w)` in double precision.
pub fn exact_eval(g: &ListGraph, w: Complex64) -> Result<Complex64, OracleError> {
    Ok(exact_poly(g)?.eval_c64(w))
}

/// `Z_G(w)` exactly at a rational point.
pub fn exact_eval_rational(g: &ListGraph, w: &BigRational) -> Result<BigRational, OracleError> {
    Ok(exact_poly(g)?.eval_rational(w))
}

/// Monochromatic-edge polynomials split by the color of each vertex.
#[derive(Debug, Clone)]
pub struct ColorResolved {
    pub poly: MonoEdgePoly,
    lists: Vec<Vec<Color>>,
    per_color: Vec<Vec<MonoEdgePoly>>,
}

/// Scale-relative threshold below which a floating denominator counts as zero.
fn vanishes<S: Scalar>(value: &S, majorant: f64, bits: usize) -> bool {
    value.is_zero() || value.abs() <= majorant * (2f64).powi(6 - bits as i32)
}

impl ColorResolved {
    pub fn new(g: &ListGraph) -> Result<Self, OracleError> {
        Self::with_budget(g, DEFAULT_ENUM_BUDGET)
    }

    pub fn with_budget(g: &ListGraph, budget: u128) -> Result<Self, OracleError> {
        check_budget(g, budget)?;
        let t = enumerate(g, true);
        let lists: Vec<Vec<Color>> = (0..g.vertex_count()).map(|v| g.list(v).to_vec()).collect();
        let per_color = (0..g.vertex_count())
            .map(|v| {
                (0..g.effective_list(v).len())
                    .map(|ci| {
                        let o = t.offsets[v] + ci * t.width;
                        MonoEdgePoly::from_counts(&t.split[o..o + t.width])
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let per_color = per_color
            .into_iter()
            .enumerate()
            .map(|(v, polys)| match g.pin(v) {
                // spread the single pinned histogram back over the full list
                Some(p) => lists[v]
                    .iter()
                    .map(|&c| if c == p { polys[0].clone() } else { MonoEdgePoly::zero() })
                    .collect(),
                None => polys,
            })
            .collect();
        Ok(ColorResolved {
            poly: MonoEdgePoly::from_counts(&t.plain),
            lists,
            per_color,
        })
    }

    /// Polynomial of the restricted partition function `Z^i_{G,v}`.
    pub fn restricted_poly(&self, v: Vertex, i: Color) -> Result<&MonoEdgePoly, OracleError> {
        let list = self.lists.get(v).ok_or(GraphError::VertexOutOfRange(v))?;
        let ci = list
            .binary_search(&i)
            .map_err(|_| GraphError::ColorNotInList { vertex: v, color: i })?;
        Ok(&self.per_color[v][ci])
    }

    pub fn restricted<S: Scalar>(&self, v: Vertex, i: Color, w: &S) -> Result<S, OracleError> {
        Ok(self.restricted_poly(v, i)?.eval(w))
    }

    /// `Z^i_{G,v}(w) / Z_G(w)`. `bits` is the working precision of `S`,
    /// used to judge whether the denominator vanishes.
    pub fn marginal<S: Scalar>(&self, v: Vertex, i: Color, w: &S, bits: usize) -> Result<S, OracleError> {
        let num = self.restricted(v, i, w)?;
        let den = self.poly.eval(w);
        if vanishes(&den, self.poly.majorant(w.abs()), bits) {
            return Err(OracleError::IllDefined("Z_G(w)".into()));
        }
        Ok(num.div(&den))
    }

    /// `Z^i_{G,v}(w) / Z^j_{G,v}(w)`.
    pub fn ratio<S: Scalar>(&self, v: Vertex, i: Color, j: Color, w: &S, bits: usize) -> Result<S, OracleError> {
        let num = self.restricted(v, i, w)?;
        let pj = self.restricted_poly(v, j)?;
        let den = pj.eval(w);
        if vanishes(&den, pj.majorant(w.abs()), bits) {
            return Err(OracleError::IllDefined(format!("Z^{j}_(G,{v})(w)")));
        }
        Ok(num.div(&den))
    }

    pub fn marginal_rational(&self, v: Vertex, i: Color, w: &BigRational) -> Result<BigRational, OracleError> {
        let num = self.restricted_poly(v, i)?.eval_rational(w);
        let den = self.poly.eval_rational(w);
        if den.is_zero() {
            return Err(OracleError::IllDefined("Z_G(w)".into()));
        }
        Ok(num / den)
    }

    pub fn ratio_rational(&self, v: Vertex, i: Color, j: Color, w: &BigRational) -> Result<BigRational, OracleError> {
        let num = self.restricted_poly(v, i)?.eval_rational(w);
        let den = self.restricted_poly(v, j)?.eval_rational(w);
        if den.is_zero() {
            return Err(OracleError::IllDefined(format!("Z^{j}_(G,{v})(w)")));
        }
        Ok(num / den)
    }
}

/// `Z^i_{G,v}(w)` in double precision.
pub fn restricted_z(g: &ListGraph, v: Vertex, i: Color, w: Complex64) -> Result<Complex64, OracleError> {
    g.check_vertex(v)?;
    g.check_color(v, i)?;
    ColorResolved::new(g)?.restricted(v, i, &w)
}

/// Pseudo marginal probability `Pr_{G,w}[c(v) = i]`.
pub fn marginal(g: &ListGraph, w: Complex64, v: Vertex, i: Color) -> Result<Complex64, OracleError> {
    g.check_vertex(v)?;
    ColorResolved::new(g)?.marginal(v, i, &w, 53)
}

/// Marginal ratio `R^{i,j}_{G,v}(w)`.
pub fn ratio(g: &ListGraph, w: Complex64, v: Vertex, i: Color, j: Color) -> Result<Complex64, OracleError> {
    g.check_vertex(v)?;
    ColorResolved::new(g)?.ratio(v, i, j, &w, 53)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn edge(q: u32) -> ListGraph {
        ListGraph::uniform(2, q, &[(0, 1)]).unwrap()
    }

    fn k3() -> ListGraph {
        ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn small_polys() {
        assert_eq!(exact_poly(&edge(2)).unwrap().coeffs, big(&[2, 2]));
        assert_eq!(exact_poly(&k3()).unwrap().coeffs, big(&[6, 18, 0, 3]));
        let empty = ListGraph::new(vec![vec![1, 2], vec![1, 2, 3], vec![4]], vec![None; 3], &[]).unwrap();
        assert_eq!(exact_poly(&empty).unwrap().coeffs, big(&[6]));
    }

    #[test]
    fn evaluations() {
        let p = exact_poly(&k3()).unwrap();
        assert_eq!(exact_eval(&k3(), c(0.5)).unwrap(), c(15.375));
        assert_eq!(exact_eval(&k3(), c(0.0)).unwrap(), c(6.0));
        assert_eq!(p.total(), BigUint::from(27u32));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(p.eval_rational(&half), BigRational::new(123.into(), 8.into()));
        assert_eq!(p.shift_by_one(), big(&[27, 27, 9, 3]));
    }

    #[test]
    fn pins_are_held_fixed() {
        let g = ListGraph::new(vec![vec![1, 2], vec![1, 2]], vec![Some(1), None], &[(0, 1)]).unwrap();
        assert_eq!(exact_poly(&g).unwrap().coeffs, big(&[1, 1]));
        let all_pinned = ListGraph::new(vec![vec![1, 2], vec![1, 2]], vec![Some(1), Some(1)], &[(0, 1)]).unwrap();
        assert_eq!(exact_poly(&all_pinned).unwrap().coeffs, big(&[0, 1]));
    }

    #[test]
    fn budget_is_enforced() {
        let g = ListGraph::uniform(10, 10, &[]).unwrap();
        assert!(matches!(
            exact_poly_with_budget(&g, 1000),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn restricted_and_marginals() {
        let g = edge(2);
        let w = Complex64::new(0.3, 0.1);
        assert!((restricted_z(&g, 0, 1, w).unwrap() - (1.0 + w)).norm() < 1e-15);
        for x in [0.0, 0.25, 1.0] {
            assert!((marginal(&g, c(x), 0, 1).unwrap() - 0.5).norm() < 1e-15);
        }
        assert_eq!(ratio(&g, w, 0, 2, 2).unwrap(), c(1.0));
        assert!((marginal(&k3(), c(0.0), 1, 1).unwrap() - 1.0 / 3.0).norm() < 1e-15);
        assert!(matches!(restricted_z(&g, 0, 3, w), Err(OracleError::Graph(_))));
    }

    #[test]
    fn pinned_vertex_restriction() {
        let g = ListGraph::new(vec![vec![1, 2, 3], vec![1, 2]], vec![Some(3), None], &[(0, 1)]).unwrap();
        let r = ColorResolved::new(&g).unwrap();
        assert!(r.restricted_poly(0, 1).unwrap().is_zero());
        assert_eq!(r.restricted_poly(0, 3).unwrap(), &r.poly);
    }

    #[test]
    fn ill_defined_denominators() {
        let g = edge(1);
        // Z = w, vanishing at 0
        assert!(matches!(marginal(&g, c(0.0), 0, 1), Err(OracleError::IllDefined(_))));
        let r = ColorResolved::new(&g).unwrap();
        assert!(r.marginal_rational(0, 1, &BigRational::zero()).is_err());
        assert_eq!(
            r.marginal_rational(0, 1, &BigRational::one()).unwrap(),
            BigRational::one()
        );
    }

    #[test]
    fn color_sums_match_total() {
        let g = ListGraph::new(
            vec![vec![1, 2, 3], vec![2, 3], vec![1, 3, 4], vec![1, 2]],
            vec![None, None, None, Some(2)],
            &[(0, 1), (1, 2), (0, 2), (2, 3)],
        )
        .unwrap();
        let r = ColorResolved::new(&g).unwrap();
        assert_eq!(r.poly, exact_poly(&g).unwrap());
        for v in 0..4 {
            let mut acc = vec![BigUint::zero(); r.poly.coeffs.len()];
            for &i in g.list(v) {
                for (a, x) in acc.iter_mut().zip(&r.restricted_poly(v, i).unwrap().coeffs) {
                    *a += x;
                }
            }
            assert_eq!(acc, r.poly.coeffs);
        }
    }
}
