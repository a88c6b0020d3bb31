//! Coefficients of `Z_G(1 + x)` by edge-subset enumeration.
//!
//! Expanding every edge weight `w = 1 + x` gives
//! `Z_G(1 + x) = sum_{S subset E} x^{|S|} N(S)`, where `N(S)` multiplies
//! `|cap_{v in C} L(v)|` over the components `C` of `(V, S)`.

use num::bigint::{BigInt, BigUint};
use num::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Color, ListGraph};
use crate::series::{log_series, LogSeries, SeriesError};

/// Default cap on the number of enumerated edge subsets.
pub const DEFAULT_SUBSET_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoeffError {
    #[error("enumeration needs {needed} edge subsets, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u128 },
    #[error("order {k} exceeds the configured maximum {max}")]
    OrderTooLarge { k: usize, max: usize },
    #[error("cluster enumeration exceeded the memory budget of {0} stored clusters")]
    MemoryBudget(usize),
    #[error("list product does not fit in 128 bits")]
    Overflow,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `a_0..a_k` of `Z_G(1 + x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FKSeries {
    #[serde(serialize_with = "ser_ints")]
    pub a: Vec<BigInt>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl FKSeries {
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn log(&self) -> Result<LogSeries, SeriesError> {
        log_series(&self.a)
    }
}

/// Dense color-index bitsets for the effective lists of `g`.
pub(crate) struct ColorSets {
    pub sets: Vec<Vec<u64>>,
}

impl ColorSets {
    pub fn new(g: &ListGraph) -> Self {
        let mut palette: Vec<Color> = (0..g.vertex_count())
            .flat_map(|v| g.effective_list(v).iter().copied())
            .collect();
        palette.sort_unstable();
        palette.dedup();
        let words = palette.len().div_ceil(64).max(1);
        let sets = (0..g.vertex_count())
            .map(|v| {
                let mut s = vec![0u64; words];
                for c in g.effective_list(v) {
                    let i = palette.binary_search(c).unwrap();
                    s[i / 64] |= 1 << (i % 64);
                }
                s
            })
            .collect();
        ColorSets { sets }
    }
}

pub(crate) fn popcount(s: &[u64]) -> u128 {
    s.iter().map(|w| w.count_ones() as u128).sum()
}

/// Number of subsets of an `m`-set with at most `k` elements.
pub fn subset_count(m: usize, k: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut binom = BigUint::from(1u32);
    for j in 0..=k.min(m) {
        total += &binom;
        binom = binom * (m - j) / (j + 1);
    }
    total
}

/// Union-find with undo, tracking the color intersection of each component
/// and the product of component intersection sizes.
struct Components {
    parent: Vec<usize>,
    rank: Vec<u8>,
    colors: Vec<Vec<u64>>,
    sizes: Vec<u128>,
    /// product of the non-zero component sizes
    prod: u128,
    zeros: usize,
    undo: Vec<Undo>,
}

enum Undo {
    Noop,
    Merge {
        child: usize,
        root: usize,
        rank_bumped: bool,
        old_colors: Vec<u64>,
        old_size: u128,
        prod: u128,
        zeros: usize,
    },
}

impl Components {
    fn new(cs: &ColorSets) -> Self {
        let sizes: Vec<u128> = cs.sets.iter().map(|s| popcount(s)).collect();
        let zeros = sizes.iter().filter(|&&s| s == 0).count();
        let prod = sizes.iter().filter(|&&s| s > 0).product();
        Components {
            parent: (0..sizes.len()).collect(),
            rank: vec![0; sizes.len()],
            colors: cs.sets.clone(),
            sizes,
            prod,
            zeros,
            undo: Vec::new(),
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn value(&self) -> u128 {
        if self.zeros > 0 {
            0
        } else {
            self.prod
        }
    }

    fn remove_size(&mut self, s: u128) {
        if s == 0 {
            self.zeros -= 1;
        } else {
            self.prod /= s;
        }
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.undo.push(Undo::Noop);
            return;
        }
        let (root, child) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        let rank_bumped = self.rank[root] == self.rank[child];
        let old_colors = self.colors[root].clone();
        let old_size = self.sizes[root];
        self.undo.push(Undo::Merge {
            child,
            root,
            rank_bumped,
            old_colors,
            old_size,
            prod: self.prod,
            zeros: self.zeros,
        });
        self.parent[child] = root;
        if rank_bumped {
            self.rank[root] += 1;
        }
        let (sr, sc) = (self.sizes[root], self.sizes[child]);
        self.remove_size(sr);
        self.remove_size(sc);
        for i in 0..self.colors[root].len() {
            let c = self.colors[child][i];
            self.colors[root][i] &= c;
        }
        let s = popcount(&self.colors[root]);
        self.sizes[root] = s;
        if s == 0 {
            self.zeros += 1;
        } else {
            self.prod *= s;
        }
    }

    fn rollback(&mut self) {
        if let Some(Undo::Merge {
            child,
            root,
            rank_bumped,
            old_colors,
            old_size,
            prod,
            zeros,
        }) = self.undo.pop()
        {
            self.parent[child] = child;
            if rank_bumped {
                self.rank[root] -= 1;
            }
            self.colors[root] = old_colors;
            self.sizes[root] = old_size;
            self.prod = prod;
            self.zeros = zeros;
        }
    }
}

/// 256-bit accumulator for sums of `u128` terms.
#[derive(Clone, Copy, Default)]
struct Wide {
    lo: u128,
    hi: u128,
}

impl Wide {
    fn add(&mut self, x: u128) {
        let (lo, carry) = self.lo.overflowing_add(x);
        self.lo = lo;
        self.hi += carry as u128;
    }

    fn to_bigint(self) -> BigInt {
        (BigInt::from(self.hi) << 128) + BigInt::from(self.lo)
    }
}

fn dfs(edges: &[(usize, usize)], k: usize, start: usize, depth: usize, comp: &mut Components, acc: &mut [Wide]) {
    acc[depth].add(comp.value());
    if depth == k {
        return;
    }
    for e in start..edges.len() {
        comp.union(edges[e].0, edges[e].1);
        dfs(edges, k, e + 1, depth + 1, comp, acc);
        comp.rollback();
    }
}

/// `a_0..a_k` by enumerating every edge subset of size at most `k`.
pub fn fk_coeffs_direct(g: &ListGraph, k: usize) -> Result<FKSeries, CoeffError> {
    fk_coeffs_direct_with_budget(g, k, DEFAULT_SUBSET_BUDGET)
}

pub fn fk_coeffs_direct_with_budget(g: &ListGraph, k: usize, budget: u128) -> Result<FKSeries, CoeffError> {
    let m = g.edge_count();
    let needed = subset_count(m, k);
    if needed.to_u128().map_or(true, |n| n > budget) {
        return Err(CoeffError::BudgetExceeded {
            needed: needed.to_string(),
            budget,
        });
    }
    g.assignment_count().ok_or(CoeffError::Overflow)?;
    let cs = ColorSets::new(g);
    let top = k.min(m);
    let edges = g.edges();
    // task 0 is the empty set; task f >= 1 owns the subsets whose smallest edge is f - 1
    let mut a: Vec<BigInt> = (0..=m)
        .into_par_iter()
        .map(|task| {
            let mut comp = Components::new(&cs);
            let mut acc = vec![Wide::default(); top + 1];
            if task == 0 {
                acc[0].add(comp.value());
            } else if top > 0 {
                let e = task - 1;
                comp.union(edges[e].0, edges[e].1);
                dfs(edges, top, e + 1, 1, &mut comp, &mut acc);
            }
            acc
        })
        .map(|acc| acc.into_iter().map(Wide::to_bigint).collect::<Vec<_>>())
        .reduce(
            || vec![BigInt::zero(); top + 1],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );
    a.resize(k + 1, BigInt::zero());
    Ok(FKSeries { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_poly;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_series() {
        let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(fk_coeffs_direct(&k3, 3).unwrap().a, ints(&[27, 27, 9, 3]));
        assert_eq!(fk_coeffs_direct(&k3, 5).unwrap().a, ints(&[27, 27, 9, 3, 0, 0]));
        let e = ListGraph::uniform(2, 2, &[(0, 1)]).unwrap();
        assert_eq!(fk_coeffs_direct(&e, 1).unwrap().a, ints(&[4, 2]));
        assert_eq!(fk_coeffs_direct(&e, 0).unwrap().a, ints(&[4]));
    }

    #[test]
    fn matches_binomial_reexpansion() {
        let g = ListGraph::new(
            vec![vec![1, 2, 3], vec![2, 3], vec![1, 3, 4], vec![1, 2], vec![2, 5]],
            vec![None, None, None, Some(2), None],
            &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (1, 4)],
        )
        .unwrap();
        let mut shifted: Vec<BigInt> = exact_poly(&g).unwrap().shift_by_one().into_iter().map(BigInt::from).collect();
        shifted.resize(g.edge_count() + 1, BigInt::zero());
        let a = fk_coeffs_direct(&g, g.edge_count()).unwrap().a;
        assert_eq!(a, shifted);
    }

    #[test]
    fn uniform_lists_count_components() {
        // path on 3 vertices, q = 5: a_j = sum_{|S|=j} 5^{#components}
        let p3 = ListGraph::uniform(3, 5, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(fk_coeffs_direct(&p3, 2).unwrap().a, ints(&[125, 50, 5]));
    }

    #[test]
    fn budget_and_counts() {
        assert_eq!(subset_count(4, 2), BigUint::from(11u32));
        assert_eq!(subset_count(3, 9), BigUint::from(8u32));
        let g = ListGraph::uniform(6, 2, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert!(matches!(
            fk_coeffs_direct_with_budget(&g, 5, 10),
            Err(CoeffError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn wide_accumulator_carries() {
        let mut w = Wide::default();
        w.add(u128::MAX);
        w.add(2);
        assert_eq!(w.to_bigint(), (BigInt::from(1) << 128) + 1);
    }
}
