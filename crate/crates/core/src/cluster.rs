//! Log-series coefficients from connected edge sets only.
//!
//! Dividing `Z_G(1 + x)` by `a_0 = prod |L(v)|` turns the edge-subset sum into
//! a polymer gas: polymers are connected edge sets `C` with activity
//! `w(C) x^{|C|}`, `w(C) = |cap_{v in C} L(v)| / prod_{v in C} |L(v)|`, and two
//! polymers are incompatible when they share a vertex. The cluster expansion
//! then writes
//!
//! `log(Z_G(1+x)/a_0) = sum_X (prod_i 1/m_i!) phi(H_X) prod_{C in X} w(C) x^{|C|}`
//!
//! over multisets `X` of polymers (multiplicities `m_i`) whose incompatibility
//! graph `H_X` is connected, with `phi(H) = sum_{A spanning connected} (-1)^{|A|}`.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{popcount, ColorSets, CoeffError};
use crate::graph::{ListGraph, Vertex};
use crate::series::LogSeries;

/// Largest order accepted by default.
pub const DEFAULT_MAX_ORDER: usize = 12;
/// Default cap on clusters held in memory at one level.
pub const DEFAULT_CLUSTER_BUDGET: usize = 20_000_000;

#[derive(Debug, Clone, Copy)]
pub struct ClusterOptions {
    pub max_order: usize,
    pub cluster_budget: usize,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions {
            max_order: DEFAULT_MAX_ORDER,
            cluster_budget: DEFAULT_CLUSTER_BUDGET,
        }
    }
}

/// Enumeration counters, kept for inspection and logging.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ClusterStats {
    /// connected edge sets by size (index 0 unused)
    pub polymers_by_size: Vec<usize>,
    /// connected edge sets anchored at each edge
    pub polymers_by_anchor: Vec<usize>,
    /// polymers with non-zero activity
    pub live_polymers: usize,
    /// clusters by number of polymers (index 0 unused)
    pub clusters_by_level: Vec<usize>,
    /// distinct incompatibility graphs whose Ursell value was computed
    pub ursell_graphs: usize,
}

#[derive(Debug, Clone)]
struct Polymer {
    size: usize,
    vertices: Vec<Vertex>,
    num: u128,
    den: u128,
}

/// Edges of the line graph.
fn line_graph(g: &ListGraph) -> Vec<Vec<usize>> {
    let edges = g.edges();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(i);
        incident[b].push(i);
    }
    edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let mut n: Vec<usize> = incident[a].iter().chain(&incident[b]).copied().filter(|&e| e != i).collect();
            n.sort_unstable();
            n.dedup();
            n
        })
        .collect()
}

struct Esu<'a> {
    lg: &'a [Vec<usize>],
    anchor: usize,
    k: usize,
    /// how many members of `sub` the edge equals or touches
    mark: Vec<u32>,
    sub: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl Esu<'_> {
    fn touch(&mut self, w: usize, delta: i32) {
        self.mark[w] = (self.mark[w] as i32 + delta) as u32;
        for &u in &self.lg[w] {
            self.mark[u] = (self.mark[u] as i32 + delta) as u32;
        }
    }

    fn extend(&mut self, mut ext: Vec<usize>) {
        let mut set = self.sub.clone();
        set.sort_unstable();
        self.out.push(set);
        if self.sub.len() == self.k {
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            next.extend(self.lg[w].iter().copied().filter(|&u| u > self.anchor && self.mark[u] == 0));
            self.touch(w, 1);
            self.sub.push(w);
            self.extend(next);
            self.sub.pop();
            self.touch(w, -1);
        }
    }
}

/// Every connected edge set with at most `k` edges, each listed once as a
/// sorted vector of edge indices, grouped by smallest edge.
pub fn connected_edge_sets(g: &ListGraph, k: usize) -> Vec<Vec<Vec<usize>>> {
    let lg = line_graph(g);
    (0..g.edge_count())
        .into_par_iter()
        .map(|anchor| {
            if k == 0 {
                return Vec::new();
            }
            let mut esu = Esu {
                lg: &lg,
                anchor,
                k,
                mark: vec![0; lg.len()],
                sub: vec![anchor],
                out: Vec::new(),
            };
            esu.touch(anchor, 1);
            let ext: Vec<usize> = lg[anchor].iter().copied().filter(|&u| u > anchor).collect();
            esu.extend(ext);
            esu.out
        })
        .collect()
}

/// `phi(H) = sum over spanning connected edge subsets A of (-1)^{|A|}`, for `H`
/// given by neighbor bitmasks on `t <= 16` vertices.
///
/// Uses `phi(S) = [S independent] - sum_R phi(S \ R)`, the sum over non-empty
/// independent `R subset S \ {min S}`, which follows from expanding
/// `sum_{A subset E(H[S])} (-1)^{|A|}` by the component of `min S`.
pub fn ursell(adj: &[u16]) -> i64 {
    let t = adj.len();
    assert!((1..=16).contains(&t));
    let full = (1usize << t) - 1;
    let mut indep = vec![false; full + 1];
    indep[0] = true;
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        indep[s] = indep[rest] && (adj[low] as usize & rest) == 0;
    }
    let mut phi = vec![0i64; full + 1];
    for s in 1..=full {
        let rest = s & (s - 1);
        let mut v = indep[s] as i64;
        // non-empty subsets r of rest
        let mut r = rest;
        while r > 0 {
            if indep[r] {
                v -= phi[s ^ r];
            }
            r = (r - 1) & rest;
        }
        phi[s] = v;
    }
    phi[full]
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn share_vertex(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Per-order sums, keyed by denominator so most additions stay integral.
#[derive(Default)]
struct Accum {
    by_den: Vec<HashMap<u128, BigInt>>,
    spill: Vec<BigRational>,
}

impl Accum {
    fn new(k: usize) -> Self {
        Accum {
            by_den: vec![HashMap::new(); k + 1],
            spill: vec![BigRational::zero(); k + 1],
        }
    }

    fn add(&mut self, j: usize, num: BigInt, den: Option<u128>, big_den: impl FnOnce() -> BigInt) {
        match den {
            Some(d) => *self.by_den[j].entry(d).or_insert_with(BigInt::zero) += num,
            None => self.spill[j] += BigRational::new(num, big_den()),
        }
    }

    fn merge(mut self, other: Accum) -> Accum {
        for (mine, theirs) in self.by_den.iter_mut().zip(other.by_den) {
            for (d, n) in theirs {
                *mine.entry(d).or_insert_with(BigInt::zero) += n;
            }
        }
        for (a, b) in self.spill.iter_mut().zip(other.spill) {
            *a += b;
        }
        self
    }

    fn finish(self) -> Vec<BigRational> {
        self.by_den
            .into_iter()
            .zip(self.spill)
            .map(|(m, mut acc)| {
                let mut dens: Vec<_> = m.into_iter().collect();
                dens.sort_by(|a, b| a.0.cmp(&b.0));
                for (d, n) in dens {
                    acc += BigRational::new(n, BigInt::from(d));
                }
                acc
            })
            .collect()
    }
}

/// `c_1..c_k` of `log(Z_G(1+x)/a_0)` by the cluster expansion.
pub fn fk_coeffs_connected(g: &ListGraph, k: usize) -> Result<LogSeries, CoeffError> {
    Ok(fk_coeffs_connected_with(g, k, ClusterOptions::default())?.0)
}

pub fn fk_coeffs_connected_with(
    g: &ListGraph,
    k: usize,
    opts: ClusterOptions,
) -> Result<(LogSeries, ClusterStats), CoeffError> {
    if k > opts.max_order {
        return Err(CoeffError::OrderTooLarge { k, max: opts.max_order });
    }
    let mut stats = ClusterStats {
        polymers_by_size: vec![0; k + 1],
        clusters_by_level: vec![0; k + 1],
        ..Default::default()
    };
    let cs = ColorSets::new(g);
    let edges = g.edges();
    let by_anchor = connected_edge_sets(g, k);
    let mut polymers = Vec::new();
    for sets in &by_anchor {
        stats.polymers_by_anchor.push(sets.len());
        for set in sets {
            stats.polymers_by_size[set.len()] += 1;
            let mut vertices: Vec<Vertex> = set.iter().flat_map(|&e| [edges[e].0, edges[e].1]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            let mut inter = cs.sets[vertices[0]].clone();
            let mut den: u128 = 1;
            for &v in &vertices {
                for (a, b) in inter.iter_mut().zip(&cs.sets[v]) {
                    *a &= b;
                }
                den = den.checked_mul(popcount(&cs.sets[v])).ok_or(CoeffError::Overflow)?;
            }
            let num = popcount(&inter);
            if num > 0 {
                polymers.push(Polymer {
                    size: set.len(),
                    vertices,
                    num,
                    den,
                });
            }
        }
    }
    stats.live_polymers = polymers.len();

    let mut at_vertex: Vec<Vec<u32>> = vec![Vec::new(); g.vertex_count()];
    for (i, p) in polymers.iter().enumerate() {
        for &v in &p.vertices {
            at_vertex[v].push(i as u32);
        }
    }

    let mut acc = Accum::new(k);
    let mut level: Vec<Vec<u32>> = (0..polymers.len() as u32).map(|i| vec![i]).collect();
    let mut ursell_cache: HashMap<Vec<u16>, i64> = HashMap::new();
    let mut t = 1;
    while !level.is_empty() {
        if level.len() > opts.cluster_budget {
            return Err(CoeffError::MemoryBudget(opts.cluster_budget));
        }
        stats.clusters_by_level[t] = level.len();

        let graphs: Vec<Vec<u16>> = level
            .par_iter()
            .map(|c| {
                (0..c.len())
                    .map(|a| {
                        (0..c.len())
                            .filter(|&b| {
                                b != a
                                    && (c[a] == c[b]
                                        || share_vertex(&polymers[c[a] as usize].vertices, &polymers[c[b] as usize].vertices))
                            })
                            .fold(0u16, |m, b| m | (1 << b))
                    })
                    .collect()
            })
            .collect();
        let mut missing: Vec<Vec<u16>> = graphs.iter().filter(|h| !ursell_cache.contains_key(*h)).cloned().collect();
        missing.sort_unstable();
        missing.dedup();
        let fresh: Vec<(Vec<u16>, i64)> = missing.into_par_iter().map(|h| {
            let v = ursell(&h);
            (h, v)
        }).collect();
        ursell_cache.extend(fresh);

        let part = level
            .par_iter()
            .zip(&graphs)
            .fold(
                || Accum::new(k),
                |mut a, (c, h)| {
                    let phi = ursell_cache[h];
                    if phi == 0 {
                        return a;
                    }
                    let size: usize = c.iter().map(|&i| polymers[i as usize].size).sum();
                    let mut num = BigInt::from(phi);
                    let mut den: Option<u128> = Some(1);
                    let mut run = 1;
                    for (idx, &i) in c.iter().enumerate() {
                        let p = &polymers[i as usize];
                        num *= p.num;
                        den = den.and_then(|d| d.checked_mul(p.den));
                        if idx + 1 < c.len() && c[idx + 1] == i {
                            run += 1;
                        } else {
                            den = den.and_then(|d| d.checked_mul(factorial(run)));
                            run = 1;
                        }
                    }
                    a.add(size, num, den, || {
                        let mut d = BigInt::one();
                        let mut run = 1;
                        for (idx, &i) in c.iter().enumerate() {
                            d *= polymers[i as usize].den;
                            if idx + 1 < c.len() && c[idx + 1] == i {
                                run += 1;
                            } else {
                                d *= factorial(run);
                                run = 1;
                            }
                        }
                        d
                    });
                    a
                },
            )
            .reduce(|| Accum::new(k), Accum::merge);
        acc = acc.merge(part);

        // grow every cluster by one incompatible polymer
        let mut next: Vec<Vec<u32>> = level
            .par_iter()
            .flat_map_iter(|c| {
                let size: usize = c.iter().map(|&i| polymers[i as usize].size).sum();
                let room = k - size;
                let mut cands: Vec<u32> = c
                    .iter()
                    .flat_map(|&i| polymers[i as usize].vertices.iter())
                    .flat_map(|&v| at_vertex[v].iter().copied())
                    .filter(|&p| polymers[p as usize].size <= room)
                    .collect();
                cands.sort_unstable();
                cands.dedup();
                cands.into_iter().map(move |p| {
                    let mut n = c.clone();
                    let pos = n.partition_point(|&x| x <= p);
                    n.insert(pos, p);
                    n
                })
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        level = next;
        t += 1;
        if t > k {
            break;
        }
    }
    stats.ursell_graphs = ursell_cache.len();
    let sums = acc.finish();
    Ok((LogSeries { c: sums[1..].to_vec() }, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::fk_coeffs_direct;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ursell_small_graphs() {
        assert_eq!(ursell(&[0]), 1);
        assert_eq!(ursell(&[0b10, 0b01]), -1);
        assert_eq!(ursell(&[0, 0]), 0);
        // complete graph K_t: (-1)^{t-1} (t-1)!
        for t in 1..=7usize {
            let full = (1u16 << t) - 1;
            let adj: Vec<u16> = (0..t).map(|i| full & !(1 << i)).collect();
            let expect = if t % 2 == 1 { 1 } else { -1 } * (1..t as i64).product::<i64>();
            assert_eq!(ursell(&adj), expect, "K_{t}");
        }
        // path on three vertices: only the full edge set spans and connects
        assert_eq!(ursell(&[0b010, 0b101, 0b010]), 1);
    }

    #[test]
    fn connected_sets_of_a_triangle() {
        let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let sets: Vec<Vec<usize>> = connected_edge_sets(&k3, 3).into_iter().flatten().collect();
        assert_eq!(sets.len(), 7);
        let star = ListGraph::uniform(4, 3, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(connected_edge_sets(&star, 2).into_iter().flatten().count(), 6);
    }

    #[test]
    fn single_edge_series() {
        let e = ListGraph::uniform(2, 2, &[(0, 1)]).unwrap();
        let c = fk_coeffs_connected(&e, 3).unwrap();
        assert_eq!(c.c, vec![q(1, 2), q(-1, 8), q(1, 24)]);
    }

    #[test]
    fn agrees_with_direct_engine() {
        let g = ListGraph::new(
            vec![vec![1, 2, 3], vec![2, 3], vec![1, 3, 4], vec![1, 2], vec![2, 5]],
            vec![None, None, None, Some(2), None],
            &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (1, 4)],
        )
        .unwrap();
        for k in 0..=6 {
            let direct = fk_coeffs_direct(&g, k).unwrap().log().unwrap();
            assert_eq!(fk_coeffs_connected(&g, k).unwrap(), direct, "k = {k}");
        }
    }

    #[test]
    fn options_are_enforced() {
        let k4 = ListGraph::uniform(4, 3, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(fk_coeffs_connected(&k4, 13), Err(CoeffError::OrderTooLarge { .. })));
        let tight = ClusterOptions {
            max_order: 12,
            cluster_budget: 5,
        };
        assert!(matches!(
            fk_coeffs_connected_with(&k4, 4, tight),
            Err(CoeffError::MemoryBudget(5))
        ));
    }
}
