//! Vertex splitting used by the marginal-ratio recurrence.
//!
//! Both constructions split an unpinned vertex `u` with neighbors
//! `v_1 < ... < v_d` into degree-one copies `u_1..u_d` (copy `u_m` joined to
//! `v_m`), pin the copies, and return a fresh graph. Surviving original
//! vertices keep their relative order; copies are appended in neighbor order.

use crate::graph::{Color, GraphError, ListGraph, Vertex};

/// A graph produced by splitting a vertex, with the id map from the source.
#[derive(Debug, Clone)]
pub struct SplitGraph {
    pub graph: ListGraph,
    /// New id of every original vertex; `None` for the split vertex.
    pub vertex_map: Vec<Option<Vertex>>,
}

impl SplitGraph {
    pub fn image(&self, v: Vertex) -> Vertex {
        self.vertex_map[v].expect("vertex survives the split")
    }
}

fn split(g: &ListGraph, u: Vertex, copy_pin: impl Fn(usize) -> Option<Color>) -> SplitGraph {
    let n = g.vertex_count();
    let mut vertex_map = vec![None; n];
    let mut lists = Vec::with_capacity(n + g.degree(u));
    let mut pins = Vec::with_capacity(n + g.degree(u));
    for v in (0..n).filter(|&v| v != u) {
        vertex_map[v] = Some(lists.len());
        lists.push(g.list(v).to_vec());
        pins.push(g.pin(v));
    }
    let mut edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .iter()
        .filter(|&&(a, b)| a != u && b != u)
        .map(|&(a, b)| (vertex_map[a].unwrap(), vertex_map[b].unwrap()))
        .collect();
    for (m, &v) in g.neighbors(u).iter().enumerate() {
        if let Some(pin) = copy_pin(m + 1) {
            let id = lists.len();
            lists.push(g.list(u).to_vec());
            pins.push(Some(pin));
            edges.push((id, vertex_map[v].unwrap()));
        }
    }
    let graph = ListGraph::new(lists, pins, &edges).expect("splitting preserves validity");
    SplitGraph { graph, vertex_map }
}

fn check_split_args(g: &ListGraph, u: Vertex, i: Color, j: Color) -> Result<(), GraphError> {
    g.check_unpinned(u)?;
    g.check_color(u, i)?;
    g.check_color(u, j)
}

/// The graph `G_k^{(i,j)}`: copies `u_1..u_{k-1}` pinned to `i`, copies
/// `u_{k+1}..u_d` pinned to `j`, copy `u_k` removed. Neighbor `v_k` maps to
/// `result.image(g.neighbors(u)[k-1])`.
pub fn build_g_k(g: &ListGraph, u: Vertex, i: Color, j: Color, k: usize) -> Result<SplitGraph, GraphError> {
    check_split_args(g, u, i, j)?;
    let d = g.degree(u);
    if k == 0 || k > d {
        return Err(GraphError::NeighborIndex { k, degree: d });
    }
    Ok(split(g, u, |m| match m.cmp(&k) {
        std::cmp::Ordering::Less => Some(i),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(j),
    }))
}

/// The intermediate graph `H_k` (`0 <= k <= d`): copies `u_1..u_k` pinned to
/// `i`, the rest pinned to `j`. `H_d` and `H_0` realize the restricted
/// partition functions of `u` at `i` and `j`.
pub fn build_h_k(g: &ListGraph, u: Vertex, i: Color, j: Color, k: usize) -> Result<SplitGraph, GraphError> {
    check_split_args(g, u, i, j)?;
    let d = g.degree(u);
    if k > d {
        return Err(GraphError::NeighborIndex { k, degree: d });
    }
    Ok(split(g, u, |m| Some(if m <= k { i } else { j })))
}
