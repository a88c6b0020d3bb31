//! List-colored graphs with optional pins.
//!
//! A [`ListGraph`] is the universe every computation in this crate runs over:
//! dense vertex ids, a simple undirected edge set, a non-empty color list per
//! vertex and an optional pin (a color the vertex is forced to take).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;
pub type Color = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph file: {0}")]
    Syntax(String),
    #[error("vertex id {id} is out of range (expected 0..{n})")]
    IdOutOfRange { id: usize, n: usize },
    #[error("vertex id {0} is listed more than once")]
    DuplicateId(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {{{0}, {1}}} references a missing vertex")]
    EdgeOutOfRange(Vertex, Vertex),
    #[error("vertex {0} has an empty color list")]
    EmptyList(Vertex),
    #[error("vertex {vertex} lists color {color} more than once")]
    DuplicateColor { vertex: Vertex, color: Color },
    #[error("vertex {vertex} uses color 0; colors are positive integers")]
    ZeroColor { vertex: Vertex },
    #[error("pin not in list: vertex {vertex} is pinned to {pin}, which is not in its list")]
    PinNotInList { vertex: Vertex, pin: Color },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(Vertex),
    #[error("vertex {0} is pinned")]
    PinnedVertex(Vertex),
    #[error("color {color} is not in the list of vertex {vertex}")]
    ColorNotInList { vertex: Vertex, color: Color },
    #[error("neighbor index {k} is out of range 1..={degree}")]
    NeighborIndex { k: usize, degree: usize },
}

/// On-disk vertex record.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct VertexRecord {
    id: usize,
    list: Vec<Color>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pin: Option<Color>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<VertexRecord>,
    edges: Vec<[usize; 2]>,
}

/// A simple undirected graph with per-vertex color lists and optional pins.
#[derive(Clone, PartialEq, Eq)]
pub struct ListGraph {
    lists: Vec<Vec<Color>>,
    pins: Vec<Option<Color>>,
    adj: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl fmt::Debug for ListGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl ListGraph {
    /// Builds and validates a graph. Edges may be given in any order and
    /// orientation; lists are stored sorted.
    pub fn new(
        lists: Vec<Vec<Color>>,
        pins: Vec<Option<Color>>,
        edges: &[(Vertex, Vertex)],
    ) -> Result<Self, GraphError> {
        let n = lists.len();
        assert_eq!(pins.len(), n, "one pin slot per vertex");
        let mut sorted_lists = Vec::with_capacity(n);
        for (v, list) in lists.into_iter().enumerate() {
            if list.is_empty() {
                return Err(GraphError::EmptyList(v));
            }
            let mut set = BTreeSet::new();
            for &c in &list {
                if c == 0 {
                    return Err(GraphError::ZeroColor { vertex: v });
                }
                if !set.insert(c) {
                    return Err(GraphError::DuplicateColor { vertex: v, color: c });
                }
            }
            sorted_lists.push(set.into_iter().collect::<Vec<_>>());
        }
        for (v, pin) in pins.iter().enumerate() {
            if let Some(p) = *pin {
                if sorted_lists[v].binary_search(&p).is_err() {
                    return Err(GraphError::PinNotInList { vertex: v, pin: p });
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        let mut norm_edges = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            adj[a].push(b);
            adj[b].push(a);
            norm_edges.push(e);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        norm_edges.sort_unstable();
        Ok(ListGraph {
            lists: sorted_lists,
            pins,
            adj,
            edges: norm_edges,
        })
    }

    /// Graph with the same list `{1..=q}` on every vertex and no pins.
    pub fn uniform(n: usize, q: u32, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        Self::new(vec![(1..=q).collect(); n], vec![None; n], edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn list(&self, v: Vertex) -> &[Color] {
        &self.lists[v]
    }

    pub fn pin(&self, v: Vertex) -> Option<Color> {
        self.pins[v]
    }

    pub fn is_pinned(&self, v: Vertex) -> bool {
        self.pins[v].is_some()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn in_list(&self, v: Vertex, c: Color) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    /// Colors a vertex can actually take: its pin if pinned, else its list.
    pub fn effective_list(&self, v: Vertex) -> &[Color] {
        match &self.pins[v] {
            Some(p) => std::slice::from_ref(p),
            None => &self.lists[v],
        }
    }

    pub fn unpinned(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).filter(move |&v| !self.is_pinned(v))
    }

    /// Number of unpinned vertices (the graph's size).
    pub fn size(&self) -> usize {
        self.unpinned().count()
    }

    /// Number of unpinned neighbors of `v`.
    pub fn unpinned_degree(&self, v: Vertex) -> usize {
        self.adj[v].iter().filter(|&&u| !self.is_pinned(u)).count()
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v >= self.vertex_count() {
            Err(GraphError::VertexOutOfRange(v))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_unpinned(&self, v: Vertex) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        if self.is_pinned(v) {
            Err(GraphError::PinnedVertex(v))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_color(&self, v: Vertex, c: Color) -> Result<(), GraphError> {
        if self.in_list(v, c) {
            Ok(())
        } else {
            Err(GraphError::ColorNotInList { vertex: v, color: c })
        }
    }

    /// Good colors of an unpinned vertex: list colors not used by any pinned
    /// neighbor.
    pub fn good_colors(&self, v: Vertex) -> Result<Vec<Color>, GraphError> {
        self.check_unpinned(v)?;
        let blocked: BTreeSet<Color> = self.adj[v].iter().filter_map(|&u| self.pins[u]).collect();
        Ok(self.lists[v]
            .iter()
            .copied()
            .filter(|c| !blocked.contains(c))
            .collect())
    }

    /// True iff no edge joins two vertices pinned to the same color.
    pub fn is_unconflicted(&self) -> bool {
        self.edges.iter().all(|&(a, b)| match (self.pins[a], self.pins[b]) {
            (Some(x), Some(y)) => x != y,
            _ => true,
        })
    }

    /// Product of effective list sizes; `None` on overflow.
    pub fn assignment_count(&self) -> Option<u128> {
        (0..self.vertex_count()).try_fold(1u128, |acc, v| acc.checked_mul(self.effective_list(v).len() as u128))
    }

    /// Replaces every pinned vertex of degree `d` by `d` degree-one copies,
    /// one per incident edge. Pinned isolated vertices are dropped. The
    /// partition function and the set of unpinned vertices are unchanged.
    pub fn normalize_pins(&self) -> ListGraph {
        self.normalize_pins_with_map().0
    }

    /// As [`normalize_pins`](Self::normalize_pins), also returning the new id
    /// of every surviving original vertex. Unpinned vertices always survive.
    pub fn normalize_pins_with_map(&self) -> (ListGraph, Vec<Option<Vertex>>) {
        let n = self.vertex_count();
        if (0..n).all(|v| !self.is_pinned(v) || self.degree(v) == 1) {
            return (self.clone(), (0..n).map(Some).collect());
        }
        let mut map = vec![None; n];
        let mut lists = Vec::new();
        let mut pins = Vec::new();
        for v in 0..n {
            if !self.is_pinned(v) || self.degree(v) == 1 {
                map[v] = Some(lists.len());
                lists.push(self.lists[v].clone());
                pins.push(self.pins[v]);
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            let mut end = |x: Vertex| -> Vertex {
                match map[x] {
                    Some(id) => id,
                    None => {
                        lists.push(self.lists[x].clone());
                        pins.push(self.pins[x]);
                        lists.len() - 1
                    }
                }
            };
            let na = end(a);
            let nb = end(b);
            edges.push((na, nb));
        }
        let g = ListGraph::new(lists, pins, &edges).expect("normalization preserves validity");
        (g, map)
    }

    /// Serializes to the JSON graph format accepted by [`parse_graph`].
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: (0..self.vertex_count())
                .map(|v| VertexRecord {
                    id: v,
                    list: self.lists[v].clone(),
                    pin: self.pins[v],
                })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&file).expect("graph serializes")
    }
}

/// Parses and validates the JSON graph format
/// `{"vertices":[{"id":0,"list":[1,2],"pin":1},...],"edges":[[0,1],...]}`.
pub fn parse_graph(text: &str) -> Result<ListGraph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Syntax(e.to_string()))?;
    let n = file.vertices.len();
    let mut lists: Vec<Option<Vec<Color>>> = vec![None; n];
    let mut pins = vec![None; n];
    for rec in file.vertices {
        if rec.id >= n {
            return Err(GraphError::IdOutOfRange { id: rec.id, n });
        }
        if lists[rec.id].is_some() {
            return Err(GraphError::DuplicateId(rec.id));
        }
        lists[rec.id] = Some(rec.list);
        pins[rec.id] = rec.pin;
    }
    let lists = lists.into_iter().map(|l| l.expect("ids are a permutation")).collect();
    let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
    ListGraph::new(lists, pins, &edges)
}
