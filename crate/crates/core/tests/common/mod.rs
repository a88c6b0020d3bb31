#![allow(dead_code)]

use potts_interp::ListGraph;
use proptest::prelude::*;

/// Simple graph on `n_lo..=n_hi` vertices with lists drawn from `1..=palette`.
pub fn list_graph(n_lo: usize, n_hi: usize, palette: u32, max_deg: usize) -> impl Strategy<Value = ListGraph> {
    (n_lo..=n_hi).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(any::<bool>(), pairs),
            proptest::collection::vec(proptest::collection::btree_set(1..=palette, 1..=palette as usize), n),
        )
            .prop_map(move |(mask, lists)| {
                let mut deg = vec![0; n];
                let mut edges = Vec::new();
                let mut t = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if mask[t] && deg[a] < max_deg && deg[b] < max_deg {
                            edges.push((a, b));
                            deg[a] += 1;
                            deg[b] += 1;
                        }
                        t += 1;
                    }
                }
                let lists = lists.into_iter().map(|s| s.into_iter().collect()).collect();
                ListGraph::new(lists, vec![None; n], &edges).expect("valid graph")
            })
    })
}

pub fn complete(n: usize, q: u32) -> ListGraph {
    let e: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    ListGraph::uniform(n, q, &e).unwrap()
}

pub fn path(n: usize, q: u32) -> ListGraph {
    let e: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    ListGraph::uniform(n, q, &e).unwrap()
}
