//! The split graphs `G_k` and `H_k` used by the marginal-ratio recurrence.
//!
//! `cargo run --example graph_surgery`

use potts_interp::{build_g_k, build_h_k, parse_graph, ListGraph};

fn show(name: &str, g: &ListGraph) {
    println!("{name}: {} vertices, edges {:?}", g.vertex_count(), g.edges());
    for v in 0..g.vertex_count() {
        println!("  {v}: list {:?}, pin {:?}", g.list(v), g.pin(v));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_graph(
        r#"{"vertices":[{"id":0,"list":[1,2,3]},{"id":1,"list":[1,2]},{"id":2,"list":[2,3]},{"id":3,"list":[1,3]}],
            "edges":[[0,1],[0,2],[0,3],[1,2]]}"#,
    )?;
    show("G", &g);
    for k in 1..=g.degree(0) {
        let split = build_g_k(&g, 0, 1, 2, k)?;
        show(&format!("G_{k} (u = 0, i = 1, j = 2)"), &split.graph);
        println!("  neighbor v_{k} = {} maps to {}", g.neighbors(0)[k - 1], split.image(g.neighbors(0)[k - 1]));
    }
    show("H_2", &build_h_k(&g, 0, 1, 2, 2)?.graph);
    println!("\nround trip: {}", g.to_json());
    Ok(())
}
