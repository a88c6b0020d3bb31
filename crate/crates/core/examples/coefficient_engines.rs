//! Taylor coefficients of `Z(1 + x)` and of `log Z(1 + x)` from the direct
//! subset enumeration and from the connected cluster expansion.
//!
//! `cargo run --example coefficient_engines`

use potts_interp::cluster::fk_coeffs_connected_with;
use potts_interp::cluster::ClusterOptions;
use potts_interp::coeffs::fk_coeffs_direct;
use potts_interp::ListGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)])?;
    let a = fk_coeffs_direct(&k3, 3)?;
    println!("K3, q = 3: a = {:?}", a.a.iter().map(|x| x.to_string()).collect::<Vec<_>>());

    let edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).chain([(0, 3)]).collect();
    let g = ListGraph::uniform(6, 4, &edges)?;
    let k = 6;
    let direct = fk_coeffs_direct(&g, k)?.log()?;
    let (connected, stats) = fk_coeffs_connected_with(&g, k, ClusterOptions::default())?;
    for (j, (d, c)) in direct.c.iter().zip(&connected.c).enumerate() {
        println!("c_{} = {d}  (connected engine: {c})", j + 1);
    }
    println!("engines agree exactly: {}", direct == connected);
    println!("connected edge sets by size: {:?}", &stats.polymers_by_size[1..]);
    println!("clusters by number of polymers: {:?}", &stats.clusters_by_level[1..]);
    Ok(())
}
