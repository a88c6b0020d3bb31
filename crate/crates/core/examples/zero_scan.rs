//! Complex zeros of random graphs with uniform lists of size `2 Delta` and
//! their distance to the segment `[0, 1]`.
//!
//! `cargo run --release --example zero_scan`

use potts_interp::exact_poly;
use potts_interp::scan::{scan_ensemble_default, EnsembleSpec};
use potts_interp::zeros::roots;
use potts_interp::ListGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)])?;
    let rs = roots(&exact_poly(&k3)?)?;
    for r in &rs.roots {
        println!("K3, q = 3: root {:.6} (multiplicity {})", r.value, r.multiplicity);
    }

    let spec: EnsembleSpec = "n=8,delta=3,q=6,count=40,seed=5".parse()?;
    let reports = scan_ensemble_default(&spec)?;
    let worst = reports
        .iter()
        .min_by(|a, b| a.clearance.total_cmp(&b.clearance))
        .expect("non-empty ensemble");
    println!("\n{} graphs, Delta = 3, q = 6", reports.len());
    println!("smallest clearance {:.4} on {} ({} vertices, {} edges)", worst.clearance, worst.graph_id, worst.n, worst.m);
    println!("proven strip half-width tau_Delta = {:.3e}", worst.tau_delta);
    println!("violations: {}", reports.iter().filter(|r| r.violation).count());
    println!("largest root residual {:.2e}", reports.iter().map(|r| r.max_residual).fold(0.0, f64::max));
    Ok(())
}
