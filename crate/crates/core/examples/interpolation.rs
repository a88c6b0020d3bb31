//! Interpolation of `Z(w)` from the easy point `w = 1`, with the error
//! against the exact oracle as the truncation order grows.
//!
//! `cargo run --release --example interpolation`

use num::complex::Complex64;
use potts_interp::interpolator::{build_phi, interpolate, interpolate_with_map, InterpOptions};
use potts_interp::{exact_eval, ListGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)])?;
    let w = Complex64::new(0.5, 0.0);
    let exact = exact_eval(&k3, w)?;

    let opts = InterpOptions::practical(0.9, 1e-3);
    let r = interpolate(&k3, w, &opts)?;
    println!("tau' = 0.9: k = {}, delta = {:.4}", r.diagnostics.k, r.diagnostics.delta);
    println!("estimate {} vs exact {}", r.estimate, exact);

    println!("\nrelative error by truncation order:");
    let phi = build_phi(0.9, &opts.phi_budget)?;
    for k in [5, 10, 20, 40, 80, 160] {
        let mut o = opts;
        o.k_override = Some(k);
        let e = interpolate_with_map(&k3, w, &o, &phi)?.estimate;
        println!("  k = {k:>3}: {:.3e}", (e - exact).norm() / exact.norm());
    }

    match interpolate(&k3, w, &InterpOptions::practical(0.05, 1e-3)) {
        Ok(r) => println!("\ntau' = 0.05: {}", r.estimate),
        Err(e) => println!("\ntau' = 0.05: {e}"),
    }
    Ok(())
}
