//! Constants of the zero-free region and the triangle-free list parameters.
//!
//! `cargo run --example constants`

use potts_interp::condition::{alpha_star, min_beta};
use potts_interp::interpolator::rigorous_constants;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>12} {:>12} {:>12} {:>12}", "D", "eps_w", "nu_w", "nu_w unif", "tau_D");
    for delta in 1..=10 {
        let g = rigorous_constants(delta, false)?;
        let u = rigorous_constants(delta, true)?;
        println!("{delta:>3} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}", g.eps_w, g.nu_w, u.nu_w, g.tau_delta);
    }
    println!("\nalpha* = {:.9}", alpha_star());
    for alpha in [1.8, 2.0, 3.0] {
        println!("alpha = {alpha}: smallest beta = {:.4}", min_beta(alpha)?);
    }
    Ok(())
}
