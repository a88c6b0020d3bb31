//! Exact monochromatic-edge polynomial of a triangle and its proper
//! coloring count.
//!
//! `cargo run --example exact_oracle`

use num::complex::Complex64;
use num::rational::BigRational;
use potts_interp::exact::exact_eval_rational;
use potts_interp::{exact_eval, exact_poly, ColorResolved, ListGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k3 = ListGraph::uniform(3, 3, &[(0, 1), (0, 2), (1, 2)])?;
    let poly = exact_poly(&k3)?;
    println!("K3, q = 3: Z(w) coefficients {:?}", poly.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("proper colorings Z(0) = {}", poly.coeffs[0]);
    println!("assignments Z(1) = {}", poly.total());

    let half = BigRational::new(1.into(), 2.into());
    println!("Z(1/2) = {} exactly", exact_eval_rational(&k3, &half)?);
    println!("Z(0.3 + 0.2i) = {}", exact_eval(&k3, Complex64::new(0.3, 0.2))?);

    // a vertex pinned to color 1 hanging off vertex 0
    let g = ListGraph::new(
        vec![vec![1, 2, 3], vec![1, 2], vec![2, 3], vec![1]],
        vec![None, None, None, Some(1)],
        &[(0, 1), (1, 2), (0, 3)],
    )?;
    let cr = ColorResolved::new(&g)?;
    for c in [1, 2, 3] {
        println!("Pr[c(0) = {c}] at w = 1/2: {}", cr.marginal_rational(0, c, &half)?);
    }
    Ok(())
}
