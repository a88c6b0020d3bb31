//! Falsification probes: the marginal-ratio recurrence, niceness, the
//! induction hypotheses and the analytic lemmas.
//!
//! `cargo run --release --example probes`

use num::complex::Complex64;
use potts_interp::probes::{fkappa_bounds_probe, geometry_probe, induction_suite, niceness_probe, recurrence_suite, verify_recurrence};
use potts_interp::{ConditionVariant, ListGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = ListGraph::uniform(4, 4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])?;
    let out = verify_recurrence(&g, 0, 1, 2, Complex64::new(0.4, 0.3))?;
    println!("recurrence on a diamond at w = 0.4 + 0.3i: {out:?}");

    let c6 = ListGraph::uniform(6, 4, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>())?;
    let r = niceness_probe(&c6, 0, 0.05, ConditionVariant::TwoDeg);
    println!("niceness on C6, q = 4: {} samples, max slack {:.3e}", r.samples, r.max_violation);

    let mut reports = recurrence_suite(1, 20, 5);
    reports.extend(induction_suite(1, 10, 10));
    reports.push(fkappa_bounds_probe(1.0, 3f64.ln(), 0.01, 10_000, 1)?);
    reports.push(geometry_probe(1, 10_000));
    for r in &reports {
        println!(
            "{:<5} {:<14} {:>7} samples, max violation {:.3e}",
            if r.pass { "pass" } else { "FAIL" },
            r.probe,
            r.samples,
            r.max_violation
        );
    }
    Ok(())
}
