mod common;

use common::list_graph;
use num::complex::Complex64;
use potts_interp::exact_poly;
use potts_interp::scan::{scan_ensemble_default, EnsembleSpec};
use potts_interp::zeros::{clearance, roots, segment_distance};
use proptest::prelude::*;

#[test]
fn segment_distance_cases() {
    assert_eq!(segment_distance(Complex64::new(-1.0, 0.0)), 1.0);
    assert_eq!(segment_distance(Complex64::new(0.5, 0.25)), 0.25);
    assert_eq!(segment_distance(Complex64::new(4.0, 4.0)), 5.0);
    assert_eq!(clearance(&[]), f64::INFINITY);
}

#[test]
fn ensemble_respects_the_strip() {
    let spec: EnsembleSpec = "n=7,delta=3,q=6,count=30,seed=4".parse().unwrap();
    for r in scan_ensemble_default(&spec).unwrap() {
        assert!(r.condition_ok && !r.violation && r.converged, "{}", r.graph_id);
        assert!(r.clearance >= r.tau_delta);
        assert!(r.max_residual <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplicities_cover_the_degree(g in list_graph(2, 6, 4, 4)) {
        let p = exact_poly(&g).unwrap();
        prop_assume!(p.degree() >= 1);
        let rs = roots(&p).unwrap();
        prop_assert!(rs.converged);
        prop_assert_eq!(rs.multiplicity_sum(), p.degree());
        prop_assert!(rs.max_residual() <= 1e-8, "residual {}", rs.max_residual());
        prop_assert!(rs.pairing_defect <= 1e-6, "pairing {}", rs.pairing_defect);
        for r in &rs.roots {
            // non-negative coefficients rule out roots on (0, inf)
            prop_assert!(!(r.value.im == 0.0 && r.value.re > 0.0));
        }
    }
}
