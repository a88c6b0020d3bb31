mod common;

use common::{complete, list_graph};
use num::BigInt;
use potts_interp::cluster::fk_coeffs_connected;
use potts_interp::coeffs::fk_coeffs_direct;
use potts_interp::exact_poly;
use potts_interp::series::exp_series;
use proptest::prelude::*;

#[test]
fn triangle_expansion() {
    let a = fk_coeffs_direct(&complete(3, 3), 3).unwrap();
    assert_eq!(a.a, [27, 27, 9, 3].map(BigInt::from));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engines_agree(g in list_graph(2, 7, 4, 4), k in 1usize..=5) {
        let direct = fk_coeffs_direct(&g, k).unwrap().log().unwrap();
        let connected = fk_coeffs_connected(&g, k).unwrap();
        prop_assert_eq!(direct, connected);
    }

    #[test]
    fn shift_matches_direct(g in list_graph(1, 6, 3, 4)) {
        let m = g.edge_count();
        let shifted = exact_poly(&g).unwrap().shift_by_one();
        let direct = fk_coeffs_direct(&g, m).unwrap();
        for j in 0..=m {
            let s = shifted.get(j).cloned().map(BigInt::from).unwrap_or_default();
            prop_assert_eq!(&s, &direct.a[j]);
        }
    }

    #[test]
    fn exp_inverts_log(g in list_graph(2, 6, 4, 4), k in 1usize..=5) {
        let a = fk_coeffs_direct(&g, k).unwrap();
        let c = a.log().unwrap();
        prop_assert_eq!(exp_series(&c, &a.a[0]).unwrap(), a.a);
    }
}
