mod common;

use proptest::prelude::*;
use topomodal_core::algebra::{check_interior_algebra, complex_algebra, dual_space, equation_valid, hom_dual};
use topomodal_core::semantics::valid_on_space;
use topomodal_core::space::is_homeomorphic;
use topomodal_core::syntax::Language;
use topomodal_core::PointMap;

#[test]
fn complex_algebras_are_interior_algebras_and_dualise_back() {
    for s in common::corpus(4) {
        let b = complex_algebra(s);
        assert_eq!(check_interior_algebra(&b), Ok(()));
        let back = dual_space(&b).unwrap();
        assert!(is_homeomorphic(&back, s).unwrap());
        assert_eq!(&back, s);
    }
}

#[test]
fn inverse_images_of_interior_maps_are_homomorphisms() {
    for source in common::corpus(3) {
        for target in common::corpus(2) {
            let (n, m) = (source.n(), target.n());
            for code in 0..m.pow(n as u32) {
                let table = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
                let f = PointMap::new(source.clone(), target.clone(), table).unwrap();
                assert_eq!(hom_dual(&f).is_ok(), f.is_interior_map());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn algebraic_validity_matches_space_validity(phi in common::modal(Language::Ml, 3), s in common::space(4)) {
        let b = complex_algebra(&s);
        prop_assert_eq!(equation_valid(&b, &phi).unwrap(), valid_on_space(&s, &phi).unwrap().is_valid());
    }
}
