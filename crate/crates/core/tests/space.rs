mod common;

use std::collections::BTreeSet;

use topomodal_core::space::{
    alexandroff_extension, enumerate_spaces, enumerate_spaces_by_filtering, from_preorder, is_homeomorphic,
    is_u_morphic_image, SearchGuard,
};
use topomodal_core::PointSet;

#[test]
fn kuratowski_laws() {
    for s in common::corpus(4) {
        let x = s.points();
        assert_eq!(s.interior_of(x), x);
        for a in x.subsets() {
            let ia = s.interior_of(a);
            assert!(ia.is_subset(a));
            assert!(s.is_open(ia));
            assert_eq!(s.interior_of(ia), ia);
            assert_eq!(s.closure_of(a), s.interior_of(a.complement(s.n())).complement(s.n()));
            assert!(a.is_subset(s.closure_of(a)) && s.is_closed(s.closure_of(a)));
            for b in x.subsets() {
                assert_eq!(s.interior_of(a.intersection(b)), ia.intersection(s.interior_of(b)));
            }
        }
    }
}

#[test]
fn minimal_base_generates_the_space() {
    for s in common::corpus(4) {
        assert_eq!(&s.minimal_neighborhood_base().generate_topology(), s);
        let own = topomodal_core::Base::new(s.n(), s.opens().iter().copied()).unwrap();
        assert_eq!(&own.generate_topology(), s);
    }
}

#[test]
fn preorder_round_trip() {
    for s in common::corpus(4) {
        let r = s.specialization_preorder();
        assert_eq!(&from_preorder(&r), s);
        assert_eq!(from_preorder(&r).specialization_preorder(), r);
        for x in 0..s.n() {
            for y in 0..s.n() {
                assert_eq!(r.le(x, y), s.closure_of(PointSet::singleton(y)).contains(x));
            }
        }
    }
}

#[test]
fn enumeration_matches_filtering() {
    for n in 1..=3 {
        let by_preorder: BTreeSet<Vec<PointSet>> = enumerate_spaces(n).map(|s| s.opens().to_vec()).collect();
        let by_filter: BTreeSet<Vec<PointSet>> =
            enumerate_spaces_by_filtering(n).unwrap().iter().map(|s| s.opens().to_vec()).collect();
        assert_eq!(by_preorder.len(), enumerate_spaces(n).count(), "duplicates at n={n}");
        assert_eq!(by_preorder, by_filter, "n={n}");
    }
}

#[test]
fn alexandroff_extension_is_homeomorphic() {
    for s in common::corpus(4) {
        let ext = alexandroff_extension(s);
        assert!(is_homeomorphic(&ext.space, s).unwrap());
        assert!(ext.pi.is_interior_map() && ext.pi.is_surjective());
    }
}

#[test]
fn u_morphic_images_of_small_spaces() {
    let guard = SearchGuard::default();
    for x in common::corpus(3) {
        for y in common::corpus(3) {
            let expected = is_homeomorphic(x, y).unwrap();
            assert_eq!(is_u_morphic_image(x, y, guard).unwrap(), expected, "{x:?} {y:?}");
        }
    }
}
