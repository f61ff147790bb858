mod common;

use topomodal_core::bisim::{
    greatest_topo_bisimulation, is_topo_bisimulation, kripke_bisimulation, potential_homeomorphism,
    satisfies_zig_zag, union_of_graphs, MeaningTable,
};
use topomodal_core::semantics::{eval_modal, Assignment};

#[test]
fn hennessy_milner_on_three_points() {
    let models = common::one_letter_models(3);
    assert_eq!(models.len(), 250);
    let g = Assignment::new();
    for m1 in &models {
        for m2 in &models {
            let z = greatest_topo_bisimulation(m1, m2);
            assert_eq!(z, kripke_bisimulation(m1, m2));
            if !z.is_empty() {
                assert!(is_topo_bisimulation(m1, m2, &z).unwrap());
                assert!(satisfies_zig_zag(m1, m2, &z).unwrap());
            }
            let table = MeaningTable::new(m1, m2, 3);
            for w in 0..m1.n() {
                for w2 in 0..m2.n() {
                    match table.distinguish(w, w2) {
                        None => assert!(z.contains(w, w2)),
                        Some(phi) => {
                            assert!(!z.contains(w, w2));
                            assert_ne!(eval_modal(m1, w, phi, &g).unwrap(), eval_modal(m2, w2, phi, &g).unwrap());
                            assert!(phi.modal_depth() <= 3);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn bisimilar_points_agree_at_depth_four() {
    let models = common::one_letter_models(2);
    for m1 in &models {
        for m2 in &models {
            let z = greatest_topo_bisimulation(m1, m2);
            let table = MeaningTable::new(m1, m2, 4);
            for (w, w2) in z.pairs() {
                assert!(table.distinguish(w, w2).is_none());
            }
        }
    }
}

#[test]
fn potential_homeomorphisms_give_topo_bisimulations() {
    let models = common::one_letter_models(3);
    for m1 in models.iter().step_by(7) {
        for m2 in models.iter().step_by(5) {
            let family = potential_homeomorphism(m1, m2).unwrap();
            if family.is_empty() {
                continue;
            }
            let z = union_of_graphs(m1.n(), m2.n(), &family);
            assert!(is_topo_bisimulation(m1, m2, &z).unwrap());
            assert!(z.pairs().iter().all(|&(w, w2)| greatest_topo_bisimulation(m1, m2).contains(w, w2)));
        }
        assert!(!potential_homeomorphism(m1, m1).unwrap().is_empty());
    }
}
