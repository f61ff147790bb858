mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use topomodal_core::props::named_formula;
use topomodal_core::semantics::{
    eval_fo, eval_modal, lifted_valuation, satisfiable_on_size, truth_set, valid_on_space, Assignment, Formula,
    Model, SweepGuard, Valuation,
};
use topomodal_core::space::{alexandroff_extension, sum};
use topomodal_core::syntax::{lt_check, parse_fo, parse_modal, Language, ModalFormula};
use topomodal_core::translate::st;
use topomodal_core::{Base, PointMap, PointSet, Space};

fn valid(s: &Space, phi: &ModalFormula) -> bool {
    valid_on_space(s, phi).unwrap().is_valid()
}

/// Every surjective interior map between corpus spaces with at most three
/// points, plus those from four points onto at most two.
fn interior_images() -> &'static [PointMap] {
    static MAPS: OnceLock<Vec<PointMap>> = OnceLock::new();
    MAPS.get_or_init(|| {
        let mut out = Vec::new();
        for source in common::corpus(4) {
            let bound = if source.n() == 4 { 2 } else { 3 };
            for target in common::corpus(bound) {
                let (n, m) = (source.n(), target.n());
                for code in 0..m.pow(n as u32) {
                    let table = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
                    let f = PointMap::new(source.clone(), target.clone(), table).unwrap();
                    if f.is_surjective() && f.is_interior_map() {
                        out.push(f);
                    }
                }
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn box_is_interior_and_diamond_is_closure(phi in common::modal(Language::HybridE, 3), m in common::model(4, 2, 2)) {
        let g = Assignment::new();
        let s = m.space();
        let inner = truth_set(&m, &phi, &g).unwrap();
        prop_assert_eq!(truth_set(&m, &ModalFormula::nec(phi.clone()), &g).unwrap(), s.interior_of(inner));
        prop_assert_eq!(truth_set(&m, &ModalFormula::poss(phi.clone()), &g).unwrap(), s.closure_of(inner));
        let dual = ModalFormula::not(ModalFormula::nec(ModalFormula::not(phi.clone())));
        prop_assert_eq!(truth_set(&m, &dual, &g).unwrap(), s.closure_of(inner));
    }

    #[test]
    fn e_is_phi_or_elsewhere(phi in common::modal(Language::ModalD, 3), m in common::model(4, 2, 0)) {
        let g = Assignment::new();
        let via_d = ModalFormula::or(phi.clone(), ModalFormula::elsewhere(phi.clone()));
        prop_assert_eq!(
            truth_set(&m, &ModalFormula::some(phi), &g).unwrap(),
            truth_set(&m, &via_d, &g).unwrap()
        );
    }

    #[test]
    fn lt_formulas_are_base_invariant(phi in common::modal(Language::Ml, 3), alpha in common::fo(4), m in common::model(4, 2, 2)) {
        let base = m.space().minimal_neighborhood_base();
        let translated = st(&phi, 0).unwrap();
        for formula in [translated, alpha] {
            if !lt_check(&formula) || !formula.free_open_vars().is_empty() {
                continue;
            }
            let points: Vec<u32> = formula.free_point_vars().into_iter().collect();
            for code in 0..m.n().pow(points.len() as u32) {
                let mut g = Assignment::new();
                for (k, &x) in points.iter().enumerate() {
                    g = g.with_point(x, code / m.n().pow(k as u32) % m.n());
                }
                let topological = eval_fo(&m, &formula, &g).unwrap();
                let basoid = eval_fo(&m, &formula, &g.clone().with_scope(base.clone())).unwrap();
                prop_assert_eq!(topological, basoid);
            }
        }
    }

    #[test]
    fn sums_preserve_and_reflect_validity(
        phi in common::modal(Language::Ml, 3),
        a in common::space(3),
        b in common::space(3),
    ) {
        let total = sum(&[a.clone(), b.clone()]).unwrap();
        prop_assert_eq!(valid(&total, &phi), valid(&a, &phi) && valid(&b, &phi));
    }

    #[test]
    fn open_subspaces_preserve_validity(
        phi in common::modal(Language::HybridAt, 3),
        s in common::space(4),
        pick in any::<usize>(),
    ) {
        let opens: Vec<PointSet> = s.opens().iter().copied().filter(|o| !o.is_empty()).collect();
        let (sub, _) = s.open_subspace(opens[pick % opens.len()]).unwrap();
        prop_assert!(!valid(&s, &phi) || valid(&sub, &phi));
    }

    #[test]
    fn interior_images_preserve_validity(phi in common::modal(Language::ModalE, 3), pick in any::<usize>()) {
        let maps = interior_images();
        let f = &maps[pick % maps.len()];
        prop_assert!(!valid(f.source(), &phi) || valid(f.target(), &phi));
    }

    #[test]
    fn truth_lemma_for_the_alexandroff_extension(phi in common::modal(Language::ModalE, 3), m in common::model(4, 2, 0)) {
        let ext = alexandroff_extension(m.space());
        let lifted = Model::new(ext.space.clone(), lifted_valuation(&ext, m.val())).unwrap();
        let g = Assignment::new();
        let truth = truth_set(&m, &phi, &g).unwrap();
        let upstairs = truth_set(&lifted, &phi, &g).unwrap();
        for (i, u) in ext.ultrafilters.iter().enumerate() {
            prop_assert_eq!(upstairs.contains(i), u.contains(truth));
        }
        prop_assert_eq!(valid(&ext.space, &phi), valid(m.space(), &phi));
    }
}

#[test]
fn base_sensitive_formula() {
    let alpha = parse_fo("(ex-op U0 (and (in x0 U0) (ex-pt x1 (and (not (= x1 x0)) (in x1 U0)))))").unwrap();
    assert!(!lt_check(&alpha));
    let m = Model::bare(Space::discrete(2));
    let base = Base::new(2, [PointSet::EMPTY, PointSet::singleton(0), PointSet::singleton(1)]).unwrap();
    let g = Assignment::new().with_point(0, 0);
    assert!(eval_fo(&m, &alpha, &g).unwrap());
    assert!(!eval_fo(&m, &alpha, &g.with_scope(base)).unwrap());
}

#[test]
fn validity_examples() {
    let grz = named_formula("Grz").unwrap();
    assert!(valid(&Space::sierpinski(), &grz));
    let c = valid_on_space(&Space::trivial(2), &grz).unwrap();
    assert_eq!(c.counterexample().unwrap().valuation.prop(0), Some(PointSet::singleton(0)));
    let conn = named_formula("conn").unwrap();
    let c = valid_on_space(&Space::discrete(2), &conn).unwrap();
    assert_eq!(c.counterexample().unwrap().valuation.prop(0), Some(PointSet::singleton(0)));
}

#[test]
fn evaluation_examples() {
    let one = Model::new(Space::one_point(), Valuation::new().with_prop(0, PointSet::singleton(0))).unwrap();
    let g = Assignment::new();
    assert!(!eval_modal(&one, 0, &parse_modal("D p0").unwrap(), &g).unwrap());
    let m = Model::new(Space::sierpinski(), Valuation::new().with_nominal(0, 0)).unwrap();
    assert!(eval_modal(&m, 1, &parse_modal("<>i0").unwrap(), &g).unwrap());
    assert!(!eval_modal(&m, 1, &parse_modal("i0").unwrap(), &g).unwrap());
    let bare = Model::bare(Space::sierpinski());
    assert!(eval_modal(&bare, 0, &parse_modal("!x0.[]x0").unwrap(), &g).unwrap());
    assert!(!eval_modal(&bare, 1, &parse_modal("!x0.[]x0").unwrap(), &g).unwrap());
}

#[test]
fn satisfiability_search() {
    let down_box = Formula::Modal(parse_modal("!x0.[]x0").unwrap());
    let w = satisfiable_on_size(&down_box, 2, SweepGuard::default()).unwrap().unwrap();
    assert!(eval_modal(&w.model, w.point.unwrap(), &parse_modal("!x0.[]x0").unwrap(), &w.assignment).unwrap());
    let contradiction = Formula::Modal(parse_modal("p0 & ~p0").unwrap());
    assert!(satisfiable_on_size(&contradiction, 3, SweepGuard::default()).unwrap().is_none());
}
