#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use topomodal_core::semantics::{Model, Valuation};
use topomodal_core::space::enumerate_spaces;
use topomodal_core::syntax::{FoFormula, Language, ModalFormula, Name, PointTerm};
use topomodal_core::{PointSet, Space};

pub fn corpus(max_n: usize) -> &'static [Space] {
    static CORPUS: OnceLock<Vec<Space>> = OnceLock::new();
    let all = CORPUS.get_or_init(|| (1..=4).flat_map(enumerate_spaces).collect());
    let end = all.iter().position(|s| s.n() > max_n).unwrap_or(all.len());
    &all[..end]
}

pub fn space(max_n: usize) -> impl Strategy<Value = Space> {
    let spaces = corpus(max_n);
    (0..spaces.len()).prop_map(move |i| spaces[i].clone())
}

/// A model on a corpus space valuing letters `0..letters` and nominals
/// `0..nominals`.
pub fn model(max_n: usize, letters: u32, nominals: u32) -> impl Strategy<Value = Model> {
    (space(max_n), any::<u64>(), any::<u64>()).prop_map(move |(s, bits, places)| {
        let n = s.n();
        let mask = PointSet::full(n).bits();
        let mut val = Valuation::new();
        for p in 0..letters {
            val.set_prop(p, PointSet((bits >> (p as usize * n)) & mask));
        }
        for i in 0..nominals {
            val.set_nominal(i, ((places >> (8 * i)) % n as u64) as usize);
        }
        Model::new(s, val).unwrap()
    })
}

/// Random formulas using only constructors of `lang`, over letters
/// `p0..p1`, nominals `i0..i1` and variables `x0..x1`.
pub fn modal(lang: Language, depth: u32) -> BoxedStrategy<ModalFormula> {
    let hybrid = lang.includes(Language::HybridAt);
    let binder = lang == Language::HybridEDown;
    let mut leaves = vec![
        Just(ModalFormula::Top).boxed(),
        Just(ModalFormula::Bot).boxed(),
        (0u32..2).prop_map(ModalFormula::Prop).boxed(),
    ];
    if hybrid {
        leaves.push((0u32..2).prop_map(ModalFormula::Nom).boxed());
    }
    if binder {
        leaves.push((0u32..2).prop_map(ModalFormula::Var).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves);
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        let mut options = vec![
            inner.clone().prop_map(ModalFormula::not).boxed(),
            inner.clone().prop_map(ModalFormula::nec).boxed(),
            inner.clone().prop_map(ModalFormula::poss).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::and(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::or(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::implies(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::iff(a, b)).boxed(),
        ];
        if lang.includes(Language::ModalE) {
            options.push(inner.clone().prop_map(ModalFormula::some).boxed());
            options.push(inner.clone().prop_map(ModalFormula::all).boxed());
        }
        if lang == Language::ModalD {
            options.push(inner.clone().prop_map(ModalFormula::elsewhere).boxed());
        }
        if hybrid {
            options.push((0u32..2, inner.clone()).prop_map(|(i, a)| ModalFormula::at(Name::Nom(i), a)).boxed());
        }
        if binder {
            options.push((0u32..2, inner.clone()).prop_map(|(x, a)| ModalFormula::at(Name::Var(x), a)).boxed());
            options.push((0u32..2, inner.clone()).prop_map(|(x, a)| ModalFormula::down(x, a)).boxed());
        }
        proptest::strategy::Union::new(options)
    })
    .boxed()
}

/// Closes a formula by binding its free variables at the evaluation point.
pub fn close(phi: ModalFormula) -> ModalFormula {
    phi.free_vars().into_iter().rev().fold(phi, |acc, x| ModalFormula::down(x, acc))
}

fn term() -> impl Strategy<Value = PointTerm> {
    prop_oneof![(0u32..3).prop_map(PointTerm::Var), (0u32..2).prop_map(PointTerm::Const)]
}

pub fn fo(depth: u32) -> BoxedStrategy<FoFormula> {
    let leaf = prop_oneof![
        Just(FoFormula::Top),
        Just(FoFormula::Bot),
        (term(), term()).prop_map(|(a, b)| FoFormula::EqPt(a, b)),
        (0u32..2, 0u32..2).prop_map(|(u, v)| FoFormula::EqOp(u, v)),
        (0u32..2, term()).prop_map(|(p, t)| FoFormula::Pred(p, t)),
        (term(), 0u32..2).prop_map(|(t, u)| FoFormula::In(t, u)),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(FoFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::implies(a, b)),
            (0u32..3, inner.clone()).prop_map(|(x, a)| FoFormula::exists_pt(x, a)),
            (0u32..3, inner.clone()).prop_map(|(x, a)| FoFormula::forall_pt(x, a)),
            (0u32..2, inner.clone()).prop_map(|(u, a)| FoFormula::exists_op(u, a)),
            (0u32..2, inner.clone()).prop_map(|(u, a)| FoFormula::forall_op(u, a)),
        ]
    })
    .boxed()
}

/// Formulas of the pattern fragment whose only free variable is `x0`.
pub fn li(depth: u32) -> BoxedStrategy<FoFormula> {
    let leaf = prop_oneof![
        Just(FoFormula::Top),
        (term(), term()).prop_map(|(a, b)| FoFormula::EqPt(a, b)),
        (0u32..2, term()).prop_map(|(p, t)| FoFormula::Pred(p, t)),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(FoFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::implies(a, b)),
            (0u32..3, inner.clone()).prop_map(|(x, a)| FoFormula::exists_pt(x, a)),
            (0u32..3, inner.clone()).prop_map(|(x, a)| FoFormula::forall_pt(x, a)),
            (term(), 0u32..3, inner.clone()).prop_map(|(t, y, a)| interior_pattern(t, y, a)),
            (term(), 0u32..3, inner.clone()).prop_map(|(t, y, a)| closure_pattern(t, y, a)),
        ]
    })
    .prop_map(|a| {
        let free: Vec<u32> = a.free_point_vars().into_iter().filter(|&x| x != 0).collect();
        free.into_iter().fold(a, |acc, x| FoFormula::exists_pt(x, acc))
    })
    .boxed()
}

pub fn interior_pattern(t: PointTerm, y: u32, a: FoFormula) -> FoFormula {
    FoFormula::exists_op(
        0,
        FoFormula::and(
            FoFormula::In(t, 0),
            FoFormula::forall_pt(y, FoFormula::implies(FoFormula::var_in(y, 0), a)),
        ),
    )
}

pub fn closure_pattern(t: PointTerm, y: u32, a: FoFormula) -> FoFormula {
    FoFormula::forall_op(
        0,
        FoFormula::implies(
            FoFormula::In(t, 0),
            FoFormula::exists_pt(y, FoFormula::and(FoFormula::var_in(y, 0), a)),
        ),
    )
}

/// Every model on a corpus space of at most `max_n` points valuing `p0`.
pub fn one_letter_models(max_n: usize) -> Vec<Model> {
    corpus(max_n)
        .iter()
        .flat_map(|s| {
            s.points()
                .subsets()
                .map(move |a| Model::new(s.clone(), Valuation::new().with_prop(0, a)).unwrap())
        })
        .collect()
}
