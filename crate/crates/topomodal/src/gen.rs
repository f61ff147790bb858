//! Seeded random spaces, models, maps and formulas.

use rand::seq::SliceRandom;
use rand::Rng;
use topomodal_core::semantics::{Model, Valuation};
use topomodal_core::space::Preorder;
use topomodal_core::syntax::{FoFormula, Language, ModalFormula, Name, PointTerm};
use topomodal_core::{PointMap, PointSet, Space};

/// A space on `1..=max_n` points, drawn as the reflexive-transitive
/// closure of a random relation.
pub fn space<R: Rng>(rng: &mut R, max_n: usize) -> Space {
    let n = rng.gen_range(1..=max_n);
    space_on(rng, n)
}

pub fn space_on<R: Rng>(rng: &mut R, n: usize) -> Space {
    let density: f64 = rng.gen_range(0.0..0.6);
    let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
    for (x, row) in up.iter_mut().enumerate() {
        for y in 0..n {
            if y != x && rng.gen_bool(density) {
                *row = row.with(y);
            }
        }
    }
    // Warshall closure
    for k in 0..n {
        for x in 0..n {
            if up[x].contains(k) {
                up[x] = up[x].union(up[k]);
            }
        }
    }
    Preorder::new(up).expect("closure is reflexive and transitive").to_space()
}

pub fn valuation<R: Rng>(rng: &mut R, n: usize, letters: u32, nominals: u32) -> Valuation {
    let mut val = Valuation::new();
    let mask = PointSet::full(n).bits();
    for p in 0..letters {
        val.set_prop(p, PointSet(rng.gen::<u64>() & mask));
    }
    for i in 0..nominals {
        val.set_nominal(i, rng.gen_range(0..n));
    }
    val
}

pub fn model<R: Rng>(rng: &mut R, max_n: usize, letters: u32, nominals: u32) -> Model {
    let s = space(rng, max_n);
    let val = valuation(rng, s.n(), letters, nominals);
    Model::new(s, val).expect("generated valuations are in range")
}

/// A surjective interior map between random spaces of at most `max_n`
/// points. Rejection sampling; every source has at least the constant map
/// onto a point, so it terminates.
pub fn interior_image<R: Rng>(rng: &mut R, max_n: usize) -> PointMap {
    loop {
        let source = space(rng, max_n);
        let target = space(rng, source.n());
        for _ in 0..64 {
            let table = (0..source.n()).map(|_| rng.gen_range(0..target.n())).collect();
            let f = PointMap::new(source.clone(), target.clone(), table).expect("table is in range");
            if f.is_surjective() && f.is_interior_map() {
                return f;
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Not,
    Box,
    Diamond,
    And,
    Or,
    Implies,
    Iff,
    E,
    A,
    D,
    AtNom,
    AtVar,
    Down,
}

/// Shape of random modal formulas.
#[derive(Debug, Clone, Copy)]
pub struct FormulaShape {
    pub lang: Language,
    pub depth: usize,
    pub letters: u32,
    pub nominals: u32,
    pub vars: u32,
}

impl FormulaShape {
    pub fn new(lang: Language, depth: usize) -> FormulaShape {
        let hybrid = lang.includes(Language::HybridAt);
        FormulaShape {
            lang,
            depth,
            letters: 2,
            nominals: if hybrid { 2 } else { 0 },
            vars: if lang == Language::HybridEDown { 2 } else { 0 },
        }
    }

    fn ops(&self) -> Vec<Op> {
        let mut ops = vec![Op::Not, Op::Box, Op::Diamond, Op::And, Op::Or, Op::Implies, Op::Iff];
        if self.lang.includes(Language::ModalE) {
            ops.extend([Op::E, Op::A]);
        }
        if self.lang == Language::ModalD {
            ops.push(Op::D);
        }
        if self.lang.includes(Language::HybridAt) && self.nominals > 0 {
            ops.push(Op::AtNom);
        }
        if self.lang == Language::HybridEDown && self.vars > 0 {
            ops.extend([Op::AtVar, Op::Down]);
        }
        ops
    }
}

fn leaf<R: Rng>(rng: &mut R, shape: &FormulaShape) -> ModalFormula {
    let kinds = 2 + (shape.letters > 0) as u32 * 3 + (shape.nominals > 0) as u32 + (shape.vars > 0) as u32;
    let mut pick = rng.gen_range(0..kinds);
    if pick < 2 {
        return if pick == 0 { ModalFormula::Top } else { ModalFormula::Bot };
    }
    pick -= 2;
    if shape.letters > 0 {
        if pick < 3 {
            return ModalFormula::Prop(rng.gen_range(0..shape.letters));
        }
        pick -= 3;
    }
    if shape.nominals > 0 {
        if pick == 0 {
            return ModalFormula::Nom(rng.gen_range(0..shape.nominals));
        }
        pick -= 1;
    }
    debug_assert_eq!(pick, 0);
    ModalFormula::Var(rng.gen_range(0..shape.vars))
}

/// A formula of the shape's language with modal depth at most
/// `shape.depth`. Formulas of `H(E,↓)` may have free variables; see
/// [`close`].
pub fn formula<R: Rng>(rng: &mut R, shape: &FormulaShape) -> ModalFormula {
    build(rng, shape, &shape.ops(), shape.depth, 6)
}

fn build<R: Rng>(rng: &mut R, shape: &FormulaShape, ops: &[Op], depth: usize, size: usize) -> ModalFormula {
    if size == 0 || rng.gen_bool(0.3) {
        return leaf(rng, shape);
    }
    let op = *ops.choose(rng).expect("ML operators are always available");
    let modal = matches!(op, Op::Box | Op::Diamond | Op::E | Op::A | Op::D);
    if modal && depth == 0 {
        return build(rng, shape, ops, depth, size - 1);
    }
    let inner = if modal { depth - 1 } else { depth };
    let sub = |rng: &mut R| build(rng, shape, ops, inner, size - 1);
    match op {
        Op::Not => ModalFormula::not(sub(rng)),
        Op::Box => ModalFormula::nec(sub(rng)),
        Op::Diamond => ModalFormula::poss(sub(rng)),
        Op::And => ModalFormula::and(sub(rng), sub(rng)),
        Op::Or => ModalFormula::or(sub(rng), sub(rng)),
        Op::Implies => ModalFormula::implies(sub(rng), sub(rng)),
        Op::Iff => ModalFormula::iff(sub(rng), sub(rng)),
        Op::E => ModalFormula::some(sub(rng)),
        Op::A => ModalFormula::all(sub(rng)),
        Op::D => ModalFormula::elsewhere(sub(rng)),
        Op::AtNom => {
            let i = rng.gen_range(0..shape.nominals);
            ModalFormula::at(Name::Nom(i), sub(rng))
        }
        Op::AtVar => {
            let x = rng.gen_range(0..shape.vars);
            ModalFormula::at(Name::Var(x), sub(rng))
        }
        Op::Down => {
            let x = rng.gen_range(0..shape.vars);
            ModalFormula::down(x, sub(rng))
        }
    }
}

/// Binds every free variable at the evaluation point.
pub fn close(phi: ModalFormula) -> ModalFormula {
    phi.free_vars().into_iter().rev().fold(phi, |acc, x| ModalFormula::down(x, acc))
}

fn term<R: Rng>(rng: &mut R) -> PointTerm {
    if rng.gen_bool(0.75) {
        PointTerm::Var(rng.gen_range(0..3))
    } else {
        PointTerm::Const(rng.gen_range(0..2))
    }
}

/// A formula of the neighbourhood-pattern fragment over `p0, p1`, `c0, c1`,
/// whose only free point variable is `x0`.
pub fn li_formula<R: Rng>(rng: &mut R, size: usize) -> FoFormula {
    let alpha = li_body(rng, size);
    let free: Vec<u32> = alpha.free_point_vars().into_iter().filter(|&x| x != 0).collect();
    free.into_iter().fold(alpha, |acc, x| FoFormula::exists_pt(x, acc))
}

fn li_body<R: Rng>(rng: &mut R, size: usize) -> FoFormula {
    if size == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..3) {
            0 => FoFormula::Top,
            1 => FoFormula::EqPt(term(rng), term(rng)),
            _ => FoFormula::Pred(rng.gen_range(0..2), term(rng)),
        };
    }
    let sub = |rng: &mut R| li_body(rng, size - 1);
    match rng.gen_range(0..8) {
        0 => FoFormula::not(sub(rng)),
        1 => FoFormula::and(sub(rng), sub(rng)),
        2 => FoFormula::or(sub(rng), sub(rng)),
        3 => FoFormula::implies(sub(rng), sub(rng)),
        4 => FoFormula::exists_pt(rng.gen_range(0..3), sub(rng)),
        5 => FoFormula::forall_pt(rng.gen_range(0..3), sub(rng)),
        6 => {
            let (t, y) = (term(rng), rng.gen_range(0..3));
            let body = sub(rng);
            FoFormula::exists_op(
                0,
                FoFormula::and(
                    FoFormula::In(t, 0),
                    FoFormula::forall_pt(y, FoFormula::implies(FoFormula::var_in(y, 0), body)),
                ),
            )
        }
        _ => {
            let (t, y) = (term(rng), rng.gen_range(0..3));
            let body = sub(rng);
            FoFormula::forall_op(
                0,
                FoFormula::implies(
                    FoFormula::In(t, 0),
                    FoFormula::exists_pt(y, FoFormula::and(FoFormula::var_in(y, 0), body)),
                ),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use topomodal_core::syntax::{language_of, li_check};

    #[test]
    fn formulas_stay_in_their_language() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for lang in Language::ALL {
            let shape = FormulaShape::new(lang, 3);
            for _ in 0..500 {
                let phi = formula(&mut rng, &shape);
                assert!(lang.includes(language_of(&phi).unwrap()));
                assert!(phi.modal_depth() <= 3);
                assert!(phi.props().len() <= 2 && phi.nominals().len() <= 2);
            }
        }
    }

    #[test]
    fn generated_objects_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = space(&mut rng, 4);
            assert!((1..=4).contains(&s.n()));
            let f = interior_image(&mut rng, 4);
            assert!(f.is_surjective() && f.is_interior_map());
            let alpha = li_formula(&mut rng, 5);
            assert!(li_check(&alpha));
            assert!(alpha.free_point_vars().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn seeds_reproduce() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (space(&mut rng, 4), formula(&mut rng, &FormulaShape::new(Language::HybridE, 3)))
        };
        assert_eq!(draw(3), draw(3));
    }
}
