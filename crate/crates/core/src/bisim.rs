//! Topo-bisimulations, bounded modal equivalence, and potential
//! homeomorphisms between finite models.

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::semantics::Model;
use crate::set::PointSet;
use crate::syntax::ModalFormula;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BisimError {
    PointOutOfRange { point: usize, n: usize },
    SizeGuard { limit: usize, actual: usize },
}

impl fmt::Display for BisimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BisimError::PointOutOfRange { point, n } => write!(f, "point {point} is not within 0..{n}"),
            BisimError::SizeGuard { limit, actual } => {
                write!(f, "model has {actual} points, above the limit {limit}")
            }
        }
    }
}

impl core::error::Error for BisimError {}

/// A relation between the points of two models, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairRelation {
    n2: usize,
    rows: Vec<PointSet>,
}

impl PairRelation {
    pub fn empty(n1: usize, n2: usize) -> PairRelation {
        PairRelation {
            n2,
            rows: vec![PointSet::EMPTY; n1],
        }
    }

    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n1: usize, n2: usize, pairs: I) -> Result<PairRelation, BisimError> {
        let mut r = PairRelation::empty(n1, n2);
        for (x, y) in pairs {
            if x >= n1 {
                return Err(BisimError::PointOutOfRange { point: x, n: n1 });
            }
            if y >= n2 {
                return Err(BisimError::PointOutOfRange { point: y, n: n2 });
            }
            r.rows[x] = r.rows[x].with(y);
        }
        Ok(r)
    }

    pub fn identity(n: usize) -> PairRelation {
        PairRelation {
            n2: n,
            rows: (0..n).map(PointSet::singleton).collect(),
        }
    }

    pub fn total(n1: usize, n2: usize) -> PairRelation {
        PairRelation {
            n2,
            rows: vec![PointSet::full(n2); n1],
        }
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows.get(x).is_some_and(|r| r.contains(y))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, x: usize) -> PointSet {
        self.rows[x]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, r)| r.iter().map(move |y| (x, y)))
            .collect()
    }

    /// `Z[A]`
    pub fn image(&self, a: PointSet) -> PointSet {
        a.iter().fold(PointSet::EMPTY, |acc, x| acc.union(self.rows[x]))
    }

    /// `Z⁻¹[B]`
    pub fn preimage(&self, b: PointSet) -> PointSet {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_disjoint(b))
            .map(|(x, _)| x)
            .collect()
    }

    pub fn converse(&self) -> PairRelation {
        let mut out = PairRelation::empty(self.n2, self.rows.len());
        for (x, y) in self.pairs() {
            out.rows[y] = out.rows[y].with(x);
        }
        out
    }
}

impl fmt::Display for PairRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, y)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({x},{y})")?;
        }
        f.write_str("}")
    }
}

/// Letters valued in either model; a letter valued in only one of them is
/// empty in the other.
fn letters(m1: &Model, m2: &Model) -> BTreeSet<u32> {
    m1.val().props().keys().chain(m2.val().props().keys()).copied().collect()
}

fn prop_or_empty(m: &Model, p: u32) -> PointSet {
    m.val().prop(p).unwrap_or(PointSet::EMPTY)
}

/// Pairs agreeing on every letter.
fn atom_relation(m1: &Model, m2: &Model) -> PairRelation {
    let ps = letters(m1, m2);
    let mut r = PairRelation::empty(m1.n(), m2.n());
    for x in 0..m1.n() {
        for y in 0..m2.n() {
            if ps.iter().all(|&p| prop_or_empty(m1, p).contains(x) == prop_or_empty(m2, p).contains(y)) {
                r.rows[x] = r.rows[x].with(y);
            }
        }
    }
    r
}

fn check_shape(m1: &Model, m2: &Model, z: &PairRelation) -> Result<(), BisimError> {
    if z.rows.len() != m1.n() {
        return Err(BisimError::PointOutOfRange {
            point: z.rows.len().max(m1.n()) - 1,
            n: m1.n(),
        });
    }
    if z.n2 > m2.n() || z.rows.iter().any(|r| !r.within(m2.n())) {
        return Err(BisimError::PointOutOfRange {
            point: z.n2.max(m2.n()),
            n: m2.n(),
        });
    }
    Ok(())
}

/// Atom on every pair plus Zig′ (`Z[O]` open for every open `O`) and Zag′
/// (`Z⁻¹[O′]` open for every open `O′`). The empty relation is rejected.
pub fn is_topo_bisimulation(m1: &Model, m2: &Model, z: &PairRelation) -> Result<bool, BisimError> {
    check_shape(m1, m2, z)?;
    if z.is_empty() {
        return Ok(false);
    }
    let atoms = atom_relation(m1, m2);
    let atom_ok = z.rows.iter().zip(&atoms.rows).all(|(r, a)| r.is_subset(*a));
    let zig = m1.space().opens().iter().all(|&o| m2.space().is_open(z.image(o)));
    let zag = m2.space().opens().iter().all(|&o| m1.space().is_open(z.preimage(o)));
    Ok(atom_ok && zig && zag)
}

/// Zig for one pair: every open `O ∋ x` has an open `O′ ∋ x′` each of whose
/// points is related to some point of `O`.
fn zig_at(m1: &Model, m2: &Model, z: &PairRelation, x: usize, x2: usize) -> bool {
    m1.space().opens().iter().filter(|o| o.contains(x)).all(|&o| {
        let reached = z.image(o);
        m2.space()
            .opens()
            .iter()
            .any(|&o2| o2.contains(x2) && o2.is_subset(reached))
    })
}

/// Atom, Zig and Zag in their pointwise quantifier form.
pub fn satisfies_zig_zag(m1: &Model, m2: &Model, z: &PairRelation) -> Result<bool, BisimError> {
    check_shape(m1, m2, z)?;
    if z.is_empty() {
        return Ok(false);
    }
    let atoms = atom_relation(m1, m2);
    let back = z.converse();
    Ok(z.pairs().into_iter().all(|(x, y)| {
        atoms.contains(x, y) && zig_at(m1, m2, z, x, y) && zig_at(m2, m1, &back, y, x)
    }))
}

/// The largest topo-bisimulation between `m1` and `m2`, possibly empty.
///
/// Starts from all Atom-consistent pairs and deletes pairs violating Zig or
/// Zag until nothing changes.
pub fn greatest_topo_bisimulation(m1: &Model, m2: &Model) -> PairRelation {
    let mut z = atom_relation(m1, m2);
    loop {
        let back = z.converse();
        let mut next = z.clone();
        for (x, y) in z.pairs() {
            if !(zig_at(m1, m2, &z, x, y) && zig_at(m2, m1, &back, y, x)) {
                next.rows[x] = next.rows[x].without(y);
            }
        }
        if next == z {
            return z;
        }
        z = next;
    }
}

pub fn modally_equivalent(m1: &Model, w: usize, m2: &Model, w2: usize) -> Result<bool, BisimError> {
    if w >= m1.n() {
        return Err(BisimError::PointOutOfRange { point: w, n: m1.n() });
    }
    if w2 >= m2.n() {
        return Err(BisimError::PointOutOfRange { point: w2, n: m2.n() });
    }
    Ok(greatest_topo_bisimulation(m1, m2).contains(w, w2))
}

/// The largest Kripke bisimulation between the specialization preorders of
/// the two spaces (`x R y` iff `y ∈ U_x`).
pub fn kripke_bisimulation(m1: &Model, m2: &Model) -> PairRelation {
    let up1 = m1.space().specialization_preorder();
    let up2 = m2.space().specialization_preorder();
    let mut z = atom_relation(m1, m2);
    loop {
        let mut changed = false;
        for x in 0..m1.n() {
            for y in z.row(x).iter() {
                let forth = up1
                    .up_set(x)
                    .iter()
                    .all(|x1| !z.row(x1).intersection(up2.up_set(y)).is_empty());
                let back = up2
                    .up_set(y)
                    .iter()
                    .all(|y1| up1.up_set(x).iter().any(|x1| z.contains(x1, y1)));
                if !(forth && back) {
                    z.rows[x] = z.rows[x].without(y);
                    changed = true;
                }
            }
        }
        if !changed {
            return z;
        }
    }
}

/// Every basic modal formula up to a modal depth, up to equivalence on a
/// pair of models: each class is a pair of truth sets, with one witness
/// formula.
pub struct MeaningTable {
    meanings: BTreeMap<(PointSet, PointSet), ModalFormula>,
}

impl MeaningTable {
    /// Formulas over the letters valued in both models.
    pub fn new(m1: &Model, m2: &Model, depth: usize) -> MeaningTable {
        let full = (m1.space().points(), m2.space().points());
        let mut generators = vec![(full, ModalFormula::Top)];
        for (&p, &a) in m1.val().props() {
            if let Some(b) = m2.val().prop(p) {
                generators.push(((a, b), ModalFormula::Prop(p)));
            }
        }
        let mut meanings = boolean_closure(generators, full);
        for _ in 0..depth {
            let boxed: Vec<_> = meanings
                .iter()
                .map(|(&(a, b), f)| {
                    let key = (m1.space().interior_of(a), m2.space().interior_of(b));
                    (key, ModalFormula::nec(f.clone()))
                })
                .collect();
            let before = meanings.len();
            let mut generators: Vec<_> = meanings.into_iter().collect();
            generators.extend(boxed);
            meanings = boolean_closure(generators, full);
            if meanings.len() == before {
                break;
            }
        }
        MeaningTable { meanings }
    }

    pub fn len(&self) -> usize {
        self.meanings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meanings.is_empty()
    }

    /// A formula true at exactly one of `w` (first model) and `w2`.
    pub fn distinguish(&self, w: usize, w2: usize) -> Option<&ModalFormula> {
        self.meanings
            .iter()
            .find(|((a, b), _)| a.contains(w) != b.contains(w2))
            .map(|(_, f)| f)
    }
}

/// Closes a family of truth-set pairs under complement and intersection,
/// keeping the first witness found for each pair. Generators come first so
/// they keep their own witnesses.
fn boolean_closure(
    generators: Vec<((PointSet, PointSet), ModalFormula)>,
    full: (PointSet, PointSet),
) -> BTreeMap<(PointSet, PointSet), ModalFormula> {
    let mut out: BTreeMap<(PointSet, PointSet), ModalFormula> = BTreeMap::new();
    // breadth first, so witnesses stay small
    let mut queue = VecDeque::new();
    for (k, f) in generators {
        if let Entry::Vacant(e) = out.entry(k) {
            e.insert(f);
            queue.push_back(k);
        }
    }
    while let Some(k) = queue.pop_front() {
        let complement = (full.0.difference(k.0), full.1.difference(k.1));
        if !out.contains_key(&complement) {
            out.insert(complement, ModalFormula::not(out[&k].clone()));
            queue.push_back(complement);
        }
        let mut fresh: Vec<((PointSet, PointSet), (PointSet, PointSet))> = Vec::new();
        for &k2 in out.keys() {
            let key = (k.0.intersection(k2.0), k.1.intersection(k2.1));
            if !out.contains_key(&key) && !fresh.iter().any(|(seen, _)| *seen == key) {
                fresh.push((key, k2));
            }
        }
        for (key, k2) in fresh {
            let g = ModalFormula::and(out[&k].clone(), out[&k2].clone());
            out.insert(key, g);
            queue.push_back(key);
        }
    }
    out
}

/// A basic modal formula of modal depth at most `depth`, over the letters
/// valued in both models, true at exactly one of `w` and `w2`.
pub fn distinguishing_formula(m1: &Model, w: usize, m2: &Model, w2: usize, depth: usize) -> Option<ModalFormula> {
    MeaningTable::new(m1, m2, depth).distinguish(w, w2).cloned()
}

/// A partial bijection, as `(m, n)` pairs sorted by `m`.
pub type PartialBijection = Vec<(usize, usize)>;

/// Default per-side cap for the potential homeomorphism fixpoint.
pub const POTENTIAL_HOMEOMORPHISM_GUARD: usize = 4;

fn partial_bijections(n1: usize, n2: usize) -> Vec<PartialBijection> {
    fn go(m: usize, n1: usize, n2: usize, used: PointSet, cur: &mut PartialBijection, out: &mut Vec<PartialBijection>) {
        if m == n1 {
            out.push(cur.clone());
            return;
        }
        go(m + 1, n1, n2, used, cur, out);
        for n in 0..n2 {
            if !used.contains(n) {
                cur.push((m, n));
                go(m + 1, n1, n2, used.with(n), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, n1, n2, PointSet::EMPTY, &mut Vec::new(), &mut out);
    out
}

fn extends(g: &PartialBijection, f: &PartialBijection) -> bool {
    f.iter().all(|p| g.contains(p))
}

/// The largest family of partial bijections closed under the three
/// conditions: atoms and nominals preserved, extension to any point on
/// either side, and neighbourhood back-and-forth.
pub fn potential_homeomorphism(m1: &Model, m2: &Model) -> Result<Vec<PartialBijection>, BisimError> {
    potential_homeomorphism_with(m1, m2, POTENTIAL_HOMEOMORPHISM_GUARD)
}

pub fn potential_homeomorphism_with(m1: &Model, m2: &Model, guard: usize) -> Result<Vec<PartialBijection>, BisimError> {
    let actual = m1.n().max(m2.n());
    if actual > guard {
        return Err(BisimError::SizeGuard { limit: guard, actual });
    }
    let atoms = atom_relation(m1, m2);
    let noms: BTreeSet<u32> = m1.val().nominals().keys().chain(m2.val().nominals().keys()).copied().collect();
    let named = |m: &Model, i: u32, w: usize| m.val().nominal(i) == Some(w);
    let all = partial_bijections(m1.n(), m2.n());
    let mut alive: Vec<bool> = all
        .iter()
        .map(|f| {
            f.iter()
                .all(|&(m, n)| atoms.contains(m, n) && noms.iter().all(|&i| named(m1, i, m) == named(m2, i, n)))
        })
        .collect();
    let extensions: Vec<Vec<usize>> = all
        .iter()
        .map(|f| (0..all.len()).filter(|&g| extends(&all[g], f)).collect())
        .collect();
    let (s1, s2) = (m1.space(), m2.space());
    loop {
        let mut changed = false;
        for fi in 0..all.len() {
            if !alive[fi] {
                continue;
            }
            let ext: Vec<&PartialBijection> = extensions[fi].iter().filter(|&&g| alive[g]).map(|&g| &all[g]).collect();
            let covers_left = (0..m1.n()).all(|m| ext.iter().any(|g| g.iter().any(|p| p.0 == m)));
            let covers_right = (0..m2.n()).all(|n| ext.iter().any(|g| g.iter().any(|p| p.1 == n)));
            // points reachable from a set through some live extension
            let forward = |u: PointSet| -> PointSet {
                ext.iter()
                    .flat_map(|g| g.iter())
                    .filter(|p| u.contains(p.0))
                    .map(|p| p.1)
                    .collect()
            };
            let backward = |v: PointSet| -> PointSet {
                ext.iter()
                    .flat_map(|g| g.iter())
                    .filter(|p| v.contains(p.1))
                    .map(|p| p.0)
                    .collect()
            };
            let neighbourly = all[fi].iter().all(|&(m, n)| {
                let there = s1.opens().iter().filter(|u| u.contains(m)).all(|&u| {
                    let reach = forward(u);
                    s2.opens().iter().any(|&v| v.contains(n) && v.is_subset(reach))
                });
                let back = s2.opens().iter().filter(|v| v.contains(n)).all(|&v| {
                    let reach = backward(v);
                    s1.opens().iter().any(|&u| u.contains(m) && u.is_subset(reach))
                });
                there && back
            });
            if !(covers_left && covers_right && neighbourly) {
                alive[fi] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(all
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(f, _)| f)
        .collect())
}

pub fn potential_homeomorphism_exists(m1: &Model, m2: &Model) -> Result<bool, BisimError> {
    Ok(!potential_homeomorphism(m1, m2)?.is_empty())
}

/// The union of the graphs of a family of partial bijections.
pub fn union_of_graphs(n1: usize, n2: usize, family: &[PartialBijection]) -> PairRelation {
    let mut r = PairRelation::empty(n1, n2);
    for &(m, n) in family.iter().flatten() {
        r.rows[m] = r.rows[m].with(n);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_modal, Assignment, Valuation};
    use crate::space::Space;

    fn with_p0(space: Space, set: &[usize]) -> Model {
        Model::new(space, Valuation::new().with_prop(0, set.iter().copied().collect())).unwrap()
    }

    #[test]
    fn identity_and_total_relations() {
        let m = with_p0(Space::sierpinski(), &[1]);
        assert!(is_topo_bisimulation(&m, &m, &PairRelation::identity(2)).unwrap());
        let s = Model::bare(Space::sierpinski());
        let one = Model::bare(Space::one_point());
        assert!(is_topo_bisimulation(&s, &one, &PairRelation::total(2, 1)).unwrap());
        assert!(!is_topo_bisimulation(&s, &one, &PairRelation::empty(2, 1)).unwrap());
    }

    #[test]
    fn atom_failure() {
        let s = with_p0(Space::sierpinski(), &[1]);
        let one = with_p0(Space::one_point(), &[0]);
        let z = PairRelation::new(2, 1, [(0, 0)]).unwrap();
        assert!(!is_topo_bisimulation(&s, &one, &z).unwrap());
    }

    #[test]
    fn greatest_examples() {
        let m = with_p0(Space::discrete(3), &[0, 2]);
        let g = greatest_topo_bisimulation(&m, &m);
        assert!((0..3).all(|x| g.contains(x, x)));
        let s = Model::bare(Space::sierpinski());
        let one = Model::bare(Space::one_point());
        assert_eq!(greatest_topo_bisimulation(&s, &one), PairRelation::total(2, 1));
        let left = with_p0(Space::sierpinski(), &[0]);
        let right = Model::bare(Space::sierpinski());
        let g = greatest_topo_bisimulation(&left, &right);
        assert!(!g.contains(0, 0));
        assert_eq!(g, kripke_bisimulation(&left, &right));
    }

    #[test]
    fn distinguishing_formula_separates_open_point() {
        let s = with_p0(Space::sierpinski(), &[0]);
        let t = with_p0(Space::trivial(2), &[0]);
        assert!(!modally_equivalent(&s, 0, &t, 0).unwrap());
        let phi = distinguishing_formula(&s, 0, &t, 0, 1).unwrap();
        assert!(phi.modal_depth() <= 1);
        let g = Assignment::new();
        assert_ne!(eval_modal(&s, 0, &phi, &g).unwrap(), eval_modal(&t, 0, &phi, &g).unwrap());
        assert_eq!(distinguishing_formula(&s, 0, &s, 0, 3), None);
    }

    #[test]
    fn potential_homeomorphism_examples() {
        let one = Model::bare(Space::one_point());
        assert!(potential_homeomorphism_exists(&one, &one).unwrap());
        let s = Model::bare(Space::sierpinski());
        let t = Model::bare(Space::trivial(2));
        assert!(!potential_homeomorphism_exists(&s, &t).unwrap());
        let m = with_p0(Space::sierpinski(), &[1]);
        let family = potential_homeomorphism(&m, &m).unwrap();
        assert!(family.contains(&vec![(0, 0), (1, 1)]));
        let z = union_of_graphs(2, 2, &family);
        assert!(is_topo_bisimulation(&m, &m, &z).unwrap());
        let big = Model::bare(Space::discrete(5));
        assert!(matches!(potential_homeomorphism(&big, &big), Err(BisimError::SizeGuard { .. })));
    }

    #[test]
    fn quantifier_form_agrees_with_image_form() {
        let s = with_p0(Space::sierpinski(), &[]);
        let t = Model::bare(Space::trivial(2));
        for bits in 0u64..16 {
            let z = PairRelation::new(2, 2, (0..4).filter(|i| bits >> i & 1 == 1).map(|i| (i / 2, i % 2))).unwrap();
            for (a, b) in [(&s, &t), (&s, &s), (&t, &t)] {
                assert_eq!(is_topo_bisimulation(a, b, &z).unwrap(), satisfies_zig_zag(a, b, &z).unwrap());
            }
        }
    }
}
