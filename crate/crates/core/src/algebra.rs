//! Finite interior algebras on powersets, complex algebras of spaces,
//! dual spaces, and algebraic validity.

use alloc::vec::Vec;
use core::fmt;

use crate::set::PointSet;
use crate::space::{Base, PointMap, Space};
use crate::syntax::{language_of, Language, ModalFormula};

/// Largest number of atoms, keeping the box table at most 2^16 entries.
pub const MAX_ATOMS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `□⊤ = ⊤`
    I1,
    /// `□(a ∧ b) = □a ∧ □b`
    I2 { a: PointSet, b: PointSet },
    /// `□a ≤ a`
    I3 { a: PointSet },
    /// `□□a = □a`
    I4 { a: PointSet },
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::I1 => f.write_str("i1: box of top is not top"),
            Axiom::I2 { a, b } => write!(f, "i2: box does not distribute over {a} and {b}"),
            Axiom::I3 { a } => write!(f, "i3: box of {a} is not below it"),
            Axiom::I4 { a } => write!(f, "i4: box of {a} is not idempotent"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    NoAtoms,
    TooManyAtoms(usize),
    TableLength { expected: usize, found: usize },
    OutOfRange(PointSet),
    Axiom(Axiom),
    NotMl,
    NotInteriorMap,
    Budget { limit: usize, actual: usize },
    /// `f⁻¹` failed to be a homomorphism; the element where it failed.
    NotHomomorphism(PointSet),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::NoAtoms => f.write_str("an algebra needs at least one atom"),
            AlgebraError::TooManyAtoms(m) => write!(f, "{m} atoms is above the limit {MAX_ATOMS}"),
            AlgebraError::TableLength { expected, found } => {
                write!(f, "box table has {found} entries, expected {expected}")
            }
            AlgebraError::OutOfRange(a) => write!(f, "element {a} is outside the carrier"),
            AlgebraError::Axiom(a) => write!(f, "not an interior algebra: {a}"),
            AlgebraError::NotMl => f.write_str("equations must be basic modal formulas"),
            AlgebraError::NotInteriorMap => f.write_str("map is not an interior map"),
            AlgebraError::Budget { limit, actual } => {
                write!(f, "assignment bits m*k = {actual} exceed the limit {limit}")
            }
            AlgebraError::NotHomomorphism(a) => write!(f, "inverse image fails to be a homomorphism at {a}"),
        }
    }
}

impl core::error::Error for AlgebraError {}

/// The powerset of `{0..m-1}` with a box operator given by its table,
/// indexed by the bitmask of the argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorAlgebra {
    atoms: usize,
    boxes: Vec<PointSet>,
}

impl InteriorAlgebra {
    /// Checks the table's shape only; see [`check_interior_algebra`] for
    /// the axioms.
    pub fn new(atoms: usize, boxes: Vec<PointSet>) -> Result<InteriorAlgebra, AlgebraError> {
        if atoms == 0 {
            return Err(AlgebraError::NoAtoms);
        }
        if atoms > MAX_ATOMS {
            return Err(AlgebraError::TooManyAtoms(atoms));
        }
        let expected = 1usize << atoms;
        if boxes.len() != expected {
            return Err(AlgebraError::TableLength {
                expected,
                found: boxes.len(),
            });
        }
        if let Some(&bad) = boxes.iter().find(|b| !b.within(atoms)) {
            return Err(AlgebraError::OutOfRange(bad));
        }
        Ok(InteriorAlgebra { atoms, boxes })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn top(&self) -> PointSet {
        PointSet::full(self.atoms)
    }

    /// Carrier elements in increasing bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = PointSet> {
        self.top().subsets()
    }

    pub fn boxed(&self, a: PointSet) -> PointSet {
        self.boxes[a.bits() as usize]
    }

    pub fn diamond(&self, a: PointSet) -> PointSet {
        self.boxed(a.complement(self.atoms)).complement(self.atoms)
    }

    pub fn table(&self) -> &[PointSet] {
        &self.boxes
    }
}

/// The first violated axiom, checking `i1`, `i3`, `i4`, then `i2`.
pub fn check_interior_algebra(b: &InteriorAlgebra) -> Result<(), Axiom> {
    if b.boxed(b.top()) != b.top() {
        return Err(Axiom::I1);
    }
    for a in b.elements() {
        if !b.boxed(a).is_subset(a) {
            return Err(Axiom::I3 { a });
        }
        if b.boxed(b.boxed(a)) != b.boxed(a) {
            return Err(Axiom::I4 { a });
        }
    }
    for a in b.elements() {
        for c in b.elements() {
            if b.boxed(a.intersection(c)) != b.boxed(a).intersection(b.boxed(c)) {
                return Err(Axiom::I2 { a, b: c });
            }
        }
    }
    Ok(())
}

/// `(℘X, 𝕀)`
pub fn complex_algebra(s: &Space) -> InteriorAlgebra {
    let boxes = s.points().subsets().map(|a| s.interior_of(a)).collect();
    InteriorAlgebra {
        atoms: s.n(),
        boxes,
    }
}

/// The space of ultrafilters of `b`, topologised by the cones of open
/// filters.
///
/// Ultrafilters of a finite powerset are principal, one per atom, so the
/// points are `0..m`. Open filters are the principal filters `↑a` with
/// `□a = a`, and the cone of `↑a` is the set of atoms below `a`, which is
/// `a` itself.
pub fn dual_space(b: &InteriorAlgebra) -> Result<Space, AlgebraError> {
    check_interior_algebra(b).map_err(AlgebraError::Axiom)?;
    let fixed: Vec<PointSet> = b.elements().filter(|&a| b.boxed(a) == a).collect();
    let base = Base::new(b.atoms, fixed).expect("fixed points of an interior operator form a base");
    Ok(base.generate_topology())
}

fn evaluate(b: &InteriorAlgebra, phi: &ModalFormula, letters: &[(u32, PointSet)]) -> PointSet {
    use ModalFormula as F;
    let m = b.atoms;
    match phi {
        F::Top => b.top(),
        F::Bot => PointSet::EMPTY,
        F::Prop(p) => letters
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, a)| *a)
            .unwrap_or(PointSet::EMPTY),
        F::Not(a) => evaluate(b, a, letters).complement(m),
        F::And(x, y) => evaluate(b, x, letters).intersection(evaluate(b, y, letters)),
        F::Or(x, y) => evaluate(b, x, letters).union(evaluate(b, y, letters)),
        F::Implies(x, y) => evaluate(b, x, letters).complement(m).union(evaluate(b, y, letters)),
        F::Iff(x, y) => {
            let (x, y) = (evaluate(b, x, letters), evaluate(b, y, letters));
            PointSet(!(x.bits() ^ y.bits())).intersection(b.top())
        }
        F::Box(a) => b.boxed(evaluate(b, a, letters)),
        F::Diamond(a) => b.diamond(evaluate(b, a, letters)),
        _ => unreachable!("only basic modal formulas are evaluated"),
    }
}

/// Default cap on `m·k` for `m` atoms and `k` letters.
pub const EQUATION_BUDGET: usize = 24;

/// Whether `φ` evaluates to `⊤` under every assignment of carrier elements
/// to its letters.
pub fn equation_valid(b: &InteriorAlgebra, phi: &ModalFormula) -> Result<bool, AlgebraError> {
    if language_of(phi) != Some(Language::Ml) {
        return Err(AlgebraError::NotMl);
    }
    let props: Vec<u32> = phi.props().into_iter().collect();
    let bits = b.atoms * props.len();
    if bits > EQUATION_BUDGET {
        return Err(AlgebraError::Budget {
            limit: EQUATION_BUDGET,
            actual: bits,
        });
    }
    let mask = b.top().bits();
    let mut letters: Vec<(u32, PointSet)> = props.iter().map(|&p| (p, PointSet::EMPTY)).collect();
    for index in 0u64..1 << bits {
        for (j, slot) in letters.iter_mut().enumerate() {
            slot.1 = PointSet((index >> (j * b.atoms)) & mask);
        }
        if evaluate(b, phi, &letters) != b.top() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f⁺ = f⁻¹` from the complex algebra of the target to that of the
/// source, checked to preserve the Boolean operations and commute with `□`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraHom {
    pub domain: InteriorAlgebra,
    pub codomain: InteriorAlgebra,
    /// Image of each domain element, indexed by bitmask.
    pub table: Vec<PointSet>,
}

impl AlgebraHom {
    pub fn apply(&self, a: PointSet) -> PointSet {
        self.table[a.bits() as usize]
    }
}

pub fn hom_dual(f: &PointMap) -> Result<AlgebraHom, AlgebraError> {
    if !f.is_interior_map() {
        return Err(AlgebraError::NotInteriorMap);
    }
    let domain = complex_algebra(f.target());
    let codomain = complex_algebra(f.source());
    let table: Vec<PointSet> = domain.elements().map(|b| f.preimage(b)).collect();
    let hom = AlgebraHom {
        domain,
        codomain,
        table,
    };
    let (d, c) = (&hom.domain, &hom.codomain);
    if hom.apply(d.top()) != c.top() || !hom.apply(PointSet::EMPTY).is_empty() {
        return Err(AlgebraError::NotHomomorphism(d.top()));
    }
    for a in d.elements() {
        if hom.apply(a.complement(d.atoms)) != hom.apply(a).complement(c.atoms) {
            return Err(AlgebraError::NotHomomorphism(a));
        }
        if hom.apply(d.boxed(a)) != c.boxed(hom.apply(a)) {
            return Err(AlgebraError::NotHomomorphism(a));
        }
        for b in d.elements() {
            if hom.apply(a.intersection(b)) != hom.apply(a).intersection(hom.apply(b)) {
                return Err(AlgebraError::NotHomomorphism(a));
            }
        }
    }
    Ok(hom)
}
