//! Models, truth sets for the modal family, two-sorted first-order
//! satisfaction, and validity by exhaustive valuation sweeps.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::set::PointSet;
use crate::space::{enumerate_spaces, AlexandroffExtension, Base, Space, SpaceError};
use crate::syntax::{FoFormula, ModalFormula, Name, PointTerm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    Space(SpaceError),
    UnassignedPointVar(u32),
    UnassignedOpenVar(u32),
    UnvaluedProp(u32),
    UnvaluedNominal(u32),
    NominalNotSingleton { nominal: u32, set: PointSet },
    SetOutOfRange { set: PointSet, n: usize },
    PointOutOfRange { point: usize, n: usize },
    OpenNotInScope { var: u32, set: PointSet },
    NotASentence,
    Budget { what: &'static str, limit: u64, actual: u64 },
}

impl fmt::Display for SemanticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsError::Space(e) => write!(f, "{e}"),
            SemanticsError::UnassignedPointVar(x) => write!(f, "point variable x{x} is unassigned"),
            SemanticsError::UnassignedOpenVar(u) => write!(f, "open variable U{u} is unassigned"),
            SemanticsError::UnvaluedProp(p) => write!(f, "proposition letter p{p} has no value"),
            SemanticsError::UnvaluedNominal(i) => write!(f, "nominal i{i} has no value"),
            SemanticsError::NominalNotSingleton { nominal, set } => {
                write!(f, "nominal i{nominal} must denote a singleton, got {set}")
            }
            SemanticsError::SetOutOfRange { set, n } => write!(f, "set {set} is not within 0..{n}"),
            SemanticsError::PointOutOfRange { point, n } => write!(f, "point {point} is not within 0..{n}"),
            SemanticsError::OpenNotInScope { var, set } => {
                write!(f, "U{var} is assigned {set}, which is not in the quantifier scope")
            }
            SemanticsError::NotASentence => f.write_str("formula has free variables"),
            SemanticsError::Budget { what, limit, actual } => {
                write!(f, "{what} is {actual}, above the limit {limit}")
            }
        }
    }
}

impl core::error::Error for SemanticsError {}

impl From<SpaceError> for SemanticsError {
    fn from(e: SpaceError) -> Self {
        SemanticsError::Space(e)
    }
}

/// Values of proposition letters (subsets) and nominals (single points).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Valuation {
    props: BTreeMap<u32, PointSet>,
    noms: BTreeMap<u32, usize>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    #[must_use]
    pub fn with_prop(mut self, p: u32, set: PointSet) -> Valuation {
        self.props.insert(p, set);
        self
    }

    #[must_use]
    pub fn with_nominal(mut self, i: u32, point: usize) -> Valuation {
        self.noms.insert(i, point);
        self
    }

    pub fn set_prop(&mut self, p: u32, set: PointSet) {
        self.props.insert(p, set);
    }

    pub fn set_nominal(&mut self, i: u32, point: usize) {
        self.noms.insert(i, point);
    }

    /// Values a nominal by a set, which must be a singleton.
    pub fn set_nominal_set(&mut self, i: u32, set: PointSet) -> Result<(), SemanticsError> {
        match (set.len(), set.first()) {
            (1, Some(point)) => {
                self.noms.insert(i, point);
                Ok(())
            }
            _ => Err(SemanticsError::NominalNotSingleton { nominal: i, set }),
        }
    }

    pub fn prop(&self, p: u32) -> Option<PointSet> {
        self.props.get(&p).copied()
    }

    pub fn nominal(&self, i: u32) -> Option<usize> {
        self.noms.get(&i).copied()
    }

    pub fn props(&self) -> &BTreeMap<u32, PointSet> {
        &self.props
    }

    pub fn nominals(&self) -> &BTreeMap<u32, usize> {
        &self.noms
    }

    fn check(&self, n: usize) -> Result<(), SemanticsError> {
        for &set in self.props.values() {
            if !set.within(n) {
                return Err(SemanticsError::SetOutOfRange { set, n });
            }
        }
        for &point in self.noms.values() {
            if point >= n {
                return Err(SemanticsError::PointOutOfRange { point, n });
            }
        }
        Ok(())
    }
}

/// A space together with a valuation on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    space: Space,
    val: Valuation,
}

impl Model {
    pub fn new(space: Space, val: Valuation) -> Result<Model, SemanticsError> {
        val.check(space.n())?;
        Ok(Model { space, val })
    }

    /// The model with nothing valued.
    pub fn bare(space: Space) -> Model {
        Model {
            space,
            val: Valuation::new(),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn val(&self) -> &Valuation {
        &self.val
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }
}

/// Values for free variables, and optionally a base over which open
/// quantifiers range instead of the topology.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub points: BTreeMap<u32, usize>,
    pub opens: BTreeMap<u32, PointSet>,
    pub scope: Option<Base>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    #[must_use]
    pub fn with_point(mut self, x: u32, point: usize) -> Assignment {
        self.points.insert(x, point);
        self
    }

    #[must_use]
    pub fn with_open(mut self, u: u32, set: PointSet) -> Assignment {
        self.opens.insert(u, set);
        self
    }

    #[must_use]
    pub fn with_scope(mut self, base: Base) -> Assignment {
        self.scope = Some(base);
        self
    }
}

struct ModalEval<'a> {
    space: &'a Space,
    val: &'a Valuation,
    vars: BTreeMap<u32, usize>,
}

impl ModalEval<'_> {
    fn name(&self, name: Name) -> Result<usize, SemanticsError> {
        match name {
            Name::Nom(i) => self.val.nominal(i).ok_or(SemanticsError::UnvaluedNominal(i)),
            Name::Var(x) => self.vars.get(&x).copied().ok_or(SemanticsError::UnassignedPointVar(x)),
        }
    }

    fn set(&mut self, phi: &ModalFormula) -> Result<PointSet, SemanticsError> {
        use ModalFormula as F;
        let n = self.space.n();
        let full = PointSet::full(n);
        let everywhere = |s: PointSet| if s == full { full } else { PointSet::EMPTY };
        let somewhere = |s: PointSet| if s.is_empty() { PointSet::EMPTY } else { full };
        Ok(match phi {
            F::Top => full,
            F::Bot => PointSet::EMPTY,
            F::Prop(p) => self.val.prop(*p).ok_or(SemanticsError::UnvaluedProp(*p))?,
            F::Nom(i) => PointSet::singleton(self.name(Name::Nom(*i))?),
            F::Var(x) => PointSet::singleton(self.name(Name::Var(*x))?),
            F::Not(a) => self.set(a)?.complement(n),
            F::And(a, b) => self.set(a)?.intersection(self.set(b)?),
            F::Or(a, b) => self.set(a)?.union(self.set(b)?),
            F::Implies(a, b) => self.set(a)?.complement(n).union(self.set(b)?),
            F::Iff(a, b) => {
                let (a, b) = (self.set(a)?, self.set(b)?);
                PointSet(!(a.bits() ^ b.bits())).intersection(full)
            }
            F::Box(a) => self.space.interior_of(self.set(a)?),
            F::Diamond(a) => self.space.closure_of(self.set(a)?),
            F::E(a) => somewhere(self.set(a)?),
            F::A(a) => everywhere(self.set(a)?),
            F::D(a) => {
                let t = self.set(a)?;
                match t.len() {
                    0 => PointSet::EMPTY,
                    1 => t.complement(n),
                    _ => full,
                }
            }
            F::At(name, a) => {
                let w = self.name(*name)?;
                if self.set(a)?.contains(w) {
                    full
                } else {
                    PointSet::EMPTY
                }
            }
            F::Down(x, a) => {
                let saved = self.vars.get(x).copied();
                let mut out = PointSet::EMPTY;
                for w in 0..n {
                    self.vars.insert(*x, w);
                    if self.set(a)?.contains(w) {
                        out = out.with(w);
                    }
                }
                match saved {
                    Some(w) => self.vars.insert(*x, w),
                    None => self.vars.remove(x),
                };
                out
            }
        })
    }
}

fn truth_set_on(
    space: &Space,
    val: &Valuation,
    phi: &ModalFormula,
    points: &BTreeMap<u32, usize>,
) -> Result<PointSet, SemanticsError> {
    let mut ev = ModalEval {
        space,
        val,
        vars: points.clone(),
    };
    ev.set(phi)
}

/// The set of points at which `phi` holds.
pub fn truth_set(m: &Model, phi: &ModalFormula, g: &Assignment) -> Result<PointSet, SemanticsError> {
    for &point in g.points.values() {
        if point >= m.n() {
            return Err(SemanticsError::PointOutOfRange { point, n: m.n() });
        }
    }
    truth_set_on(&m.space, &m.val, phi, &g.points)
}

pub fn eval_modal(m: &Model, w: usize, phi: &ModalFormula, g: &Assignment) -> Result<bool, SemanticsError> {
    if w >= m.n() {
        return Err(SemanticsError::PointOutOfRange { point: w, n: m.n() });
    }
    Ok(truth_set(m, phi, g)?.contains(w))
}

/// Limits for exhaustive sweeps.
#[derive(Debug, Clone, Copy)]
pub struct SweepGuard {
    /// Upper bound on `n·k` for `k` proposition letters.
    pub max_bits: u64,
    /// Upper bound on the total number of cases.
    pub max_cases: u64,
}

impl Default for SweepGuard {
    fn default() -> Self {
        SweepGuard {
            max_bits: 24,
            max_cases: 1 << 26,
        }
    }
}

/// Enumerates valuations of a list of letters (as subsets) and a list of
/// point-valued symbols, in lexicographic order: the letter part is the
/// major index.
#[derive(Debug, Clone)]
struct Cases {
    n: usize,
    letters: usize,
    points: usize,
    placements: u64,
    len: u64,
}

impl Cases {
    fn new(n: usize, letters: usize, points: usize, guard: SweepGuard) -> Result<Cases, SemanticsError> {
        let bits = (n * letters) as u64;
        if bits > guard.max_bits {
            return Err(SemanticsError::Budget {
                what: "valuation bits n*k",
                limit: guard.max_bits,
                actual: bits,
            });
        }
        let placements = (n as u64).checked_pow(points as u32).unwrap_or(u64::MAX);
        let len = (1u64 << bits).saturating_mul(placements);
        if len > guard.max_cases {
            return Err(SemanticsError::Budget {
                what: "number of cases",
                limit: guard.max_cases,
                actual: len,
            });
        }
        Ok(Cases {
            n,
            letters,
            points,
            placements,
            len,
        })
    }

    fn sets(&self, index: u64) -> impl Iterator<Item = PointSet> + '_ {
        let major = index / self.placements;
        let mask = PointSet::full(self.n).bits();
        (0..self.letters).map(move |j| PointSet((major >> (j * self.n)) & mask))
    }

    fn placement(&self, index: u64) -> Vec<usize> {
        let mut minor = index % self.placements;
        let mut out = vec![0; self.points];
        for slot in out.iter_mut().rev() {
            *slot = (minor % self.n as u64) as usize;
            minor /= self.n as u64;
        }
        out
    }
}

/// A valuation and point at which a formula fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub valuation: Valuation,
    pub point: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Counterexample(Counterexample),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Validity::Valid => None,
            Validity::Counterexample(c) => Some(c),
        }
    }
}

/// The valuations checked when deciding `S ⊨ φ`: every subset for each
/// letter of `φ` and every point for each nominal of `φ`.
///
/// Cases are numbered; [`ValiditySweep::first_failure`] checks a range, so
/// a sweep can be split between workers and merged by least index.
#[derive(Debug, Clone)]
pub struct ValiditySweep<'a> {
    space: &'a Space,
    phi: &'a ModalFormula,
    props: Vec<u32>,
    noms: Vec<u32>,
    cases: Cases,
}

impl<'a> ValiditySweep<'a> {
    pub fn new(space: &'a Space, phi: &'a ModalFormula, guard: SweepGuard) -> Result<Self, SemanticsError> {
        if !phi.is_sentence() {
            return Err(SemanticsError::NotASentence);
        }
        let props: Vec<u32> = phi.props().into_iter().collect();
        let noms: Vec<u32> = phi.nominals().into_iter().collect();
        let cases = Cases::new(space.n(), props.len(), noms.len(), guard)?;
        Ok(ValiditySweep {
            space,
            phi,
            props,
            noms,
            cases,
        })
    }

    pub fn len(&self) -> u64 {
        self.cases.len
    }

    pub fn is_empty(&self) -> bool {
        self.cases.len == 0
    }

    pub fn valuation(&self, index: u64) -> Valuation {
        let mut val = Valuation::new();
        for (&p, set) in self.props.iter().zip(self.cases.sets(index)) {
            val.set_prop(p, set);
        }
        for (&i, w) in self.noms.iter().zip(self.cases.placement(index)) {
            val.set_nominal(i, w);
        }
        val
    }

    /// The least case index in `range` at which `φ` fails somewhere.
    pub fn first_failure(&self, range: Range<u64>) -> Result<Option<(u64, Counterexample)>, SemanticsError> {
        let full = self.space.points();
        let no_vars = BTreeMap::new();
        for index in range.start..range.end.min(self.len()) {
            let valuation = self.valuation(index);
            let truth = truth_set_on(self.space, &valuation, self.phi, &no_vars)?;
            if let Some(point) = full.difference(truth).first() {
                return Ok(Some((index, Counterexample { valuation, point })));
            }
        }
        Ok(None)
    }

    pub fn run(&self) -> Result<Validity, SemanticsError> {
        Ok(match self.first_failure(0..self.len())? {
            None => Validity::Valid,
            Some((_, c)) => Validity::Counterexample(c),
        })
    }
}

pub fn valid_on_space(s: &Space, phi: &ModalFormula) -> Result<Validity, SemanticsError> {
    valid_on_space_with(s, phi, SweepGuard::default())
}

pub fn valid_on_space_with(s: &Space, phi: &ModalFormula, guard: SweepGuard) -> Result<Validity, SemanticsError> {
    ValiditySweep::new(s, phi, guard)?.run()
}

#[derive(Debug, Clone, Copy)]
enum Term {
    Slot(usize),
    Point(usize),
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Top,
    Bot,
    EqPt(Term, Term),
    EqOp(usize, usize),
    Pred(PointSet, Term),
    In(Term, usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    ExPt(usize, usize),
    AllPt(usize, usize),
    ExOp(usize, usize),
    AllOp(usize, usize),
}

const UNKNOWN: u8 = 0;
const FALSE: u8 = 1;
const TRUE: u8 = 2;
const CACHE_LIMIT: usize = 1 << 16;

/// A first-order formula prepared for evaluation on one model and one
/// quantifier scope.
///
/// Each subformula's value is memoized on the values of its free variables,
/// so repeated evaluation under different assignments shares work.
pub struct CompiledFo {
    n: usize,
    scope: Vec<PointSet>,
    nodes: Vec<Node>,
    root: usize,
    /// free `(is_open, slot)` pairs per node
    free: Vec<Vec<(bool, usize)>>,
    cache: Vec<Vec<u8>>,
    point_ids: Vec<u32>,
    open_ids: Vec<u32>,
    point_env: Vec<Option<usize>>,
    open_env: Vec<Option<usize>>,
}

struct Compiler<'a> {
    model: &'a Model,
    nodes: Vec<Node>,
    free: Vec<Vec<(bool, usize)>>,
    point_slots: BTreeMap<u32, usize>,
    open_slots: BTreeMap<u32, usize>,
}

impl Compiler<'_> {
    fn point_slot(&mut self, x: u32) -> usize {
        let next = self.point_slots.len();
        *self.point_slots.entry(x).or_insert(next)
    }

    fn open_slot(&mut self, u: u32) -> usize {
        let next = self.open_slots.len();
        *self.open_slots.entry(u).or_insert(next)
    }

    fn term(&mut self, t: PointTerm, free: &mut Vec<(bool, usize)>) -> Result<Term, SemanticsError> {
        match t {
            PointTerm::Var(x) => {
                let s = self.point_slot(x);
                free.push((false, s));
                Ok(Term::Slot(s))
            }
            PointTerm::Const(i) => self
                .model
                .val
                .nominal(i)
                .map(Term::Point)
                .ok_or(SemanticsError::UnvaluedNominal(i)),
        }
    }

    fn push(&mut self, node: Node, mut free: Vec<(bool, usize)>) -> usize {
        free.sort_unstable();
        free.dedup();
        self.nodes.push(node);
        self.free.push(free);
        self.nodes.len() - 1
    }

    fn child_free(&self, ix: usize) -> Vec<(bool, usize)> {
        self.free[ix].clone()
    }

    fn compile(&mut self, phi: &FoFormula) -> Result<usize, SemanticsError> {
        use FoFormula as F;
        let mut free = Vec::new();
        let node = match phi {
            F::Top => Node::Top,
            F::Bot => Node::Bot,
            F::EqPt(s, t) => Node::EqPt(self.term(*s, &mut free)?, self.term(*t, &mut free)?),
            F::EqOp(u, v) => {
                let (a, b) = (self.open_slot(*u), self.open_slot(*v));
                free.push((true, a));
                free.push((true, b));
                Node::EqOp(a, b)
            }
            F::Pred(p, t) => {
                let set = self.model.val.prop(*p).ok_or(SemanticsError::UnvaluedProp(*p))?;
                Node::Pred(set, self.term(*t, &mut free)?)
            }
            F::In(t, u) => {
                let t = self.term(*t, &mut free)?;
                let s = self.open_slot(*u);
                free.push((true, s));
                Node::In(t, s)
            }
            F::Not(a) => {
                let a = self.compile(a)?;
                free = self.child_free(a);
                Node::Not(a)
            }
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                free = self.child_free(a);
                free.extend(self.child_free(b));
                match phi {
                    F::And(..) => Node::And(a, b),
                    F::Or(..) => Node::Or(a, b),
                    _ => Node::Implies(a, b),
                }
            }
            F::ExistsPt(x, a) | F::ForallPt(x, a) => {
                let s = self.point_slot(*x);
                let a = self.compile(a)?;
                free = self.child_free(a);
                free.retain(|&v| v != (false, s));
                if matches!(phi, F::ExistsPt(..)) {
                    Node::ExPt(s, a)
                } else {
                    Node::AllPt(s, a)
                }
            }
            F::ExistsOp(u, a) | F::ForallOp(u, a) => {
                let s = self.open_slot(*u);
                let a = self.compile(a)?;
                free = self.child_free(a);
                free.retain(|&v| v != (true, s));
                if matches!(phi, F::ExistsOp(..)) {
                    Node::ExOp(s, a)
                } else {
                    Node::AllOp(s, a)
                }
            }
        };
        Ok(self.push(node, free))
    }
}

impl CompiledFo {
    /// Prepares `phi` on `m`; open quantifiers range over `scope`, or over
    /// the opens of the space when `scope` is `None`.
    pub fn new(m: &Model, phi: &FoFormula, scope: Option<&Base>) -> Result<CompiledFo, SemanticsError> {
        let scope: Vec<PointSet> = match scope {
            Some(b) => b.sets().to_vec(),
            None => m.space.opens().to_vec(),
        };
        let mut c = Compiler {
            model: m,
            nodes: Vec::new(),
            free: Vec::new(),
            point_slots: BTreeMap::new(),
            open_slots: BTreeMap::new(),
        };
        let root = c.compile(phi)?;
        let n = m.n();
        let cache = c
            .free
            .iter()
            .map(|vars| {
                let size = vars.iter().try_fold(1usize, |acc, &(open, _)| {
                    acc.checked_mul(if open { scope.len() } else { n })
                });
                match size {
                    Some(s) if s <= CACHE_LIMIT => vec![UNKNOWN; s],
                    _ => Vec::new(),
                }
            })
            .collect();
        let invert = |slots: &BTreeMap<u32, usize>| {
            let mut ids = vec![0; slots.len()];
            for (&id, &s) in slots {
                ids[s] = id;
            }
            ids
        };
        Ok(CompiledFo {
            n,
            point_env: vec![None; c.point_slots.len()],
            open_env: vec![None; c.open_slots.len()],
            point_ids: invert(&c.point_slots),
            open_ids: invert(&c.open_slots),
            scope,
            nodes: c.nodes,
            root,
            free: c.free,
            cache,
        })
    }

    /// Evaluates under `g`; variables of the formula not mentioned in `g`
    /// must not occur free.
    pub fn eval(&mut self, g: &Assignment) -> Result<bool, SemanticsError> {
        for (s, id) in self.point_ids.iter().enumerate() {
            self.point_env[s] = match g.points.get(id) {
                Some(&p) if p >= self.n => return Err(SemanticsError::PointOutOfRange { point: p, n: self.n }),
                other => other.copied(),
            };
        }
        for (s, id) in self.open_ids.iter().enumerate() {
            self.open_env[s] = match g.opens.get(id) {
                Some(&set) => Some(
                    self.scope
                        .iter()
                        .position(|&o| o == set)
                        .ok_or(SemanticsError::OpenNotInScope { var: *id, set })?,
                ),
                None => None,
            };
        }
        self.node(self.root)
    }

    fn point(&self, t: Term) -> usize {
        match t {
            Term::Slot(s) => self.point_env[s].unwrap_or(usize::MAX),
            Term::Point(p) => p,
        }
    }

    fn key(&self, ix: usize) -> Result<usize, SemanticsError> {
        let mut key = 0;
        for &(open, s) in &self.free[ix] {
            let (value, radix) = if open {
                let v = self.open_env[s].ok_or(SemanticsError::UnassignedOpenVar(self.open_ids[s]))?;
                (v, self.scope.len())
            } else {
                let v = self.point_env[s].ok_or(SemanticsError::UnassignedPointVar(self.point_ids[s]))?;
                (v, self.n)
            };
            key = key * radix + value;
        }
        Ok(key)
    }

    fn node(&mut self, ix: usize) -> Result<bool, SemanticsError> {
        let key = self.key(ix)?;
        let cached = !self.cache[ix].is_empty();
        if cached && self.cache[ix][key] != UNKNOWN {
            return Ok(self.cache[ix][key] == TRUE);
        }
        let value = match self.nodes[ix] {
            Node::Top => true,
            Node::Bot => false,
            Node::EqPt(s, t) => self.point(s) == self.point(t),
            Node::EqOp(u, v) => self.scope[self.open_env[u].unwrap_or(0)] == self.scope[self.open_env[v].unwrap_or(0)],
            Node::Pred(set, t) => set.contains(self.point(t)),
            Node::In(t, u) => self.scope[self.open_env[u].unwrap_or(0)].contains(self.point(t)),
            Node::Not(a) => !self.node(a)?,
            Node::And(a, b) => self.node(a)? && self.node(b)?,
            Node::Or(a, b) => self.node(a)? || self.node(b)?,
            Node::Implies(a, b) => !self.node(a)? || self.node(b)?,
            Node::ExPt(s, a) | Node::AllPt(s, a) => {
                let want = matches!(self.nodes[ix], Node::ExPt(..));
                let saved = self.point_env[s];
                let mut found = !want;
                for w in 0..self.n {
                    self.point_env[s] = Some(w);
                    if self.node(a)? == want {
                        found = want;
                        break;
                    }
                }
                self.point_env[s] = saved;
                found
            }
            Node::ExOp(s, a) | Node::AllOp(s, a) => {
                let want = matches!(self.nodes[ix], Node::ExOp(..));
                let saved = self.open_env[s];
                let mut found = !want;
                for o in 0..self.scope.len() {
                    self.open_env[s] = Some(o);
                    if self.node(a)? == want {
                        found = want;
                        break;
                    }
                }
                self.open_env[s] = saved;
                found
            }
        };
        if cached {
            self.cache[ix][key] = if value { TRUE } else { FALSE };
        }
        Ok(value)
    }
}

/// Two-sorted satisfaction; open quantifiers range over `g.scope` when set,
/// otherwise over the topology.
pub fn eval_fo(m: &Model, phi: &FoFormula, g: &Assignment) -> Result<bool, SemanticsError> {
    CompiledFo::new(m, phi, g.scope.as_ref())?.eval(g)
}

/// Either kind of formula, for searches that accept both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Modal(ModalFormula),
    Fo(FoFormula),
}

/// A model and assignment satisfying a formula; `point` is the evaluation
/// point for modal formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub model: Model,
    pub point: Option<usize>,
    pub assignment: Assignment,
}

/// Searches every space on `n` points (in enumeration order) and every
/// valuation of the symbols occurring in `phi` for a satisfying model.
/// Free point variables are searched too; free open variables are not
/// allowed.
pub fn satisfiable_on_size(phi: &Formula, n: usize, guard: SweepGuard) -> Result<Option<Witness>, SemanticsError> {
    let (props, points): (Vec<u32>, Vec<(bool, u32)>) = match phi {
        Formula::Modal(f) => (
            f.props().into_iter().collect(),
            f.nominals()
                .into_iter()
                .map(|i| (true, i))
                .chain(f.free_vars().into_iter().map(|x| (false, x)))
                .collect(),
        ),
        Formula::Fo(f) => {
            if !f.free_open_vars().is_empty() {
                return Err(SemanticsError::NotASentence);
            }
            (
                f.props().into_iter().collect(),
                f.constants()
                    .into_iter()
                    .map(|i| (true, i))
                    .chain(f.free_point_vars().into_iter().map(|x| (false, x)))
                    .collect(),
            )
        }
    };
    let cases = Cases::new(n, props.len(), points.len(), guard)?;
    for space in enumerate_spaces(n) {
        for index in 0..cases.len {
            let mut val = Valuation::new();
            for (&p, set) in props.iter().zip(cases.sets(index)) {
                val.set_prop(p, set);
            }
            let mut g = Assignment::new();
            for (&(nominal, k), w) in points.iter().zip(cases.placement(index)) {
                if nominal {
                    val.set_nominal(k, w);
                } else {
                    g.points.insert(k, w);
                }
            }
            let model = Model {
                space: space.clone(),
                val,
            };
            let point = match phi {
                Formula::Modal(f) => match truth_set(&model, f, &g)?.first() {
                    Some(w) => Some(w),
                    None => continue,
                },
                Formula::Fo(f) => {
                    if !eval_fo(&model, f, &g)? {
                        continue;
                    }
                    None
                }
            };
            return Ok(Some(Witness {
                model,
                point,
                assignment: g,
            }));
        }
    }
    Ok(None)
}

/// The valuation on the Alexandroff extension sending each letter to the
/// ultrafilters containing its value: `ν*(p) = {u : ν(p) ∈ u}`.
pub fn lifted_valuation(ext: &AlexandroffExtension, val: &Valuation) -> Valuation {
    let lift = |a: PointSet| -> PointSet {
        ext.ultrafilters
            .iter()
            .enumerate()
            .filter(|(_, u)| u.contains(a))
            .map(|(i, _)| i)
            .collect()
    };
    let mut out = Valuation::new();
    for (&p, &a) in val.props() {
        out.set_prop(p, lift(a));
    }
    for (&i, &w) in val.nominals() {
        let set = lift(PointSet::singleton(w));
        // a principal ultrafilter contains a singleton only at its generator
        if let Some(u) = set.first() {
            out.set_nominal(i, u);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_fo, parse_modal};

    fn f(s: &str) -> ModalFormula {
        parse_modal(s).unwrap()
    }

    fn set(points: &[usize]) -> PointSet {
        points.iter().copied().collect()
    }

    const GRZ: &str = "[]([](p0 -> []p0) -> p0) -> []p0";
    const CONN: &str = "A([]p0 | []~p0) -> (A p0 | A ~p0)";

    #[test]
    fn difference_on_one_point() {
        let m = Model::new(Space::one_point(), Valuation::new().with_prop(0, set(&[0]))).unwrap();
        assert!(!eval_modal(&m, 0, &f("D p0"), &Assignment::new()).unwrap());
    }

    #[test]
    fn t1_fails_on_sierpinski() {
        let m = Model::new(Space::sierpinski(), Valuation::new().with_nominal(0, 0)).unwrap();
        let g = Assignment::new();
        assert!(eval_modal(&m, 1, &f("<>i0"), &g).unwrap());
        assert!(!eval_modal(&m, 1, &f("i0"), &g).unwrap());
        assert!(!eval_modal(&m, 1, &f("<>i0 -> i0"), &g).unwrap());
    }

    #[test]
    fn binder_sees_minimal_neighbourhood() {
        let m = Model::bare(Space::sierpinski());
        assert!(eval_modal(&m, 0, &f("!x0.[]x0"), &Assignment::new()).unwrap());
        assert!(!eval_modal(&m, 1, &f("!x0.[]x0"), &Assignment::new()).unwrap());
    }

    #[test]
    fn unvalued_symbols_are_errors() {
        let m = Model::bare(Space::sierpinski());
        let g = Assignment::new();
        assert_eq!(eval_modal(&m, 0, &f("p3"), &g), Err(SemanticsError::UnvaluedProp(3)));
        assert_eq!(eval_modal(&m, 0, &f("@i1 T"), &g), Err(SemanticsError::UnvaluedNominal(1)));
        assert_eq!(eval_modal(&m, 0, &f("x2"), &g), Err(SemanticsError::UnassignedPointVar(2)));
        assert!(eval_modal(&m, 5, &f("T"), &g).is_err());
    }

    #[test]
    fn nominal_sets_must_be_singletons() {
        let mut v = Valuation::new();
        assert!(v.set_nominal_set(0, set(&[0, 1])).is_err());
        assert!(v.set_nominal_set(0, PointSet::EMPTY).is_err());
        assert!(v.set_nominal_set(0, set(&[1])).is_ok());
        assert_eq!(v.nominal(0), Some(1));
    }

    #[test]
    fn grz_validity() {
        assert!(valid_on_space(&Space::sierpinski(), &f(GRZ)).unwrap().is_valid());
        let v = valid_on_space(&Space::trivial(2), &f(GRZ)).unwrap();
        let c = v.counterexample().unwrap();
        assert_eq!(c.valuation.prop(0), Some(set(&[0])));
    }

    #[test]
    fn connectedness_on_discrete() {
        let v = valid_on_space(&Space::discrete(2), &f(CONN)).unwrap();
        assert_eq!(v.counterexample().unwrap().valuation.prop(0), Some(set(&[0])));
        assert!(valid_on_space(&Space::sierpinski(), &f(CONN)).unwrap().is_valid());
    }

    #[test]
    fn validity_requires_sentences_and_respects_budget() {
        assert_eq!(
            valid_on_space(&Space::one_point(), &f("x0")),
            Err(SemanticsError::NotASentence)
        );
        let many = f("p0 & p1 & p2 & p3 & p4 & p5 & p6");
        assert!(matches!(
            valid_on_space(&Space::discrete(4), &many),
            Err(SemanticsError::Budget { .. })
        ));
    }

    #[test]
    fn sweeps_split_and_merge_by_least_index() {
        let phi = f(GRZ);
        let s = Space::trivial(3);
        let sweep = ValiditySweep::new(&s, &phi, SweepGuard::default()).unwrap();
        let whole = sweep.first_failure(0..sweep.len()).unwrap();
        let mid = sweep.len() / 2;
        let parts = [sweep.first_failure(0..mid).unwrap(), sweep.first_failure(mid..sweep.len()).unwrap()];
        let merged = parts.into_iter().flatten().min_by_key(|(i, _)| *i);
        assert_eq!(whole, merged);
    }

    #[test]
    fn specialization_formula() {
        let m = Model::bare(Space::sierpinski());
        let phi = parse_fo("(all-op U0 (implies (in x0 U0) (in x1 U0)))").unwrap();
        let at = |a, b| Assignment::new().with_point(0, a).with_point(1, b);
        assert!(eval_fo(&m, &phi, &at(1, 0)).unwrap());
        assert!(!eval_fo(&m, &phi, &at(0, 1)).unwrap());
    }

    #[test]
    fn base_scope_differs_for_non_lt_formula() {
        let s = Space::discrete(2);
        let m = Model::bare(s);
        let phi = parse_fo("(ex-op U0 (and (in x0 U0) (ex-pt x1 (and (not (= x1 x0)) (in x1 U0)))))").unwrap();
        let g = Assignment::new().with_point(0, 0);
        assert!(eval_fo(&m, &phi, &g).unwrap());
        let base = Base::new(2, [PointSet::EMPTY, set(&[0]), set(&[1])]).unwrap();
        assert!(!eval_fo(&m, &phi, &g.clone().with_scope(base)).unwrap());
    }

    #[test]
    fn fo_errors() {
        let m = Model::bare(Space::sierpinski());
        let g = Assignment::new();
        assert_eq!(
            eval_fo(&m, &parse_fo("(in x0 U0)").unwrap(), &g.clone().with_point(0, 0)),
            Err(SemanticsError::UnassignedOpenVar(0))
        );
        assert_eq!(
            eval_fo(&m, &parse_fo("(in x0 U0)").unwrap(), &g.clone().with_point(0, 0).with_open(0, set(&[1]))),
            Err(SemanticsError::OpenNotInScope { var: 0, set: set(&[1]) })
        );
        assert_eq!(
            eval_fo(&m, &parse_fo("(= c1 c1)").unwrap(), &g),
            Err(SemanticsError::UnvaluedNominal(1))
        );
    }

    #[test]
    fn nominal_constants_resolve_through_the_valuation() {
        let m = Model::new(Space::sierpinski(), Valuation::new().with_nominal(0, 1)).unwrap();
        let phi = parse_fo("(ex-pt x0 (= x0 c0))").unwrap();
        assert!(eval_fo(&m, &phi, &Assignment::new()).unwrap());
        let phi = parse_fo("(= c0 x0)").unwrap();
        assert!(!eval_fo(&m, &phi, &Assignment::new().with_point(0, 0)).unwrap());
    }

    #[test]
    fn satisfiability_search() {
        let phi = Formula::Modal(f("p0 & ~<>~p0 & D T"));
        let w = satisfiable_on_size(&phi, 2, SweepGuard::default()).unwrap().unwrap();
        assert_eq!(w.model.n(), 2);
        let contradiction = Formula::Fo(parse_fo("(ex-pt x0 (not (= x0 x0)))").unwrap());
        assert_eq!(satisfiable_on_size(&contradiction, 3, SweepGuard::default()).unwrap(), None);
    }

    #[test]
    fn lifted_valuation_matches_generators() {
        let s = Space::sierpinski();
        let ext = crate::space::alexandroff_extension(&s);
        let v = Valuation::new().with_prop(0, set(&[1])).with_nominal(0, 0);
        let lifted = lifted_valuation(&ext, &v);
        assert_eq!(lifted.prop(0), Some(set(&[1])));
        assert_eq!(lifted.nominal(0), Some(0));
    }
}
