//! Decidable topological properties of finite spaces, their first-order
//! definitions, and the named modal formulas that define some of them.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::semantics::{eval_fo, Assignment, Model, SemanticsError};
use crate::set::PointSet;
use crate::space::{Space, SpaceError};
use crate::syntax::{parse_fo, parse_modal, FoFormula, ModalFormula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    T0,
    T1,
    T2,
    Regular,
    Discrete,
    Alexandroff,
    Connected,
    Disconnected,
    DenseInItself,
    Resolvable,
    Irresolvable,
    Hi,
    Compact,
}

impl Property {
    pub const ALL: [Property; 13] = [
        Property::T0,
        Property::T1,
        Property::T2,
        Property::Regular,
        Property::Discrete,
        Property::Alexandroff,
        Property::Connected,
        Property::Disconnected,
        Property::DenseInItself,
        Property::Resolvable,
        Property::Irresolvable,
        Property::Hi,
        Property::Compact,
    ];

    /// The properties with a first-order sentence in the separation table.
    pub const TABLE: [Property; 6] = [
        Property::T0,
        Property::T1,
        Property::T2,
        Property::Regular,
        Property::Discrete,
        Property::Alexandroff,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Property::T0 => "t0",
            Property::T1 => "t1",
            Property::T2 => "t2",
            Property::Regular => "regular",
            Property::Discrete => "discrete",
            Property::Alexandroff => "alexandroff",
            Property::Connected => "connected",
            Property::Disconnected => "disconnected",
            Property::DenseInItself => "dense_in_itself",
            Property::Resolvable => "resolvable",
            Property::Irresolvable => "irresolvable",
            Property::Hi => "hi",
            Property::Compact => "compact",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropsError {
    UnknownTag(String),
    NoSentence(Property),
    Space(SpaceError),
    Semantics(SemanticsError),
}

impl fmt::Display for PropsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropsError::UnknownTag(t) => write!(f, "unknown property tag '{t}'"),
            PropsError::NoSentence(p) => write!(f, "no first-order sentence is recorded for {p}"),
            PropsError::Space(e) => write!(f, "{e}"),
            PropsError::Semantics(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PropsError {}

impl From<SpaceError> for PropsError {
    fn from(e: SpaceError) -> Self {
        PropsError::Space(e)
    }
}

impl From<SemanticsError> for PropsError {
    fn from(e: SemanticsError) -> Self {
        PropsError::Semantics(e)
    }
}

impl FromStr for Property {
    type Err = PropsError;

    fn from_str(s: &str) -> Result<Property, PropsError> {
        Property::ALL
            .into_iter()
            .find(|p| p.tag() == s)
            .ok_or_else(|| PropsError::UnknownTag(s.to_string()))
    }
}

fn distinct_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
}

fn opens_around(s: &Space, x: usize) -> impl Iterator<Item = PointSet> + '_ {
    s.opens().iter().copied().filter(move |o| o.contains(x))
}

/// `cl A = X`
pub fn is_dense(s: &Space, a: PointSet) -> Result<bool, SpaceError> {
    Ok(s.closure(a)? == s.points())
}

/// Some bipartition of the space into two dense halves. Any pair of
/// disjoint dense sets extends to one, since supersets of dense sets are
/// dense.
fn resolvable(s: &Space) -> bool {
    let full = s.points();
    full.subsets()
        .any(|a| s.closure_of(a) == full && s.closure_of(full.difference(a)) == full)
}

fn connected(s: &Space) -> bool {
    s.opens().iter().all(|&o| o.is_empty() || o == s.points() || !s.is_closed(o))
}

pub fn check_property(s: &Space, p: Property) -> bool {
    let n = s.n();
    match p {
        Property::T0 => distinct_pairs(n).all(|(x, y)| {
            opens_around(s, x).any(|o| !o.contains(y)) || opens_around(s, y).any(|o| !o.contains(x))
        }),
        Property::T1 => distinct_pairs(n).all(|(x, y)| opens_around(s, x).any(|o| !o.contains(y))),
        Property::T2 => distinct_pairs(n)
            .all(|(x, y)| opens_around(s, x).any(|u| opens_around(s, y).any(|v| u.is_disjoint(v)))),
        Property::Regular => (0..n).all(|x| {
            opens_around(s, x).all(|u| opens_around(s, x).any(|v| s.closure_of(v).is_subset(u)))
        }),
        Property::Discrete => (0..n).all(|x| s.is_open(PointSet::singleton(x))),
        Property::Alexandroff => (0..n).all(|x| {
            let meet = opens_around(s, x).fold(s.points(), PointSet::intersection);
            s.is_open(meet)
        }),
        Property::Connected => connected(s),
        Property::Disconnected => !connected(s),
        Property::DenseInItself => (0..n).all(|x| s.minimal_neighborhood(x) != PointSet::singleton(x)),
        Property::Resolvable => resolvable(s),
        Property::Irresolvable => !resolvable(s),
        Property::Hi => s.points().subsets().filter(|y| !y.is_empty()).all(|y| {
            // non-empty and in range, so the subspace exists
            s.subspace(y).is_ok_and(|(sub, _)| !resolvable(&sub))
        }),
        Property::Compact => true,
    }
}

pub fn check_property_tag(s: &Space, tag: &str) -> Result<bool, PropsError> {
    Ok(check_property(s, tag.parse()?))
}

/// First-order sentences for the table properties and for density in
/// itself. Point variables `x0, x1, x2` and open variables `U0, U1, U2`
/// stand for `x, y, z` and `U, V, V′`.
pub fn lt_sentence(p: Property) -> Option<FoFormula> {
    let text = match p {
        Property::T0 => {
            "(all-pt x0 (all-pt x1 (implies (not (= x0 x1)) \
             (or (ex-op U0 (and (in x0 U0) (not (in x1 U0)))) \
                 (ex-op U1 (and (in x1 U1) (not (in x0 U1))))))))"
        }
        Property::T1 => {
            "(all-pt x0 (all-pt x1 (implies (not (= x0 x1)) \
             (ex-op U0 (and (in x0 U0) (not (in x1 U0)))))))"
        }
        Property::T2 => {
            "(all-pt x0 (all-pt x1 (implies (not (= x0 x1)) \
             (ex-op U0 (and (in x0 U0) (ex-op U1 (and (in x1 U1) \
             (all-pt x2 (or (not (in x2 U0)) (not (in x2 U1)))))))))))"
        }
        Property::Regular => {
            "(all-pt x0 (all-op U0 (implies (in x0 U0) \
             (ex-op U1 (and (in x0 U1) (all-pt x1 (or (in x1 U0) \
             (ex-op U2 (and (in x1 U2) (all-pt x2 (implies (in x2 U2) (not (in x2 U1)))))))))))))"
        }
        Property::Discrete => "(all-pt x0 (ex-op U0 (and (in x0 U0) (all-pt x1 (implies (in x1 U0) (= x1 x0))))))",
        // the least neighbourhood U of x lies inside every neighbourhood V of x
        Property::Alexandroff => {
            "(all-pt x0 (ex-op U0 (and (in x0 U0) (all-op U1 (implies (in x0 U1) \
             (all-pt x1 (implies (in x1 U0) (in x1 U1))))))))"
        }
        Property::DenseInItself => {
            "(all-pt x0 (all-op U0 (implies (in x0 U0) (ex-pt x1 (and (in x1 U0) (not (= x1 x0)))))))"
        }
        _ => return None,
    };
    Some(parse_fo(text).expect("built-in sentence parses"))
}

/// Whether the first-order sentence for `p` holds on `s` exactly when the
/// direct checker says so.
pub fn lt_property_agreement(s: &Space, p: Property) -> Result<bool, PropsError> {
    let phi = lt_sentence(p).ok_or(PropsError::NoSentence(p))?;
    let model = Model::bare(s.clone());
    Ok(eval_fo(&model, &phi, &Assignment::new())? == check_property(s, p))
}

/// `x0 ≤ x1` in the specialization order.
pub fn specialization_formula() -> FoFormula {
    parse_fo("(all-op U0 (implies (in x0 U0) (in x1 U0)))").expect("built-in sentence parses")
}

/// A sentence whose models have `(N, ≤)` as specialization order; it has no
/// finite models. Variables: `x0..x4` for `x, y, z, z_l, z_g`; `U0, U1` for
/// `U, V`; `U2` is reserved for the order itself.
pub fn chi_n() -> FoFormula {
    let le = |a: &str, b: &str| alloc::format!("(all-op U2 (implies (in {a} U2) (in {b} U2)))");
    let lt = |a: &str, b: &str| alloc::format!("(and {} (not (= {a} {b})))", le(a, b));
    let conjuncts = [
        alloc::format!(
            "(all-pt x0 (all-pt x1 (implies (and {} {}) (= x0 x1))))",
            le("x0", "x1"),
            le("x1", "x0")
        ),
        alloc::format!("(all-pt x0 (all-pt x1 (or {} {})))", le("x0", "x1"), le("x1", "x0")),
        alloc::format!("(ex-pt x0 (all-pt x1 {}))", le("x0", "x1")),
        alloc::format!(
            "(all-pt x0 (ex-pt x1 (and {} (all-pt x2 (implies {} {})))))",
            lt("x0", "x1"),
            lt("x0", "x2"),
            le("x1", "x2")
        ),
        "(all-pt x0 (ex-op U0 (and (in x0 U0) (all-op U1 (implies (in x0 U1) \
         (all-pt x1 (implies (in x1 U0) (in x1 U1))))))))"
            .to_string(),
        alloc::format!(
            "(all-op U0 (implies (and (ex-pt x0 (not (in x0 U0))) (ex-pt x0 (in x0 U0))) \
             (ex-pt x3 (ex-pt x4 (and (and (not (in x3 U0)) (not (in x4 U0))) \
             (all-pt x1 (implies (or {} {}) (in x1 U0))))))))",
            lt("x1", "x3"),
            lt("x4", "x1")
        ),
    ];
    let mut it = conjuncts.iter().map(|c| parse_fo(c).expect("built-in sentence parses"));
    let first = it.next().expect("non-empty");
    it.fold(first, FoFormula::and)
}

/// Modal formulas under a name: `Grz`, the connectedness axiom `conn`, and
/// the hybrid (`-h`) and difference (`-d`) definitions of `t0`, `t1` and
/// density in itself.
pub const NAMED_FORMULAS: [(&str, &str); 8] = [
    ("Grz", "[]([](p0 -> []p0) -> p0) -> []p0"),
    ("conn", "A([]p0 | []~p0) -> (A p0 | A ~p0)"),
    ("t0-h", "@i0 <>i1 & @i1 <>i0 -> @i0 i1"),
    ("t1-h", "<>i0 -> i0"),
    ("dense-h", "<>~i0"),
    ("t0-d", "(p0 & ~D p0) & D (p1 & ~D p1) -> []~p1 | D (p1 & []~p0)"),
    ("t1-d", "p0 & ~D p0 -> A (p0 <-> <>p0)"),
    ("dense-d", "p0 -> <>D p0"),
];

pub fn named_formula(name: &str) -> Option<ModalFormula> {
    NAMED_FORMULAS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_modal(text).expect("built-in formula parses"))
}
