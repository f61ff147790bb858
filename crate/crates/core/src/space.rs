//! Finite topological spaces.
//!
//! A [`Space`] stores its full family of open sets (sorted by bitmask) and,
//! derived from it, the minimal open neighbourhood of every point. Every
//! finite space is Alexandroff, so interior and closure reduce to
//! neighbourhood tests.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::set::{PointSet, MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    NoPoints,
    TooManyPoints { n: usize },
    PointOutOfRange { set: PointSet, n: usize },
    MissingEmptySet,
    MissingFullSet,
    NotClosedUnderIntersection { a: PointSet, b: PointSet },
    NotClosedUnderUnion { a: PointSet, b: PointSet },
    BaseDoesNotCover,
    BaseIntersection { a: PointSet, b: PointSet, point: usize },
    NotOpen { set: PointSet },
    EmptySubspace,
    NotReflexive { point: usize },
    NotTransitive { x: usize, y: usize, z: usize },
    MapLength { expected: usize, found: usize },
    MapOutOfRange { point: usize, image: usize },
    EmptySum,
    SizeGuard { what: &'static str, limit: usize, actual: usize },
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::NoPoints => write!(f, "a space needs at least one point"),
            SpaceError::TooManyPoints { n } => {
                write!(f, "{n} points exceeds the supported maximum of {MAX_POINTS}")
            }
            SpaceError::PointOutOfRange { set, n } => {
                write!(f, "set {set} mentions a point outside 0..{n}")
            }
            SpaceError::MissingEmptySet => write!(f, "the empty set must be open"),
            SpaceError::MissingFullSet => write!(f, "the full point set must be open"),
            SpaceError::NotClosedUnderIntersection { a, b } => {
                write!(f, "intersection of opens {a} and {b} is not open")
            }
            SpaceError::NotClosedUnderUnion { a, b } => {
                write!(f, "union of opens {a} and {b} is not open")
            }
            SpaceError::BaseDoesNotCover => write!(f, "base sets do not cover the point set"),
            SpaceError::BaseIntersection { a, b, point } => write!(
                f,
                "no base set contains {point} inside the intersection of {a} and {b}"
            ),
            SpaceError::NotOpen { set } => write!(f, "{set} is not open"),
            SpaceError::EmptySubspace => write!(f, "an open subspace must be non-empty"),
            SpaceError::NotReflexive { point } => write!(f, "relation is not reflexive at {point}"),
            SpaceError::NotTransitive { x, y, z } => {
                write!(f, "relation is not transitive: {x}<={y}<={z} but not {x}<={z}")
            }
            SpaceError::MapLength { expected, found } => {
                write!(f, "map has {found} entries, expected {expected}")
            }
            SpaceError::MapOutOfRange { point, image } => {
                write!(f, "point {point} is sent to {image}, outside the target")
            }
            SpaceError::EmptySum => write!(f, "topological sum of an empty family"),
            SpaceError::SizeGuard { what, limit, actual } => {
                write!(f, "{what}: size {actual} exceeds the guard of {limit}")
            }
        }
    }
}

impl core::error::Error for SpaceError {}

/// A finite topological space on the points `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Space {
    n: usize,
    opens: Vec<PointSet>,
    nbhd: Vec<PointSet>,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space")
            .field("n", &self.n)
            .field("opens", &self.opens)
            .finish()
    }
}

impl Space {
    /// Validates `opens` as a topology on `0..n`.
    ///
    /// Duplicates are ignored. The first violated condition is reported,
    /// checking range, `∅`, the full set, binary intersections and then
    /// binary unions, in sorted order.
    pub fn new<I: IntoIterator<Item = PointSet>>(n: usize, opens: I) -> Result<Space, SpaceError> {
        if n == 0 {
            return Err(SpaceError::NoPoints);
        }
        if n > MAX_POINTS {
            return Err(SpaceError::TooManyPoints { n });
        }
        let set: BTreeSet<PointSet> = opens.into_iter().collect();
        if let Some(&bad) = set.iter().find(|s| !s.within(n)) {
            return Err(SpaceError::PointOutOfRange { set: bad, n });
        }
        if !set.contains(&PointSet::EMPTY) {
            return Err(SpaceError::MissingEmptySet);
        }
        if !set.contains(&PointSet::full(n)) {
            return Err(SpaceError::MissingFullSet);
        }
        let opens: Vec<PointSet> = set.iter().copied().collect();
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if !set.contains(&a.intersection(b)) {
                    return Err(SpaceError::NotClosedUnderIntersection { a, b });
                }
            }
        }
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if !set.contains(&a.union(b)) {
                    return Err(SpaceError::NotClosedUnderUnion { a, b });
                }
            }
        }
        Ok(Space::from_sorted_opens(n, opens))
    }

    /// Builds a space from a sorted, deduplicated family already known to be
    /// a topology.
    pub(crate) fn from_sorted_opens(n: usize, opens: Vec<PointSet>) -> Space {
        debug_assert!(opens.windows(2).all(|w| w[0] < w[1]));
        let nbhd = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(PointSet::full(n), |acc, &o| acc.intersection(o))
            })
            .collect();
        Space { n, opens, nbhd }
    }

    fn from_open_set(n: usize, opens: BTreeSet<PointSet>) -> Space {
        Space::from_sorted_opens(n, opens.into_iter().collect())
    }

    pub fn one_point() -> Space {
        Space::discrete(1)
    }

    /// Every subset open.
    pub fn discrete(n: usize) -> Space {
        assert!((1..=16).contains(&n), "discrete space size out of range");
        Space::from_sorted_opens(n, PointSet::full(n).subsets().collect())
    }

    /// Only `∅` and the full set open.
    pub fn trivial(n: usize) -> Space {
        assert!((1..=MAX_POINTS).contains(&n), "trivial space size out of range");
        let mut opens = vec![PointSet::EMPTY, PointSet::full(n)];
        opens.dedup();
        Space::from_sorted_opens(n, opens)
    }

    /// Opens `∅`, `{0}`, `{0,1}`.
    pub fn sierpinski() -> Space {
        Space::from_sorted_opens(2, vec![PointSet(0), PointSet(0b01), PointSet(0b11)])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn points(&self) -> PointSet {
        PointSet::full(self.n)
    }

    /// Open sets in increasing bitmask order.
    #[inline]
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn is_open(&self, a: PointSet) -> bool {
        self.opens.binary_search(&a).is_ok()
    }

    pub fn is_closed(&self, a: PointSet) -> bool {
        self.is_open(a.complement(self.n))
    }

    /// Least open set containing `x`.
    #[inline]
    pub fn minimal_neighborhood(&self, x: usize) -> PointSet {
        self.nbhd[x]
    }

    pub fn minimal_neighborhoods(&self) -> &[PointSet] {
        &self.nbhd
    }

    fn check_range(&self, a: PointSet) -> Result<(), SpaceError> {
        if a.within(self.n) {
            Ok(())
        } else {
            Err(SpaceError::PointOutOfRange { set: a, n: self.n })
        }
    }

    /// Greatest open set contained in `a`.
    pub fn interior(&self, a: PointSet) -> Result<PointSet, SpaceError> {
        self.check_range(a)?;
        Ok(self.interior_of(a))
    }

    /// Least closed set containing `a`.
    pub fn closure(&self, a: PointSet) -> Result<PointSet, SpaceError> {
        self.check_range(a)?;
        Ok(self.closure_of(a))
    }

    /// Unchecked interior; points outside the carrier are ignored.
    #[inline]
    pub fn interior_of(&self, a: PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for x in a.iter() {
            if x < self.n && self.nbhd[x].is_subset(a) {
                out = out.with(x);
            }
        }
        out
    }

    /// Unchecked closure, `−𝕀−a`.
    #[inline]
    pub fn closure_of(&self, a: PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for x in 0..self.n {
            if !self.nbhd[x].is_disjoint(a) {
                out = out.with(x);
            }
        }
        out
    }

    /// The specialization preorder: `x <= y` iff `x ∈ cl{y}`.
    pub fn specialization_preorder(&self) -> Preorder {
        // x ∈ cl{y} iff every open around x contains y iff y ∈ U_x
        Preorder {
            n: self.n,
            up: self.nbhd.clone(),
        }
    }

    /// `{∅} ∪ {U_x}`, a base generating this space.
    pub fn minimal_neighborhood_base(&self) -> Base {
        let mut sets: BTreeSet<PointSet> = self.nbhd.iter().copied().collect();
        sets.insert(PointSet::EMPTY);
        Base {
            n: self.n,
            sets: sets.into_iter().collect(),
        }
    }

    /// Subspace on a non-empty subset `y` with the relative topology
    /// `{O ∩ y : O open}`, points relabelled in increasing order. Returns the
    /// subspace and the original index of each of its points.
    pub fn subspace(&self, y: PointSet) -> Result<(Space, Vec<usize>), SpaceError> {
        self.check_range(y)?;
        if y.is_empty() {
            return Err(SpaceError::EmptySubspace);
        }
        let points: Vec<usize> = y.iter().collect();
        let opens: BTreeSet<PointSet> = self.opens.iter().map(|&o| relabel(&points, o.intersection(y))).collect();
        Ok((Space::from_open_set(points.len(), opens), points))
    }

    /// Open subspace on a non-empty open `o`, with points relabelled in
    /// increasing order. Returns the subspace and, for each of its points,
    /// the original index.
    pub fn open_subspace(&self, o: PointSet) -> Result<(Space, Vec<usize>), SpaceError> {
        self.check_range(o)?;
        if o.is_empty() {
            return Err(SpaceError::EmptySubspace);
        }
        if !self.is_open(o) {
            return Err(SpaceError::NotOpen { set: o });
        }
        let points: Vec<usize> = o.iter().collect();
        let opens: BTreeSet<PointSet> = self
            .opens
            .iter()
            .filter(|a| a.is_subset(o))
            .map(|&a| relabel(&points, a))
            .collect();
        Ok((Space::from_open_set(points.len(), opens), points))
    }
}

/// Renames each member of `a` to its position in `points`.
fn relabel(points: &[usize], a: PointSet) -> PointSet {
    points
        .iter()
        .enumerate()
        .filter(|(_, &p)| a.contains(p))
        .map(|(i, _)| i)
        .collect()
}

/// Topological sum; the `i`-th component's points are shifted by the total
/// size of the components before it.
pub fn sum(spaces: &[Space]) -> Result<Space, SpaceError> {
    if spaces.is_empty() {
        return Err(SpaceError::EmptySum);
    }
    let total: usize = spaces.iter().map(Space::n).sum();
    if total > MAX_POINTS {
        return Err(SpaceError::TooManyPoints { n: total });
    }
    let mut opens = vec![PointSet::EMPTY];
    let mut offset = 0;
    for s in spaces {
        let mut next = Vec::with_capacity(opens.len() * s.opens.len());
        for &acc in &opens {
            for &o in &s.opens {
                next.push(acc.union(PointSet(o.bits() << offset)));
            }
        }
        opens = next;
        offset += s.n;
    }
    opens.sort_unstable();
    opens.dedup();
    Ok(Space::from_sorted_opens(total, opens))
}

/// A family of subsets intended to generate a topology by unions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Base {
    n: usize,
    sets: Vec<PointSet>,
}

/// The three base conditions: `∅` present, the sets cover `0..n`, and every
/// point of a pairwise intersection has a base set around it inside that
/// intersection.
pub fn is_base(n: usize, sets: &[PointSet]) -> bool {
    check_base(n, sets).is_ok()
}

fn check_base(n: usize, sets: &[PointSet]) -> Result<(), SpaceError> {
    if n == 0 {
        return Err(SpaceError::NoPoints);
    }
    if n > MAX_POINTS {
        return Err(SpaceError::TooManyPoints { n });
    }
    if let Some(&bad) = sets.iter().find(|s| !s.within(n)) {
        return Err(SpaceError::PointOutOfRange { set: bad, n });
    }
    if !sets.contains(&PointSet::EMPTY) {
        return Err(SpaceError::MissingEmptySet);
    }
    let cover = sets.iter().fold(PointSet::EMPTY, |acc, &s| acc.union(s));
    if cover != PointSet::full(n) {
        return Err(SpaceError::BaseDoesNotCover);
    }
    for &a in sets {
        for &b in sets {
            let both = a.intersection(b);
            for x in both.iter() {
                if !sets.iter().any(|c| c.contains(x) && c.is_subset(both)) {
                    return Err(SpaceError::BaseIntersection { a, b, point: x });
                }
            }
        }
    }
    Ok(())
}

impl Base {
    pub fn new<I: IntoIterator<Item = PointSet>>(n: usize, sets: I) -> Result<Base, SpaceError> {
        let sets: Vec<PointSet> = sets.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        check_base(n, &sets)?;
        Ok(Base { n, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    /// The topology of all unions of subfamilies.
    pub fn generate_topology(&self) -> Space {
        let mut opens = BTreeSet::new();
        opens.insert(PointSet::EMPTY);
        for &b in &self.sets {
            let current: Vec<PointSet> = opens.iter().copied().collect();
            for o in current {
                opens.insert(o.union(b));
            }
        }
        Space::from_open_set(self.n, opens)
    }
}

/// A reflexive, transitive relation on `0..n`, stored as up-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    n: usize,
    up: Vec<PointSet>,
}

impl Preorder {
    /// `up[x]` is the set of `y` with `x <= y`.
    pub fn new(up: Vec<PointSet>) -> Result<Preorder, SpaceError> {
        let n = up.len();
        if n == 0 {
            return Err(SpaceError::NoPoints);
        }
        if n > MAX_POINTS {
            return Err(SpaceError::TooManyPoints { n });
        }
        for (x, &row) in up.iter().enumerate() {
            if !row.within(n) {
                return Err(SpaceError::PointOutOfRange { set: row, n });
            }
            if !row.contains(x) {
                return Err(SpaceError::NotReflexive { point: x });
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if let Some(z) = up[y].difference(up[x]).first() {
                    return Err(SpaceError::NotTransitive { x, y, z });
                }
            }
        }
        Ok(Preorder { n, up })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up_set(&self, x: usize) -> PointSet {
        self.up[x]
    }

    /// All related pairs `(x, y)` with `x <= y`, lexicographically.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| self.up[x].iter().map(move |y| (x, y)))
            .collect()
    }

    /// The Alexandroff topology whose opens are the up-sets.
    pub fn to_space(&self) -> Space {
        let mut sets: BTreeSet<PointSet> = self.up.iter().copied().collect();
        sets.insert(PointSet::EMPTY);
        Base {
            n: self.n,
            sets: sets.into_iter().collect(),
        }
        .generate_topology()
    }
}

pub fn from_preorder(r: &Preorder) -> Space {
    r.to_space()
}

/// Streams every topology on `n` labelled points exactly once.
///
/// Walks all reflexive relations in increasing order of their off-diagonal
/// bitmask, keeps the transitive ones and takes their up-set topology.
pub fn enumerate_spaces(n: usize) -> Topologies {
    assert!(n <= 8, "enumeration of topologies is limited to 8 points");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    Topologies {
        n,
        limit: if n == 0 { 0 } else { 1u64 << pairs.len() },
        pairs,
        mask: 0,
    }
}

pub struct Topologies {
    n: usize,
    pairs: Vec<(usize, usize)>,
    mask: u64,
    limit: u64,
}

impl Iterator for Topologies {
    type Item = Space;

    fn next(&mut self) -> Option<Space> {
        while self.mask < self.limit {
            let mask = self.mask;
            self.mask += 1;
            let mut up: Vec<PointSet> = (0..self.n).map(PointSet::singleton).collect();
            for (bit, &(x, y)) in self.pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    up[x] = up[x].with(y);
                }
            }
            let transitive = (0..self.n).all(|x| up[x].iter().all(|y| up[y].is_subset(up[x])));
            if transitive {
                return Some(Preorder { n: self.n, up }.to_space());
            }
        }
        None
    }
}

/// Every topology on `n` points found by filtering all families of subsets
/// that contain `∅` and the full set. Independent of the preorder route and
/// only feasible for `n <= 4`.
pub fn enumerate_spaces_by_filtering(n: usize) -> Result<Vec<Space>, SpaceError> {
    if n == 0 {
        return Err(SpaceError::NoPoints);
    }
    if n > 4 {
        return Err(SpaceError::SizeGuard {
            what: "subset-family enumeration",
            limit: 4,
            actual: n,
        });
    }
    let full = PointSet::full(n);
    let middle: Vec<PointSet> = full
        .subsets()
        .filter(|&s| s != PointSet::EMPTY && s != full)
        .collect();
    let mut out = Vec::new();
    for family in 0u64..1 << middle.len() {
        let mut opens = vec![PointSet::EMPTY, full];
        opens.extend(
            middle
                .iter()
                .enumerate()
                .filter(|(i, _)| family >> i & 1 == 1)
                .map(|(_, &s)| s),
        );
        if let Ok(space) = Space::new(n, opens) {
            out.push(space);
        }
    }
    Ok(out)
}

/// A total function between the points of two spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    source: Space,
    target: Space,
    f: Vec<usize>,
}

impl PointMap {
    pub fn new(source: Space, target: Space, f: Vec<usize>) -> Result<PointMap, SpaceError> {
        if f.len() != source.n() {
            return Err(SpaceError::MapLength {
                expected: source.n(),
                found: f.len(),
            });
        }
        if let Some((point, &image)) = f.iter().enumerate().find(|(_, &y)| y >= target.n()) {
            return Err(SpaceError::MapOutOfRange { point, image });
        }
        Ok(PointMap { source, target, f })
    }

    pub fn identity(space: &Space) -> PointMap {
        PointMap {
            source: space.clone(),
            target: space.clone(),
            f: (0..space.n()).collect(),
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.f
    }

    pub fn apply(&self, x: usize) -> usize {
        self.f[x]
    }

    pub fn image(&self, a: PointSet) -> PointSet {
        image_of(&self.f, a)
    }

    pub fn preimage(&self, b: PointSet) -> PointSet {
        preimage_of(&self.f, b)
    }

    pub fn is_surjective(&self) -> bool {
        self.image(self.source.points()) == self.target.points()
    }

    /// Images of opens are open.
    pub fn is_open_map(&self) -> bool {
        self.source
            .opens()
            .iter()
            .all(|&o| self.target.is_open(self.image(o)))
    }

    /// Preimages of opens are open.
    pub fn is_continuous(&self) -> bool {
        self.target
            .opens()
            .iter()
            .all(|&o| self.source.is_open(self.preimage(o)))
    }

    pub fn is_interior_map(&self) -> bool {
        is_interior(&self.source, &self.target, &self.f)
    }
}

fn image_of(f: &[usize], a: PointSet) -> PointSet {
    a.iter().map(|x| f[x]).collect()
}

fn preimage_of(f: &[usize], b: PointSet) -> PointSet {
    f.iter()
        .enumerate()
        .filter(|(_, &y)| b.contains(y))
        .map(|(x, _)| x)
        .collect()
}

fn is_interior(source: &Space, target: &Space, f: &[usize]) -> bool {
    source.opens().iter().all(|&o| target.is_open(image_of(f, o)))
        && target.opens().iter().all(|&o| source.is_open(preimage_of(f, o)))
}

pub fn is_interior_map(m: &PointMap) -> bool {
    m.is_interior_map()
}

/// A principal ultrafilter `{A : generator ∈ A}`; over a finite carrier
/// these are all the ultrafilters there are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ultrafilter {
    pub generator: usize,
}

impl Ultrafilter {
    pub fn contains(&self, a: PointSet) -> bool {
        a.contains(self.generator)
    }

    /// Contains every member of the principal filter `↑b`.
    pub fn extends_principal(&self, b: PointSet) -> bool {
        self.contains(b)
    }
}

/// Ultrafilter space of a finite space together with the map `a ↦ π_a`.
#[derive(Debug, Clone)]
pub struct AlexandroffExtension {
    pub space: Space,
    pub ultrafilters: Vec<Ultrafilter>,
    pub pi: PointMap,
}

/// Builds the space of ultrafilters whose topology is generated by the cones
/// `{u : F ⊆ u}` of open filters `F`.
///
/// Over a finite set every filter is principal, `↑B`, and `↑B` is open
/// exactly when `𝕀B ∈ ↑B`, i.e. when `B` is open.
pub fn alexandroff_extension(s: &Space) -> AlexandroffExtension {
    let ultrafilters: Vec<Ultrafilter> = (0..s.n()).map(|generator| Ultrafilter { generator }).collect();
    let cones: BTreeSet<PointSet> = s
        .points()
        .subsets()
        .filter(|&b| b.is_subset(s.interior_of(b)))
        .map(|b| {
            ultrafilters
                .iter()
                .enumerate()
                .filter(|(_, u)| u.extends_principal(b))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let base = Base {
        n: s.n(),
        sets: cones.into_iter().collect(),
    };
    debug_assert!(is_base(base.n, &base.sets));
    let space = base.generate_topology();
    let pi = PointMap {
        source: s.clone(),
        target: space.clone(),
        f: (0..s.n()).collect(),
    };
    AlexandroffExtension {
        space,
        ultrafilters,
        pi,
    }
}

/// Caps for the brute-force map searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchGuard {
    pub max_source: usize,
    pub max_target: usize,
}

impl Default for SearchGuard {
    fn default() -> Self {
        SearchGuard {
            max_source: 5,
            max_target: 4,
        }
    }
}

/// Whether `y` is a u-morphic image of `x`: some surjective interior map
/// `x → y*` hits every principal ultrafilter exactly once.
pub fn is_u_morphic_image(x: &Space, y: &Space, guard: SearchGuard) -> Result<bool, SpaceError> {
    if x.n() > guard.max_source {
        return Err(SpaceError::SizeGuard {
            what: "u-morphic source",
            limit: guard.max_source,
            actual: x.n(),
        });
    }
    if y.n() > guard.max_target {
        return Err(SpaceError::SizeGuard {
            what: "u-morphic target",
            limit: guard.max_target,
            actual: y.n(),
        });
    }
    let ext = alexandroff_extension(y);
    let target = &ext.space;
    let m = target.n();
    let mut f = vec![0usize; x.n()];
    loop {
        let mut counts = vec![0usize; m];
        for &v in &f {
            counts[v] += 1;
        }
        // all ultrafilters of a finite set are principal
        if counts.iter().all(|&c| c == 1) && is_interior(x, target, &f) {
            return Ok(true);
        }
        if !next_tuple(&mut f, m) {
            return Ok(false);
        }
    }
}

fn next_tuple(f: &mut [usize], base: usize) -> bool {
    for slot in f.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Largest size for which homeomorphism search is attempted.
pub const HOMEOMORPHISM_GUARD: usize = 8;

pub fn is_homeomorphic(a: &Space, b: &Space) -> Result<bool, SpaceError> {
    Ok(find_homeomorphism(a, b)?.is_some())
}

/// A bijective interior map `a → b`, found by backtracking over bijections.
pub fn find_homeomorphism(a: &Space, b: &Space) -> Result<Option<Vec<usize>>, SpaceError> {
    let n = a.n().max(b.n());
    if n > HOMEOMORPHISM_GUARD {
        return Err(SpaceError::SizeGuard {
            what: "homeomorphism search",
            limit: HOMEOMORPHISM_GUARD,
            actual: n,
        });
    }
    if a.n() != b.n() || a.opens().len() != b.opens().len() {
        return Ok(None);
    }
    let mut f = vec![usize::MAX; a.n()];
    let mut used = PointSet::EMPTY;
    Ok(extend_bijection(a, b, 0, &mut f, &mut used).then_some(f))
}

fn extend_bijection(a: &Space, b: &Space, x: usize, f: &mut Vec<usize>, used: &mut PointSet) -> bool {
    if x == a.n() {
        return is_interior(a, b, f);
    }
    let size = a.minimal_neighborhood(x).len();
    for y in b.points().difference(*used).iter() {
        if b.minimal_neighborhood(y).len() != size {
            continue;
        }
        f[x] = y;
        *used = used.with(y);
        if extend_bijection(a, b, x + 1, f, used) {
            return true;
        }
        *used = used.without(y);
    }
    f[x] = usize::MAX;
    false
}
