//! Topological semantics of modal languages on finite spaces.
//!
//! Everything in this crate is `no_std` (with `alloc`): finite topological
//! spaces as families of open sets, the modal/hybrid and two-sorted
//! first-order languages interpreted on them, translations between the two,
//! topo-bisimulations, decidable checkers for separation-style properties and
//! finite interior algebras.
//!
//! Points of a space are dense indices `0..n` and subsets are bitmasks
//! ([`PointSet`]), which caps spaces at [`MAX_POINTS`] points.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod bisim;
pub mod props;
pub mod semantics;
pub mod set;
pub mod space;
pub mod syntax;
pub mod translate;

pub use set::{PointSet, MAX_POINTS};
pub use space::{Base, PointMap, Space, SpaceError};
pub use syntax::{FoFormula, Language, ModalFormula, Name, ParseError, PointTerm};
