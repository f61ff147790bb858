//! Corpus sweeps split across worker threads.
//!
//! Results are merged by input index, so reports do not depend on the
//! number of workers.

use std::num::NonZeroUsize;
use std::thread;

use serde::Serialize;
use topomodal_core::props::{check_property, Property};
use topomodal_core::semantics::{satisfiable_on_size, valid_on_space_with, Formula, SemanticsError, SweepGuard};
use topomodal_core::space::enumerate_spaces;
use topomodal_core::syntax::{print_modal, FoFormula, ModalFormula};
use topomodal_core::Space;

use crate::format::{ModelJson, SpaceJson};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "TOPOMODAL_WORKERS";

/// `TOPOMODAL_WORKERS` if set to a positive integer, else the available
/// parallelism.
pub fn workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<NonZeroUsize>().ok())
        .or_else(|| thread::available_parallelism().ok())
        .map_or(1, NonZeroUsize::get)
}

/// Applies `f` to every item on `workers` threads, interleaving items
/// between threads; the output is in input order.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let mut slots: Vec<Option<R>> = Vec::with_capacity(items.len());
    slots.resize_with(items.len(), || None);
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    (w..items.len())
                        .step_by(workers)
                        .map(|i| (i, f(i, &items[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every index is visited")).collect()
}

/// All spaces on `1..=max_n` points in enumeration order.
pub fn corpus(max_n: usize) -> Vec<Space> {
    (1..=max_n).flat_map(enumerate_spaces).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// Position in the enumeration of all spaces of size `1..=max_n`.
    pub index: usize,
    pub space: SpaceJson,
    pub valid: bool,
    pub property: bool,
    /// A falsifying model and point when the formula is not valid.
    pub counterexample: Option<(ModelJson, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefinabilityReport {
    pub formula: String,
    pub property: String,
    pub max_n: usize,
    pub spaces: usize,
    pub valid: usize,
    pub with_property: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DefinabilityReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `S ⊨ φ` with the property checker on every space of size at
/// most `max_n`.
pub fn definability(
    phi: &ModalFormula,
    property: Property,
    max_n: usize,
    guard: SweepGuard,
    workers: usize,
) -> Result<DefinabilityReport, SemanticsError> {
    let spaces = corpus(max_n);
    let rows = par_map(&spaces, workers, |_, s| -> Result<_, SemanticsError> {
        let validity = valid_on_space_with(s, phi, guard)?;
        Ok((validity, check_property(s, property)))
    });
    let mut report = DefinabilityReport {
        formula: print_modal(phi),
        property: property.tag().to_string(),
        max_n,
        spaces: spaces.len(),
        valid: 0,
        with_property: 0,
        mismatches: Vec::new(),
    };
    for (index, (s, row)) in spaces.iter().zip(rows).enumerate() {
        let (validity, has) = row?;
        report.valid += validity.is_valid() as usize;
        report.with_property += has as usize;
        if validity.is_valid() != has {
            let counterexample = validity.counterexample().map(|c| {
                let model = topomodal_core::semantics::Model::new(s.clone(), c.valuation.clone())
                    .expect("sweep valuations are in range");
                (ModelJson::from_model(&model), c.point)
            });
            report.mismatches.push(Mismatch {
                index,
                space: SpaceJson::from_space(s),
                valid: validity.is_valid(),
                property: has,
                counterexample,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeResult {
    pub n: usize,
    pub spaces: usize,
    /// A satisfying space, if one was found.
    pub witness: Option<SpaceJson>,
}

/// Searches each size `1..=max_n` for a model of a first-order sentence.
pub fn satisfiability_by_size(
    phi: &FoFormula,
    max_n: usize,
    guard: SweepGuard,
    workers: usize,
) -> Result<Vec<SizeResult>, SemanticsError> {
    let sizes: Vec<usize> = (1..=max_n).collect();
    let formula = Formula::Fo(phi.clone());
    par_map(&sizes, workers, |_, &n| {
        let witness = satisfiable_on_size(&formula, n, guard)?;
        Ok(SizeResult {
            n,
            spaces: enumerate_spaces(n).count(),
            witness: witness.map(|w| SpaceJson::from_space(w.model.space())),
        })
    })
    .into_iter()
    .collect()
}
