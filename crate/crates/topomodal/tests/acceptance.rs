//! Runs the ten acceptance criteria and prints one line per criterion.

use topomodal::acceptance::{self, Criterion, DEFAULT_SEED};
use topomodal::harness::workers;

fn report(c: Criterion) -> bool {
    println!("{c}");
    c.passed
}

#[test]
fn acceptance_criteria() {
    let (seed, workers) = (DEFAULT_SEED, workers());
    let runs: [&dyn Fn() -> Criterion; 10] = [
        &|| acceptance::ac1(workers),
        &|| acceptance::ac2(workers),
        &|| acceptance::ac3(workers),
        &|| acceptance::ac4(seed),
        &|| acceptance::ac5(seed),
        &|| acceptance::ac6(seed),
        &|| acceptance::ac7(workers),
        &|| acceptance::ac8(seed, workers),
        &|| acceptance::ac9(workers),
        &|| acceptance::ac10(seed),
    ];
    let failed: Vec<usize> = runs
        .iter()
        .enumerate()
        .filter(|(_, run)| !report(run()))
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
