//! The ten acceptance criteria, each an exhaustive or seeded randomized
//! check returning a pass/fail line.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use topomodal_core::algebra::{check_interior_algebra, complex_algebra, dual_space, equation_valid};
use topomodal_core::bisim::{greatest_topo_bisimulation, kripke_bisimulation, satisfies_zig_zag, MeaningTable};
use topomodal_core::props::{chi_n, named_formula, specialization_formula, Property};
use topomodal_core::semantics::{
    eval_fo, eval_modal, lifted_valuation, truth_set, valid_on_space, Assignment, CompiledFo, Model, SweepGuard,
    Valuation,
};
use topomodal_core::space::{alexandroff_extension, enumerate_spaces, enumerate_spaces_by_filtering, is_homeomorphic, sum};
use topomodal_core::syntax::{li_check, lt_check, parse_fo, print_fo, print_modal, Language, ModalFormula};
use topomodal_core::translate::{ht, st, st_ext};
use topomodal_core::{Base, PointSet, Space};

use crate::format::space_to_json;
use crate::gen::{self, FormulaShape};
use crate::harness::{corpus, definability, par_map, satisfiability_by_size};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "AC{:<2} {verdict}  {}: {}", self.id, self.name, self.detail)
    }
}

/// Counts trials and keeps the first violation.
#[derive(Default)]
struct Tally {
    trials: usize,
    violations: usize,
    /// Trials of an implication whose premise held.
    premises: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn implication(&mut self, premise: bool, conclusion: bool, describe: impl FnOnce() -> String) {
        self.premises += premise as usize;
        self.check(!premise || conclusion, describe);
    }

    fn merge(&mut self, other: Tally) {
        self.premises += other.premises;
        self.trials += other.trials;
        self.violations += other.violations;
        if self.first.is_none() {
            self.first = other.first;
        }
    }

    fn summary(&self, what: &str) -> String {
        let premises = if self.premises > 0 {
            format!(" ({} with the premise)", self.premises)
        } else {
            String::new()
        };
        match &self.first {
            None => format!("{} {what}{premises}, 0 violations", self.trials),
            Some(first) => format!("{} {what}{premises}, {} violations; first: {first}", self.trials, self.violations),
        }
    }
}

fn criterion(id: u8, name: &'static str, passed: bool, detail: String) -> Criterion {
    Criterion {
        id,
        name,
        passed,
        detail,
    }
}

fn rng_for(seed: u64, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ id.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn valid(s: &Space, phi: &ModalFormula) -> bool {
    valid_on_space(s, phi).expect("acceptance sweeps stay within the default guard").is_valid()
}

fn named(name: &str) -> ModalFormula {
    named_formula(name).expect("built-in formula")
}

fn definability_line(pairs: &[(&str, Property)], workers: usize) -> (bool, String) {
    let mut passed = true;
    let mut parts = Vec::new();
    for &(name, p) in pairs {
        let r = definability(&named(name), p, 4, SweepGuard::default(), workers).expect("within guard");
        passed &= r.passed();
        parts.push(format!("{name}~{}: {} mismatches/{} spaces", p.tag(), r.mismatches.len(), r.spaces));
    }
    (passed, parts.join("; "))
}

/// Grz defines hereditary irresolvability on the 389 spaces of size ≤ 4,
/// whose counts are cross-checked by subset-family filtering.
pub fn ac1(workers: usize) -> Criterion {
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_spaces(n).count()).collect();
    let filtered: Vec<usize> = (1..=4)
        .map(|n| enumerate_spaces_by_filtering(n).expect("n ≤ 4").len())
        .collect();
    let (agree, line) = definability_line(&[("Grz", Property::Hi)], workers);
    let passed = agree && counts == [1, 4, 29, 355] && counts == filtered;
    criterion(
        1,
        "Grz defines HI",
        passed,
        format!("counts {counts:?} (filtering oracle {filtered:?}); {line}"),
    )
}

pub fn ac2(workers: usize) -> Criterion {
    let (passed, line) = definability_line(&[("conn", Property::Connected)], workers);
    criterion(2, "connectedness axiom", passed, line)
}

pub fn ac3(workers: usize) -> Criterion {
    let (passed, line) = definability_line(
        &[
            ("t1-h", Property::T1),
            ("t0-h", Property::T0),
            ("dense-h", Property::DenseInItself),
            ("t1-d", Property::T1),
            ("t0-d", Property::T0),
            ("dense-d", Property::DenseInItself),
        ],
        workers,
    );
    criterion(3, "hybrid and difference definitions", passed, line)
}

/// Sums, open subspaces and surjective interior images.
pub fn ac4(seed: u64) -> Criterion {
    const TRIALS: usize = 1_000;
    let mut rng = rng_for(seed, 4);
    let ml = FormulaShape::new(Language::Ml, 3);
    let mut sums = Tally::default();
    for _ in 0..TRIALS {
        let parts: Vec<Space> = (0..rng.gen_range(1..=3)).map(|_| gen::space(&mut rng, 4)).collect();
        let phi = gen::formula(&mut rng, &ml);
        let whole = sum(&parts).expect("at most 12 points");
        let expected = parts.iter().all(|s| valid(s, &phi));
        sums.check(valid(&whole, &phi) == expected, || {
            format!("sum of {} spaces, {}", parts.len(), print_modal(&phi))
        });
    }
    let mut subspaces = Tally::default();
    for lang in [Language::Ml, Language::HybridAt] {
        let shape = FormulaShape::new(lang, 3);
        for _ in 0..TRIALS {
            let s = gen::space(&mut rng, 4);
            let phi = gen::formula(&mut rng, &shape);
            let opens: Vec<PointSet> = s.opens().iter().copied().filter(|o| !o.is_empty()).collect();
            let o = opens[rng.gen_range(0..opens.len())];
            let (sub, _) = s.open_subspace(o).expect("non-empty open");
            subspaces.implication(valid(&s, &phi), valid(&sub, &phi), || {
                format!("{} on {} restricted to {o}", print_modal(&phi), space_to_json(&s))
            });
        }
    }
    let mut images = Tally::default();
    for lang in [Language::Ml, Language::ModalE] {
        let shape = FormulaShape::new(lang, 3);
        for _ in 0..TRIALS {
            let f = gen::interior_image(&mut rng, 4);
            let phi = gen::formula(&mut rng, &shape);
            images.implication(valid(f.source(), &phi), valid(f.target(), &phi), || {
                format!("{} along {:?}", print_modal(&phi), f.table())
            });
        }
    }
    let passed = sums.violations + subspaces.violations + images.violations == 0;
    criterion(
        4,
        "preservation theorems",
        passed,
        format!(
            "sums {}; open subspaces {}; interior images {}",
            sums.summary("trials"),
            subspaces.summary("trials"),
            images.summary("trials")
        ),
    )
}

pub fn ac5(seed: u64) -> Criterion {
    let spaces = corpus(4);
    let homeomorphic = spaces
        .iter()
        .filter(|s| is_homeomorphic(&alexandroff_extension(s).space, s).expect("n ≤ 4"))
        .count();
    let mut rng = rng_for(seed, 5);
    let shape = FormulaShape::new(Language::HybridE, 3);
    let mut lemma = Tally::default();
    for _ in 0..100 {
        let m = gen::model(&mut rng, 4, 2, 2);
        let phi = gen::formula(&mut rng, &shape);
        let ext = alexandroff_extension(m.space());
        let lifted = Model::new(ext.space.clone(), lifted_valuation(&ext, m.val())).expect("lifted values are in range");
        let g = Assignment::new();
        let below = truth_set(&m, &phi, &g).expect("model values every symbol");
        let above = truth_set(&lifted, &phi, &g).expect("lifted model values every symbol");
        let pointwise = ext
            .ultrafilters
            .iter()
            .enumerate()
            .all(|(i, u)| above.contains(i) == u.contains(below));
        // pointwise always; reflection of validity when X* validates phi
        let above_valid = valid(&ext.space, &phi);
        lemma.premises += above_valid as usize;
        lemma.check(pointwise && (!above_valid || valid(m.space(), &phi)), || print_modal(&phi));
    }
    let passed = homeomorphic == spaces.len() && lemma.violations == 0;
    criterion(
        5,
        "Alexandroff extension",
        passed,
        format!(
            "{homeomorphic}/{} extensions homeomorphic; truth lemma {}",
            spaces.len(),
            lemma.summary("pairs")
        ),
    )
}

pub fn ac6(seed: u64) -> Criterion {
    const TRIALS: usize = 1_000;
    let mut rng = rng_for(seed, 6);
    let g = Assignment::new();
    let mut st_tally = Tally::default();
    let ml = FormulaShape::new(Language::Ml, 3);
    for _ in 0..TRIALS {
        let m = gen::model(&mut rng, 4, 2, 0);
        let phi = gen::formula(&mut rng, &ml);
        let alpha = st(&phi, 0).expect("ML formula");
        let truth = truth_set(&m, &phi, &g).expect("valued");
        let agree = (0..m.n()).all(|w| eval_fo(&m, &alpha, &g.clone().with_point(0, w)).expect("valued") == truth.contains(w));
        st_tally.check(agree && lt_check(&alpha), || print_modal(&phi));
    }
    let mut ext_tally = Tally::default();
    let hybrid = FormulaShape::new(Language::HybridEDown, 3);
    for _ in 0..TRIALS {
        let m = gen::model(&mut rng, 4, 2, 2);
        let phi = gen::close(gen::formula(&mut rng, &hybrid));
        let alpha = st_ext(&phi, 5).expect("sentence of H(E,↓)");
        let truth = truth_set(&m, &phi, &g).expect("valued");
        let agree = (0..m.n()).all(|w| eval_fo(&m, &alpha, &g.clone().with_point(5, w)).expect("valued") == truth.contains(w));
        ext_tally.check(agree && li_check(&alpha), || print_modal(&phi));
    }
    let mut ht_tally = Tally::default();
    for _ in 0..TRIALS {
        let m = gen::model(&mut rng, 4, 2, 2);
        let alpha = gen::li_formula(&mut rng, 5);
        let phi = ht(&alpha, 0).expect("pattern fragment");
        let truth = truth_set(&m, &phi, &g).expect("valued");
        let agree = (0..m.n()).all(|w| eval_fo(&m, &alpha, &g.clone().with_point(0, w)).expect("valued") == truth.contains(w));
        ht_tally.check(agree && phi.is_sentence(), || print_fo(&alpha));
    }
    let passed = st_tally.violations + ext_tally.violations + ht_tally.violations == 0;
    criterion(
        6,
        "translations preserve truth",
        passed,
        format!(
            "st {}; st_ext {}; ht {}",
            st_tally.summary("trials"),
            ext_tally.summary("trials"),
            ht_tally.summary("trials")
        ),
    )
}

/// Every pointed model over at most three points with one letter.
pub fn ac7(workers: usize) -> Criterion {
    let models: Vec<Model> = corpus(3)
        .iter()
        .flat_map(|s| {
            s.points()
                .subsets()
                .map(move |a| Model::new(s.clone(), Valuation::new().with_prop(0, a)).expect("in range"))
        })
        .collect();
    let rows = par_map(&models, workers, |i, m1| {
        let mut kripke = Tally::default();
        let mut formulas = Tally::default();
        let g = Assignment::new();
        for (j, m2) in models.iter().enumerate() {
            let z = greatest_topo_bisimulation(m1, m2);
            let zig_zag = z.is_empty() || satisfies_zig_zag(m1, m2, &z).expect("in range");
            kripke.check(z == kripke_bisimulation(m1, m2) && zig_zag, || format!("models {i} and {j}"));
            let table = MeaningTable::new(m1, m2, 3);
            for w in 0..m1.n() {
                for w2 in 0..m2.n() {
                    let ok = match table.distinguish(w, w2) {
                        None => z.contains(w, w2),
                        Some(phi) => {
                            !z.contains(w, w2)
                                && phi.modal_depth() <= 3
                                && eval_modal(m1, w, phi, &g).expect("valued")
                                    != eval_modal(m2, w2, phi, &g).expect("valued")
                        }
                    };
                    formulas.check(ok, || format!("models {i}, {j} at ({w}, {w2})"));
                }
            }
        }
        (kripke, formulas)
    });
    let (mut kripke, mut formulas) = (Tally::default(), Tally::default());
    for (k, f) in rows {
        kripke.merge(k);
        formulas.merge(f);
    }
    let passed = kripke.violations + formulas.violations == 0;
    criterion(
        7,
        "bisimulation oracles",
        passed,
        format!(
            "{} models; Kripke oracle {}; depth-3 formula oracle {}",
            models.len(),
            kripke.summary("model pairs"),
            formulas.summary("point pairs")
        ),
    )
}

/// The formula that tells the discrete two-point topology from its base of
/// singletons.
pub const BASE_SENSITIVE: &str = "(ex-op U0 (and (in x0 U0) (ex-pt x1 (and (not (= x1 x0)) (in x1 U0)))))";

pub fn ac8(seed: u64, workers: usize) -> Criterion {
    let spaces = corpus(4);
    let rows = par_map(&spaces, workers, |i, s| {
        let mut rng = rng_for(seed ^ i as u64, 8);
        let shape = FormulaShape::new(Language::Ml, 3);
        let base = s.minimal_neighborhood_base();
        let mut tally = Tally::default();
        for _ in 0..200 {
            let phi = gen::formula(&mut rng, &shape);
            let m = Model::new(s.clone(), gen::valuation(&mut rng, s.n(), 2, 0)).expect("in range");
            let alpha = st(&phi, 0).expect("ML formula");
            let mut topological = CompiledFo::new(&m, &alpha, None).expect("valued");
            let mut basoid = CompiledFo::new(&m, &alpha, Some(&base)).expect("valued");
            let agree = (0..s.n()).all(|w| {
                let g = Assignment::new().with_point(0, w);
                topological.eval(&g).expect("assigned") == basoid.eval(&g).expect("assigned")
            });
            tally.check(agree && lt_check(&alpha), || format!("{} on space {i}", print_modal(&phi)));
        }
        tally
    });
    let mut tally = Tally::default();
    for t in rows {
        tally.merge(t);
    }
    let alpha = parse_fo(BASE_SENSITIVE).expect("built-in formula");
    let m = Model::bare(Space::discrete(2));
    let singletons = Base::new(2, [PointSet::EMPTY, PointSet::singleton(0), PointSet::singleton(1)]).expect("a base");
    let g = Assignment::new().with_point(0, 0);
    let topological = eval_fo(&m, &alpha, &g).expect("assigned");
    let basoid = eval_fo(&m, &alpha, &g.with_scope(singletons)).expect("assigned");
    let separated = !lt_check(&alpha) && topological && !basoid;
    criterion(
        8,
        "base invariance",
        tally.violations == 0 && separated,
        format!(
            "{} spaces, {}; non-L_t witness topological={topological} basoid={basoid}",
            spaces.len(),
            tally.summary("st-images")
        ),
    )
}

pub fn ac9(workers: usize) -> Criterion {
    let sizes = satisfiability_by_size(&chi_n(), 4, SweepGuard::default(), workers).expect("sentence");
    let unsat = sizes.iter().all(|r| r.witness.is_none());
    let searched: usize = sizes.iter().map(|r| r.spaces).sum();
    let le = specialization_formula();
    let spaces = corpus(4);
    let mut tally = Tally::default();
    for (i, s) in spaces.iter().enumerate() {
        let m = Model::bare(s.clone());
        let mut compiled = CompiledFo::new(&m, &le, None).expect("no symbols");
        for x in 0..s.n() {
            for y in 0..s.n() {
                let g = Assignment::new().with_point(0, x).with_point(1, y);
                let expected = s.closure_of(PointSet::singleton(y)).contains(x);
                tally.check(compiled.eval(&g).expect("assigned") == expected, || {
                    format!("space {i}, x={x}, y={y}")
                });
            }
        }
    }
    criterion(
        9,
        "chi_N and the specialization order",
        unsat && tally.violations == 0,
        format!(
            "chi_N unsatisfiable on all {searched} spaces of size 1..=4: {unsat}; specialization formula {}",
            tally.summary("point pairs")
        ),
    )
}

pub fn ac10(seed: u64) -> Criterion {
    let spaces = corpus(4);
    let mut duality = Tally::default();
    for (i, s) in spaces.iter().enumerate() {
        let b = complex_algebra(s);
        let axioms = check_interior_algebra(&b).is_ok();
        let back = dual_space(&b).map(|d| is_homeomorphic(&d, s).expect("n ≤ 4"));
        duality.check(axioms && back == Ok(true), || format!("space {i}"));
    }
    let mut rng = rng_for(seed, 10);
    let shape = FormulaShape::new(Language::Ml, 3);
    let mut transfer = Tally::default();
    for _ in 0..1_000 {
        let s = gen::space(&mut rng, 4);
        let phi = gen::formula(&mut rng, &shape);
        let algebraic = equation_valid(&complex_algebra(&s), &phi).expect("ML within budget");
        transfer.check(algebraic == valid(&s, &phi), || print_modal(&phi));
    }
    criterion(
        10,
        "algebraic duality",
        duality.violations + transfer.violations == 0,
        format!(
            "axioms and round trip {}; validity transfer {}",
            duality.summary("spaces"),
            transfer.summary("pairs")
        ),
    )
}

/// Runs every criterion in order.
pub fn run_all(seed: u64, workers: usize) -> Vec<Criterion> {
    vec![
        ac1(workers),
        ac2(workers),
        ac3(workers),
        ac4(seed),
        ac5(seed),
        ac6(seed),
        ac7(workers),
        ac8(seed, workers),
        ac9(workers),
        ac10(seed),
    ]
}
