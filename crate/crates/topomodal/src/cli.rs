//! Argument parsing and the subcommands of the `topomodal` binary.
//!
//! Exit status: 0 when the command completed (and matched `--expect` if
//! given), 2 on an assertion mismatch, 1 on a usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use topomodal_core::algebra::{check_interior_algebra, complex_algebra, dual_space, equation_valid, InteriorAlgebra};
use topomodal_core::bisim::{distinguishing_formula, greatest_topo_bisimulation, potential_homeomorphism_exists};
use topomodal_core::props::{chi_n, named_formula, Property};
use topomodal_core::semantics::{truth_set, valid_on_space_with, Assignment, SweepGuard, Valuation, Validity};
use topomodal_core::space::enumerate_spaces;
use topomodal_core::syntax::{
    language_of, li_check, lt_check, parse_fo, parse_modal, print_fo, print_modal, FoFormula, ModalFormula,
    ParseError,
};
use topomodal_core::translate::{ht, st_ext_with, st_with, VarMode};

use crate::acceptance::{self, DEFAULT_SEED};
use crate::format::{self, set_to_points, space_to_json, AlgebraJson, SpaceJson};
use crate::harness::{self, definability, satisfiability_by_size};

/// Number of topologies on `n` labelled points, `n ≤ 8`.
const TOPOLOGY_COUNTS: [u64; 9] = [1, 1, 4, 29, 355, 6942, 209_527, 9_535_241, 642_779_354];

#[derive(Debug, Parser)]
#[command(name = "topomodal", version, about = "Modal logic on finite topological spaces")]
pub struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Exit 2 unless the command's verdict is the expected one.
    #[arg(long, global = true, value_enum)]
    pub expect: Option<Expect>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    St,
    StExt,
    Ht,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or count every topology on K labelled points.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Evaluate a formula on a model, at one point or everywhere.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        point: Option<usize>,
    },
    /// Decide validity on a space, reporting a counterexample.
    Valid {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        formula: String,
        /// Cap on n·k, the bits of a valuation.
        #[arg(long, default_value_t = 24)]
        max_bits: u64,
    },
    /// Compare validity with a property on every space up to a size.
    Definability {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        property: String,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 24)]
        max_bits: u64,
        /// Refuse corpora with more spaces than this.
        #[arg(long, default_value_t = 10_000)]
        max_spaces: u64,
    },
    /// Greatest topo-bisimulation between two models.
    Bisim {
        #[arg(long)]
        model1: PathBuf,
        #[arg(long)]
        model2: PathBuf,
        /// A pair of points `w,w'` to compare.
        #[arg(long)]
        points: Option<String>,
        /// Search for a distinguishing formula when the points differ.
        #[arg(long)]
        witness: bool,
        /// Modal depth for the witness search; defaults to 3 times the
        /// larger model size.
        #[arg(long)]
        depth: Option<usize>,
        /// Also decide whether a potential homeomorphism exists.
        #[arg(long)]
        potential: bool,
    },
    /// Translate between the modal and first-order languages.
    Translate {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        formula: String,
        /// Index k of the point variable x<k> for the current point.
        #[arg(long, default_value_t = 0)]
        var: u32,
        /// Use a fresh variable at each quantifier.
        #[arg(long)]
        fresh: bool,
    },
    /// Complex algebras, axiom checks, dual spaces and equations.
    Algebra {
        #[arg(long, conflicts_with = "algebra", required_unless_present = "algebra")]
        space: Option<PathBuf>,
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// Print the dual space.
        #[arg(long)]
        dual: bool,
        /// Decide whether this ML formula is an equation of the algebra.
        #[arg(long)]
        formula: Option<String>,
    },
    /// Assert that the sentence characterising (N, ≤) has no models up to a size.
    ChiN {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Run every acceptance criterion.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// What a run printed and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A completed command: its report and whether its check held.
struct Report {
    text: String,
    json: Value,
    verdict: bool,
    /// Whether a failed verdict is an assertion mismatch without `--expect`.
    asserts: bool,
}

fn input_error(message: String) -> Outcome {
    Outcome {
        code: 1,
        stdout: String::new(),
        stderr: format!("error: {message}\n"),
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(message) => return input_error(message),
    };
    let code = match cli.expect {
        Some(Expect::Pass) if !report.verdict => 2,
        Some(Expect::Fail) if report.verdict => 2,
        None if report.asserts && !report.verdict => 2,
        _ => 0,
    };
    let stdout = if cli.json {
        let mut value = report.json;
        value["verdict"] = Value::from(if report.verdict { "pass" } else { "fail" });
        let mut out = serde_json::to_string_pretty(&value).expect("reports serialise");
        out.push('\n');
        out
    } else {
        report.text
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

/// Points at the offending byte of a one-line input.
fn caret(flag: &str, text: &str, e: &ParseError) -> String {
    let column = text[..e.pos.min(text.len())].chars().count();
    format!("{flag}: {e}\n  {text}\n  {}^", " ".repeat(column))
}

/// A built-in name (`Grz`, `conn`, ...) or a formula in the modal grammar.
fn modal_arg(text: &str) -> Result<ModalFormula, String> {
    named_formula(text).map_or_else(|| parse_modal(text).map_err(|e| caret("--formula", text, &e)), Ok)
}

fn fo_arg(text: &str) -> Result<FoFormula, String> {
    parse_fo(text).map_err(|e| caret("--formula", text, &e))
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T, format::FormatError>) -> Result<T, String> {
    parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn render_valuation(val: &Valuation) -> String {
    let mut parts: Vec<String> = val.props().iter().map(|(p, a)| format!("p{p}={a}")).collect();
    parts.extend(val.nominals().iter().map(|(i, w)| format!("i{i}={w}")));
    if parts.is_empty() {
        "(empty)".into()
    } else {
        parts.join(" ")
    }
}

fn valuation_json(val: &Valuation) -> Value {
    let mut map = serde_json::Map::new();
    for (p, a) in val.props() {
        map.insert(format!("p{p}"), json!(set_to_points(*a)));
    }
    for (i, w) in val.nominals() {
        map.insert(format!("i{i}"), json!([w]));
    }
    Value::Object(map)
}

fn algebra_text(b: &InteriorAlgebra) -> String {
    let mut out = format!("interior algebra on {} atoms\n", b.atoms());
    for a in b.elements() {
        let _ = writeln!(out, "  box {a} = {}", b.boxed(a));
    }
    out
}

fn execute(command: &Command) -> Result<Report, String> {
    match command {
        Command::Enumerate { n, count_only } => enumerate(*n, *count_only),
        Command::Check { model, formula, point } => check(model, formula, *point),
        Command::Valid {
            space,
            formula,
            max_bits,
        } => valid(space, formula, *max_bits),
        Command::Definability {
            formula,
            property,
            max_n,
            max_bits,
            max_spaces,
        } => definability_cmd(formula, property, *max_n, *max_bits, *max_spaces),
        Command::Bisim {
            model1,
            model2,
            points,
            witness,
            depth,
            potential,
        } => bisim(model1, model2, points.as_deref(), *witness, *depth, *potential),
        Command::Translate {
            mode,
            formula,
            var,
            fresh,
        } => translate(*mode, formula, *var, *fresh),
        Command::Algebra {
            space,
            algebra,
            dual,
            formula,
        } => algebra_cmd(space.as_deref(), algebra.as_deref(), *dual, formula.as_deref()),
        Command::ChiN { max_n } => chi(*max_n),
        Command::Selftest { seed } => selftest(*seed),
    }
}

fn enumerate(n: usize, count_only: bool) -> Result<Report, String> {
    if !(1..=8).contains(&n) {
        return Err(format!("--n must be between 1 and 8, got {n}"));
    }
    if count_only {
        let count = enumerate_spaces(n).count();
        return Ok(Report {
            text: format!("{count}\n"),
            json: json!({ "n": n, "count": count }),
            verdict: true,
            asserts: false,
        });
    }
    if TOPOLOGY_COUNTS[n] > 1_000_000 {
        return Err(format!("listing {} spaces is too much; use --count-only", TOPOLOGY_COUNTS[n]));
    }
    let spaces: Vec<SpaceJson> = enumerate_spaces(n).map(|s| SpaceJson::from_space(&s)).collect();
    let mut text = String::new();
    for s in &spaces {
        text.push_str(&serde_json::to_string(s).expect("plain data"));
        text.push('\n');
    }
    Ok(Report {
        text,
        json: json!({ "n": n, "count": spaces.len(), "spaces": spaces }),
        verdict: true,
        asserts: false,
    })
}

fn check(model: &Path, formula: &str, point: Option<usize>) -> Result<Report, String> {
    let m = load(model, format::parse_model)?;
    let phi = modal_arg(formula)?;
    let truth = truth_set(&m, &phi, &Assignment::new()).map_err(|e| e.to_string())?;
    let printed = print_modal(&phi);
    let (verdict, text) = match point {
        Some(w) if w >= m.n() => return Err(format!("--point {w} is outside 0..{}", m.n())),
        Some(w) => (truth.contains(w), format!("{printed} at {w}: {}\n", truth.contains(w))),
        None => (
            truth == m.space().points(),
            format!("{printed} holds on {truth}\n"),
        ),
    };
    Ok(Report {
        text,
        json: json!({
            "formula": printed,
            "point": point,
            "truth_set": set_to_points(truth),
        }),
        verdict,
        asserts: false,
    })
}

fn validity_report(space_json: Value, phi: &ModalFormula, validity: &Validity) -> Report {
    let printed = print_modal(phi);
    match validity.counterexample() {
        None => Report {
            text: format!("{printed} is valid\n"),
            json: json!({ "formula": printed, "space": space_json, "valid": true }),
            verdict: true,
            asserts: false,
        },
        Some(c) => Report {
            text: format!(
                "{printed} is not valid: fails at point {} under {}\n",
                c.point,
                render_valuation(&c.valuation)
            ),
            json: json!({
                "formula": printed,
                "space": space_json,
                "valid": false,
                "counterexample": { "point": c.point, "val": valuation_json(&c.valuation) },
            }),
            verdict: false,
            asserts: false,
        },
    }
}

fn valid(space: &Path, formula: &str, max_bits: u64) -> Result<Report, String> {
    let s = load(space, format::parse_space)?;
    let phi = modal_arg(formula)?;
    if !phi.is_sentence() {
        return Err("--formula must not have free variables".into());
    }
    let guard = SweepGuard {
        max_bits,
        ..SweepGuard::default()
    };
    let validity = valid_on_space_with(&s, &phi, guard).map_err(|e| e.to_string())?;
    Ok(validity_report(json!(SpaceJson::from_space(&s)), &phi, &validity))
}

fn definability_cmd(
    formula: &str,
    property: &str,
    max_n: usize,
    max_bits: u64,
    max_spaces: u64,
) -> Result<Report, String> {
    let phi = modal_arg(formula)?;
    if !phi.is_sentence() {
        return Err("--formula must not have free variables".into());
    }
    let p: Property = property.parse().map_err(|e| format!("--property: {e}"))?;
    if !(1..=8).contains(&max_n) {
        return Err(format!("--max-n must be between 1 and 8, got {max_n}"));
    }
    let total: u64 = TOPOLOGY_COUNTS[1..=max_n].iter().sum();
    if total > max_spaces {
        return Err(format!("{total} spaces exceed --max-spaces {max_spaces}"));
    }
    let guard = SweepGuard {
        max_bits,
        ..SweepGuard::default()
    };
    let r = definability(&phi, p, max_n, guard, harness::workers()).map_err(|e| e.to_string())?;
    let mut text = format!(
        "{} ~ {}: {} mismatches over {} spaces ({} valid, {} with the property)\n",
        r.formula,
        r.property,
        r.mismatches.len(),
        r.spaces,
        r.valid,
        r.with_property
    );
    for m in &r.mismatches {
        let _ = write!(
            text,
            "  space {} {}: valid={} {}={}",
            m.index,
            serde_json::to_string(&m.space).expect("plain data"),
            m.valid,
            r.property,
            m.property
        );
        if let Some((model, w)) = &m.counterexample {
            let _ = write!(text, ", fails at {w} under {}", serde_json::to_string(&model.val).expect("plain data"));
        }
        text.push('\n');
    }
    Ok(Report {
        text,
        verdict: r.passed(),
        json: serde_json::to_value(&r).expect("plain data"),
        asserts: true,
    })
}

fn bisim(
    model1: &Path,
    model2: &Path,
    points: Option<&str>,
    witness: bool,
    depth: Option<usize>,
    potential: bool,
) -> Result<Report, String> {
    let m1 = load(model1, format::parse_model)?;
    let m2 = load(model2, format::parse_model)?;
    let pair = match points {
        None => None,
        Some(text) => {
            let parsed = text
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)));
            match parsed {
                Some((w, w2)) if w < m1.n() && w2 < m2.n() => Some((w, w2)),
                Some(_) => return Err(format!("--points {text} is out of range")),
                None => return Err(format!("--points expects `w,w'`, got `{text}`")),
            }
        }
    };
    let z = greatest_topo_bisimulation(&m1, &m2);
    let mut text = format!("greatest topo-bisimulation: {z}\n");
    let mut json = json!({ "relation": z.pairs() });
    let verdict = match pair {
        None => !z.is_empty(),
        Some((w, w2)) => {
            let related = z.contains(w, w2);
            let _ = writeln!(text, "({w}, {w2}) bisimilar: {related}");
            json["points"] = json!([w, w2]);
            json["bisimilar"] = json!(related);
            if witness && !related {
                let depth = depth.unwrap_or(3 * m1.n().max(m2.n()));
                let found = distinguishing_formula(&m1, w, &m2, w2, depth).map(|f| print_modal(&f));
                match &found {
                    Some(f) => {
                        let _ = writeln!(text, "distinguishing formula: {f}");
                    }
                    None => {
                        let _ = writeln!(text, "no distinguishing formula up to depth {depth}");
                    }
                }
                json["witness"] = json!(found);
            }
            related
        }
    };
    if potential {
        let exists = potential_homeomorphism_exists(&m1, &m2).map_err(|e| e.to_string())?;
        let _ = writeln!(text, "potential homeomorphism: {exists}");
        json["potential_homeomorphism"] = json!(exists);
    }
    Ok(Report {
        text,
        json,
        verdict,
        asserts: false,
    })
}

fn translate(mode: Mode, formula: &str, var: u32, fresh: bool) -> Result<Report, String> {
    let vars = if fresh { VarMode::Fresh } else { VarMode::Economy };
    let (output, fragment, ok) = match mode {
        Mode::St => {
            let alpha = st_with(&modal_arg(formula)?, var, vars).map_err(|e| e.to_string())?;
            (print_fo(&alpha), "L_t", lt_check(&alpha))
        }
        Mode::StExt => {
            let alpha = st_ext_with(&modal_arg(formula)?, var, vars).map_err(|e| e.to_string())?;
            (print_fo(&alpha), "L_I", li_check(&alpha))
        }
        Mode::Ht => {
            let phi = ht(&fo_arg(formula)?, var).map_err(|e| e.to_string())?;
            let lang = language_of(&phi).map_or("mixed", |l| l.name());
            (print_modal(&phi), lang, phi.is_sentence())
        }
    };
    Ok(Report {
        text: format!("{output}\n"),
        json: json!({ "input": formula, "output": output, "fragment": fragment, "in_fragment": ok }),
        verdict: ok,
        asserts: false,
    })
}

fn algebra_cmd(
    space: Option<&Path>,
    algebra: Option<&Path>,
    dual: bool,
    formula: Option<&str>,
) -> Result<Report, String> {
    let b = match (space, algebra) {
        (Some(path), _) => complex_algebra(&load(path, format::parse_space)?),
        (None, Some(path)) => load(path, format::parse_algebra)?,
        (None, None) => return Err("one of --space or --algebra is required".into()),
    };
    let mut text = algebra_text(&b);
    let mut json = json!({ "algebra": AlgebraJson::from_algebra(&b) });
    let axioms = check_interior_algebra(&b);
    match axioms {
        Ok(()) => text.push_str("axioms i1-i4 hold\n"),
        Err(a) => {
            let _ = writeln!(text, "violated {a}");
        }
    }
    json["axioms"] = json!(axioms.err().map(|a| a.to_string()));
    let mut verdict = axioms.is_ok();
    if dual {
        match dual_space(&b) {
            Ok(s) => {
                let _ = writeln!(text, "dual space: {}", space_to_json(&s));
                json["dual"] = json!(SpaceJson::from_space(&s));
            }
            Err(e) => {
                let _ = writeln!(text, "no dual space: {e}");
            }
        }
    }
    if let Some(f) = formula {
        let phi = modal_arg(f)?;
        let holds = equation_valid(&b, &phi).map_err(|e| e.to_string())?;
        let _ = writeln!(text, "{} is {}an equation", print_modal(&phi), if holds { "" } else { "not " });
        json["formula"] = json!(print_modal(&phi));
        json["equation_valid"] = json!(holds);
        verdict &= holds;
    }
    Ok(Report {
        text,
        json,
        verdict,
        asserts: false,
    })
}

fn chi(max_n: usize) -> Result<Report, String> {
    if !(1..=5).contains(&max_n) {
        return Err(format!("--max-n must be between 1 and 5, got {max_n}"));
    }
    let sizes = satisfiability_by_size(&chi_n(), max_n, SweepGuard::default(), harness::workers())
        .map_err(|e| e.to_string())?;
    let mut text = String::new();
    for r in &sizes {
        match &r.witness {
            None => {
                let _ = writeln!(text, "n={}: unsatisfiable on all {} spaces", r.n, r.spaces);
            }
            Some(s) => {
                let _ = writeln!(text, "n={}: satisfied by {}", r.n, serde_json::to_string(s).expect("plain data"));
            }
        }
    }
    Ok(Report {
        text,
        verdict: sizes.iter().all(|r| r.witness.is_none()),
        json: json!({ "sizes": sizes }),
        asserts: true,
    })
}

fn selftest(seed: u64) -> Result<Report, String> {
    let results = acceptance::run_all(seed, harness::workers());
    let mut text = String::new();
    for c in &results {
        let _ = writeln!(text, "{c}");
    }
    let passed = results.iter().filter(|c| c.passed).count();
    let _ = writeln!(text, "{passed}/{} criteria passed", results.len());
    Ok(Report {
        text,
        verdict: passed == results.len(),
        json: json!({ "seed": seed, "criteria": results }),
        asserts: true,
    })
}
