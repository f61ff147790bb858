//! Standard translation into the two-sorted language, its hybrid
//! extension, and the reverse translation from the neighbourhood-pattern
//! fragment.

use core::fmt;

use crate::syntax::{language_of, match_pattern, li_check, FoFormula, Language, ModalFormula, Name, Pattern, PointTerm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslateError {
    /// The input uses constructors outside the source language.
    OutsideLanguage { expected: &'static str, found: Option<Language> },
    NotASentence,
    /// The requested free variable is also a state variable of the input.
    VariableClash(u32),
    NotLi,
    /// A free point variable other than the designated one.
    FreeVariable(u32),
}

impl fmt::Display for TranslateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslateError::OutsideLanguage { expected, found } => match found {
                Some(l) => write!(f, "expected a formula of {expected}, found one of {l}"),
                None => write!(f, "expected a formula of {expected}, found one mixing D with hybrid operators"),
            },
            TranslateError::NotASentence => f.write_str("formula has free state variables"),
            TranslateError::VariableClash(x) => write!(f, "x{x} is already used as a state variable"),
            TranslateError::NotLi => f.write_str("formula is not in the neighbourhood-pattern fragment"),
            TranslateError::FreeVariable(x) => write!(f, "unexpected free point variable x{x}"),
        }
    }
}

impl core::error::Error for TranslateError {}

/// Variable discipline for the translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarMode {
    /// Two point variables used alternately and a single open variable.
    #[default]
    Economy,
    /// A new variable for every quantifier.
    Fresh,
}

struct Translator {
    mode: VarMode,
    home: u32,
    partner: u32,
    next_point: u32,
    next_open: u32,
}

impl Translator {
    fn new(mode: VarMode, home: u32, partner: u32) -> Translator {
        Translator {
            mode,
            home,
            partner,
            next_point: home.max(partner) + 1,
            next_open: 0,
        }
    }

    fn other(&mut self, x: u32) -> u32 {
        match self.mode {
            VarMode::Economy if x == self.home => self.partner,
            VarMode::Economy => self.home,
            VarMode::Fresh => {
                self.next_point += 1;
                self.next_point - 1
            }
        }
    }

    fn open(&mut self) -> u32 {
        match self.mode {
            VarMode::Economy => 0,
            VarMode::Fresh => {
                self.next_open += 1;
                self.next_open - 1
            }
        }
    }

    fn go(&mut self, phi: &ModalFormula, x: u32) -> FoFormula {
        use ModalFormula as M;
        let here = PointTerm::Var(x);
        match phi {
            M::Top => FoFormula::Top,
            M::Bot => FoFormula::Bot,
            M::Prop(p) => FoFormula::Pred(*p, here),
            M::Nom(i) => FoFormula::EqPt(here, PointTerm::Const(*i)),
            M::Var(y) => FoFormula::EqPt(here, PointTerm::Var(*y)),
            M::Not(a) => FoFormula::not(self.go(a, x)),
            M::And(a, b) => FoFormula::and(self.go(a, x), self.go(b, x)),
            M::Or(a, b) => FoFormula::or(self.go(a, x), self.go(b, x)),
            M::Implies(a, b) => FoFormula::implies(self.go(a, x), self.go(b, x)),
            M::Iff(a, b) => {
                let forward = FoFormula::implies(self.go(a, x), self.go(b, x));
                let backward = FoFormula::implies(self.go(b, x), self.go(a, x));
                FoFormula::and(forward, backward)
            }
            M::Box(a) => {
                let (u, y) = (self.open(), self.other(x));
                let body = FoFormula::forall_pt(y, FoFormula::implies(FoFormula::var_in(y, u), self.go(a, y)));
                FoFormula::exists_op(u, FoFormula::and(FoFormula::var_in(x, u), body))
            }
            M::Diamond(a) => {
                let (u, y) = (self.open(), self.other(x));
                let body = FoFormula::exists_pt(y, FoFormula::and(FoFormula::var_in(y, u), self.go(a, y)));
                FoFormula::forall_op(u, FoFormula::implies(FoFormula::var_in(x, u), body))
            }
            M::E(a) => FoFormula::exists_pt(x, self.go(a, x)),
            M::A(a) => FoFormula::forall_pt(x, self.go(a, x)),
            M::At(name, a) => {
                let target = match name {
                    Name::Nom(i) => PointTerm::Const(*i),
                    Name::Var(y) => PointTerm::Var(*y),
                };
                FoFormula::exists_pt(x, FoFormula::and(FoFormula::EqPt(here, target), self.go(a, x)))
            }
            M::Down(y, a) => FoFormula::exists_pt(*y, FoFormula::and(FoFormula::var_eq(*y, x), self.go(a, x))),
            M::D(_) => unreachable!("rejected by the language check"),
        }
    }
}

/// `ST_x(φ)` for a basic modal formula, with two alternating point
/// variables `x` and `x^1` and the single open variable `U0`.
pub fn st(phi: &ModalFormula, x: u32) -> Result<FoFormula, TranslateError> {
    st_with(phi, x, VarMode::Economy)
}

pub fn st_with(phi: &ModalFormula, x: u32, mode: VarMode) -> Result<FoFormula, TranslateError> {
    let lang = language_of(phi);
    if lang != Some(Language::Ml) {
        return Err(TranslateError::OutsideLanguage {
            expected: "ML",
            found: lang,
        });
    }
    Ok(Translator::new(mode, x, x ^ 1).go(phi, x))
}

/// The extended translation of an H(E,↓) sentence. Nominal `i<k>` becomes
/// the constant `c<k>`, state variable `x<k>` stays `x<k>`, and the
/// variables carrying the current point are `x` and one index above every
/// variable in use, so they never collide with state variables.
pub fn st_ext(phi: &ModalFormula, x: u32) -> Result<FoFormula, TranslateError> {
    st_ext_with(phi, x, VarMode::Economy)
}

pub fn st_ext_with(phi: &ModalFormula, x: u32, mode: VarMode) -> Result<FoFormula, TranslateError> {
    let lang = language_of(phi);
    if !lang.is_some_and(|l| Language::HybridEDown.includes(l)) {
        return Err(TranslateError::OutsideLanguage {
            expected: "H(E,↓)",
            found: lang,
        });
    }
    if !phi.is_sentence() {
        return Err(TranslateError::NotASentence);
    }
    let vars = phi.all_vars();
    if vars.contains(&x) {
        return Err(TranslateError::VariableClash(x));
    }
    let partner = vars.iter().copied().chain([x]).max().unwrap_or(x) + 1;
    Ok(Translator::new(mode, x, partner).go(phi, x))
}

fn name_of(t: PointTerm) -> Name {
    match t {
        PointTerm::Var(k) => Name::Var(k),
        PointTerm::Const(k) => Name::Nom(k),
    }
}

fn atom_of(t: PointTerm) -> ModalFormula {
    match t {
        PointTerm::Var(k) => ModalFormula::Var(k),
        PointTerm::Const(k) => ModalFormula::Nom(k),
    }
}

fn ht_body(alpha: &FoFormula) -> Result<ModalFormula, TranslateError> {
    use FoFormula as F;
    use ModalFormula as M;
    Ok(match alpha {
        F::Top => M::Top,
        F::Bot => M::Bot,
        F::EqPt(s, t) => M::at(name_of(*s), atom_of(*t)),
        F::Pred(p, t) => M::at(name_of(*t), M::Prop(*p)),
        F::Not(a) => M::not(ht_body(a)?),
        F::And(a, b) => M::and(ht_body(a)?, ht_body(b)?),
        F::Or(a, b) => M::or(ht_body(a)?, ht_body(b)?),
        F::Implies(a, b) => M::implies(ht_body(a)?, ht_body(b)?),
        F::ExistsPt(x, a) => M::some(M::down(*x, ht_body(a)?)),
        F::ForallPt(x, a) => M::all(M::down(*x, ht_body(a)?)),
        F::ExistsOp(..) | F::ForallOp(..) => {
            let (pattern, t, y, a) = match_pattern(alpha).ok_or(TranslateError::NotLi)?;
            let inner = M::down(y, ht_body(a)?);
            let modal = match pattern {
                Pattern::Interior => M::nec(inner),
                Pattern::Closure => M::poss(inner),
            };
            M::at(name_of(t), modal)
        }
        F::EqOp(..) | F::In(..) => return Err(TranslateError::NotLi),
    })
}

/// `HT_x(α) = ↓x.HT(α)` for `α` in the pattern fragment with at most `x`
/// free. The constant `c<k>` becomes the nominal `i<k>`.
pub fn ht(alpha: &FoFormula, x: u32) -> Result<ModalFormula, TranslateError> {
    if !li_check(alpha) {
        return Err(TranslateError::NotLi);
    }
    if let Some(&y) = alpha.free_point_vars().iter().find(|&&y| y != x) {
        return Err(TranslateError::FreeVariable(y));
    }
    Ok(ModalFormula::down(x, ht_body(alpha)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_fo, eval_modal, Assignment, Model, Valuation};
    use crate::syntax::{li_check, lt_check, parse_fo, parse_modal, print_fo, print_modal};
    use crate::{PointSet, Space};

    fn m(s: &str) -> ModalFormula {
        parse_modal(s).unwrap()
    }

    #[test]
    fn st_clauses() {
        assert_eq!(print_fo(&st(&m("p0"), 0).unwrap()), "(P p0 x0)");
        assert_eq!(st(&m("T"), 0).unwrap(), FoFormula::Top);
        let boxed = st(&m("[]p0"), 0).unwrap();
        assert_eq!(
            print_fo(&boxed),
            "(ex-op U0 (and (in x0 U0) (all-pt x1 (implies (in x1 U0) (P p0 x1)))))"
        );
        assert!(lt_check(&boxed));
        assert!(li_check(&boxed));
    }

    #[test]
    fn st_uses_two_point_variables() {
        let f = st(&m("[]<>[](p0 & <>p1)"), 0).unwrap();
        let s = print_fo(&f);
        assert!(!s.contains("x2") && !s.contains("U1"));
        assert!(lt_check(&f));
        let fresh = st_with(&m("[]<>p0"), 0, VarMode::Fresh).unwrap();
        assert!(print_fo(&fresh).contains("U1"));
    }

    #[test]
    fn st_rejects_extended_languages() {
        assert!(matches!(st(&m("E p0"), 0), Err(TranslateError::OutsideLanguage { .. })));
        assert!(matches!(st_ext(&m("D p0"), 0), Err(TranslateError::OutsideLanguage { .. })));
        assert_eq!(st_ext(&m("x1"), 0), Err(TranslateError::NotASentence));
        assert_eq!(st_ext(&m("!x0.x0"), 0), Err(TranslateError::VariableClash(0)));
    }

    #[test]
    fn st_ext_clauses() {
        assert_eq!(print_fo(&st_ext(&m("E p0"), 0).unwrap()), "(ex-pt x0 (P p0 x0))");
        assert_eq!(
            print_fo(&st_ext(&m("@i0 p0"), 0).unwrap()),
            "(ex-pt x0 (and (= x0 c0) (P p0 x0)))"
        );
        let bound = st_ext(&m("!x1.[]x1"), 0).unwrap();
        assert!(li_check(&bound));
        let model = Model::bare(Space::sierpinski());
        assert!(eval_fo(&model, &bound, &Assignment::new().with_point(0, 0)).unwrap());
        assert!(!eval_fo(&model, &bound, &Assignment::new().with_point(0, 1)).unwrap());
    }

    #[test]
    fn ht_clauses() {
        let t = ht(&parse_fo("(= x0 x0)").unwrap(), 0).unwrap();
        assert_eq!(print_modal(&t), "!x0.@x0 x0");
        let i = parse_fo("(ex-op U0 (and (in x0 U0) (all-pt x1 (implies (in x1 U0) (P p0 x1)))))").unwrap();
        assert_eq!(print_modal(&ht(&i, 0).unwrap()), "!x0.@x0 []!x1.@x1 p0");
        assert_eq!(ht(&parse_fo("(in x0 U0)").unwrap(), 0), Err(TranslateError::NotLi));
        assert_eq!(ht(&parse_fo("(= x0 x3)").unwrap(), 0), Err(TranslateError::FreeVariable(3)));
    }

    #[test]
    fn translations_agree_on_sierpinski() {
        let model = Model::new(
            Space::sierpinski(),
            Valuation::new().with_prop(0, PointSet::singleton(1)).with_nominal(0, 1),
        )
        .unwrap();
        for s in ["[]p0", "<>p0", "[](p0 -> <>~p0)", "p0 <-> []p0"] {
            let phi = m(s);
            let fo = st(&phi, 0).unwrap();
            for w in 0..2 {
                let g = Assignment::new().with_point(0, w);
                assert_eq!(
                    eval_modal(&model, w, &phi, &Assignment::new()).unwrap(),
                    eval_fo(&model, &fo, &g).unwrap(),
                    "{s} at {w}"
                );
            }
        }
        for s in ["E i0", "@i0 <>~p0", "!x1.(p0 & E !x2.(<>x1 & ~x2))", "A <>i0"] {
            let phi = m(s);
            let fo = st_ext(&phi, 0).unwrap();
            let back = ht(&fo, 0).unwrap();
            for w in 0..2 {
                let g = Assignment::new().with_point(0, w);
                let direct = eval_modal(&model, w, &phi, &Assignment::new()).unwrap();
                assert_eq!(direct, eval_fo(&model, &fo, &g).unwrap(), "{s} at {w}");
                assert_eq!(direct, eval_modal(&model, w, &back, &Assignment::new()).unwrap(), "{s} at {w}");
            }
        }
    }
}
