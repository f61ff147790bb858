//! The two-sorted first-order language: point variables `x<k>`, nominal
//! constants `c<k>`, open variables `U<k>`, unary predicates `P p<k>` and
//! membership `in`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ParseError;

/// A point-sorted term. `Const(k)` denotes the point named by nominal `i<k>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointTerm {
    Var(u32),
    Const(u32),
}

impl fmt::Display for PointTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointTerm::Var(k) => write!(f, "x{k}"),
            PointTerm::Const(k) => write!(f, "c{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FoFormula {
    Top,
    Bot,
    EqPt(PointTerm, PointTerm),
    EqOp(u32, u32),
    Pred(u32, PointTerm),
    In(PointTerm, u32),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    ExistsPt(u32, Box<FoFormula>),
    ForallPt(u32, Box<FoFormula>),
    ExistsOp(u32, Box<FoFormula>),
    ForallOp(u32, Box<FoFormula>),
}

#[allow(clippy::should_implement_trait)]
impl FoFormula {
    pub fn not(a: FoFormula) -> FoFormula {
        FoFormula::Not(Box::new(a))
    }
    pub fn and(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Implies(Box::new(a), Box::new(b))
    }
    pub fn exists_pt(x: u32, a: FoFormula) -> FoFormula {
        FoFormula::ExistsPt(x, Box::new(a))
    }
    pub fn forall_pt(x: u32, a: FoFormula) -> FoFormula {
        FoFormula::ForallPt(x, Box::new(a))
    }
    pub fn exists_op(u: u32, a: FoFormula) -> FoFormula {
        FoFormula::ExistsOp(u, Box::new(a))
    }
    pub fn forall_op(u: u32, a: FoFormula) -> FoFormula {
        FoFormula::ForallOp(u, Box::new(a))
    }
    pub fn var_eq(x: u32, y: u32) -> FoFormula {
        FoFormula::EqPt(PointTerm::Var(x), PointTerm::Var(y))
    }
    pub fn var_in(x: u32, u: u32) -> FoFormula {
        FoFormula::In(PointTerm::Var(x), u)
    }

    pub fn children(&self) -> Vec<&FoFormula> {
        use FoFormula as F;
        match self {
            F::Top | F::Bot | F::EqPt(..) | F::EqOp(..) | F::Pred(..) | F::In(..) => Vec::new(),
            F::Not(a) | F::ExistsPt(_, a) | F::ForallPt(_, a) | F::ExistsOp(_, a) | F::ForallOp(_, a) => {
                alloc::vec![&**a]
            }
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => alloc::vec![&**a, &**b],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Point variables with a free occurrence.
    pub fn free_point_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.free_points(&mut Vec::new(), &mut out);
        out
    }

    fn free_points(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
        let mut term = |t: &PointTerm, bound: &Vec<u32>| {
            if let PointTerm::Var(x) = t {
                if !bound.contains(x) {
                    out.insert(*x);
                }
            }
        };
        match self {
            FoFormula::EqPt(s, t) => {
                term(s, bound);
                term(t, bound);
            }
            FoFormula::Pred(_, t) | FoFormula::In(t, _) => term(t, bound),
            FoFormula::ExistsPt(x, a) | FoFormula::ForallPt(x, a) => {
                bound.push(*x);
                a.free_points(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.free_points(bound, out);
                }
            }
        }
    }

    /// Open variables with a free occurrence.
    pub fn free_open_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.free_opens(&mut Vec::new(), &mut out);
        out
    }

    fn free_opens(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
        let mut var = |u: &u32, bound: &Vec<u32>| {
            if !bound.contains(u) {
                out.insert(*u);
            }
        };
        match self {
            FoFormula::EqOp(u, v) => {
                var(u, bound);
                var(v, bound);
            }
            FoFormula::In(_, u) => var(u, bound),
            FoFormula::ExistsOp(u, a) | FoFormula::ForallOp(u, a) => {
                bound.push(*u);
                a.free_opens(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.free_opens(bound, out);
                }
            }
        }
    }

    pub fn has_free_open(&self, u: u32) -> bool {
        self.free_open_vars().contains(&u)
    }

    /// Nominal constants `c<k>` mentioned anywhere.
    pub fn constants(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            let mut term = |t: &PointTerm| {
                if let PointTerm::Const(k) = t {
                    out.insert(*k);
                }
            };
            match f {
                FoFormula::EqPt(s, t) => {
                    term(s);
                    term(t);
                }
                FoFormula::Pred(_, t) | FoFormula::In(t, _) => term(t),
                _ => {}
            }
        });
        out
    }

    /// Proposition letters `p<k>` mentioned anywhere.
    pub fn props(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let FoFormula::Pred(p, _) = f {
                out.insert(*p);
            }
        });
        out
    }

    fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a FoFormula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_point_vars().is_empty() && self.free_open_vars().is_empty()
    }
}

/// Parity bookkeeping for free occurrences of one open variable.
#[derive(Default)]
struct Occurrences {
    positive: bool,
    negative: bool,
}

impl Occurrences {
    fn record(&mut self, negated: bool) {
        if negated {
            self.negative = true;
        } else {
            self.positive = true;
        }
    }
}

fn occurrences(phi: &FoFormula, u: u32, negated: bool, acc: &mut Occurrences) {
    use FoFormula as F;
    match phi {
        F::In(_, v) if *v == u => acc.record(negated),
        // `U = V` is neither monotone nor antitone in U
        F::EqOp(a, b) if *a == u || *b == u => {
            acc.record(false);
            acc.record(true);
        }
        F::Top | F::Bot | F::EqPt(..) | F::EqOp(..) | F::Pred(..) | F::In(..) => {}
        F::Not(a) => occurrences(a, u, !negated, acc),
        F::And(a, b) | F::Or(a, b) => {
            occurrences(a, u, negated, acc);
            occurrences(b, u, negated, acc);
        }
        F::Implies(a, b) => {
            occurrences(a, u, !negated, acc);
            occurrences(b, u, negated, acc);
        }
        F::ExistsOp(v, _) | F::ForallOp(v, _) if *v == u => {}
        F::ExistsPt(_, a) | F::ForallPt(_, a) | F::ExistsOp(_, a) | F::ForallOp(_, a) => {
            occurrences(a, u, negated, acc)
        }
    }
}

/// Every free occurrence of `u` in `phi` is under an even number of
/// negations.
pub fn is_positive_in(phi: &FoFormula, u: u32) -> bool {
    let mut acc = Occurrences::default();
    occurrences(phi, u, false, &mut acc);
    !acc.negative
}

/// Every free occurrence of `u` in `phi` is under an odd number of
/// negations.
pub fn is_negative_in(phi: &FoFormula, u: u32) -> bool {
    let mut acc = Occurrences::default();
    occurrences(phi, u, false, &mut acc);
    !acc.positive
}

/// Membership in L_t: each `∀U` has the shape `∀U.(t∈U → α)` with `α`
/// positive in `U`, and each `∃U` the shape `∃U.(t∈U ∧ α)` with `α` negative
/// in `U`. `∀U.(¬t∈U ∨ α)` is accepted as the same shape.
pub fn lt_check(phi: &FoFormula) -> bool {
    use FoFormula as F;
    match phi {
        F::Top | F::Bot | F::EqPt(..) | F::EqOp(..) | F::Pred(..) | F::In(..) => true,
        F::Not(a) | F::ExistsPt(_, a) | F::ForallPt(_, a) => lt_check(a),
        F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => lt_check(a) && lt_check(b),
        F::ForallOp(u, body) => {
            let alpha = match &**body {
                F::Implies(guard, alpha) => match &**guard {
                    F::In(_, v) if v == u => Some(alpha),
                    _ => None,
                },
                F::Or(guard, alpha) => match &**guard {
                    F::Not(inner) => match &**inner {
                        F::In(_, v) if v == u => Some(alpha),
                        _ => None,
                    },
                    _ => None,
                },
                _ => None,
            };
            alpha.is_some_and(|a| is_positive_in(a, *u) && lt_check(a))
        }
        F::ExistsOp(u, body) => match &**body {
            F::And(guard, alpha) => match &**guard {
                F::In(_, v) if v == u => is_negative_in(alpha, *u) && lt_check(alpha),
                _ => false,
            },
            _ => false,
        },
    }
}

/// Which neighbourhood pattern an open quantifier instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// `[I_y α](t) = ∃U.(t∈U ∧ ∀y.(y∈U → α))`
    Interior,
    /// `[C_y α](t) = ∀U.(t∈U → ∃y.(y∈U ∧ α))`
    Closure,
}

/// Matches `phi` against the two neighbourhood patterns, returning the
/// pattern, the term `t`, the bound variable `y` and the body `α`. `U` must
/// not be free in `α`.
pub fn match_pattern(phi: &FoFormula) -> Option<(Pattern, PointTerm, u32, &FoFormula)> {
    use FoFormula as F;
    let (pattern, u, body) = match phi {
        F::ExistsOp(u, body) => (Pattern::Interior, *u, body),
        F::ForallOp(u, body) => (Pattern::Closure, *u, body),
        _ => return None,
    };
    let (guard, rest) = match (pattern, &**body) {
        (Pattern::Interior, F::And(g, r)) | (Pattern::Closure, F::Implies(g, r)) => (g, r),
        _ => return None,
    };
    let t = match &**guard {
        F::In(t, v) if *v == u => *t,
        _ => return None,
    };
    let (y, inner) = match (pattern, &**rest) {
        (Pattern::Interior, F::ForallPt(y, inner)) | (Pattern::Closure, F::ExistsPt(y, inner)) => {
            (*y, inner)
        }
        _ => return None,
    };
    let alpha = match (pattern, &**inner) {
        (Pattern::Interior, F::Implies(g, a)) | (Pattern::Closure, F::And(g, a)) => match &**g {
            F::In(PointTerm::Var(z), v) if *z == y && *v == u => a,
            _ => return None,
        },
        _ => return None,
    };
    if alpha.has_free_open(u) {
        return None;
    }
    Some((pattern, t, y, alpha))
}

/// Membership in L_I: open variables appear only inside the two
/// neighbourhood patterns.
pub fn li_check(phi: &FoFormula) -> bool {
    use FoFormula as F;
    match phi {
        F::Top | F::Bot | F::EqPt(..) | F::Pred(..) => true,
        F::EqOp(..) | F::In(..) => false,
        F::Not(a) | F::ExistsPt(_, a) | F::ForallPt(_, a) => li_check(a),
        F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => li_check(a) && li_check(b),
        F::ExistsOp(..) | F::ForallOp(..) => match_pattern(phi).is_some_and(|(_, _, _, a)| li_check(a)),
    }
}

fn write_sexpr(f: &mut fmt::Formatter<'_>, phi: &FoFormula) -> fmt::Result {
    use FoFormula as F;
    let unary = |f: &mut fmt::Formatter<'_>, head: &str, a: &FoFormula| {
        write!(f, "({head} ")?;
        write_sexpr(f, a)?;
        f.write_str(")")
    };
    let binary = |f: &mut fmt::Formatter<'_>, head: &str, a: &FoFormula, b: &FoFormula| {
        write!(f, "({head} ")?;
        write_sexpr(f, a)?;
        f.write_str(" ")?;
        write_sexpr(f, b)?;
        f.write_str(")")
    };
    match phi {
        F::Top => f.write_str("true"),
        F::Bot => f.write_str("false"),
        F::EqPt(s, t) => write!(f, "(= {s} {t})"),
        F::EqOp(u, v) => write!(f, "(=o U{u} U{v})"),
        F::Pred(p, t) => write!(f, "(P p{p} {t})"),
        F::In(t, u) => write!(f, "(in {t} U{u})"),
        F::Not(a) => unary(f, "not", a),
        F::And(a, b) => binary(f, "and", a, b),
        F::Or(a, b) => binary(f, "or", a, b),
        F::Implies(a, b) => binary(f, "implies", a, b),
        F::ExistsPt(x, a) => unary(f, &alloc::format!("ex-pt x{x}"), a),
        F::ForallPt(x, a) => unary(f, &alloc::format!("all-pt x{x}"), a),
        F::ExistsOp(u, a) => unary(f, &alloc::format!("ex-op U{u}"), a),
        F::ForallOp(u, a) => unary(f, &alloc::format!("all-op U{u}"), a),
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sexpr(f, self)
    }
}

pub fn print_fo(phi: &FoFormula) -> String {
    use alloc::string::ToString;
    phi.to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Sym(&'a str),
    End,
}

struct SexprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> SexprParser<'a> {
    fn next(&mut self) -> (usize, Tok<'a>) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        match bytes.get(self.pos) {
            None => (start, Tok::End),
            Some(b'(') => {
                self.pos += 1;
                (start, Tok::Open)
            }
            Some(b')') => {
                self.pos += 1;
                (start, Tok::Close)
            }
            Some(_) => {
                while self.pos < bytes.len()
                    && !bytes[self.pos].is_ascii_whitespace()
                    && bytes[self.pos] != b'('
                    && bytes[self.pos] != b')'
                {
                    self.pos += 1;
                }
                (start, Tok::Sym(&self.src[start..self.pos]))
            }
        }
    }

    fn symbol(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        match self.next() {
            (at, Tok::Sym(s)) => Ok((at, s)),
            (at, _) => Err(ParseError::new(at, &alloc::format!("expected {what}"))),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        match self.next() {
            (_, Tok::Close) => Ok(()),
            (at, _) => Err(ParseError::new(at, "expected ')'")),
        }
    }

    fn term(&mut self) -> Result<PointTerm, ParseError> {
        let (at, s) = self.symbol("a point term")?;
        if let Some(k) = indexed(s, "x") {
            Ok(PointTerm::Var(k))
        } else if let Some(k) = indexed(s, "c") {
            Ok(PointTerm::Const(k))
        } else {
            Err(ParseError::new(at, "expected a point term x<k> or c<k>"))
        }
    }

    fn indexed(&mut self, prefix: &str, what: &str) -> Result<u32, ParseError> {
        let (at, s) = self.symbol(what)?;
        indexed(s, prefix).ok_or_else(|| ParseError::new(at, &alloc::format!("expected {what}")))
    }

    fn point_var(&mut self) -> Result<u32, ParseError> {
        self.indexed("x", "a point variable x<k>")
    }

    fn open_var(&mut self) -> Result<u32, ParseError> {
        self.indexed("U", "an open variable U<k>")
    }

    fn formula(&mut self) -> Result<FoFormula, ParseError> {
        let (at, tok) = self.next();
        match tok {
            Tok::Sym("true") => return Ok(FoFormula::Top),
            Tok::Sym("false") => return Ok(FoFormula::Bot),
            Tok::Open => {}
            Tok::End => return Err(ParseError::new(at, "unexpected end of input")),
            _ => return Err(ParseError::new(at, "expected a formula")),
        }
        let (head_at, head) = self.symbol("an operator")?;
        let phi = match head {
            "=" => FoFormula::EqPt(self.term()?, self.term()?),
            "=o" => FoFormula::EqOp(self.open_var()?, self.open_var()?),
            "P" => {
                let p = self.indexed("p", "a proposition letter p<k>")?;
                FoFormula::Pred(p, self.term()?)
            }
            "in" => {
                let t = self.term()?;
                FoFormula::In(t, self.open_var()?)
            }
            "not" => FoFormula::not(self.formula()?),
            "and" => FoFormula::and(self.formula()?, self.formula()?),
            "or" => FoFormula::or(self.formula()?, self.formula()?),
            "implies" => FoFormula::implies(self.formula()?, self.formula()?),
            "ex-pt" => {
                let x = self.point_var()?;
                FoFormula::exists_pt(x, self.formula()?)
            }
            "all-pt" => {
                let x = self.point_var()?;
                FoFormula::forall_pt(x, self.formula()?)
            }
            "ex-op" => {
                let u = self.open_var()?;
                FoFormula::exists_op(u, self.formula()?)
            }
            "all-op" => {
                let u = self.open_var()?;
                FoFormula::forall_op(u, self.formula()?)
            }
            _ => return Err(ParseError::new(head_at, "unknown operator")),
        };
        self.close()?;
        Ok(phi)
    }
}

fn indexed(s: &str, prefix: &str) -> Option<u32> {
    let digits = s.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn parse_fo(text: &str) -> Result<FoFormula, ParseError> {
    let mut parser = SexprParser { src: text, pos: 0 };
    let phi = parser.formula()?;
    match parser.next() {
        (_, Tok::End) => Ok(phi),
        (at, _) => Err(ParseError::new(at, "trailing input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cases = [
            "(ex-op U0 (and (in x0 U0) (all-pt x1 (implies (in x1 U0) (P p0 x1)))))",
            "(all-op U1 (or (not (in c3 U1)) (=o U1 U0)))",
            "(= x0 c0)",
            "true",
        ];
        for c in cases {
            let f = parse_fo(c).unwrap();
            assert_eq!(print_fo(&f), c);
        }
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_fo("(in x0)").unwrap_err().pos, 6);
        assert_eq!(parse_fo("(foo x0)").unwrap_err().pos, 1);
        assert_eq!(parse_fo("(= x0 y0)").unwrap_err().pos, 6);
        assert!(parse_fo("(= x0 x1) x2").is_err());
        assert!(parse_fo("(P p x1)").is_err());
    }

    #[test]
    fn lt_examples() {
        let boxed = parse_fo("(ex-op U0 (and (in x0 U0) (all-pt x1 (implies (in x1 U0) (P p0 x1)))))").unwrap();
        assert!(lt_check(&boxed));
        let bad = parse_fo("(ex-op U0 (and (in x0 U0) (ex-pt x1 (and (not (= x1 x0)) (in x1 U0)))))").unwrap();
        assert!(!lt_check(&bad));
        assert!(lt_check(&parse_fo("(all-pt x0 (not (P p0 x0)))").unwrap()));
        let specialises = parse_fo("(all-op U0 (implies (in x0 U0) (in x1 U0)))").unwrap();
        assert!(lt_check(&specialises));
        let flipped = parse_fo("(all-op U0 (implies (in x0 U0) (not (in x1 U0))))").unwrap();
        assert!(!lt_check(&flipped));
        let eq = parse_fo("(all-op U0 (implies (in x0 U0) (=o U0 U1)))").unwrap();
        assert!(!lt_check(&eq));
    }

    #[test]
    fn li_examples() {
        let i = parse_fo("(ex-op U0 (and (in x0 U0) (all-pt x1 (implies (in x1 U0) (P p0 x1)))))").unwrap();
        assert!(li_check(&i));
        let c = parse_fo("(all-op U0 (implies (in x0 U0) (ex-pt x1 (and (in x1 U0) (= x1 x0)))))").unwrap();
        assert!(li_check(&c));
        let leaky = parse_fo("(ex-op U0 (and (in x0 U0) (all-pt x1 (implies (in x1 U0) (in x0 U0)))))").unwrap();
        assert!(!li_check(&leaky));
        assert!(!li_check(&parse_fo("(in x0 U0)").unwrap()));
        assert!(li_check(&parse_fo("(all-pt x0 (= x0 x0))").unwrap()));
    }

    #[test]
    fn free_variables() {
        let f = parse_fo("(ex-pt x1 (and (in x1 U2) (ex-op U0 (= x1 c4))))").unwrap();
        assert!(f.free_point_vars().is_empty());
        assert_eq!(f.free_open_vars().into_iter().collect::<Vec<_>>(), [2]);
        assert_eq!(f.constants().into_iter().collect::<Vec<_>>(), [4]);
    }
}
