use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// Something that names a single point: a nominal `i<k>` or a state
/// variable `x<k>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Name {
    Nom(u32),
    Var(u32),
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Nom(k) => write!(f, "i{k}"),
            Name::Var(k) => write!(f, "x{k}"),
        }
    }
}

/// Formulas of the modal family ML ⊆ M(E) ⊆ M(D) and ML ⊆ H(@) ⊆ H(E) ⊆
/// H(E,↓).
///
/// The derived connectives (`Or`, `Implies`, `Iff`, `Diamond`, `A`) are kept
/// as primitives so printing round-trips.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalFormula {
    Top,
    Bot,
    Prop(u32),
    Nom(u32),
    Var(u32),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    Iff(Box<ModalFormula>, Box<ModalFormula>),
    Box(Box<ModalFormula>),
    Diamond(Box<ModalFormula>),
    E(Box<ModalFormula>),
    A(Box<ModalFormula>),
    D(Box<ModalFormula>),
    At(Name, Box<ModalFormula>),
    Down(u32, Box<ModalFormula>),
}

#[allow(clippy::should_implement_trait)]
impl ModalFormula {
    pub fn not(a: ModalFormula) -> ModalFormula {
        ModalFormula::Not(Box::new(a))
    }
    pub fn and(a: ModalFormula, b: ModalFormula) -> ModalFormula {
        ModalFormula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: ModalFormula, b: ModalFormula) -> ModalFormula {
        ModalFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: ModalFormula, b: ModalFormula) -> ModalFormula {
        ModalFormula::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: ModalFormula, b: ModalFormula) -> ModalFormula {
        ModalFormula::Iff(Box::new(a), Box::new(b))
    }
    pub fn nec(a: ModalFormula) -> ModalFormula {
        ModalFormula::Box(Box::new(a))
    }
    pub fn poss(a: ModalFormula) -> ModalFormula {
        ModalFormula::Diamond(Box::new(a))
    }
    pub fn some(a: ModalFormula) -> ModalFormula {
        ModalFormula::E(Box::new(a))
    }
    pub fn all(a: ModalFormula) -> ModalFormula {
        ModalFormula::A(Box::new(a))
    }
    pub fn elsewhere(a: ModalFormula) -> ModalFormula {
        ModalFormula::D(Box::new(a))
    }
    pub fn at(name: Name, a: ModalFormula) -> ModalFormula {
        ModalFormula::At(name, Box::new(a))
    }
    pub fn down(var: u32, a: ModalFormula) -> ModalFormula {
        ModalFormula::Down(var, Box::new(a))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&ModalFormula> {
        use ModalFormula as F;
        match self {
            F::Top | F::Bot | F::Prop(_) | F::Nom(_) | F::Var(_) => Vec::new(),
            F::Not(a) | F::Box(a) | F::Diamond(a) | F::E(a) | F::A(a) | F::D(a) => {
                alloc::vec![&**a]
            }
            F::At(_, a) | F::Down(_, a) => alloc::vec![&**a],
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) | F::Iff(a, b) => {
                alloc::vec![&**a, &**b]
            }
        }
    }

    /// All subformulas in pre-order, including `self`.
    pub fn subformulas(&self) -> Vec<&ModalFormula> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            for c in f.children().into_iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Nesting depth of `□`/`◇`.
    pub fn modal_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.modal_depth()).max().unwrap_or(0);
        match self {
            ModalFormula::Box(_) | ModalFormula::Diamond(_) => inner + 1,
            _ => inner,
        }
    }

    pub fn props(&self) -> BTreeSet<u32> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                ModalFormula::Prop(k) => Some(*k),
                _ => None,
            })
            .collect()
    }

    /// Nominals occurring either as atoms or as `@` subscripts.
    pub fn nominals(&self) -> BTreeSet<u32> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                ModalFormula::Nom(k) | ModalFormula::At(Name::Nom(k), _) => Some(*k),
                _ => None,
            })
            .collect()
    }

    /// State variables with a free occurrence.
    pub fn free_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
        match self {
            ModalFormula::Var(x) | ModalFormula::At(Name::Var(x), _) if !bound.contains(x) => {
                out.insert(*x);
            }
            _ => {}
        }
        if let ModalFormula::Down(x, body) = self {
            bound.push(*x);
            body.collect_free(bound, out);
            bound.pop();
            return;
        }
        for c in self.children() {
            c.collect_free(bound, out);
        }
    }

    /// Variables bound by some `↓`.
    pub fn bound_vars(&self) -> BTreeSet<u32> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                ModalFormula::Down(x, _) => Some(*x),
                _ => None,
            })
            .collect()
    }

    /// Every state variable mentioned, free or bound.
    pub fn all_vars(&self) -> BTreeSet<u32> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                ModalFormula::Var(x) | ModalFormula::Down(x, _) | ModalFormula::At(Name::Var(x), _) => {
                    Some(*x)
                }
                _ => None,
            })
            .collect()
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}

/// The languages of the modal family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Language {
    Ml,
    ModalE,
    ModalD,
    HybridAt,
    HybridE,
    HybridEDown,
}

impl Language {
    pub const ALL: [Language; 6] = [
        Language::Ml,
        Language::ModalE,
        Language::ModalD,
        Language::HybridAt,
        Language::HybridE,
        Language::HybridEDown,
    ];

    /// Whether every formula of `other` is a formula of `self`.
    pub fn includes(self, other: Language) -> bool {
        use Language::*;
        match self {
            Ml => other == Ml,
            ModalE => matches!(other, Ml | ModalE),
            ModalD => matches!(other, Ml | ModalE | ModalD),
            HybridAt => matches!(other, Ml | HybridAt),
            HybridE => matches!(other, Ml | ModalE | HybridAt | HybridE),
            HybridEDown => matches!(other, Ml | ModalE | HybridAt | HybridE | HybridEDown),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Language::Ml => "ML",
            Language::ModalE => "M(E)",
            Language::ModalD => "M(D)",
            Language::HybridAt => "H(@)",
            Language::HybridE => "H(E)",
            Language::HybridEDown => "H(E,↓)",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Smallest language of the family containing every constructor used, or
/// `None` when the formula mixes `D` with hybrid machinery (no member of the
/// family has both).
pub fn language_of(phi: &ModalFormula) -> Option<Language> {
    let mut global = false;
    let mut difference = false;
    let mut hybrid = false;
    let mut binder = false;
    for f in phi.subformulas() {
        match f {
            ModalFormula::E(_) | ModalFormula::A(_) => global = true,
            ModalFormula::D(_) => difference = true,
            ModalFormula::Nom(_) | ModalFormula::At(Name::Nom(_), _) => hybrid = true,
            ModalFormula::Var(_) | ModalFormula::Down(..) | ModalFormula::At(Name::Var(_), _) => {
                binder = true
            }
            _ => {}
        }
    }
    match (binder, hybrid, difference) {
        (true, _, true) | (false, true, true) => None,
        (true, _, false) => Some(Language::HybridEDown),
        (false, true, false) if global => Some(Language::HybridE),
        (false, true, false) => Some(Language::HybridAt),
        (false, false, true) => Some(Language::ModalD),
        (false, false, false) if global => Some(Language::ModalE),
        (false, false, false) => Some(Language::Ml),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_modal;

    fn lang(s: &str) -> Option<Language> {
        language_of(&parse_modal(s).unwrap())
    }

    #[test]
    fn language_tags() {
        assert_eq!(lang("[](p0 -> <>p1)"), Some(Language::Ml));
        assert_eq!(lang("A p0 | E ~p0"), Some(Language::ModalE));
        assert_eq!(lang("p0 -> <>D p0"), Some(Language::ModalD));
        assert_eq!(lang("<>i0 -> i0"), Some(Language::HybridAt));
        assert_eq!(lang("@i0 <>i1"), Some(Language::HybridAt));
        assert_eq!(lang("E i0"), Some(Language::HybridE));
        assert_eq!(lang("!x0.[]x0"), Some(Language::HybridEDown));
        assert_eq!(lang("D i0"), None);
    }

    #[test]
    fn free_and_bound_variables() {
        let f = parse_modal("!x0.(x0 & @x1 p0)").unwrap();
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), [1]);
        assert_eq!(f.bound_vars().into_iter().collect::<Vec<_>>(), [0]);
        assert!(parse_modal("!x0.[]x0").unwrap().is_sentence());
    }

    #[test]
    fn depth_counts_box_and_diamond_only() {
        let f = parse_modal("[](<>p0 & E []p1)").unwrap();
        assert_eq!(f.modal_depth(), 2);
        assert_eq!(f.props().into_iter().collect::<Vec<_>>(), [0, 1]);
    }
}
