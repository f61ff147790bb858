//! ASCII grammar for the modal family.
//!
//! ```text
//! iff     := imp ("<->" imp)*            left-assoc
//! imp     := or ("->" imp)?              right-assoc
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := ("~" | "[]" | "<>" | "E" | "A" | "D" | "@" name | "!" var ".") unary
//!          | atom
//! atom    := "T" | "F" | p<k> | i<k> | x<k> | "(" iff ")"
//! ```

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use super::{ModalFormula, Name, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Not,
    Box,
    Diamond,
    Global,
    Universal,
    Difference,
    At(Name),
    Down(u32),
    And,
    Or,
    Implies,
    Iff,
    Top,
    Bot,
    Prop(u32),
    Nom(u32),
    Var(u32),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, pos: usize, message: &str) -> Result<T, ParseError> {
        Err(ParseError::new(pos, message))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn index(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected an index");
        }
        // digits only, so utf8 is guaranteed
        let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        digits
            .parse()
            .or_else(|_| self.err(start, "index out of range"))
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        let at = self.pos;
        match self.src.get(self.pos) {
            Some(b'i') => {
                self.pos += 1;
                Ok(Name::Nom(self.index()?))
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Name::Var(self.index()?))
            }
            _ => self.err(at, "expected a nominal i<k> or variable x<k>"),
        }
    }

    /// Next token and its start offset.
    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        let peek = |k: usize| self.src.get(self.pos + k).copied();
        let (len, tok) = match c {
            b'(' => (1, Tok::LParen),
            b')' => (1, Tok::RParen),
            b'~' => (1, Tok::Not),
            b'&' => (1, Tok::And),
            b'|' => (1, Tok::Or),
            b'T' => (1, Tok::Top),
            b'F' => (1, Tok::Bot),
            b'E' => (1, Tok::Global),
            b'A' => (1, Tok::Universal),
            b'D' => (1, Tok::Difference),
            b'[' if peek(1) == Some(b']') => (2, Tok::Box),
            b'<' if peek(1) == Some(b'>') => (2, Tok::Diamond),
            b'<' if peek(1) == Some(b'-') && peek(2) == Some(b'>') => (3, Tok::Iff),
            b'-' if peek(1) == Some(b'>') => (2, Tok::Implies),
            b'@' => {
                self.pos += 1;
                self.skip_ws();
                let name = self.name()?;
                return Ok((start, Tok::At(name)));
            }
            b'!' => {
                self.pos += 1;
                self.skip_ws();
                let at = self.pos;
                let Name::Var(x) = self.name()? else {
                    return self.err(at, "the binder ! takes a variable x<k>");
                };
                self.skip_ws();
                if self.src.get(self.pos) != Some(&b'.') {
                    return self.err(self.pos, "expected '.' after bound variable");
                }
                self.pos += 1;
                return Ok((start, Tok::Down(x)));
            }
            b'p' | b'i' | b'x' => {
                self.pos += 1;
                let k = self.index()?;
                let tok = match c {
                    b'p' => Tok::Prop(k),
                    b'i' => Tok::Nom(k),
                    _ => Tok::Var(k),
                };
                return Ok((start, tok));
            }
            _ => return self.err(start, "unexpected character"),
        };
        self.pos += len;
        Ok((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    look: (usize, Tok),
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(usize, Tok), ParseError> {
        let cur = self.look;
        self.look = self.lexer.next()?;
        Ok(cur)
    }

    fn iff(&mut self) -> Result<ModalFormula, ParseError> {
        let mut lhs = self.implies()?;
        while self.look.1 == Tok::Iff {
            self.bump()?;
            let rhs = self.implies()?;
            lhs = ModalFormula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<ModalFormula, ParseError> {
        let lhs = self.or()?;
        if self.look.1 == Tok::Implies {
            self.bump()?;
            let rhs = self.implies()?;
            return Ok(ModalFormula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<ModalFormula, ParseError> {
        let mut lhs = self.and()?;
        while self.look.1 == Tok::Or {
            self.bump()?;
            let rhs = self.and()?;
            lhs = ModalFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<ModalFormula, ParseError> {
        let mut lhs = self.unary()?;
        while self.look.1 == Tok::And {
            self.bump()?;
            let rhs = self.unary()?;
            lhs = ModalFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ModalFormula, ParseError> {
        let (pos, tok) = self.bump()?;
        let wrap = |this: &mut Self, make: fn(Box<ModalFormula>) -> ModalFormula| {
            this.unary().map(|f| make(Box::new(f)))
        };
        match tok {
            Tok::Not => wrap(self, ModalFormula::Not),
            Tok::Box => wrap(self, ModalFormula::Box),
            Tok::Diamond => wrap(self, ModalFormula::Diamond),
            Tok::Global => wrap(self, ModalFormula::E),
            Tok::Universal => wrap(self, ModalFormula::A),
            Tok::Difference => wrap(self, ModalFormula::D),
            Tok::At(name) => Ok(ModalFormula::at(name, self.unary()?)),
            Tok::Down(x) => Ok(ModalFormula::down(x, self.unary()?)),
            Tok::Top => Ok(ModalFormula::Top),
            Tok::Bot => Ok(ModalFormula::Bot),
            Tok::Prop(k) => Ok(ModalFormula::Prop(k)),
            Tok::Nom(k) => Ok(ModalFormula::Nom(k)),
            Tok::Var(k) => Ok(ModalFormula::Var(k)),
            Tok::LParen => {
                let inner = self.iff()?;
                match self.bump()? {
                    (_, Tok::RParen) => Ok(inner),
                    (at, _) => Err(ParseError::new(at, "expected ')'")),
                }
            }
            Tok::End => Err(ParseError::new(pos, "unexpected end of input")),
            _ => Err(ParseError::new(pos, "expected a formula")),
        }
    }
}

pub fn parse_modal(text: &str) -> Result<ModalFormula, ParseError> {
    let mut lexer = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    let look = lexer.next()?;
    let mut parser = Parser { lexer, look };
    let f = parser.iff()?;
    match parser.look {
        (_, Tok::End) => Ok(f),
        (at, _) => Err(ParseError::new(at, "trailing input")),
    }
}

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

fn precedence(f: &ModalFormula) -> u8 {
    use ModalFormula as F;
    match f {
        F::Iff(..) => IFF,
        F::Implies(..) => IMPLIES,
        F::Or(..) => OR,
        F::And(..) => AND,
        F::Top | F::Bot | F::Prop(_) | F::Nom(_) | F::Var(_) => ATOM,
        _ => UNARY,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &ModalFormula, min: u8) -> fmt::Result {
    use ModalFormula as F;
    if precedence(phi) < min {
        f.write_str("(")?;
        write_at(f, phi, 0)?;
        return f.write_str(")");
    }
    let binary = |f: &mut fmt::Formatter<'_>, a, op: &str, b, left: u8, right: u8| {
        write_at(f, a, left)?;
        write!(f, " {op} ")?;
        write_at(f, b, right)
    };
    match phi {
        F::Top => f.write_str("T"),
        F::Bot => f.write_str("F"),
        F::Prop(k) => write!(f, "p{k}"),
        F::Nom(k) => write!(f, "i{k}"),
        F::Var(k) => write!(f, "x{k}"),
        F::Iff(a, b) => binary(f, a, "<->", b, IFF, IMPLIES),
        F::Implies(a, b) => binary(f, a, "->", b, OR, IMPLIES),
        F::Or(a, b) => binary(f, a, "|", b, OR, AND),
        F::And(a, b) => binary(f, a, "&", b, AND, UNARY),
        F::Not(a) => {
            f.write_str("~")?;
            write_at(f, a, UNARY)
        }
        F::Box(a) => {
            f.write_str("[]")?;
            write_at(f, a, UNARY)
        }
        F::Diamond(a) => {
            f.write_str("<>")?;
            write_at(f, a, UNARY)
        }
        F::E(a) => {
            f.write_str("E ")?;
            write_at(f, a, UNARY)
        }
        F::A(a) => {
            f.write_str("A ")?;
            write_at(f, a, UNARY)
        }
        F::D(a) => {
            f.write_str("D ")?;
            write_at(f, a, UNARY)
        }
        F::At(name, a) => {
            write!(f, "@{name} ")?;
            write_at(f, a, UNARY)
        }
        F::Down(x, a) => {
            write!(f, "!x{x}.")?;
            write_at(f, a, UNARY)
        }
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 0)
    }
}

pub fn print_modal(phi: &ModalFormula) -> String {
    use alloc::string::ToString;
    phi.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ModalFormula as F;

    fn p(k: u32) -> F {
        F::Prop(k)
    }

    #[test]
    fn grz() {
        let f = parse_modal("[]([](p0 -> []p0) -> p0) -> []p0").unwrap();
        let expected = F::implies(
            F::nec(F::implies(F::nec(F::implies(p(0), F::nec(p(0)))), p(0))),
            F::nec(p(0)),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn connectedness_axiom() {
        let f = parse_modal("A([]p0 | []~p0) -> (A p0 | A ~p0)").unwrap();
        let expected = F::implies(
            F::all(F::or(F::nec(p(0)), F::nec(F::not(p(0))))),
            F::or(F::all(p(0)), F::all(F::not(p(0)))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn t1_axiom() {
        let f = parse_modal("<>i0 -> i0").unwrap();
        assert_eq!(f, F::implies(F::poss(F::Nom(0)), F::Nom(0)));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_modal("p0 -> p1 -> p2").unwrap(),
            F::implies(p(0), F::implies(p(1), p(2)))
        );
        assert_eq!(
            parse_modal("p0 & p1 | p2").unwrap(),
            F::or(F::and(p(0), p(1)), p(2))
        );
        assert_eq!(
            parse_modal("p0 <-> p1 <-> p2").unwrap(),
            F::iff(F::iff(p(0), p(1)), p(2))
        );
        assert_eq!(
            parse_modal("~p0 & []p1").unwrap(),
            F::and(F::not(p(0)), F::nec(p(1)))
        );
        assert_eq!(
            parse_modal("!x0.[]x0 & p0").unwrap(),
            F::and(F::down(0, F::nec(F::Var(0))), p(0))
        );
        assert_eq!(
            parse_modal("@x3 i2").unwrap(),
            F::at(Name::Var(3), F::Nom(2))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_modal("p0 & ").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_modal("p0 & q1").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_modal("(p0").unwrap_err();
        assert_eq!(e.pos, 3);
        let e = parse_modal("p0 p1").unwrap_err();
        assert_eq!(e.pos, 3);
        assert!(parse_modal("!i0.p0").is_err());
        assert!(parse_modal("p").is_err());
    }

    #[test]
    fn printing_parenthesizes_minimally() {
        let cases = [
            "[]([](p0 -> []p0) -> p0) -> []p0",
            "A ([]p0 | []~p0) -> A p0 | A ~p0",
            "@i0 <>i1 & @i1 <>i0 -> @i0 i1",
            "(p0 -> p1) -> p2",
            "p0 & (p1 & p2)",
            "!x0.[]x0",
        ];
        for c in cases {
            let f = parse_modal(c).unwrap();
            assert_eq!(print_modal(&f), c);
            assert_eq!(parse_modal(&print_modal(&f)).unwrap(), f);
        }
    }
}
