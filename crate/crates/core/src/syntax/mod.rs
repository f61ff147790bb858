//! Formula ASTs, their concrete syntaxes, and fragment recognizers.

mod fo;
mod modal;
mod parse;

use alloc::string::String;
use core::fmt;

pub use fo::{
    is_negative_in, is_positive_in, li_check, lt_check, match_pattern, parse_fo, print_fo, FoFormula, Pattern,
    PointTerm,
};
pub use modal::{language_of, Language, ModalFormula, Name};
pub use parse::{parse_modal, print_modal};

/// A syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: usize, message: &str) -> ParseError {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.pos, self.message)
    }
}

impl core::error::Error for ParseError {}
