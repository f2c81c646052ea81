//! Object-language syntax: terms, formulas, signatures, parsing, printing and
//! substitution.

mod formula;
pub mod lexer;
mod parser;
mod print;
mod signature;
mod subst;

pub use formula::{fresh_var, injected_index, Formula, Term, PRIMED_EXISTENCE, PRIMED_IDENTITY};
pub use parser::{
    end_pos, parse_formula, parse_formula_inferring, FormulaParser, ParseError, ParseErrorKind,
};
pub use print::print;
pub use signature::{Language, Signature, SignatureError};
pub use subst::{free_vars, is_free, is_free_for, substitute, CaptureError};

#[cfg(test)]
mod proptests;
