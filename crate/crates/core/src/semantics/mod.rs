//! Kripke models for the intuitionistic and Nelsonian logics: the data
//! structure, its well-formedness conditions, evaluation and a text format.

mod eval;
mod model;
mod modelfile;
mod table;
mod validate;

pub use eval::{
    eval, eval_int, eval_nelson, falsify_sequent, holds_sequent, prepare, Compiled, CompiledSequent, Environment,
    EvalError, Evaluator, Falsifier, MAX_WORLDS,
};
#[allow(unused_imports)]
pub(crate) use eval::{assignable, sequent_vars};
#[allow(unused_imports)]
pub(crate) use model::bits;
pub use model::{Extension, Intension, KripkeModel, Kind, Predicate, MAX_INTENSIONS};
pub use modelfile::{parse_model, write_model, ModelParseError};
pub use table::{Table, Tabulated, Tabulator};
pub use validate::{validate_model, Violation};
