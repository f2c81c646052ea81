//! Proof checking, Kripke model checking and bounded countermodel search for
//! Nelson's constructive logic N4 and intuitionistic logic, with identity,
//! negative free variants and the binary description quantifier `I`.

pub mod syntax;
pub mod kernel;
pub mod semantics;
pub mod embedding;
pub mod search;
