//! Natural deduction: rule catalogs, proof trees and the checker.

pub mod check;
pub mod corpus;
pub mod logic;
pub mod proof;

pub use check::{check_proof, CheckError, CheckErrorKind, ErrorClass};
pub use corpus::{corpus_script, expected_class, sequent_of_corpus, CorpusError, CORPUS, MUTANTS};
pub use logic::{Base, LogicId, RuleId};
pub use proof::{parse_script, parse_sequent, write_script, ProofNode, Script, Sequent};
