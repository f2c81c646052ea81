//! Bounded model enumeration, countermodel search and the property sweeps
//! built on them.

mod bounds;
mod countermodel;
mod enumerate;
mod generate;
mod soundness;
mod sweep;

use thiserror::Error;

pub use bounds::{Bounds, DEFAULT_INTENSION_CAP};
pub use countermodel::{find_countermodel, Verdict};
pub use enumerate::{count_models, enumerate_models, Models};
pub use generate::{depth, generate_formulas, open_formulas, FormulaSpec, Levels};
pub use soundness::{
    check_corpus_soundness, check_transport, sequent_bounds, SoundnessCase, TransportReport,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("bad bounds: {0}")]
    Bounds(String),
    #[error(transparent)]
    Eval(#[from] crate::semantics::EvalError),
    #[error(transparent)]
    Embedding(#[from] crate::embedding::EmbeddingError),
    #[error("replay failed: {0}")]
    Replay(String),
}
pub use sweep::{
    check_heredity, check_pairing_lemma, check_pairing_lemma_with, check_unfolding, check_unpairing_lemma,
    pairing_sweep, primed_bounds, sweep_spec, Failure, PairingSweep, SweepReport, MAX_EXAMPLES,
};
