//! The bundled proof scripts and their mutants.

use thiserror::Error;

use super::check::ErrorClass;
use super::proof::{parse_script, ProofNode, Script};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("no bundled proof named `{0}`")]
    UnknownCorpusEntry(String),
}

macro_rules! bundled {
    ($dir:literal; $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/", $dir, $name, ".nd"))),)*]
    };
}

/// Accepted scripts, by name.
pub const CORPUS: &[(&str, &str)] = bundled!("";
    "int-efq",
    "int-eq-subst",
    "int-exists-swap",
    "int-russell-expansion-bwd",
    "int-russell-expansion-fwd",
    "int-universal-mp",
    "intf-pd",
    "intf-russell-expansion-bwd",
    "intf-russell-expansion-fwd",
    "n4-de-morgan",
    "n4-negI-unfold-1",
    "n4-negI-unfold-2",
    "n4-negated-universal",
    "n4f-negI-unfold-1",
    "n4f-negI-unfold-2",
    "n4f-negated-pd",
    "n4f-russell-expansion-bwd",
    "n4f-russell-expansion-fwd",
    "russell-expansion-bwd",
    "russell-expansion-fwd",
);

/// Rejected scripts. Each file's first line reads `# expect: <ErrorClass>`.
pub const MUTANTS: &[(&str, &str)] = bundled!("mutants/";
    "IE1-eigen-in-conclusion",
    "II-capture",
    "PD-in-ordinary",
    "allE-capture",
    "allE-missing-term",
    "allI-eigen-open",
    "allI-not-general",
    "andE-wrong-conjunct",
    "botE-in-n4",
    "discharge-absent-label",
    "discharge-twice",
    "discharge-wrong-formula",
    "discharge-wrong-premise",
    "eqE-negated-in-int",
    "eqE-nonliteral",
    "exE-eigen-in-assumption",
    "exE-eigen-in-conclusion",
    "exI-capture",
    "negIE-eigen-is-term",
    "negIE-eigen-open",
    "negII1-not-general",
    "negnegE-in-int",
    "strong-negation-in-int",
);

pub fn corpus_script(name: &str) -> Result<Script, CorpusError> {
    let text = CORPUS
        .iter()
        .chain(MUTANTS)
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| CorpusError::UnknownCorpusEntry(name.to_string()))?;
    Ok(parse_script(text).expect("bundled scripts parse"))
}

pub fn sequent_of_corpus(name: &str) -> Result<ProofNode, CorpusError> {
    corpus_script(name).map(|s| s.proof)
}

/// The error class a mutant's header promises.
pub fn expected_class(text: &str) -> Option<ErrorClass> {
    text.lines()
        .find_map(|l| l.trim().strip_prefix("# expect:"))
        .and_then(|c| c.trim().parse().ok())
}
