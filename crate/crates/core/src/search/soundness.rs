//! Bounded checks tying the proof checker and the translation to the
//! semantics: derived sequents have no countermodel, and a formula has a
//! countermodel exactly when its translation has one.

use std::fmt;

use crate::embedding::{pair_model, tau, unpair_model};
use crate::kernel::{check_proof, corpus_script, Sequent, CORPUS};
use crate::semantics::{eval, Environment, Kind};
use crate::syntax::{print, Formula, Language};

use super::{find_countermodel, generate_formulas, Bounds, FormulaSpec, SearchError, Verdict};

/// Search bounds matching the logic of `s`.
pub fn sequent_bounds(s: &Sequent, worlds: usize, objects: usize) -> Bounds {
    let kind = if s.logic.is_nelsonian() {
        Kind::Nelsonian
    } else {
        Kind::Intuitionistic
    };
    let formulas: Vec<&Formula> = s.assumptions.iter().chain(std::iter::once(&s.conclusion)).collect();
    Bounds::for_formulas(kind, s.logic.free, worlds, objects, formulas.iter().copied())
}

/// One corpus entry of the soundness sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessCase {
    pub name: String,
    pub sequent: Sequent,
    pub verdict: Verdict,
}

impl fmt::Display for SoundnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.name, self.sequent.to_seq(), self.verdict)
    }
}

/// Checks every bundled script and searches its sequent for a countermodel
/// in models of its kind with at most `worlds` worlds and `objects` objects.
pub fn check_corpus_soundness(worlds: usize, objects: usize) -> Result<Vec<SoundnessCase>, SearchError> {
    let mut out = Vec::new();
    for (name, _) in CORPUS {
        let script = corpus_script(name).expect("bundled");
        let sequent = check_proof(&script.proof, script.logic)
            .map_err(|e| SearchError::Replay(format!("{name} is rejected: {e}")))?;
        let assumptions: Vec<Formula> = sequent.assumptions.iter().cloned().collect();
        let b = sequent_bounds(&sequent, worlds, objects);
        let verdict = find_countermodel(&assumptions, &sequent.conclusion, &b)?;
        out.push(SoundnessCase {
            name: name.to_string(),
            sequent,
            verdict,
        });
    }
    Ok(out)
}

/// Totals of [`check_transport`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransportReport {
    pub formulas: u64,
    /// Formulas whose translation is undefined.
    pub skipped: u64,
    /// Formulas refuted on both sides.
    pub refuted: u64,
    pub failures: Vec<String>,
}

impl TransportReport {
    pub fn clean(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for TransportReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} formulas, {} skipped, {} refuted, {} failures",
            self.formulas,
            self.skipped,
            self.refuted,
            self.failures.len()
        )?;
        for m in &self.failures {
            write!(f, "\n  {m}")?;
        }
        Ok(())
    }
}

/// For every generated closed formula `A` of depth at most `depth`,
/// `|- A` has a Nelsonian countermodel within `worlds` and `objects` iff
/// `|- tau(A)` has an intuitionistic one. Each countermodel is carried to the
/// other side by pairing or unpairing and must refute there at the same
/// world.
pub fn check_transport(free: bool, worlds: usize, objects: usize, depth: usize) -> Result<TransportReport, SearchError> {
    let spec = FormulaSpec::small(Language::Negation).with_existence(free);
    let mut report = TransportReport::default();
    for a in generate_formulas(&spec, depth) {
        report.formulas += 1;
        let Ok(t) = tau(&a) else {
            report.skipped += 1;
            continue;
        };
        let bn = Bounds::for_formulas(Kind::Nelsonian, free, worlds, objects, [&a]);
        let bi = Bounds::for_formulas(Kind::Intuitionistic, free, worlds, objects, [&t]);
        let vn = find_countermodel(&[], &a, &bn)?;
        let vi = find_countermodel(&[], &t, &bi)?;
        if vn.found() != vi.found() {
            report.failures.push(format!(
                "{}: Nelsonian countermodel {}, intuitionistic countermodel for {} {}",
                print(&a),
                if vn.found() { "found" } else { "absent" },
                print(&t),
                if vi.found() { "found" } else { "absent" },
            ));
            continue;
        }
        if let (
            Verdict::CountermodelFound { model: n, world: wn, .. },
            Verdict::CountermodelFound { model: i, world: wi, .. },
        ) = (&vn, &vi)
        {
            report.refuted += 1;
            let paired = pair_model(n)?;
            if eval(&paired, *wn, &t, &Environment::of(&paired))? {
                report.failures.push(format!("{}: pairing does not carry the countermodel", print(&a)));
            }
            let unpaired = unpair_model(i)?;
            if eval(&unpaired, *wi, &a, &Environment::of(&unpaired))? {
                report.failures.push(format!("{}: unpairing does not carry the countermodel", print(&a)));
            }
        }
    }
    Ok(report)
}
