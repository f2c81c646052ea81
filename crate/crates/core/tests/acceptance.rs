//! One PASS/FAIL line per acceptance criterion. Runs without the test
//! harness so the lines always show; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use nelson_core::embedding::pair_model;
use nelson_core::kernel::{check_proof, corpus_script, expected_class, parse_sequent, LogicId, CORPUS, MUTANTS};
use nelson_core::search::{
    check_corpus_soundness, check_heredity, check_unfolding, check_unpairing_lemma, find_countermodel, pairing_sweep,
    primed_bounds, Bounds, PairingSweep, SweepReport,
};
use nelson_core::semantics::Kind;
use nelson_core::syntax::Formula;

const UNFOLDING: &str = "forall x.(~F(x) | (exists y.(F(y) & ~y=x)) | ~G(x))";
const EXPANSION: &str = "exists x.(F(x) & (forall y.(F(y) -> y=x)) & G(x))";

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Run {
    failed: Vec<usize>,
}

impl Run {
    fn criterion(&mut self, n: usize, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let out = f();
        let took = t.elapsed();
        let in_time = budget.map_or(true, |b| took < b);
        let pass = out.pass && in_time;
        if !pass {
            self.failed.push(n);
        }
        let budget = budget.map_or(String::new(), |b| format!(", budget {b:?}"));
        println!(
            "{} {n} {name} ({took:.2?}{budget}): {}",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn sweep_bounds(kind: Kind, free: bool) -> Bounds {
    Bounds::new(kind, free, 2, 2)
        .with_predicate("P", 1)
        .with_constant("a")
        .with_identity_extension(kind == Kind::Nelsonian)
}

fn search(logic: LogicId, seq: &str, worlds: usize, objects: usize) -> bool {
    let (lhs, rhs, _) = parse_sequent(seq, logic).unwrap();
    let kind = if logic.is_nelsonian() {
        Kind::Nelsonian
    } else {
        Kind::Intuitionistic
    };
    let all: Vec<&Formula> = lhs.iter().chain(std::iter::once(&rhs)).collect();
    let b = Bounds::for_formulas(kind, logic.free, worlds, objects, all.iter().copied());
    find_countermodel(&lhs, &rhs, &b).unwrap().found()
}

fn derives(name: &str, seq: &str) -> Result<(), String> {
    let s = corpus_script(name).map_err(|e| e.to_string())?;
    let got = check_proof(&s.proof, s.logic).map_err(|e| format!("{name}: {e}"))?;
    let (ante, concl, _) = parse_sequent(seq, s.logic).map_err(|e| e.to_string())?;
    if got.conclusion != concl || got.assumptions != ante.into_iter().collect() {
        return Err(format!("{name} derives {}", got.to_seq()));
    }
    Ok(())
}

fn summary(reports: &[(&str, &SweepReport)]) -> (bool, String) {
    let pass = reports.iter().all(|(_, r)| r.clean() && r.checked > 0);
    let mut parts: Vec<String> = reports.iter().map(|(k, r)| format!("{k}: {r}")).collect();
    for (_, r) in reports {
        parts.extend(r.examples.iter().map(|e| format!("example {e}")));
    }
    (pass, parts.join("; "))
}

fn main() {
    let mut run = Run { failed: Vec::new() };

    run.criterion(1, "corpus derivations", secs(1), || {
        let mut wanted = vec![
            ("n4-negI-unfold-1".to_string(), format!("~I x[F(x),G(x)] |- {UNFOLDING}")),
            ("n4-negI-unfold-2".to_string(), format!("{UNFOLDING} |- ~I x[F(x),G(x)]")),
            ("n4f-negI-unfold-1".to_string(), format!("~I x[F(x),G(x)] |- {UNFOLDING}")),
            ("n4f-negI-unfold-2".to_string(), format!("E!(y), {UNFOLDING} |- ~I x[F(x),G(x)]")),
        ];
        for prefix in ["", "n4f-"] {
            wanted.push((format!("{prefix}russell-expansion-fwd"), format!("I x[F(x),G(x)] |- {EXPANSION}")));
            wanted.push((format!("{prefix}russell-expansion-bwd"), format!("{EXPANSION} |- I x[F(x),G(x)]")));
        }
        let errors: Vec<String> = wanted.iter().filter_map(|(n, s)| derives(n, s).err()).collect();
        let accepted = CORPUS
            .iter()
            .filter(|(n, _)| {
                let s = corpus_script(n).unwrap();
                check_proof(&s.proof, s.logic).is_ok()
            })
            .count();
        ok(
            errors.is_empty() && accepted == CORPUS.len(),
            format!(
                "{} displayed sequents matched, {accepted}/{} bundled scripts accepted{}",
                wanted.len() - errors.len(),
                CORPUS.len(),
                if errors.is_empty() { String::new() } else { format!("; {}", errors.join("; ")) }
            ),
        )
    });

    run.criterion(2, "mutation suite", secs(1), || {
        let mut misses = Vec::new();
        let mut classes = std::collections::BTreeSet::new();
        for (name, text) in MUTANTS {
            let want = expected_class(text);
            let s = corpus_script(name).unwrap();
            let got = check_proof(&s.proof, s.logic).err().map(|e| e.kind.class());
            classes.extend(got);
            if got.is_none() || got != want {
                misses.push(format!("{name}: wanted {want:?}, got {got:?}"));
            }
        }
        ok(
            misses.is_empty() && MUTANTS.len() >= 12,
            format!(
                "{} mutants rejected with the targeted class over {} classes{}",
                MUTANTS.len() - misses.len(),
                classes.len(),
                if misses.is_empty() { String::new() } else { format!("; {}", misses.join("; ")) }
            ),
        )
    });

    run.criterion(3, "paraconsistency", secs(1), || {
        let explosion = search(LogicId::N4, "P(a), ~P(a) |- Q(a)", 1, 1);
        let bounds = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)];
        let int_found: Vec<_> = bounds
            .iter()
            .filter(|&&(w, h)| search(LogicId::INT, "P(a), P(a) -> bot |- Q(a)", w, h))
            .collect();
        ok(
            explosion && int_found.is_empty(),
            format!(
                "N4 explosion countermodel at (1,1): {explosion}; Int countermodels over {} bounds: {}",
                bounds.len(),
                int_found.len()
            ),
        )
    });

    // The pairing pass yields both the agreement report and the Nelsonian
    // heredity report; criterion 5 reuses the latter.
    let mut passes: Vec<(bool, PairingSweep, PairingSweep)> = Vec::new();
    run.criterion(4, "pairing sweep, depth 3", secs(300), || {
        for free in [false, true] {
            let b = sweep_bounds(Kind::Nelsonian, free);
            let there = pairing_sweep(&b, 3, pair_model).unwrap();
            let back = check_unpairing_lemma(&primed_bounds(&b), 3).unwrap();
            passes.push((free, there, back));
        }
        let mut reports = Vec::new();
        for (free, there, back) in &passes {
            let tag = if *free { "free" } else { "ordinary" };
            reports.push((format!("{tag} N->I"), &there.agreement));
            reports.push((format!("{tag} I->N"), &back.agreement));
        }
        let named: Vec<(&str, &SweepReport)> = reports.iter().map(|(k, r)| (k.as_str(), *r)).collect();
        let (pass, detail) = summary(&named);
        ok(pass, detail)
    });

    run.criterion(5, "heredity sweep, depth 3", secs(300), || {
        let int: Vec<(bool, SweepReport)> = [false, true]
            .into_iter()
            .map(|free| (free, check_heredity(&sweep_bounds(Kind::Intuitionistic, free), 3).unwrap()))
            .collect();
        let mut reports = Vec::new();
        for (free, there, back) in &passes {
            let tag = if *free { "free" } else { "ordinary" };
            reports.push((format!("{tag} N4 and tau"), &there.heredity));
            reports.push((format!("{tag} unpaired"), &back.heredity));
        }
        for (free, r) in &int {
            reports.push((format!("{} Int", if *free { "free" } else { "ordinary" }), r));
        }
        let named: Vec<(&str, &SweepReport)> = reports.iter().map(|(k, r)| (k.as_str(), *r)).collect();
        let (pass, detail) = summary(&named);
        ok(
            pass && passes.len() == 2,
            format!("Nelsonian and translated reports come from the pass of criterion 4; {detail}"),
        )
    });

    run.criterion(6, "description unfolding", secs(300), || {
        let mut reports = Vec::new();
        for kind in [Kind::Nelsonian, Kind::Intuitionistic] {
            for free in [false, true] {
                let b = sweep_bounds(kind, free).with_predicate("Q", 1);
                let tag = format!("{kind}{}", if free { " free" } else { "" });
                reports.push((tag, check_unfolding(&b, 0).unwrap()));
            }
        }
        let named: Vec<(&str, &SweepReport)> = reports.iter().map(|(k, r)| (k.as_str(), r)).collect();
        let (pass, detail) = summary(&named);
        ok(pass, detail)
    });

    run.criterion(7, "bounded soundness", None, || {
        let cases = check_corpus_soundness(2, 2).unwrap();
        let bad: Vec<String> = cases.iter().filter(|c| c.verdict.found()).map(|c| c.to_string()).collect();
        let examined: u64 = cases
            .iter()
            .map(|c| match c.verdict {
                nelson_core::search::Verdict::NoCountermodelWithinBounds { examined, .. } => examined,
                nelson_core::search::Verdict::CountermodelFound { examined, .. } => examined,
            })
            .sum();
        ok(
            bad.is_empty() && cases.len() == CORPUS.len(),
            format!(
                "{} sequents, {examined} models, {} countermodels{}",
                cases.len(),
                bad.len(),
                if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
            ),
        )
    });

    run.criterion(8, "intuitionistic sanity", secs(10), || {
        let em = search(LogicId::INT, "|- P(a) | (P(a) -> bot)", 2, 1);
        let dne = search(LogicId::N4, "|- ~~P(a) -> P(a)", 2, 2);
        ok(
            em && !dne,
            format!("excluded middle countermodel at (2,1): {em}; double negation countermodel at (2,2): {dne}"),
        )
    });

    if !run.failed.is_empty() {
        eprintln!("failed criteria: {:?}", run.failed);
        std::process::exit(1);
    }
}
