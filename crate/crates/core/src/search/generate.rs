//! Exhaustive formula generation for the sweeps.
//!
//! The depth of a formula is its number of logical operators, except that a
//! strong negation standing directly on an atom is free: literals have depth
//! 0. Generation works on formulas whose free variables are among the single
//! spec variable and keeps the closed ones.

use std::collections::HashSet;

use crate::syntax::{free_vars, print, Formula, Language, Term};

/// The vocabulary of generated formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaSpec {
    /// Unary predicates.
    pub predicates: Vec<String>,
    pub constants: Vec<String>,
    pub variable: String,
    pub identity: bool,
    pub existence: bool,
    pub descriptions: bool,
    pub language: Language,
}

impl FormulaSpec {
    /// One unary predicate `P`, identity, constant `a`, variable `x`, `I`.
    pub fn small(language: Language) -> Self {
        FormulaSpec {
            predicates: vec!["P".into()],
            constants: vec!["a".into()],
            variable: "x".into(),
            identity: true,
            existence: false,
            descriptions: true,
            language,
        }
    }

    pub fn with_predicate(mut self, p: &str) -> Self {
        self.predicates.push(p.into());
        self
    }

    pub fn with_existence(mut self, on: bool) -> Self {
        self.existence = on;
        self
    }

    pub fn with_descriptions(mut self, on: bool) -> Self {
        self.descriptions = on;
        self
    }

    fn terms(&self) -> Vec<Term> {
        let mut ts: Vec<Term> = self.constants.iter().map(Term::constant).collect();
        ts.push(Term::var(self.variable.clone()));
        ts
    }

    /// Atoms, then (in the negation language) their negations; `bot` in the
    /// falsum language.
    pub fn literals(&self) -> Vec<Formula> {
        let ts = self.terms();
        let mut atoms = Vec::new();
        for p in &self.predicates {
            for t in &ts {
                atoms.push(Formula::atom(p.clone(), vec![t.clone()]));
            }
        }
        if self.identity {
            for s in &ts {
                for t in &ts {
                    atoms.push(Formula::eq(s.clone(), t.clone()));
                }
            }
        }
        if self.existence {
            for t in &ts {
                atoms.push(Formula::existent(t.clone()));
            }
        }
        let mut out = atoms.clone();
        match self.language {
            Language::Negation => out.extend(atoms.into_iter().map(Formula::not)),
            Language::Falsum => out.push(Formula::Bot),
        }
        out
    }
}

/// Operator count, not counting `~` directly on an atom.
pub fn depth(a: &Formula) -> usize {
    match a {
        Formula::Atom { .. } | Formula::Eq(..) | Formula::Existent(_) | Formula::Bot => 0,
        Formula::Not(b) if b.is_atomic() => 0,
        Formula::Not(b) | Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + depth(b),
        Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) => 1 + depth(b) + depth(c),
        Formula::Descr { restrictor, scope, .. } => 1 + depth(restrictor) + depth(scope),
    }
}

/// All formulas (open or closed) of each depth up to `max`, level by level.
pub struct Levels {
    spec: FormulaSpec,
    levels: Vec<Vec<Formula>>,
}

impl Levels {
    pub fn build(spec: &FormulaSpec, max: usize) -> Self {
        let mut levels = vec![spec.literals()];
        for k in 1..=max {
            let mut next = Vec::new();
            for_each_at(spec, &levels, k, &mut |a| next.push(a));
            levels.push(next);
        }
        Levels {
            spec: spec.clone(),
            levels,
        }
    }

    pub fn level(&self, k: usize) -> &[Formula] {
        &self.levels[k]
    }

    /// Number of formulas of depth `k` that can be built on these levels,
    /// where `k` may be one more than the deepest stored level.
    pub fn count_at(&self, k: usize) -> u64 {
        if k == 0 {
            return self.levels[0].len() as u64;
        }
        let n = |i: usize| self.levels[i].len() as u64;
        let negations = match self.spec.language {
            Language::Negation => negatable(&self.levels[k - 1]).len() as u64,
            Language::Falsum => 0,
        };
        let binary = if self.spec.descriptions { 4 } else { 3 };
        negations + 2 * n(k - 1) + binary * (0..k).map(|i| n(i) * n(k - 1 - i)).sum::<u64>()
    }
}

fn for_each_at(spec: &FormulaSpec, levels: &[Vec<Formula>], k: usize, f: &mut dyn FnMut(Formula)) {
    let x = &spec.variable;
    let prev = &levels[k - 1];
    if spec.language == Language::Negation {
        for a in negatable(prev) {
            f(Formula::not(a.clone()));
        }
    }
    for a in prev {
        f(Formula::forall(x.clone(), a.clone()));
    }
    for a in prev {
        f(Formula::exists(x.clone(), a.clone()));
    }
    let mut binary: Vec<Box<dyn Fn(Formula, Formula) -> Formula>> = vec![
        Box::new(Formula::and),
        Box::new(Formula::or),
        Box::new(Formula::imp),
    ];
    if spec.descriptions {
        binary.push(Box::new(move |a, b| Formula::descr(x.clone(), a, b)));
    }
    for op in &binary {
        for i in 0..k {
            for a in &levels[i] {
                for b in &levels[k - 1 - i] {
                    f(op(a.clone(), b.clone()));
                }
            }
        }
    }
}

/// The members of a level that `~` may be applied to without producing a
/// literal. Atoms come first in level 0 and nowhere else.
fn negatable(level: &[Formula]) -> &[Formula] {
    let atoms = level.iter().take_while(|a| a.is_atomic()).count();
    &level[atoms..]
}

fn is_closed(a: &Formula) -> bool {
    free_vars(a).is_empty()
}

/// Every closed formula of depth at most `max`, shallowest first, without
/// repeated printed forms.
pub fn generate_formulas(spec: &FormulaSpec, max: usize) -> Vec<Formula> {
    let levels = Levels::build(spec, max);
    let mut seen = HashSet::new();
    levels
        .levels
        .into_iter()
        .flatten()
        .filter(|a| is_closed(a) && seen.insert(print(a)))
        .collect()
}

/// Every formula of depth at most `max`, open or closed, without repeated
/// printed forms.
pub fn open_formulas(spec: &FormulaSpec, max: usize) -> Vec<Formula> {
    let levels = Levels::build(spec, max);
    let mut seen = HashSet::new();
    levels
        .levels
        .into_iter()
        .flatten()
        .filter(|a| seen.insert(print(a)))
        .collect()
}
