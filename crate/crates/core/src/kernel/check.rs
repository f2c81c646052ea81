//! The proof checker.
//!
//! Nodes are checked bottom-up. Every node re-derives its conclusion from the
//! conclusions of its premises by exact pattern matching; no parameter is
//! ever inferred. Open assumptions are tracked as labelled leaves so that
//! discharges and eigenvariable provisos can be checked literally.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{is_free, substitute, CaptureError, Formula, SignatureError, Term};

use super::logic::{Base, LogicId, RuleId};
use super::proof::{ProofNode, Sequent};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error("rule {rule} is not available in {logic}")]
    RuleNotInLogic { rule: RuleId, logic: LogicId },
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("proviso violated: {clause}")]
    ProvisoViolation { clause: String },
    #[error("discharge error: {0}")]
    DischargeError(String),
    #[error("substitution error: {0}")]
    SubstitutionError(#[from] CaptureError),
    #[error("parameter error: {0}")]
    ParameterError(String),
    #[error("formula outside the language of the logic: {0}")]
    LanguageViolation(#[from] SignatureError),
}

/// Coarse classification used by the mutation suite and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorClass {
    RuleNotInLogic,
    PatternMismatch,
    ProvisoViolation,
    DischargeError,
    SubstitutionError,
    ParameterError,
    LanguageViolation,
}

impl CheckErrorKind {
    pub fn class(&self) -> ErrorClass {
        match self {
            CheckErrorKind::RuleNotInLogic { .. } => ErrorClass::RuleNotInLogic,
            CheckErrorKind::PatternMismatch(_) => ErrorClass::PatternMismatch,
            CheckErrorKind::ProvisoViolation { .. } => ErrorClass::ProvisoViolation,
            CheckErrorKind::DischargeError(_) => ErrorClass::DischargeError,
            CheckErrorKind::SubstitutionError(_) => ErrorClass::SubstitutionError,
            CheckErrorKind::ParameterError(_) => ErrorClass::ParameterError,
            CheckErrorKind::LanguageViolation(_) => ErrorClass::LanguageViolation,
        }
    }
}

impl std::str::FromStr for ErrorClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "RuleNotInLogic" => ErrorClass::RuleNotInLogic,
            "PatternMismatch" => ErrorClass::PatternMismatch,
            "ProvisoViolation" => ErrorClass::ProvisoViolation,
            "DischargeError" => ErrorClass::DischargeError,
            "SubstitutionError" => ErrorClass::SubstitutionError,
            "ParameterError" => ErrorClass::ParameterError,
            "LanguageViolation" => ErrorClass::LanguageViolation,
            _ => return Err(format!("unknown error class `{s}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct CheckError {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub kind: CheckErrorKind,
}

impl CheckError {
    pub fn path_string(&self) -> String {
        if self.path.is_empty() {
            "root".to_string()
        } else {
            let parts: Vec<String> = self.path.iter().map(usize::to_string).collect();
            format!("root.{}", parts.join("."))
        }
    }
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at node {}: {}", self.path_string(), self.kind)
    }
}

type Kind = CheckErrorKind;

fn mismatch(msg: impl Into<String>) -> Kind {
    Kind::PatternMismatch(msg.into())
}

fn proviso(clause: impl Into<String>) -> Kind {
    Kind::ProvisoViolation {
        clause: clause.into(),
    }
}

/// Checks `proof` in `logic` and returns the derived sequent.
pub fn check_proof(proof: &ProofNode, logic: LogicId) -> Result<Sequent, CheckError> {
    catalog_pass(proof, logic, &mut Vec::new())?;
    language_pass(proof, logic)?;
    let mut discharged = BTreeSet::new();
    let open = check_node(proof, logic, &mut Vec::new(), &mut discharged)?;
    if let Some((label, _)) = open.iter().find(|(l, _)| discharged.contains(l)) {
        return Err(CheckError {
            path: Vec::new(),
            kind: Kind::DischargeError(format!(
                "label {label} is discharged at one node but left open elsewhere"
            )),
        });
    }
    Ok(Sequent {
        assumptions: open.into_iter().map(|(_, f)| f).collect(),
        conclusion: proof.conclusion().clone(),
        logic,
    })
}

fn catalog_pass(node: &ProofNode, logic: LogicId, path: &mut Vec<usize>) -> Result<(), CheckError> {
    if let ProofNode::Inference { rule, premises, .. } = node {
        if !rule.available_in(logic) {
            return Err(CheckError {
                path: path.clone(),
                kind: Kind::RuleNotInLogic { rule: *rule, logic },
            });
        }
        for (i, p) in premises.iter().enumerate() {
            path.push(i);
            catalog_pass(p, logic, path)?;
            path.pop();
        }
    }
    Ok(())
}

fn language_pass(proof: &ProofNode, logic: LogicId) -> Result<(), CheckError> {
    let mut sig = logic.signature();
    let mut failure = None;
    let mut path = Vec::new();
    walk_with_path(proof, &mut path, &mut |node, path| {
        if failure.is_some() {
            return;
        }
        let f = node.conclusion();
        if let Err(e) = sig.absorb(f).and_then(|_| sig.check(f)) {
            failure = Some(CheckError {
                path: path.to_vec(),
                kind: Kind::LanguageViolation(e),
            });
        }
    });
    failure.map_or(Ok(()), Err)
}

fn walk_with_path(node: &ProofNode, path: &mut Vec<usize>, f: &mut dyn FnMut(&ProofNode, &[usize])) {
    f(node, path);
    if let ProofNode::Inference { premises, .. } = node {
        for (i, p) in premises.iter().enumerate() {
            path.push(i);
            walk_with_path(p, path, f);
            path.pop();
        }
    }
}

type Open = Vec<(u64, Formula)>;

fn check_node(
    node: &ProofNode,
    logic: LogicId,
    path: &mut Vec<usize>,
    discharged: &mut BTreeSet<u64>,
) -> Result<Open, CheckError> {
    let (rule, conclusion, discharges, var, term, premises) = match node {
        ProofNode::Assumption { label, formula } => return Ok(vec![(*label, formula.clone())]),
        ProofNode::Inference {
            rule,
            conclusion,
            discharges,
            var,
            term,
            premises,
        } => (*rule, conclusion, discharges, var, term, premises),
    };

    let mut opens = Vec::with_capacity(premises.len());
    for (i, p) in premises.iter().enumerate() {
        path.push(i);
        opens.push(check_node(p, logic, path, discharged)?);
        path.pop();
    }

    let here = |kind: Kind| CheckError {
        path: path.clone(),
        kind,
    };

    let params = Params::new(rule, var.as_deref(), term.as_ref()).map_err(here)?;
    let prem: Vec<&Formula> = premises.iter().map(ProofNode::conclusion).collect();
    let spec = match_rule(rule, logic, conclusion, &prem, &params).map_err(here)?;

    // Discharges: each label must name leaves under this node, each of
    // which must be dischargeable at the premise it sits in.
    let mut seen = BTreeSet::new();
    for &label in discharges {
        if !seen.insert(label) {
            return Err(here(Kind::DischargeError(format!("label {label} listed twice"))));
        }
        if discharged.contains(&label) {
            return Err(here(Kind::DischargeError(format!(
                "label {label} is discharged more than once"
            ))));
        }
        let mut found = false;
        for (i, open) in opens.iter_mut().enumerate() {
            let mut keep = Vec::with_capacity(open.len());
            for (l, f) in open.drain(..) {
                if l != label {
                    keep.push((l, f));
                    continue;
                }
                found = true;
                if !spec.allowed[i].contains(&f) {
                    return Err(here(Kind::DischargeError(format!(
                        "assumption {f} labelled {label} cannot be discharged at premise {} of {rule}",
                        i + 1
                    ))));
                }
            }
            *open = keep;
        }
        if !found {
            return Err(here(Kind::DischargeError(format!(
                "no open assumption labelled {label} above this node"
            ))));
        }
        discharged.insert(label);
    }

    if let Some(eigen) = &spec.eigen {
        let y = eigen.var.as_str();
        if eigen.not_in_conclusion && is_free(y, conclusion) {
            return Err(here(proviso(format!(
                "eigenvariable {y} free in the conclusion {conclusion}"
            ))));
        }
        if let Some((_, f)) = opens[eigen.premise].iter().find(|(_, f)| is_free(y, f)) {
            return Err(here(proviso(format!(
                "eigenvariable {y} free in undischarged assumption {f}"
            ))));
        }
    }

    Ok(opens.into_iter().flatten().collect())
}

struct Params<'a> {
    var: Option<&'a str>,
    term: Option<&'a Term>,
}

impl<'a> Params<'a> {
    fn new(rule: RuleId, var: Option<&'a str>, term: Option<&'a Term>) -> Result<Self, Kind> {
        match (rule.takes_var(), var) {
            (true, None) => return Err(Kind::ParameterError(format!("{rule} needs :var"))),
            (false, Some(v)) => {
                return Err(Kind::ParameterError(format!("{rule} takes no :var (got {v})")))
            }
            _ => {}
        }
        match (rule.takes_term(), term) {
            (true, None) => return Err(Kind::ParameterError(format!("{rule} needs :term"))),
            (false, Some(t)) => {
                return Err(Kind::ParameterError(format!("{rule} takes no :term (got {t})")))
            }
            _ => {}
        }
        Ok(Params { var, term })
    }

    fn var(&self) -> &'a str {
        self.var.expect("checked by Params::new")
    }

    fn term(&self) -> &'a Term {
        self.term.expect("checked by Params::new")
    }
}

struct Eigen {
    var: String,
    /// Premise whose remaining open assumptions must not mention the variable.
    premise: usize,
    not_in_conclusion: bool,
}

/// What a rule application permits beyond its pattern.
struct Spec {
    /// Dischargeable formulas per premise.
    allowed: Vec<Vec<Formula>>,
    eigen: Option<Eigen>,
}

impl Spec {
    fn plain(n: usize) -> Self {
        Spec {
            allowed: vec![Vec::new(); n],
            eigen: None,
        }
    }

    fn allow(mut self, premise: usize, formulas: Vec<Formula>) -> Self {
        self.allowed[premise] = formulas;
        self
    }

    fn eigen(mut self, var: &str, premise: usize, not_in_conclusion: bool) -> Self {
        self.eigen = Some(Eigen {
            var: var.to_string(),
            premise,
            not_in_conclusion,
        });
        self
    }
}

fn arity(rule: RuleId, prem: &[&Formula], n: usize) -> Result<(), Kind> {
    if prem.len() == n {
        Ok(())
    } else {
        Err(mismatch(format!(
            "{rule} takes {n} premise(s), got {}",
            prem.len()
        )))
    }
}

fn same(found: &Formula, expected: &Formula, what: &str) -> Result<(), Kind> {
    if found == expected {
        Ok(())
    } else {
        Err(mismatch(format!("{what}: expected {expected}, found {found}")))
    }
}

fn sub(a: &Formula, x: &str, t: &Term) -> Result<Formula, Kind> {
    Ok(substitute(a, x, t)?)
}

fn neg(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn exists_premise(t: &Term) -> Formula {
    Formula::existent(t.clone())
}

fn var_term(y: &str) -> Term {
    Term::var(y)
}

fn unneg<'f>(f: &'f Formula, what: &str) -> Result<&'f Formula, Kind> {
    match f {
        Formula::Not(a) => Ok(a),
        _ => Err(mismatch(format!("{what} must be a negation, found {f}"))),
    }
}

fn binder<'f>(f: &'f Formula, universal: bool, what: &str) -> Result<(&'f str, &'f Formula), Kind> {
    match (f, universal) {
        (Formula::Forall(x, a), true) | (Formula::Exists(x, a), false) => Ok((x, a)),
        _ => Err(mismatch(format!(
            "{what} must be {}, found {f}",
            if universal { "universal" } else { "existential" }
        ))),
    }
}

fn description<'f>(f: &'f Formula, what: &str) -> Result<(&'f str, &'f Formula, &'f Formula), Kind> {
    match f {
        Formula::Descr {
            var,
            restrictor,
            scope,
        } => Ok((var, restrictor, scope)),
        _ => Err(mismatch(format!("{what} must be a description, found {f}"))),
    }
}

/// "either y is the same as x or y is not free in A"
fn generality(y: &str, x: &str, bodies: &[&Formula]) -> Result<(), Kind> {
    if y == x || bodies.iter().all(|a| !is_free(y, a)) {
        Ok(())
    } else {
        Err(proviso(format!(
            "{y} is neither the bound variable {x} nor absent from the quantified formula"
        )))
    }
}

/// "y is different from x, not free in t"
fn distinct_eigen(y: &str, x: &str, t: &Term) -> Result<(), Kind> {
    if y == x {
        return Err(proviso(format!("{y} must differ from the bound variable {x}")));
    }
    if t.mentions_var(y) {
        return Err(proviso(format!("{y} must not be free in the term {t}")));
    }
    Ok(())
}

fn match_rule(
    rule: RuleId,
    logic: LogicId,
    c: &Formula,
    prem: &[&Formula],
    params: &Params<'_>,
) -> Result<Spec, Kind> {
    use RuleId::*;
    let free = logic.free;
    match rule {
        OrI1 | OrI2 => {
            arity(rule, prem, 1)?;
            match c {
                Formula::Or(a, b) => same(prem[0], if rule == OrI1 { a } else { b }, "disjunct")?,
                _ => return Err(mismatch(format!("conclusion must be a disjunction, found {c}"))),
            }
            Ok(Spec::plain(1))
        }
        OrE => {
            arity(rule, prem, 3)?;
            let (a, b) = match prem[0] {
                Formula::Or(a, b) => (a, b),
                f => return Err(mismatch(format!("major premise must be a disjunction, found {f}"))),
            };
            same(prem[1], c, "left case")?;
            same(prem[2], c, "right case")?;
            Ok(Spec::plain(3)
                .allow(1, vec![(**a).clone()])
                .allow(2, vec![(**b).clone()]))
        }
        ImpI => {
            arity(rule, prem, 1)?;
            match c {
                Formula::Imp(a, b) => {
                    same(prem[0], b, "consequent")?;
                    Ok(Spec::plain(1).allow(0, vec![(**a).clone()]))
                }
                _ => Err(mismatch(format!("conclusion must be an implication, found {c}"))),
            }
        }
        ImpE => {
            arity(rule, prem, 2)?;
            same(prem[0], &Formula::imp(prem[1].clone(), c.clone()), "major premise")?;
            Ok(Spec::plain(2))
        }
        AndI => {
            arity(rule, prem, 2)?;
            same(c, &Formula::and(prem[0].clone(), prem[1].clone()), "conclusion")?;
            Ok(Spec::plain(2))
        }
        AndE1 | AndE2 => {
            arity(rule, prem, 1)?;
            match prem[0] {
                Formula::And(a, b) => same(c, if rule == AndE1 { a } else { b }, "conjunct")?,
                f => return Err(mismatch(format!("premise must be a conjunction, found {f}"))),
            }
            Ok(Spec::plain(1))
        }
        NegNegI => {
            arity(rule, prem, 1)?;
            same(c, &neg(&neg(prem[0])), "conclusion")?;
            Ok(Spec::plain(1))
        }
        NegNegE => {
            arity(rule, prem, 1)?;
            same(prem[0], &neg(&neg(c)), "premise")?;
            Ok(Spec::plain(1))
        }
        NegImpI => {
            arity(rule, prem, 2)?;
            let b = unneg(prem[1], "second premise")?;
            same(c, &neg(&Formula::imp(prem[0].clone(), b.clone())), "conclusion")?;
            Ok(Spec::plain(2))
        }
        NegImpE1 | NegImpE2 => {
            arity(rule, prem, 1)?;
            match unneg(prem[0], "premise")? {
                Formula::Imp(a, b) => {
                    let want = if rule == NegImpE1 { (**a).clone() } else { neg(b) };
                    same(c, &want, "conclusion")?;
                }
                f => return Err(mismatch(format!("premise must negate an implication, found ~{f}"))),
            }
            Ok(Spec::plain(1))
        }
        NegOrI => {
            arity(rule, prem, 2)?;
            let a = unneg(prem[0], "first premise")?;
            let b = unneg(prem[1], "second premise")?;
            same(c, &neg(&Formula::or(a.clone(), b.clone())), "conclusion")?;
            Ok(Spec::plain(2))
        }
        NegOrE1 | NegOrE2 => {
            arity(rule, prem, 1)?;
            match unneg(prem[0], "premise")? {
                Formula::Or(a, b) => same(c, &neg(if rule == NegOrE1 { a } else { b }), "conclusion")?,
                f => return Err(mismatch(format!("premise must negate a disjunction, found ~{f}"))),
            }
            Ok(Spec::plain(1))
        }
        NegAndI1 | NegAndI2 => {
            arity(rule, prem, 1)?;
            match unneg(c, "conclusion")? {
                Formula::And(a, b) => {
                    same(prem[0], &neg(if rule == NegAndI1 { a } else { b }), "premise")?
                }
                f => return Err(mismatch(format!("conclusion must negate a conjunction, found ~{f}"))),
            }
            Ok(Spec::plain(1))
        }
        NegAndE => {
            arity(rule, prem, 3)?;
            let (a, b) = match unneg(prem[0], "major premise")? {
                Formula::And(a, b) => (a, b),
                f => return Err(mismatch(format!("major premise must negate a conjunction, found ~{f}"))),
            };
            same(prem[1], c, "left case")?;
            same(prem[2], c, "right case")?;
            Ok(Spec::plain(3).allow(1, vec![neg(a)]).allow(2, vec![neg(b)]))
        }

        AllI | AllIP | NegExI | NegExIP => {
            arity(rule, prem, 1)?;
            let negated = matches!(rule, NegExI | NegExIP);
            let inner = if negated { unneg(c, "conclusion")? } else { c };
            let (x, a) = binder(inner, !negated, "conclusion")?;
            let y = params.var();
            let inst = sub(a, x, &var_term(y))?;
            same(prem[0], &if negated { neg(&inst) } else { inst }, "premise")?;
            generality(y, x, &[a])?;
            let spec = Spec::plain(1).eigen(y, 0, false);
            Ok(if free {
                spec.allow(0, vec![exists_premise(&var_term(y))])
            } else {
                spec
            })
        }
        AllE | AllEP | NegExE | NegExEP => {
            arity(rule, prem, if free { 2 } else { 1 })?;
            let negated = matches!(rule, NegExE | NegExEP);
            let major = if negated { unneg(prem[0], "major premise")? } else { prem[0] };
            let (x, a) = binder(major, !negated, "major premise")?;
            let t = params.term();
            let inst = sub(a, x, t)?;
            same(c, &if negated { neg(&inst) } else { inst }, "conclusion")?;
            if free {
                same(prem[1], &exists_premise(t), "existence premise")?;
            }
            Ok(Spec::plain(prem.len()))
        }
        NegAllI | NegAllIP | ExI | ExIP => {
            arity(rule, prem, if free { 2 } else { 1 })?;
            let negated = matches!(rule, NegAllI | NegAllIP);
            let inner = if negated { unneg(c, "conclusion")? } else { c };
            let (x, a) = binder(inner, negated, "conclusion")?;
            let t = params.term();
            let inst = sub(a, x, t)?;
            same(prem[0], &if negated { neg(&inst) } else { inst }, "premise")?;
            if free {
                same(prem[1], &exists_premise(t), "existence premise")?;
            }
            Ok(Spec::plain(prem.len()))
        }
        NegAllE | NegAllEP | ExE | ExEP => {
            arity(rule, prem, 2)?;
            let negated = matches!(rule, NegAllE | NegAllEP);
            let major = if negated { unneg(prem[0], "major premise")? } else { prem[0] };
            let (x, a) = binder(major, negated, "major premise")?;
            same(prem[1], c, "minor premise")?;
            let y = params.var();
            let inst = sub(a, x, &var_term(y))?;
            generality(y, x, &[a])?;
            let mut allowed = vec![if negated { neg(&inst) } else { inst }];
            if free {
                allowed.push(exists_premise(&var_term(y)));
            }
            Ok(Spec::plain(2).allow(1, allowed).eigen(y, 1, true))
        }

        EqI => {
            arity(rule, prem, 1)?;
            match (c, prem[0]) {
                (Formula::Eq(l, r), Formula::Existent(t)) if l == r && l == t => Ok(Spec::plain(1)),
                _ => Err(mismatch(format!("expected E!(t) over t=t, found {} over {c}", prem[0]))),
            }
        }
        EqIP => {
            arity(rule, prem, 0)?;
            match c {
                Formula::Eq(l, r) if l == r => Ok(Spec::plain(0)),
                _ => Err(mismatch(format!("conclusion must be t=t, found {c}"))),
            }
        }
        EqE => {
            arity(rule, prem, 2)?;
            let (t1, t2) = match prem[0] {
                Formula::Eq(l, r) => (l, r),
                f => return Err(mismatch(format!("first premise must be an identity, found {f}"))),
            };
            let minor = prem[1];
            let admissible = match logic.base {
                Base::N4 => minor.is_literal() && c.is_literal(),
                Base::Int => minor.is_atomic() && c.is_atomic(),
            };
            if !admissible {
                return Err(proviso(match logic.base {
                    Base::N4 => "=E applies only to atomic formulas and their negations",
                    Base::Int => "=E applies only to atomic formulas",
                }));
            }
            if !replaces(minor, c, t1, t2) {
                return Err(mismatch(format!(
                    "{c} does not arise from {minor} by replacing {t1} with {t2}"
                )));
            }
            Ok(Spec::plain(2))
        }
        PD | NegPD => {
            arity(rule, prem, 1)?;
            let atom = if rule == NegPD { unneg(prem[0], "premise")? } else { prem[0] };
            let args = match atom {
                Formula::Atom { .. } | Formula::Eq(..) => atom.atomic_args().unwrap_or_default(),
                f => return Err(mismatch(format!("premise must be a predication, found {f}"))),
            };
            match c {
                Formula::Existent(t) if args.contains(&t) => Ok(Spec::plain(1)),
                _ => Err(mismatch(format!("conclusion must be E!(t) for an argument t, found {c}"))),
            }
        }

        II | IIP => {
            arity(rule, prem, if free { 4 } else { 3 })?;
            let (x, f, g) = description(c, "conclusion")?;
            let t = params.term();
            let y = params.var();
            same(prem[0], &sub(f, x, t)?, "first premise")?;
            same(prem[1], &sub(g, x, t)?, "second premise")?;
            if free {
                same(prem[2], &exists_premise(t), "existence premise")?;
            }
            let last = prem.len() - 1;
            same(prem[last], &Formula::eq(var_term(y), t.clone()), "uniqueness premise")?;
            distinct_eigen(y, x, t)?;
            let mut allowed = vec![sub(f, x, &var_term(y))?];
            if free {
                allowed.push(exists_premise(&var_term(y)));
            }
            Ok(Spec::plain(prem.len()).allow(last, allowed).eigen(y, last, false))
        }
        NegIE | NegIEP => {
            arity(rule, prem, 4)?;
            let (x, f, g) = description(unneg(prem[0], "major premise")?, "major premise")?;
            for (i, p) in prem.iter().enumerate().skip(1) {
                same(p, c, &format!("case {i}"))?;
            }
            let t = params.term();
            let y = params.var();
            let ft = sub(f, x, t)?;
            let gt = sub(g, x, t)?;
            distinct_eigen(y, x, t)?;
            let mut third = vec![
                sub(f, x, &var_term(y))?,
                neg(&Formula::eq(var_term(y), t.clone())),
            ];
            if free {
                third.push(exists_premise(&var_term(y)));
            }
            Ok(Spec::plain(4)
                .allow(1, vec![neg(&ft)])
                .allow(2, vec![neg(&gt)])
                .allow(3, third)
                .eigen(y, 3, false))
        }
        IE1 | IE1P => {
            arity(rule, prem, 2)?;
            let (x, f, g) = description(prem[0], "major premise")?;
            same(prem[1], c, "minor premise")?;
            let y = params.var();
            let mut allowed = vec![sub(f, x, &var_term(y))?, sub(g, x, &var_term(y))?];
            if free {
                allowed.push(exists_premise(&var_term(y)));
            }
            generality(y, x, &[f, g])?;
            Ok(Spec::plain(2).allow(1, allowed).eigen(y, 1, true))
        }
        IE2 | IE2P => {
            arity(rule, prem, if free { 5 } else { 3 })?;
            let (x, f, _) = description(prem[0], "major premise")?;
            let (t1, t2) = match c {
                Formula::Eq(l, r) => (l, r),
                _ => return Err(mismatch(format!("conclusion must be an identity, found {c}"))),
            };
            let mut rest = &prem[1..];
            if free {
                same(rest[0], &exists_premise(t1), "first existence premise")?;
                same(rest[1], &exists_premise(t2), "second existence premise")?;
                rest = &rest[2..];
            }
            same(rest[0], &sub(f, x, t1)?, "first restrictor premise")?;
            same(rest[1], &sub(f, x, t2)?, "second restrictor premise")?;
            Ok(Spec::plain(prem.len()))
        }
        NegII1 | NegII2 => {
            arity(rule, prem, 1)?;
            let (x, f, g) = description(unneg(c, "conclusion")?, "conclusion")?;
            let y = params.var();
            let body = if rule == NegII1 { f } else { g };
            same(prem[0], &neg(&sub(body, x, &var_term(y))?), "premise")?;
            generality(y, x, &[f, g])?;
            Ok(Spec::plain(1))
        }
        NegII3 | NegII3P => {
            arity(rule, prem, if free { 5 } else { 3 })?;
            let (x, f, _) = description(unneg(c, "conclusion")?, "conclusion")?;
            let (t1, t2) = match unneg(prem[0], "first premise")? {
                Formula::Eq(l, r) => (l, r),
                p => return Err(mismatch(format!("first premise must be a negated identity, found ~{p}"))),
            };
            let mut rest = &prem[1..];
            if free {
                same(rest[0], &exists_premise(t1), "first existence premise")?;
                same(rest[1], &exists_premise(t2), "second existence premise")?;
                rest = &rest[2..];
            }
            same(rest[0], &sub(f, x, t1)?, "first restrictor premise")?;
            same(rest[1], &sub(f, x, t2)?, "second restrictor premise")?;
            Ok(Spec::plain(prem.len()))
        }
        BotE => {
            arity(rule, prem, 1)?;
            same(prem[0], &Formula::Bot, "premise")?;
            Ok(Spec::plain(1))
        }
    }
}

/// Whether `to` is `from` with some occurrences of `t1` replaced by `t2`:
/// same literal shape, and argument positions either agree or go t1 to t2.
fn replaces(from: &Formula, to: &Formula, t1: &Term, t2: &Term) -> bool {
    match (from, to) {
        (Formula::Not(a), Formula::Not(b)) => replaces(a, b, t1, t2),
        (Formula::Atom { pred: p, args: a }, Formula::Atom { pred: q, args: b }) => {
            p == q && positions(a.iter(), b.iter(), a.len(), b.len(), t1, t2)
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
            positions([a1, a2].into_iter(), [b1, b2].into_iter(), 2, 2, t1, t2)
        }
        (Formula::Existent(a), Formula::Existent(b)) => {
            positions(std::iter::once(a), std::iter::once(b), 1, 1, t1, t2)
        }
        (Formula::Bot, Formula::Bot) => true,
        _ => false,
    }
}

fn positions<'a>(
    a: impl Iterator<Item = &'a Term>,
    b: impl Iterator<Item = &'a Term>,
    la: usize,
    lb: usize,
    t1: &Term,
    t2: &Term,
) -> bool {
    la == lb && a.zip(b).all(|(s, u)| s == u || (s == t1 && u == t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::proof::parse_script;

    fn run(text: &str) -> Result<Sequent, CheckError> {
        let s = parse_script(text).unwrap();
        check_proof(&s.proof, s.logic)
    }

    fn class(text: &str) -> ErrorClass {
        run(text).unwrap_err().kind.class()
    }

    #[test]
    fn single_assumption() {
        let s = run("(proof N4 (assume 1 P(a)))").unwrap();
        assert_eq!(s.to_seq(), "P(a) |- P(a)");
    }

    #[test]
    fn implication_discharge() {
        let s = run("(proof INT (impI P(a) -> P(a) :discharge (1) (assume 1 P(a))))").unwrap();
        assert!(s.assumptions.is_empty());
    }

    #[test]
    fn vacuous_labels_are_errors() {
        assert_eq!(
            class("(proof INT (impI Q(a) -> P(a) :discharge (2) (assume 1 P(a))))"),
            ErrorClass::DischargeError
        );
        assert_eq!(
            class("(proof INT (impI Q(a) -> P(a) :discharge (1) (assume 1 P(a))))"),
            ErrorClass::DischargeError
        );
    }

    #[test]
    fn vacuous_implication_without_labels() {
        let s = run("(proof INT (impI Q(a) -> P(a) (assume 1 P(a))))").unwrap();
        assert_eq!(s.assumptions.len(), 1);
    }

    #[test]
    fn negated_implication() {
        let s = run("(proof N4 (negimpI ~(P(a) -> Q(a)) (assume 1 P(a)) (assume 2 ~Q(a))))").unwrap();
        assert_eq!(s.assumptions.len(), 2);
        assert_eq!(
            class("(proof N4 (negimpI ~(Q(a) -> P(a)) (assume 1 P(a)) (assume 2 ~Q(a))))"),
            ErrorClass::PatternMismatch
        );
    }

    #[test]
    fn universal_generalisation_provisos() {
        assert!(run("(proof N4 (allI' forall x.P(x) -> P(x) :var y (impI P(y) -> P(y) :discharge (1) (assume 1 P(y)))))").is_ok());
        assert_eq!(
            class("(proof N4 (allI' forall x.P(x) :var y (assume 1 P(y))))"),
            ErrorClass::ProvisoViolation
        );
        // A free E!y that is not discharged still blocks generalisation.
        assert_eq!(
            class("(proof N4F (allI forall x.E!(x) :var y (assume 1 E!(y))))"),
            ErrorClass::ProvisoViolation
        );
        assert!(run("(proof N4F (allI forall x.E!(x) :var y :discharge (1) (assume 1 E!(y))))").is_ok());
    }

    #[test]
    fn identity_elimination() {
        let ok = "(proof N4 (eqE ~P(b,a) (assume 1 a=b) (assume 2 ~P(a,a))))";
        assert!(run(ok).is_ok());
        let nonliteral = "(proof N4 (eqE P(b) & Q(b) (assume 1 a=b) (assume 2 P(a) & Q(a))))";
        assert_eq!(class(nonliteral), ErrorClass::ProvisoViolation);
        let int_negated = "(proof INT (eqE P(b) -> bot (assume 1 a=b) (assume 2 P(a) -> bot)))";
        assert_eq!(class(int_negated), ErrorClass::ProvisoViolation);
        let wrong = "(proof N4 (eqE P(c) (assume 1 a=b) (assume 2 P(a))))";
        assert_eq!(class(wrong), ErrorClass::PatternMismatch);
    }

    #[test]
    fn catalog_is_enforced_before_language() {
        assert_eq!(
            class("(proof INT (negnegE P(a) (assume 1 ~~P(a))))"),
            ErrorClass::RuleNotInLogic
        );
        assert_eq!(
            class("(proof INT (andE1 P(a) (assume 1 ~P(a) & P(a))))"),
            ErrorClass::LanguageViolation
        );
    }

    #[test]
    fn parameters_are_required_and_exclusive() {
        assert_eq!(
            class("(proof N4 (allE' P(a) (assume 1 forall x.P(x))))"),
            ErrorClass::ParameterError
        );
        assert_eq!(
            class("(proof N4 (andE1 P(a) :term a (assume 1 P(a) & P(a))))"),
            ErrorClass::ParameterError
        );
    }

    #[test]
    fn capture_is_reported() {
        assert_eq!(
            class("(proof N4 (allE' exists y.R(y,y) :term y (assume 1 forall x.exists y.R(x,y))))"),
            ErrorClass::SubstitutionError
        );
    }

    #[test]
    fn predicate_denotation() {
        assert!(run("(proof N4F (negPD E!(b) (assume 1 ~R(a,b))))").is_ok());
        assert!(run("(proof INTF (PD E!(a) (assume 1 a=b)))").is_ok());
        assert_eq!(
            class("(proof N4F (PD E!(c) (assume 1 R(a,b))))"),
            ErrorClass::PatternMismatch
        );
    }

    #[test]
    fn error_paths_point_at_the_node() {
        let err = run("(proof N4 (andI P(a) & Q(a) (assume 1 P(a)) (andE1 Q(a) (assume 2 P(a) & Q(a)))))")
            .unwrap_err();
        assert_eq!(err.path, vec![1]);
        assert_eq!(err.path_string(), "root.1");
    }
}
