//! Terms and formulas of the object languages.
//!
//! One AST covers the strong-negation language, the falsum language and their
//! extensions by the binary description quantifier `I x[F,G]`. Which
//! constructors are admissible is decided by a [`Signature`](super::Signature),
//! not by the type.

use std::collections::BTreeSet;
use std::fmt;

/// Name of the primed copy of identity used by the embedding.
pub const PRIMED_IDENTITY: &str = "='";
/// Name of the primed copy of the existence predicate used by the embedding.
pub const PRIMED_EXISTENCE: &str = "E!'";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    /// The reserved constant `k{index}` naming model intension `index`.
    pub fn injected(index: usize) -> Self {
        Term::Const(format!("k{index}"))
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Index `d` if this is an injected constant `k_d`.
    pub fn injected_index(&self) -> Option<usize> {
        match self {
            Term::Const(n) => injected_index(n),
            Term::Var(_) => None,
        }
    }

    pub fn mentions_var(&self, x: &str) -> bool {
        matches!(self, Term::Var(v) if v == x)
    }
}

/// Parses `k<digits>` into its index.
pub fn injected_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('k')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // `k01` is not the printed form of any index.
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// `P(t1,...,tn)`; also carries the primed built-ins `='` and `E!'`.
    Atom { pred: String, args: Vec<Term> },
    Eq(Term, Term),
    /// `E!t`
    Existent(Term),
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// `I x[F,G]`: the `F` is `G`. `var` binds in both arguments.
    Descr {
        var: String,
        restrictor: Box<Formula>,
        scope: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    pub fn existent(t: Term) -> Self {
        Formula::Existent(t)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, a: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(a))
    }

    pub fn exists(x: impl Into<String>, a: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(a))
    }

    pub fn descr(x: impl Into<String>, restrictor: Formula, scope: Formula) -> Self {
        Formula::Descr {
            var: x.into(),
            restrictor: Box::new(restrictor),
            scope: Box::new(scope),
        }
    }

    /// Atomic in the sense of the identity rules: predicates, `=`, `E!`.
    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Atom { .. } | Formula::Eq(..) | Formula::Existent(_)
        )
    }

    /// An atomic formula or the strong negation of one.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(inner) => inner.is_atomic(),
            other => other.is_atomic(),
        }
    }

    /// Arguments of an atomic formula in positional order.
    pub fn atomic_args(&self) -> Option<Vec<&Term>> {
        match self {
            Formula::Atom { args, .. } => Some(args.iter().collect()),
            Formula::Eq(l, r) => Some(vec![l, r]),
            Formula::Existent(t) => Some(vec![t]),
            _ => None,
        }
    }

    /// Number of connectives, quantifiers and descriptions.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Eq(..) | Formula::Existent(_) | Formula::Bot => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Descr {
                restrictor, scope, ..
            } => 1 + restrictor.size() + scope.size(),
        }
    }

    pub fn contains_negation(&self) -> bool {
        self.any_subformula(&|f| matches!(f, Formula::Not(_)))
    }

    pub fn contains_bot(&self) -> bool {
        self.any_subformula(&|f| matches!(f, Formula::Bot))
    }

    pub fn contains_description(&self) -> bool {
        self.any_subformula(&|f| matches!(f, Formula::Descr { .. }))
    }

    pub fn contains_existence(&self) -> bool {
        self.any_subformula(&|f| {
            matches!(f, Formula::Existent(_))
                || matches!(f, Formula::Atom { pred, .. } if pred == PRIMED_EXISTENCE)
        })
    }

    pub fn any_subformula(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Formula::Atom { .. } | Formula::Eq(..) | Formula::Existent(_) | Formula::Bot => false,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.any_subformula(pred),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.any_subformula(pred) || b.any_subformula(pred)
            }
            Formula::Descr {
                restrictor, scope, ..
            } => restrictor.any_subformula(pred) || scope.any_subformula(pred),
        }
    }

    /// Every term occurring anywhere in the formula, including under binders.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.collect_terms(&mut out);
        out
    }

    fn collect_terms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            Formula::Atom { args, .. } => out.extend(args.iter()),
            Formula::Eq(l, r) => {
                out.push(l);
                out.push(r);
            }
            Formula::Existent(t) => out.push(t),
            Formula::Bot => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.collect_terms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_terms(out);
                b.collect_terms(out);
            }
            Formula::Descr {
                restrictor, scope, ..
            } => {
                restrictor.collect_terms(out);
                scope.collect_terms(out);
            }
        }
    }

    /// Constant names occurring in the formula.
    pub fn constants(&self) -> BTreeSet<String> {
        self.terms()
            .into_iter()
            .filter(|t| !t.is_var())
            .map(|t| t.name().to_string())
            .collect()
    }

    /// Every variable name occurring free, bound or as a binder.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self
            .terms()
            .into_iter()
            .filter(|t| t.is_var())
            .map(|t| t.name().to_string())
            .collect();
        self.collect_binders(&mut out);
        out
    }

    fn collect_binders(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                out.insert(x.clone());
                a.collect_binders(out);
            }
            Formula::Descr {
                var,
                restrictor,
                scope,
            } => {
                out.insert(var.clone());
                restrictor.collect_binders(out);
                scope.collect_binders(out);
            }
            Formula::Not(a) => a.collect_binders(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_binders(out);
                b.collect_binders(out);
            }
            _ => {}
        }
    }

    /// Predicate symbols with their arities (built-ins `=` and `E!` excluded).
    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.collect_predicates(&mut out);
        out
    }

    fn collect_predicates(&self, out: &mut BTreeSet<(String, usize)>) {
        match self {
            Formula::Atom { pred, args } => {
                out.insert((pred.clone(), args.len()));
            }
            Formula::Eq(..) | Formula::Existent(_) | Formula::Bot => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.collect_predicates(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_predicates(out);
                b.collect_predicates(out);
            }
            Formula::Descr {
                restrictor, scope, ..
            } => {
                restrictor.collect_predicates(out);
                scope.collect_predicates(out);
            }
        }
    }
}

/// A variable name not in `avoid`, preferring `base` itself.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded supply of names")
}
