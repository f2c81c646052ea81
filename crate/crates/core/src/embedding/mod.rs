//! The negation-eliminating translation from the strong-negation language
//! into the falsum language, and the matching model constructions.
//!
//! A strongly negated atom `~P(t)` becomes `P'(t)`, a fresh predicate of the
//! same arity. Identity and existence get the built-in copies `='` and `E!'`.
//! Negation is pushed inward through the other connectives by the usual
//! de Morgan style clauses, so the output is negation-free.
//!
//! `I x[F,G]` translates homomorphically. A description under strong negation
//! has no translation and is reported as [`EmbeddingError::UnsupportedConnective`].

use thiserror::Error;

use crate::semantics::{Extension, KripkeModel, Kind, Predicate};
use crate::syntax::{print, Formula, Language, Signature, SignatureError, PRIMED_EXISTENCE, PRIMED_IDENTITY};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("no translation for {0}")]
    UnsupportedConnective(String),
    #[error("falsum is not part of the strong-negation language")]
    Falsum,
    #[error("primed predicate {0} in the source formula")]
    PrimedInSource(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("expected a {wanted} model, got a {found} one")]
    KindMismatch { wanted: Kind, found: Kind },
}

/// Name of the primed copy of `pred`.
pub fn primed(pred: &str) -> String {
    format!("{pred}'")
}

/// Source signature and its primed extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationContext {
    pub source: Signature,
    pub target: Signature,
}

impl TranslationContext {
    pub fn new(source: Signature) -> Self {
        let target = source.primed_extension();
        TranslationContext { source, target }
    }

    /// Checks `a` against the source signature, then translates it.
    pub fn translate(&self, a: &Formula) -> Result<Formula, EmbeddingError> {
        self.source.check(a)?;
        let out = tau(a)?;
        debug_assert!(self.target.check(&out).is_ok(), "{}", print(&out));
        Ok(out)
    }
}

/// Infers a context from the formula itself.
pub fn context_of(a: &Formula) -> Result<TranslationContext, EmbeddingError> {
    let mut sig = Signature::new(Language::Negation)
        .with_free(a.contains_existence())
        .with_descriptions(a.contains_description());
    sig.absorb(a)?;
    Ok(TranslationContext::new(sig))
}

pub fn tau(a: &Formula) -> Result<Formula, EmbeddingError> {
    use Formula::*;
    Ok(match a {
        Atom { pred, .. } if pred.ends_with('\'') => return Err(EmbeddingError::PrimedInSource(pred.clone())),
        Atom { .. } | Eq(..) | Existent(_) => a.clone(),
        Bot => return Err(EmbeddingError::Falsum),
        Not(b) => tau_neg(b)?,
        And(b, c) => Formula::and(tau(b)?, tau(c)?),
        Or(b, c) => Formula::or(tau(b)?, tau(c)?),
        Imp(b, c) => Formula::imp(tau(b)?, tau(c)?),
        Forall(x, b) => Formula::forall(x.clone(), tau(b)?),
        Exists(x, b) => Formula::exists(x.clone(), tau(b)?),
        Descr { var, restrictor, scope } => Formula::descr(var.clone(), tau(restrictor)?, tau(scope)?),
    })
}

/// `tau(~a)`.
fn tau_neg(a: &Formula) -> Result<Formula, EmbeddingError> {
    use Formula::*;
    let neg = |b: &Formula| tau(&Formula::not(b.clone()));
    Ok(match a {
        Atom { pred, .. } if pred.ends_with('\'') => return Err(EmbeddingError::PrimedInSource(pred.clone())),
        Atom { pred, args } => Formula::atom(primed(pred), args.clone()),
        Eq(s, t) => Formula::atom(PRIMED_IDENTITY, vec![s.clone(), t.clone()]),
        Existent(t) => Formula::atom(PRIMED_EXISTENCE, vec![t.clone()]),
        Bot => return Err(EmbeddingError::Falsum),
        Not(b) => tau(b)?,
        Imp(b, c) => Formula::and(tau(b)?, neg(c)?),
        And(b, c) => Formula::or(neg(b)?, neg(c)?),
        Or(b, c) => Formula::and(neg(b)?, neg(c)?),
        Forall(x, b) => Formula::exists(x.clone(), neg(b)?),
        Exists(x, b) => Formula::forall(x.clone(), neg(b)?),
        Descr { .. } => {
            return Err(EmbeddingError::UnsupportedConnective(format!(
                "negated description {}",
                print(&Formula::not(a.clone()))
            )))
        }
    })
}

/// Turns a Nelsonian model into an intuitionistic one over the primed
/// signature: `P'` at `w` is `~P` at `w`, the `~=` extension becomes `='`.
/// The frame, intensions, domains and constants are unchanged.
pub fn pair_model(n: &KripkeModel) -> Result<KripkeModel, EmbeddingError> {
    pair_model_with(n, |_, ext| ext.clone())
}

/// [`pair_model`] with a hook applied to each `(predicate, ~P extension)`
/// before it becomes `P'`. Used to inject faults in tests.
pub fn pair_model_with(
    n: &KripkeModel,
    mut neg_to_primed: impl FnMut(&str, &Extension) -> Extension,
) -> Result<KripkeModel, EmbeddingError> {
    if n.kind != Kind::Nelsonian {
        return Err(EmbeddingError::KindMismatch {
            wanted: Kind::Nelsonian,
            found: n.kind,
        });
    }
    let mut out = n.clone();
    out.kind = Kind::Intuitionistic;
    out.predicates.clear();
    for p in &n.predicates {
        let empty = vec![Extension::new(); n.worlds.len()];
        out.predicates.push(Predicate {
            name: p.name.clone(),
            arity: p.arity,
            pos: p.pos.clone(),
            neg: empty.clone(),
        });
        out.predicates.push(Predicate {
            name: primed(&p.name),
            arity: p.arity,
            pos: p.neg.iter().map(|e| neg_to_primed(&p.name, e)).collect(),
            neg: empty,
        });
    }
    Ok(out)
}

/// The inverse of [`pair_model`]: `~P` at `w` is read off `P'`. A primed
/// predicate without its base gets a base with empty positive extension.
pub fn unpair_model(i: &KripkeModel) -> Result<KripkeModel, EmbeddingError> {
    if i.kind != Kind::Intuitionistic {
        return Err(EmbeddingError::KindMismatch {
            wanted: Kind::Intuitionistic,
            found: i.kind,
        });
    }
    let nw = i.worlds.len();
    let mut out = i.clone();
    out.kind = Kind::Nelsonian;
    out.predicates.clear();
    for p in &i.predicates {
        let base = p.name.strip_suffix('\'').unwrap_or(&p.name);
        if out.predicate(base).is_none() {
            out.predicates.push(Predicate::new(base, p.arity, nw));
        }
        let q = out.predicate_mut(base).expect("present");
        if p.name.ends_with('\'') {
            q.neg = p.pos.clone();
        } else {
            q.pos = p.pos.clone();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_int, eval_nelson, validate_model, Environment};
    use crate::syntax::parse_formula_inferring;

    fn f(text: &str) -> Formula {
        let mut sig = Signature::new(Language::Negation).with_free(true).with_descriptions(true);
        parse_formula_inferring(text, &mut sig).unwrap()
    }

    fn t(text: &str) -> String {
        print(&tau(&f(text)).unwrap())
    }

    #[test]
    fn defining_clauses() {
        assert_eq!(t("~(P(a) -> Q(a))"), "P(a) & Q'(a)");
        assert_eq!(t("~~P(a)"), "P(a)");
        assert_eq!(t("~forall x.P(x)"), "exists x.P'(x)");
        assert_eq!(t("~exists x.P(x)"), "forall x.P'(x)");
        assert_eq!(t("~(P(a) & Q(a))"), "P'(a) | Q'(a)");
        assert_eq!(t("~(P(a) | Q(a))"), "P'(a) & Q'(a)");
        assert_eq!(t("~a=b"), "a='b");
        assert_eq!(t("~E!(a)"), "E!'(a)");
        assert_eq!(t("P(a) -> ~~~Q(a)"), "P(a) -> Q'(a)");
    }

    #[test]
    fn descriptions() {
        assert_eq!(t("I x[P(x), ~Q(x)]"), "I x[P(x),Q'(x)]");
        let err = tau(&f("~I x[P(x), Q(x)]")).unwrap_err();
        assert!(matches!(err, EmbeddingError::UnsupportedConnective(_)));
        assert!(tau(&f("P(a) & ~~I x[P(x), Q(x)]")).is_ok());
    }

    #[test]
    fn source_checks() {
        let ctx = context_of(&f("~P(a)")).unwrap();
        assert_eq!(ctx.target.arity("P'"), Some(1));
        assert!(matches!(tau(&Formula::Bot), Err(EmbeddingError::Falsum)));
        let primed = Formula::atom("P'", vec![crate::syntax::Term::constant("a")]);
        assert!(matches!(tau(&primed), Err(EmbeddingError::PrimedInSource(_))));
    }

    fn glut() -> KripkeModel {
        let mut m = KripkeModel::skeleton(Kind::Nelsonian, false, 2, 2);
        m.relate(0, 1);
        let d = m.add_intension("d", vec![0, 0]);
        m.add_intension("e", vec![1, 1]);
        m.constants.push(("a".into(), d));
        m.add_predicate("P", 1);
        let p = m.predicate_mut("P").unwrap();
        p.pos[0].insert(vec![0]);
        p.pos[1].insert(vec![0]);
        p.neg[1].insert(vec![0]);
        p.neg[1].insert(vec![1]);
        m.neg_eq[1].insert(vec![0, 1]);
        m.neg_eq[1].insert(vec![1, 0]);
        m
    }

    #[test]
    fn pairing_copies_negative_extensions() {
        let n = glut();
        assert!(validate_model(&n).is_empty(), "{:?}", validate_model(&n));
        let i = pair_model(&n).unwrap();
        assert_eq!(i.kind, Kind::Intuitionistic);
        assert!(validate_model(&i).is_empty(), "{:?}", validate_model(&i));
        assert_eq!(i.predicate("P'").unwrap().pos, n.predicate("P").unwrap().neg);
        assert!(i.predicates.iter().all(|p| p.neg.iter().all(|e| e.is_empty())));
        assert_eq!(unpair_model(&i).unwrap(), n);
        assert_eq!(pair_model(&unpair_model(&i).unwrap()).unwrap(), i);
    }

    #[test]
    fn empty_primed_means_nothing_false() {
        let mut i = KripkeModel::skeleton(Kind::Intuitionistic, false, 1, 1);
        i.add_intension("d", vec![0]);
        i.add_predicate("P", 1);
        i.add_predicate("P'", 1);
        i.predicate_mut("P").unwrap().pos[0].insert(vec![0]);
        let n = unpair_model(&i).unwrap();
        assert!(validate_model(&n).is_empty());
        assert!(n.predicates.iter().all(|p| p.neg.iter().all(|e| e.is_empty())));
        assert_eq!(n.predicates.len(), 1);
    }

    #[test]
    fn pairing_preserves_truth() {
        let n = glut();
        let i = pair_model(&n).unwrap();
        let env = Environment::of(&n);
        for text in [
            "~P(a)",
            "P(a) & ~P(a)",
            "forall x.(P(x) | ~P(x))",
            "~exists x.~P(x)",
            "~forall x.~x=a",
            "~(P(a) -> exists x.~x=a)",
            "exists x.(~P(x) & ~~P(x))",
        ] {
            let c = f(text);
            for w in 0..2 {
                assert_eq!(
                    eval_nelson(&n, w, &c, &env).unwrap(),
                    eval_int(&i, w, &tau(&c).unwrap(), &env).unwrap(),
                    "{text} at {w}"
                );
            }
        }
    }

    #[test]
    fn kind_is_checked() {
        let n = glut();
        assert!(matches!(unpair_model(&n), Err(EmbeddingError::KindMismatch { .. })));
        let i = pair_model(&n).unwrap();
        assert!(matches!(pair_model(&i), Err(EmbeddingError::KindMismatch { .. })));
    }
}
