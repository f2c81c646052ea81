use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::formula::{injected_index, Formula, Term, PRIMED_EXISTENCE, PRIMED_IDENTITY};

/// Which negation-like primitive the language has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Language {
    /// Strong negation `~`, no falsum.
    Negation,
    /// Falsum `bot`, no negation.
    Falsum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub predicates: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
    /// Enables `E!`.
    pub free: bool,
    /// Admits primed predicate copies `P'`, `='` and `E!'`.
    pub primed: bool,
    pub language: Language,
    /// Admits `I x[F,G]`.
    pub descriptions: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("predicate {name} has arity {declared}, used with {used} arguments")]
    ArityMismatch {
        name: String,
        declared: usize,
        used: usize,
    },
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("strong negation does not belong to the falsum language")]
    NegationInFalsumLanguage,
    #[error("falsum does not belong to the strong-negation language")]
    FalsumInNegationLanguage,
    #[error("E! is only available in free logics")]
    ExistenceNotFree,
    #[error("the description quantifier I is not part of this language")]
    DescriptionNotAllowed,
    #[error("primed predicate {0} needs the primed extension of the signature")]
    PrimedNotAllowed(String),
    #[error("{0} is built in and cannot be declared")]
    BuiltinDeclared(String),
    #[error("{0} is reserved for injected constants")]
    ReservedConstant(String),
}

impl Signature {
    pub fn new(language: Language) -> Self {
        Signature {
            predicates: BTreeMap::new(),
            constants: BTreeSet::new(),
            free: false,
            primed: false,
            language,
            descriptions: false,
        }
    }

    pub fn with_free(mut self, free: bool) -> Self {
        self.free = free;
        self
    }

    pub fn with_descriptions(mut self, on: bool) -> Self {
        self.descriptions = on;
        self
    }

    pub fn with_primed(mut self, on: bool) -> Self {
        self.primed = on;
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.declare_predicate(name, arity)
            .expect("valid predicate declaration");
        self
    }

    pub fn with_constant(mut self, name: &str) -> Self {
        self.declare_constant(name).expect("valid constant");
        self
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if name == "=" || name == "E!" || name == PRIMED_IDENTITY || name == PRIMED_EXISTENCE {
            return Err(SignatureError::BuiltinDeclared(name.to_string()));
        }
        if name.ends_with('\'') && !self.primed {
            return Err(SignatureError::PrimedNotAllowed(name.to_string()));
        }
        match self.predicates.get(name) {
            Some(&declared) if declared != arity => Err(SignatureError::ArityMismatch {
                name: name.to_string(),
                declared,
                used: arity,
            }),
            _ => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn declare_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        if injected_index(name).is_some() {
            return Err(SignatureError::ReservedConstant(name.to_string()));
        }
        self.constants.insert(name.to_string());
        Ok(())
    }

    /// Arity of a predicate symbol, built-ins included.
    pub fn arity(&self, name: &str) -> Option<usize> {
        match name {
            PRIMED_IDENTITY if self.primed => Some(2),
            PRIMED_EXISTENCE if self.primed => Some(1),
            _ => self.predicates.get(name).copied(),
        }
    }

    /// The same signature with `P'` added for every predicate `P`.
    pub fn primed_extension(&self) -> Signature {
        let mut out = self.clone();
        out.primed = true;
        out.language = Language::Falsum;
        for (name, &arity) in &self.predicates {
            if !name.ends_with('\'') {
                out.predicates.insert(format!("{name}'"), arity);
            }
        }
        out
    }

    /// Checks every language-tag and arity constraint of `a`.
    pub fn check(&self, a: &Formula) -> Result<(), SignatureError> {
        match a {
            Formula::Atom { pred, args } => {
                if pred.ends_with('\'') && !self.primed {
                    return Err(SignatureError::PrimedNotAllowed(pred.clone()));
                }
                if pred == PRIMED_EXISTENCE && !self.free {
                    return Err(SignatureError::ExistenceNotFree);
                }
                let declared = self
                    .arity(pred)
                    .ok_or_else(|| SignatureError::UnknownPredicate(pred.clone()))?;
                if declared != args.len() {
                    return Err(SignatureError::ArityMismatch {
                        name: pred.clone(),
                        declared,
                        used: args.len(),
                    });
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
            Formula::Eq(l, r) => {
                self.check_term(l)?;
                self.check_term(r)
            }
            Formula::Existent(t) => {
                if !self.free {
                    return Err(SignatureError::ExistenceNotFree);
                }
                self.check_term(t)
            }
            Formula::Bot => match self.language {
                Language::Falsum => Ok(()),
                Language::Negation => Err(SignatureError::FalsumInNegationLanguage),
            },
            Formula::Not(b) => match self.language {
                Language::Negation => self.check(b),
                Language::Falsum => Err(SignatureError::NegationInFalsumLanguage),
            },
            Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) => {
                self.check(b)?;
                self.check(c)
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => self.check(b),
            Formula::Descr {
                restrictor, scope, ..
            } => {
                if !self.descriptions {
                    return Err(SignatureError::DescriptionNotAllowed);
                }
                self.check(restrictor)?;
                self.check(scope)
            }
        }
    }

    fn check_term(&self, t: &Term) -> Result<(), SignatureError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) if injected_index(c).is_some() || self.constants.contains(c) => Ok(()),
            Term::Const(c) => Err(SignatureError::UnknownConstant(c.clone())),
        }
    }

    /// Adds the predicates and constants of `a` (no language checks).
    pub fn absorb(&mut self, a: &Formula) -> Result<(), SignatureError> {
        for (name, arity) in a.predicates() {
            if name == PRIMED_IDENTITY || name == PRIMED_EXISTENCE {
                continue;
            }
            self.declare_predicate(&name, arity)?;
        }
        for c in a.constants() {
            if injected_index(&c).is_none() {
                self.constants.insert(c);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn language_tags_are_enforced() {
        let neg = Signature::new(Language::Negation).with_predicate("P", 1).with_constant("a");
        let p = Formula::atom("P", vec![Term::constant("a")]);
        assert!(neg.check(&Formula::not(p.clone())).is_ok());
        assert_eq!(
            neg.check(&Formula::imp(p.clone(), Formula::Bot)),
            Err(SignatureError::FalsumInNegationLanguage)
        );
        let bot = Signature::new(Language::Falsum).with_predicate("P", 1).with_constant("a");
        assert_eq!(
            bot.check(&Formula::not(p.clone())),
            Err(SignatureError::NegationInFalsumLanguage)
        );
        assert_eq!(
            neg.check(&Formula::existent(Term::constant("a"))),
            Err(SignatureError::ExistenceNotFree)
        );
    }

    #[test]
    fn primed_names_need_the_extension() {
        let mut sig = Signature::new(Language::Falsum);
        assert_eq!(
            sig.declare_predicate("P'", 1),
            Err(SignatureError::PrimedNotAllowed("P'".into()))
        );
        sig.primed = true;
        assert!(sig.declare_predicate("P'", 1).is_ok());
        assert!(sig.declare_predicate("=", 2).is_err());
    }

    #[test]
    fn extension_copies_every_predicate() {
        let sig = Signature::new(Language::Negation)
            .with_predicate("P", 1)
            .with_predicate("R", 2);
        let ext = sig.primed_extension();
        assert_eq!(ext.arity("P'"), Some(1));
        assert_eq!(ext.arity("R'"), Some(2));
        assert_eq!(ext.arity("='"), Some(2));
        assert_eq!(ext.language, Language::Falsum);
    }

    #[test]
    fn injected_constants_are_reserved() {
        let mut sig = Signature::new(Language::Negation);
        assert!(sig.declare_constant("k3").is_err());
        assert!(sig.declare_constant("k").is_ok());
        assert!(sig.declare_constant("kite").is_ok());
    }
}
