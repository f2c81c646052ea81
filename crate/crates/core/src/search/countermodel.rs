use std::fmt;

use crate::semantics::{holds_sequent, validate_model, write_model, CompiledSequent, Environment, KripkeModel};
use crate::syntax::Formula;

use super::{enumerate_models, Bounds, SearchError};

/// Outcome of a bounded countermodel search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    CountermodelFound {
        model: KripkeModel,
        world: usize,
        /// Values of the free variables, if the sequent has any.
        assignment: Vec<(String, usize)>,
        bounds: Bounds,
        /// Models looked at, this one included.
        examined: u64,
    },
    NoCountermodelWithinBounds {
        bounds: Bounds,
        examined: u64,
    },
}

impl Verdict {
    pub fn found(&self) -> bool {
        matches!(self, Verdict::CountermodelFound { .. })
    }

    pub fn model(&self) -> Option<&KripkeModel> {
        match self {
            Verdict::CountermodelFound { model, .. } => Some(model),
            Verdict::NoCountermodelWithinBounds { .. } => None,
        }
    }
}

impl fmt::Display for Verdict {
    /// The found model is written in the model file format after a summary
    /// line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CountermodelFound {
                model,
                world,
                assignment,
                bounds,
                examined,
            } => {
                write!(
                    f,
                    "countermodel found at world {} after {examined} models ({bounds})",
                    model.worlds[*world]
                )?;
                for (x, d) in assignment {
                    write!(f, " {x}={}", model.intensions[*d].name)?;
                }
                write!(f, "\n{}", write_model(model))
            }
            Verdict::NoCountermodelWithinBounds { bounds, examined } => {
                write!(f, "no countermodel within bounds ({bounds}); {examined} models examined")
            }
        }
    }
}

/// Looks for a model in `b` with a world where every assumption holds and
/// the conclusion fails. Free variables are read universally.
///
/// A found model is validated and the sequent re-evaluated from scratch
/// before it is returned.
pub fn find_countermodel(assumptions: &[Formula], conclusion: &Formula, b: &Bounds) -> Result<Verdict, SearchError> {
    b.check()?;
    let mut compiled: Option<CompiledSequent> = None;
    let mut examined = 0u64;
    for m in enumerate_models(b) {
        examined += 1;
        let seq = match compiled.take() {
            Some(c) if c.fits(&m) => c,
            _ => CompiledSequent::new(&m, assumptions, conclusion, &Environment::of(&m))?,
        };
        if let Some(fal) = seq.falsify(&m) {
            let violations = validate_model(&m);
            if !violations.is_empty() {
                return Err(SearchError::Replay(format!("emitted an invalid model: {}", violations[0])));
            }
            if holds_sequent(&m, assumptions, conclusion, &Environment::of(&m))? {
                return Err(SearchError::Replay("countermodel does not replay".into()));
            }
            return Ok(Verdict::CountermodelFound {
                model: m,
                world: fal.world,
                assignment: fal.assignment,
                bounds: b.clone(),
                examined,
            });
        }
        compiled = Some(seq);
    }
    Ok(Verdict::NoCountermodelWithinBounds {
        bounds: b.clone(),
        examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval, Kind};
    use crate::syntax::{parse_formula_inferring, Language, Signature};

    fn f(text: &str, language: Language) -> Formula {
        let mut sig = Signature::new(language).with_descriptions(true).with_free(true);
        parse_formula_inferring(text, &mut sig).unwrap()
    }

    fn search(kind: Kind, worlds: usize, objects: usize, assumptions: &[&str], conclusion: &str) -> Verdict {
        let language = match kind {
            Kind::Nelsonian => Language::Negation,
            Kind::Intuitionistic => Language::Falsum,
        };
        let assumptions: Vec<Formula> = assumptions.iter().map(|a| f(a, language)).collect();
        let conclusion = f(conclusion, language);
        let b = Bounds::for_formulas(
            kind,
            false,
            worlds,
            objects,
            assumptions.iter().chain(std::iter::once(&conclusion)),
        );
        find_countermodel(&assumptions, &conclusion, &b).unwrap()
    }

    #[test]
    fn explosion_fails() {
        let v = search(Kind::Nelsonian, 1, 1, &["P(a)", "~P(a)"], "Q(a)");
        let Verdict::CountermodelFound { model, world, .. } = &v else {
            panic!("{v}");
        };
        let env = Environment::of(model);
        assert!(eval(model, *world, &f("P(a) & ~P(a)", Language::Negation), &env).unwrap());
        assert!(!eval(model, *world, &f("Q(a)", Language::Negation), &env).unwrap());
        assert!(v.to_string().starts_with("countermodel found at world w0"));
    }

    #[test]
    fn identity_has_no_countermodel() {
        for (w, h) in [(1, 1), (2, 2), (3, 1)] {
            let v = search(Kind::Nelsonian, w, h, &["P(a)"], "P(a)");
            assert!(!v.found(), "{v}");
            let Verdict::NoCountermodelWithinBounds { examined, .. } = v else { unreachable!() };
            assert!(examined > 0);
        }
    }

    #[test]
    fn excluded_middle_needs_two_worlds() {
        assert!(!search(Kind::Intuitionistic, 1, 1, &[], "P(a) | (P(a) -> bot)").found());
        let v = search(Kind::Intuitionistic, 2, 1, &[], "P(a) | (P(a) -> bot)");
        let m = v.model().expect("countermodel");
        assert_eq!(m.worlds.len(), 2);
    }

    #[test]
    fn free_variables_are_universal() {
        let v = search(Kind::Nelsonian, 1, 2, &["P(x)"], "P(a)");
        let Verdict::CountermodelFound { assignment, .. } = v else {
            panic!("expected a countermodel");
        };
        assert_eq!(assignment.len(), 1);
        assert_eq!(assignment[0].0, "x");
    }

    #[test]
    fn bad_bounds_and_formulas() {
        let b = Bounds::new(Kind::Nelsonian, false, 9, 1);
        assert!(matches!(
            find_countermodel(&[], &f("P(a)", Language::Negation), &b),
            Err(SearchError::Bounds(_))
        ));
        let b = Bounds::new(Kind::Intuitionistic, false, 1, 1).with_predicate("P", 1).with_constant("a");
        assert!(matches!(
            find_countermodel(&[], &f("~P(a)", Language::Negation), &b),
            Err(SearchError::Eval(_))
        ));
    }
}
