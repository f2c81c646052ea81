//! Binding analysis and strict substitution `A^x_t`.
//!
//! Substitution never renames bound variables: when `t` is not free for `x`
//! in `A` the operation fails with a [`CaptureError`] naming the binder that
//! would capture it.

use std::collections::BTreeSet;

use thiserror::Error;

use super::formula::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("substituting {term} for {var} would be captured by the binder of {binder}")]
pub struct CaptureError {
    pub var: String,
    pub term: Term,
    pub binder: String,
}

/// Variables with at least one free occurrence.
pub fn free_vars(a: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(a, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a>(a: &'a Formula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    let mut add = |t: &Term, bound: &Vec<&str>| {
        if let Term::Var(v) = t {
            if !bound.contains(&v.as_str()) {
                out.insert(v.clone());
            }
        }
    };
    match a {
        Formula::Atom { args, .. } => args.iter().for_each(|t| add(t, bound)),
        Formula::Eq(l, r) => {
            add(l, bound);
            add(r, bound);
        }
        Formula::Existent(t) => add(t, bound),
        Formula::Bot => {}
        Formula::Not(b) => collect_free(b, bound, out),
        Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) => {
            collect_free(b, bound, out);
            collect_free(c, bound, out);
        }
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            bound.push(x);
            collect_free(b, bound, out);
            bound.pop();
        }
        Formula::Descr {
            var,
            restrictor,
            scope,
        } => {
            bound.push(var);
            collect_free(restrictor, bound, out);
            collect_free(scope, bound, out);
            bound.pop();
        }
    }
}

pub fn is_free(x: &str, a: &Formula) -> bool {
    occurs_free(x, a)
}

fn occurs_free(x: &str, a: &Formula) -> bool {
    match a {
        Formula::Atom { args, .. } => args.iter().any(|t| t.mentions_var(x)),
        Formula::Eq(l, r) => l.mentions_var(x) || r.mentions_var(x),
        Formula::Existent(t) => t.mentions_var(x),
        Formula::Bot => false,
        Formula::Not(b) => occurs_free(x, b),
        Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) => {
            occurs_free(x, b) || occurs_free(x, c)
        }
        Formula::Forall(y, b) | Formula::Exists(y, b) => y != x && occurs_free(x, b),
        Formula::Descr {
            var,
            restrictor,
            scope,
        } => var != x && (occurs_free(x, restrictor) || occurs_free(x, scope)),
    }
}

/// True iff no variable of `t` becomes bound when `t` replaces the free
/// occurrences of `x` in `a`.
pub fn is_free_for(t: &Term, x: &str, a: &Formula) -> bool {
    capturing_binder(t, x, a).is_none()
}

fn capturing_binder(t: &Term, x: &str, a: &Formula) -> Option<String> {
    let y = match t {
        Term::Const(_) => return None,
        Term::Var(y) => y.as_str(),
    };
    find_capture(y, x, a)
}

fn find_capture(y: &str, x: &str, a: &Formula) -> Option<String> {
    match a {
        Formula::Atom { .. } | Formula::Eq(..) | Formula::Existent(_) | Formula::Bot => None,
        Formula::Not(b) => find_capture(y, x, b),
        Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) => {
            find_capture(y, x, b).or_else(|| find_capture(y, x, c))
        }
        Formula::Forall(z, b) | Formula::Exists(z, b) => {
            if z == x {
                None
            } else if z == y && occurs_free(x, b) {
                Some(z.clone())
            } else {
                find_capture(y, x, b)
            }
        }
        Formula::Descr {
            var,
            restrictor,
            scope,
        } => {
            if var == x {
                None
            } else if var == y && (occurs_free(x, restrictor) || occurs_free(x, scope)) {
                Some(var.clone())
            } else {
                find_capture(y, x, restrictor).or_else(|| find_capture(y, x, scope))
            }
        }
    }
}

/// `A^x_t`: replace every free occurrence of `x` in `a` by `t`.
pub fn substitute(a: &Formula, x: &str, t: &Term) -> Result<Formula, CaptureError> {
    if let Some(binder) = capturing_binder(t, x, a) {
        return Err(CaptureError {
            var: x.to_string(),
            term: t.clone(),
            binder,
        });
    }
    Ok(replace_free(a, x, t))
}

fn replace_term(s: &Term, x: &str, t: &Term) -> Term {
    if s.mentions_var(x) {
        t.clone()
    } else {
        s.clone()
    }
}

fn replace_free(a: &Formula, x: &str, t: &Term) -> Formula {
    match a {
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args.iter().map(|s| replace_term(s, x, t)).collect(),
        },
        Formula::Eq(l, r) => Formula::Eq(replace_term(l, x, t), replace_term(r, x, t)),
        Formula::Existent(s) => Formula::Existent(replace_term(s, x, t)),
        Formula::Bot => Formula::Bot,
        Formula::Not(b) => Formula::not(replace_free(b, x, t)),
        Formula::And(b, c) => Formula::and(replace_free(b, x, t), replace_free(c, x, t)),
        Formula::Or(b, c) => Formula::or(replace_free(b, x, t), replace_free(c, x, t)),
        Formula::Imp(b, c) => Formula::imp(replace_free(b, x, t), replace_free(c, x, t)),
        Formula::Forall(z, _) | Formula::Exists(z, _) if z == x => a.clone(),
        Formula::Forall(z, b) => Formula::forall(z.clone(), replace_free(b, x, t)),
        Formula::Exists(z, b) => Formula::exists(z.clone(), replace_free(b, x, t)),
        Formula::Descr { var, .. } if var == x => a.clone(),
        Formula::Descr {
            var,
            restrictor,
            scope,
        } => Formula::descr(
            var.clone(),
            replace_free(restrictor, x, t),
            replace_free(scope, x, t),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(args: &[Term]) -> Formula {
        Formula::atom("P", args.to_vec())
    }

    fn x() -> Term {
        Term::var("x")
    }
    fn y() -> Term {
        Term::var("y")
    }
    fn a() -> Term {
        Term::constant("a")
    }

    #[test]
    fn free_vars_examples() {
        let f = Formula::forall("x", p(&[x(), y()]));
        assert_eq!(free_vars(&f), BTreeSet::from(["y".to_string()]));

        let d = Formula::descr(
            "x",
            Formula::atom("F", vec![x()]),
            Formula::atom("G", vec![y()]),
        );
        assert_eq!(free_vars(&d), BTreeSet::from(["y".to_string()]));

        assert!(free_vars(&p(&[a()])).is_empty());
    }

    #[test]
    fn free_for_examples() {
        let f = Formula::forall("y", p(&[x(), y()]));
        assert!(!is_free_for(&y(), "x", &f));
        assert!(is_free_for(&a(), "x", &f));
        assert!(is_free_for(&y(), "x", &Formula::forall("x", p(&[x()]))));
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(substitute(&p(&[x()]), "x", &a()).unwrap(), p(&[a()]));
        let closed = Formula::forall("x", p(&[x()]));
        assert_eq!(substitute(&closed, "x", &a()).unwrap(), closed);
        let err = substitute(&Formula::forall("y", p(&[x(), y()])), "x", &y()).unwrap_err();
        assert_eq!(err.binder, "y");
    }

    #[test]
    fn description_binds_in_both_arguments() {
        let d = Formula::descr(
            "x",
            Formula::atom("F", vec![x()]),
            Formula::atom("G", vec![x(), y()]),
        );
        let s = substitute(&d, "y", &a()).unwrap();
        assert_eq!(
            s,
            Formula::descr(
                "x",
                Formula::atom("F", vec![x()]),
                Formula::atom("G", vec![x(), a()]),
            )
        );
        assert_eq!(substitute(&d, "x", &a()).unwrap(), d);
        assert!(!is_free_for(&x(), "y", &d));
    }

    #[test]
    fn capture_is_reported_only_for_real_occurrences() {
        // y is bound but x does not occur under it.
        let f = Formula::and(p(&[x()]), Formula::exists("y", p(&[y()])));
        assert!(is_free_for(&y(), "x", &f));
        assert_eq!(
            substitute(&f, "x", &y()).unwrap(),
            Formula::and(p(&[y()]), Formula::exists("y", p(&[y()])))
        );
    }
}
