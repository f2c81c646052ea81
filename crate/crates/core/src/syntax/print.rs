//! ASCII printer, inverse to the parser.
//!
//! Binary operators are parenthesised by precedence. A quantifier is wrapped
//! in parentheses unless nothing follows it, since its scope would otherwise
//! swallow the rest of the line. Binary quantifier bodies are always
//! parenthesised for readability.

use std::fmt;

use super::formula::{Formula, PRIMED_EXISTENCE, PRIMED_IDENTITY};

const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;

pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, 0, true);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

fn binary(f: &Formula) -> Option<(u8, &'static str, &Formula, &Formula)> {
    match f {
        Formula::Imp(a, b) => Some((IMP, " -> ", a, b)),
        Formula::Or(a, b) => Some((OR, " | ", a, b)),
        Formula::And(a, b) => Some((AND, " & ", a, b)),
        _ => None,
    }
}

/// `min` is the loosest precedence allowed without parentheses; `open_right`
/// says whether the text may run on to the end of the enclosing group.
fn write_formula(out: &mut String, f: &Formula, min: u8, open_right: bool) {
    if let Some((prec, op, a, b)) = binary(f) {
        let wrap = prec < min;
        let open_right = open_right || wrap;
        if wrap {
            out.push('(');
        }
        // `->` associates to the right, `|` and `&` to the left.
        let (lmin, rmin) = if prec == IMP {
            (prec + 1, prec)
        } else {
            (prec, prec + 1)
        };
        write_formula(out, a, lmin, false);
        out.push_str(op);
        write_formula(out, b, rmin, open_right);
        if wrap {
            out.push(')');
        }
        return;
    }
    match f {
        Formula::Not(a) => {
            out.push('~');
            write_formula(out, a, NOT, open_right);
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            if !open_right {
                out.push('(');
            }
            out.push_str(if matches!(f, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(x);
            out.push('.');
            if binary(a).is_some() {
                out.push('(');
                write_formula(out, a, 0, true);
                out.push(')');
            } else {
                write_formula(out, a, NOT, true);
            }
            if !open_right {
                out.push(')');
            }
        }
        Formula::Descr {
            var,
            restrictor,
            scope,
        } => {
            out.push_str("I ");
            out.push_str(var);
            out.push('[');
            write_formula(out, restrictor, 0, true);
            out.push(',');
            write_formula(out, scope, 0, true);
            out.push(']');
        }
        Formula::Bot => out.push_str("bot"),
        Formula::Eq(l, r) => {
            out.push_str(l.name());
            out.push('=');
            out.push_str(r.name());
        }
        Formula::Existent(t) => {
            out.push_str("E!(");
            out.push_str(t.name());
            out.push(')');
        }
        Formula::Atom { pred, args } if pred == PRIMED_IDENTITY && args.len() == 2 => {
            out.push_str(args[0].name());
            out.push_str("='");
            out.push_str(args[1].name());
        }
        Formula::Atom { pred, args } => {
            // `E!'` prints like any predicate: `E!'(a)`.
            debug_assert!(pred != PRIMED_EXISTENCE || args.len() == 1);
            out.push_str(pred);
            out.push('(');
            for (i, t) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(t.name());
            }
            out.push(')');
        }
        Formula::Imp(..) | Formula::Or(..) | Formula::And(..) => unreachable!(),
    }
}
