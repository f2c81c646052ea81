//! Whole-model evaluation for the sweeps.
//!
//! A [`Table`] records truth and falsity of a formula at every world under
//! every assignment to a fixed list of variables, as bit sets. Compound
//! tables are computed from the tables of their parts, so a formula costs a
//! handful of word operations per node instead of a walk per world and
//! assignment.
//!
//! Formulas may also mention *leaf* predicates: unary placeholders whose
//! tables the caller supplies. The sweeps use them to evaluate an operator
//! once for each class of equally valued subformulas.

use crate::syntax::{free_vars, Formula, Term, PRIMED_EXISTENCE, PRIMED_IDENTITY};

use super::eval::EvalError;
use super::model::{Extension, KripkeModel, Kind};

/// Bit `w * S + a` is set when the formula holds (is refuted) at world `w`
/// under assignment code `a`, where `S` is the number of assignments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    pub truth: u64,
    pub falsity: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tm {
    Slot(usize),
    Intension(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    /// An atom whose table does not depend on the leaves.
    Fixed(Table),
    Leaf(usize, Tm),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Imp(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
    Descr(usize, Box<Node>, Box<Node>),
}

/// A formula ready for [`Tabulator::run`] on the model it was compiled for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tabulated {
    node: Node,
}

/// Evaluates formulas over a fixed variable list on one model.
pub struct Tabulator<'m> {
    m: &'m KripkeModel,
    vars: Vec<String>,
    worlds: usize,
    /// Intensions, the range of every variable.
    d: usize,
    /// Assignments, `d ^ vars.len()`.
    s: usize,
    all: u64,
    /// The first bit of every world block.
    firsts: u64,
    /// A full block at the bottom.
    ones: u64,
    /// `unseen[v]`: bits `(w, a)` with `v` not a successor of `w`.
    unseen: Vec<u64>,
    /// Bits `(w, a)` with intension `e` existing at `w`.
    exists: Vec<u64>,
    /// `digits[i][e]`: bits `(w, a)` with `a_i = e`.
    digits: Vec<Vec<u64>>,
    /// `same[i][e]`: bits `(w, a)` where `k_{a_i} = k_e` holds at `w`.
    same: Vec<Vec<u64>>,
    /// `apart[i][e]`: bits `(v, a)` where `(|e|_v, |a_i|_v)` is in the `~=`
    /// extension.
    apart: Vec<Vec<u64>>,
}

impl<'m> Tabulator<'m> {
    /// Needs `worlds * intensions ^ vars` to fit in 64 bits.
    pub fn new(m: &'m KripkeModel, vars: &[&str]) -> Result<Self, EvalError> {
        let worlds = m.worlds.len();
        let d = m.intensions.len().max(1);
        let s = u32::try_from(vars.len())
            .ok()
            .and_then(|k| d.checked_pow(k))
            .filter(|s| s.checked_mul(worlds).is_some_and(|n| n <= 64))
            .ok_or(EvalError::TableTooLarge {
                worlds,
                intensions: d,
                vars: vars.len(),
            })?;
        let n = worlds * s;
        let all = if n == 64 { !0 } else { (1u64 << n) - 1 };
        let digit = |a: usize, i: usize| a / d.pow(i as u32) % d;
        let exists = (0..d)
            .map(|e| {
                (0..n)
                    .filter(|&bit| e < m.intensions.len() && m.exists_at(e, bit / s))
                    .fold(0u64, |acc, bit| acc | 1 << bit)
            })
            .collect();
        let mut t = Tabulator {
            m,
            vars: vars.iter().map(|v| v.to_string()).collect(),
            worlds,
            d,
            s,
            all,
            firsts: (0..worlds).fold(0, |acc, w| acc | 1 << (w * s)),
            unseen: (0..worlds)
                .map(|v| {
                    (0..n)
                        .filter(|&bit| !m.rel[bit / s][v])
                        .fold(0u64, |acc, bit| acc | 1 << bit)
                })
                .collect(),
            ones: if s == 64 { !0 } else { (1u64 << s) - 1 },
            exists,
            digits: Vec::new(),
            same: Vec::new(),
            apart: Vec::new(),
        };
        let real = m.intensions.len();
        let per_slot = |f: &dyn Fn(usize, usize, usize, usize) -> bool| -> Vec<Vec<u64>> {
            (0..vars.len())
                .map(|i| {
                    (0..d)
                        .map(|e| {
                            if e >= real {
                                return 0;
                            }
                            t.bits(|w, a| f(w, t.intension(Tm::Slot(i), a), e, a))
                        })
                        .collect()
                })
                .collect()
        };
        let same = per_slot(&|w, x, e, _| x < real && t.identical(w, x, e));
        let apart = per_slot(&|w, x, e, _| x < real && m.neg_eq[w].contains(&vec![m.value(e, w), m.value(x, w)]));
        t.digits = (0..vars.len())
            .map(|i| (0..d).map(|e| t.bits(|_, a| digit(a, i) == e)).collect())
            .collect();
        t.same = same;
        t.apart = apart;
        Ok(t)
    }

    /// Resolves `a`. Unary predicates named in `leaves` are placeholders
    /// whose tables are passed to [`run`](Self::run) in the same order.
    pub fn compile(&self, a: &Formula, leaves: &[&str]) -> Result<Tabulated, EvalError> {
        if let Some(x) = free_vars(a).into_iter().find(|x| !self.vars.contains(x)) {
            return Err(EvalError::OpenFormula(x));
        }
        if self.m.kind == Kind::Intuitionistic && a.contains_negation() {
            return Err(EvalError::NegationInIntuitionistic);
        }
        self.node(a, leaves).map(|node| Tabulated { node })
    }

    /// Compiles and runs a formula without leaves.
    pub fn table(&self, a: &Formula) -> Result<Table, EvalError> {
        Ok(self.run(&self.compile(a, &[])?, &[]))
    }

    /// Leaf tables are over the leaf's single argument: bit `w * D + e` for
    /// intension `e`, as produced by [`narrow`](Self::narrow).
    pub fn run(&self, c: &Tabulated, leaves: &[Table]) -> Table {
        self.eval(&c.node, leaves)
    }

    /// The table of variable `vars[i]` alone, the others set to the first
    /// intension. Meaningful when only `vars[i]` is free.
    pub fn narrow(&self, t: Table, i: usize) -> Table {
        let p = self.d.pow(i as u32);
        let pick = |x: u64| {
            let mut out = 0;
            for w in 0..self.worlds {
                for e in 0..self.d {
                    out |= (x >> (w * self.s + e * p) & 1) << (w * self.d + e);
                }
            }
            out
        };
        Table {
            truth: pick(t.truth),
            falsity: pick(t.falsity),
        }
    }

    /// Whether bit `(w, a)` is set in `x`, `a` listing one intension per
    /// variable.
    pub fn at(&self, x: u64, w: usize, assignment: &[usize]) -> bool {
        let a = assignment.iter().rev().fold(0, |acc, &e| acc * self.d + e);
        x >> (w * self.s + a) & 1 == 1
    }

    /// Bits of `x` that are not passed on to every successor world.
    pub fn unhereditary(&self, x: u64) -> u64 {
        x & !self.boxed(x)
    }

    fn block(&self, x: u64, w: usize) -> u64 {
        let mask = if self.s == 64 { !0 } else { (1u64 << self.s) - 1 };
        x >> (w * self.s) & mask
    }

    /// `(w, a)` such that `x` holds at `(v, a)` for every successor `v`.
    fn boxed(&self, x: u64) -> u64 {
        // Copy block v to every world, then keep it only where v is seen.
        let mut out = self.all;
        for v in 0..self.worlds {
            out &= self.block(x, v) * self.firsts | self.unseen[v];
        }
        out
    }

    /// Maps bit `(w, a)` to the value of `x` at `(w, a[i := e])`.
    fn subst(&self, x: u64, i: usize, e: usize) -> u64 {
        if self.vars.len() == 1 {
            // One bit per world block, spread over the block by a carry-free
            // multiplication.
            return (x >> e & self.firsts) * self.ones;
        }
        // Keep the bits with a_i = e and shift them onto every other value
        // of digit i; this never leaves a world block.
        let p = self.d.pow(i as u32);
        let base = x & self.digits[i][e];
        (0..self.d).fold(0, |acc, f| {
            acc | if f >= e {
                base << ((f - e) * p)
            } else {
                base >> ((e - f) * p)
            }
        })
    }

    /// Every existent at the same world satisfies `x` in slot `i`.
    fn every(&self, x: u64, i: usize) -> u64 {
        (0..self.d).fold(self.all, |acc, e| acc & (self.subst(x, i, e) | !self.exists[e]))
    }

    /// Some existent at the same world satisfies `x` in slot `i`.
    fn some(&self, x: u64, i: usize) -> u64 {
        (0..self.d).fold(0, |acc, e| acc | (self.subst(x, i, e) & self.exists[e]))
    }

    fn bits(&self, f: impl Fn(usize, usize) -> bool) -> u64 {
        let mut out = 0;
        for w in 0..self.worlds {
            for a in 0..self.s {
                if f(w, a) {
                    out |= 1 << (w * self.s + a);
                }
            }
        }
        out
    }

    fn intension(&self, t: Tm, a: usize) -> usize {
        match t {
            Tm::Slot(i) => a / self.d.pow(i as u32) % self.d,
            Tm::Intension(e) => e,
        }
    }

    fn term(&self, t: &Term) -> Result<Tm, EvalError> {
        match t {
            Term::Var(x) => self.slot(x).map(Tm::Slot),
            Term::Const(c) => self
                .m
                .constant(c)
                .or_else(|| t.injected_index().filter(|&e| e < self.m.intensions.len()))
                .map(Tm::Intension)
                .ok_or_else(|| EvalError::UnknownConstant(c.clone())),
        }
    }

    fn slot(&self, x: &str) -> Result<usize, EvalError> {
        self.vars.iter().position(|v| v == x).ok_or_else(|| EvalError::OpenFormula(x.to_string()))
    }

    fn identical(&self, w: usize, d: usize, e: usize) -> bool {
        let h = self.m.value(d, w);
        h == self.m.value(e, w) && self.m.existents(w).any(|k| self.m.value(k, w) == h)
    }

    fn never_exists(&self, w: usize, d: usize) -> bool {
        self.m.successors(w).all(|v| !self.m.exists_at(d, v))
    }

    fn member(&self, ext: &[Extension], w: usize, ts: &[Tm], a: usize) -> bool {
        let tuple: Vec<usize> = ts.iter().map(|&t| self.m.value(self.intension(t, a), w)).collect();
        ext[w].contains(&tuple)
    }

    fn node(&self, a: &Formula, leaves: &[&str]) -> Result<Node, EvalError> {
        let b = |x: &Formula| self.node(x, leaves).map(Box::new);
        Ok(match a {
            Formula::Atom { pred, args } => {
                let ts = args.iter().map(|t| self.term(t)).collect::<Result<Vec<_>, _>>()?;
                if let Some(l) = leaves.iter().position(|l| l == pred) {
                    if ts.len() != 1 {
                        return Err(EvalError::UnknownPredicate(pred.clone(), ts.len()));
                    }
                    return Ok(Node::Leaf(l, ts[0]));
                }
                let ts = &ts;
                let m = self.m;
                let table = match (pred.as_str(), ts.len()) {
                    (PRIMED_IDENTITY, 2) => Table {
                        truth: self.bits(|w, a| self.member(&m.neg_eq, w, ts, a)),
                        falsity: 0,
                    },
                    (PRIMED_EXISTENCE, 1) => Table {
                        truth: self.bits(|w, a| self.never_exists(w, self.intension(ts[0], a))),
                        falsity: 0,
                    },
                    _ => {
                        let p = m
                            .predicates
                            .iter()
                            .find(|p| &p.name == pred && p.arity == ts.len())
                            .ok_or_else(|| EvalError::UnknownPredicate(pred.clone(), ts.len()))?;
                        Table {
                            truth: self.bits(|w, a| self.member(&p.pos, w, ts, a)),
                            falsity: self.bits(|w, a| self.member(&p.neg, w, ts, a)),
                        }
                    }
                };
                Node::Fixed(table)
            }
            Formula::Eq(l, r) => {
                let (l, r) = (self.term(l)?, self.term(r)?);
                let ts = [l, r];
                Node::Fixed(Table {
                    truth: self.bits(|w, a| self.identical(w, self.intension(l, a), self.intension(r, a))),
                    falsity: self.bits(|w, a| self.member(&self.m.neg_eq, w, &ts, a)),
                })
            }
            Formula::Existent(t) => {
                let t = self.term(t)?;
                Node::Fixed(Table {
                    truth: self.bits(|w, a| self.m.exists_at(self.intension(t, a), w)),
                    falsity: self.bits(|w, a| self.never_exists(w, self.intension(t, a))),
                })
            }
            Formula::Bot => Node::Fixed(Table::default()),
            Formula::Not(x) => Node::Not(b(x)?),
            Formula::And(x, y) => Node::And(b(x)?, b(y)?),
            Formula::Or(x, y) => Node::Or(b(x)?, b(y)?),
            Formula::Imp(x, y) => Node::Imp(b(x)?, b(y)?),
            Formula::Forall(x, body) => Node::Forall(self.slot(x)?, b(body)?),
            Formula::Exists(x, body) => Node::Exists(self.slot(x)?, b(body)?),
            Formula::Descr {
                var,
                restrictor,
                scope: g,
            } => Node::Descr(self.slot(var)?, b(restrictor)?, b(g)?),
        })
    }

    fn eval(&self, n: &Node, leaves: &[Table]) -> Table {
        match n {
            Node::Fixed(t) => *t,
            Node::Leaf(l, Tm::Slot(0)) if self.vars.len() == 1 => leaves[*l],
            Node::Leaf(l, t) => {
                let leaf = leaves[*l];
                let block = if self.s == 64 { !0 } else { (1u64 << self.s) - 1 };
                let pick = |x: u64| {
                    let mut out = 0;
                    for w in 0..self.worlds {
                        let here = match *t {
                            Tm::Slot(i) => (0..self.d)
                                .filter(|e| x >> (w * self.d + e) & 1 == 1)
                                .fold(0, |acc, e| acc | self.digits[i][e]),
                            Tm::Intension(e) if x >> (w * self.d + e) & 1 == 1 => !0,
                            Tm::Intension(_) => 0,
                        };
                        out |= here & block << (w * self.s);
                    }
                    out
                };
                Table {
                    truth: pick(leaf.truth),
                    falsity: pick(leaf.falsity),
                }
            }
            Node::Not(x) => {
                let t = self.eval(x, leaves);
                Table {
                    truth: t.falsity,
                    falsity: t.truth,
                }
            }
            Node::And(x, y) => {
                let (p, q) = (self.eval(x, leaves), self.eval(y, leaves));
                Table {
                    truth: p.truth & q.truth,
                    falsity: p.falsity | q.falsity,
                }
            }
            Node::Or(x, y) => {
                let (p, q) = (self.eval(x, leaves), self.eval(y, leaves));
                Table {
                    truth: p.truth | q.truth,
                    falsity: p.falsity & q.falsity,
                }
            }
            Node::Imp(x, y) => {
                let (p, q) = (self.eval(x, leaves), self.eval(y, leaves));
                Table {
                    truth: self.boxed(!p.truth | q.truth),
                    falsity: p.truth & q.falsity,
                }
            }
            Node::Forall(i, x) => {
                let t = self.eval(x, leaves);
                Table {
                    truth: self.boxed(self.every(t.truth, *i)),
                    falsity: self.some(t.falsity, *i),
                }
            }
            Node::Exists(i, x) => {
                let t = self.eval(x, leaves);
                Table {
                    truth: self.some(t.truth, *i),
                    falsity: self.boxed(self.every(t.falsity, *i)),
                }
            }
            Node::Descr(i, f, g) => {
                let (f, g) = (self.eval(f, leaves), self.eval(g, leaves));
                self.description(*i, f, g)
            }
        }
    }

    /// Truth: some existent `d` is `F` and `G`, and every existent that is
    /// `F` anywhere later is identical to `d` there. Falsity: the unfolding
    /// `forall x.(~F | exists y.(F(y) & ~y=x) | ~G)`.
    fn description(&self, i: usize, f: Table, g: Table) -> Table {
        // With slot i holding d: for each existent e at v, F(e) at any u
        // above v forces k_d = k_e at u.
        let mut unique = self.all;
        let mut rival = 0;
        for e in 0..self.d.min(self.m.intensions.len()) {
            let fe = self.subst(f.truth, i, e);
            unique &= self.boxed(!fe | self.same[i][e]) | !self.exists[e];
            rival |= fe & self.exists[e] & self.apart[i][e];
        }
        let truth = self.some(f.truth & g.truth & self.boxed(unique), i);
        let falsity = self.boxed(self.every(f.falsity | g.falsity | rival, i));
        Table { truth, falsity }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::search::{enumerate_models, Bounds};
    use crate::semantics::{eval, Environment};
    use crate::syntax::{parse_formula_inferring, Language, Signature};

    fn f(text: &str) -> Formula {
        let mut sig = Signature::new(Language::Negation).with_descriptions(true).with_free(true);
        parse_formula_inferring(text, &mut sig).unwrap()
    }

    fn models(free: bool) -> Vec<KripkeModel> {
        let b = Bounds::new(Kind::Nelsonian, free, 2, 2).with_predicate("P", 1).with_constant("a");
        enumerate_models(&b).step_by(53).collect()
    }

    fn agrees(m: &KripkeModel, a: &Formula) {
        let env = Environment::of(m);
        let tab = Tabulator::new(m, &["x", "y"]).unwrap();
        let t = tab.table(a).unwrap();
        for w in 0..m.worlds.len() {
            let expect = eval(m, w, a, &env).unwrap();
            assert_eq!(tab.at(t.truth, w, &[0, 0]), expect, "{} at {w}", crate::syntax::print(a));
            let refuted = eval(m, w, &Formula::not(a.clone()), &env).unwrap();
            assert_eq!(tab.at(t.falsity, w, &[0, 0]), refuted, "~{} at {w}", crate::syntax::print(a));
        }
    }

    #[test]
    fn matches_the_pointwise_evaluator() {
        let fs = [
            "forall x.P(x)",
            "exists x.~P(x)",
            "forall x.(P(x) -> exists y.~y=x)",
            "~forall x.(x=a | ~P(x))",
            "I x[P(x),~x=a]",
            "exists y.I x[P(x),~x=y]",
            "~I x[P(x),P(x)]",
            "(P(a) -> ~P(a)) -> P(a)",
        ];
        for free in [false, true] {
            for m in models(free) {
                for a in fs {
                    agrees(&m, &f(a));
                }
            }
        }
    }

    #[test]
    fn leaves_stand_for_subformulas() {
        let whole = f("forall x.(P(x) & ~x=a)");
        let template = f("forall x.L(x)");
        for m in models(true) {
            let tab = Tabulator::new(&m, &["x"]).unwrap();
            let part = tab.table(&f("P(x) & ~x=a")).unwrap();
            let c = tab.compile(&template, &["L"]).unwrap();
            assert_eq!(tab.run(&c, &[part]), tab.table(&whole).unwrap());
        }
    }

    #[test]
    fn narrowing_keeps_one_variable() {
        let m = &models(false)[3];
        let wide = Tabulator::new(m, &["y", "x"]).unwrap();
        let thin = Tabulator::new(m, &["x"]).unwrap();
        let a = f("P(x) | ~x=a");
        assert_eq!(wide.narrow(wide.table(&a).unwrap(), 1), thin.table(&a).unwrap());
    }

    #[test]
    fn too_large() {
        let ms = models(false);
        let m = ms.iter().find(|m| m.intensions.len() == 2).unwrap();
        let vars: Vec<String> = (0..7).map(|i| format!("x{i}")).collect();
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        assert!(Tabulator::new(m, &names).is_err());
        assert!(matches!(
            Tabulator::new(m, &["x"]).unwrap().compile(&f("P(z)"), &[]),
            Err(EvalError::OpenFormula(_))
        ));
    }

    fn formula() -> impl Strategy<Value = Formula> {
        let term = prop_oneof![
            prop::sample::select(vec!["x", "y"]).prop_map(Term::var),
            Just(Term::constant("a")),
        ];
        let atom = prop_oneof![
            term.clone().prop_map(|t| Formula::atom("P", vec![t])),
            (term.clone(), term.clone()).prop_map(|(s, t)| Formula::eq(s, t)),
            term.prop_map(Formula::existent),
        ];
        let var = prop::sample::select(vec!["x", "y"]);
        atom.prop_recursive(4, 24, 2, move |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                (var.clone(), inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
                (var.clone(), inner.clone()).prop_map(|(x, a)| Formula::exists(x, a)),
                (var.clone(), inner.clone(), inner.clone()).prop_map(|(x, a, b)| Formula::descr(x, a, b)),
            ]
        })
        .prop_map(|a| Formula::exists("x", Formula::forall("y", a)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_formulas_agree(
            a in formula(),
            pick in 0usize..400,
        ) {
            let ms = models(pick % 2 == 0);
            let m = &ms[pick % ms.len()];
            agrees(m, &a);
        }
    }
}
