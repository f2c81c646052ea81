//! Forcing for both kinds of structure.
//!
//! Quantifiers bind their variable to an intension index, which plays the
//! role of the injected constant `k_d`; the substitution-based reading is
//! kept as a cross-check in the tests. Formulas are checked once up front
//! (closed, known constants and predicates, right language) and then
//! evaluated by an infallible core.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{free_vars, Formula, Term, PRIMED_EXISTENCE, PRIMED_IDENTITY};

use super::model::{Extension, KripkeModel, Kind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula has free variable {0}")]
    OpenFormula(String),
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("unknown predicate {0}/{1}")]
    UnknownPredicate(String, usize),
    #[error("strong negation cannot be evaluated in an intuitionistic model")]
    NegationInIntuitionistic,
    #[error("no world {0}")]
    UnknownWorld(String),
    #[error("{0} worlds exceed the evaluator limit of {MAX_WORLDS}")]
    TooManyWorlds(usize),
    #[error("{worlds} worlds with {intensions} intensions and {vars} variables do not fit a 64-bit table")]
    TableTooLarge { worlds: usize, intensions: usize, vars: usize },
    #[error("a {model} model cannot evaluate a {wanted} formula")]
    KindMismatch { model: Kind, wanted: Kind },
}

/// The injected constants `k_d`, one per intension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Environment {
    size: usize,
}

impl Environment {
    pub fn of(m: &KripkeModel) -> Self {
        Environment {
            size: m.intensions.len(),
        }
    }

    pub fn constant(&self, d: usize) -> Term {
        assert!(d < self.size, "no intension {d}");
        Term::injected(d)
    }

    pub fn lookup(&self, t: &Term) -> Option<usize> {
        t.injected_index().filter(|&d| d < self.size)
    }
}

/// `m, w ⊨ A` in an intuitionistic model.
pub fn eval_int(m: &KripkeModel, w: usize, a: &Formula, env: &Environment) -> Result<bool, EvalError> {
    expect_kind(m, Kind::Intuitionistic)?;
    eval(m, w, a, env)
}

/// `m, w ⊨ A` in a Nelsonian model.
pub fn eval_nelson(m: &KripkeModel, w: usize, a: &Formula, env: &Environment) -> Result<bool, EvalError> {
    expect_kind(m, Kind::Nelsonian)?;
    eval(m, w, a, env)
}

/// Evaluation by the model's own kind.
pub fn eval(m: &KripkeModel, w: usize, a: &Formula, env: &Environment) -> Result<bool, EvalError> {
    if w >= m.worlds.len() {
        return Err(EvalError::UnknownWorld(format!("#{w}")));
    }
    let ev = Evaluator::new_checked(m)?;
    let c = ev.compile(a, &[], env)?;
    Ok(ev.holds(w, &c, &[]))
}

fn expect_kind(m: &KripkeModel, wanted: Kind) -> Result<(), EvalError> {
    if m.kind == wanted {
        Ok(())
    } else {
        Err(EvalError::KindMismatch {
            model: m.kind,
            wanted,
        })
    }
}

/// Checks that `a` can be evaluated on `m` with `bound` already assigned.
pub fn prepare(m: &KripkeModel, a: &Formula, bound: &[&str], env: &Environment) -> Result<(), EvalError> {
    if m.worlds.len() > MAX_WORLDS {
        return Err(EvalError::TooManyWorlds(m.worlds.len()));
    }
    if let Some(x) = free_vars(a).into_iter().find(|x| !bound.contains(&x.as_str())) {
        return Err(EvalError::OpenFormula(x));
    }
    if m.kind == Kind::Intuitionistic && a.contains_negation() {
        return Err(EvalError::NegationInIntuitionistic);
    }
    for c in a.constants() {
        if m.constant(&c).is_none() && env.lookup(&Term::Const(c.clone())).is_none() {
            return Err(EvalError::UnknownConstant(c));
        }
    }
    for (p, n) in a.predicates() {
        let builtin = match p.as_str() {
            PRIMED_IDENTITY => n == 2,
            PRIMED_EXISTENCE => n == 1,
            _ => false,
        };
        if !builtin && m.predicate(&p).map(|q| q.arity) != Some(n) {
            return Err(EvalError::UnknownPredicate(p, n));
        }
    }
    Ok(())
}

/// A term resolved against a model layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tm {
    /// Position in the assignment.
    Slot(usize),
    /// Index into the model's constant table.
    Const(usize),
    Injected(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Pred(usize, Box<[Tm]>),
    /// `='`
    PrimedEq(Tm, Tm),
    /// `E!'`
    NeverExists(Tm),
    Eq(Tm, Tm),
    Existent(Tm),
    Bot,
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Imp(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
    Descr(usize, Box<Node>, Box<Node>),
}

/// Predicate and constant names in model order. A [`Compiled`] formula can
/// be run on any model with the same layout.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Layout {
    predicates: Vec<(String, usize)>,
    constants: Vec<String>,
}

impl Layout {
    fn of(m: &KripkeModel) -> Self {
        Layout {
            predicates: m.predicates.iter().map(|p| (p.name.clone(), p.arity)).collect(),
            constants: m.constants.iter().map(|(c, _)| c.clone()).collect(),
        }
    }
}

/// A prepared formula with names resolved to indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compiled {
    node: Node,
    slots: usize,
    free: usize,
    layout: Layout,
}

impl Compiled {
    /// Whether this formula may be run on `m`.
    pub fn fits(&self, m: &KripkeModel) -> bool {
        self.layout == Layout::of(m)
    }

    /// Number of free variables, in the order given to [`Evaluator::compile`].
    pub fn free(&self) -> usize {
        self.free
    }
}

fn compile(layout: &Layout, a: &Formula, free: &[&str]) -> Compiled {
    struct Cx<'a> {
        layout: &'a Layout,
        scope: Vec<&'a str>,
        slots: usize,
    }
    impl<'a> Cx<'a> {
        fn term(&self, t: &Term) -> Tm {
            match t {
                Term::Var(x) => Tm::Slot(
                    self.scope
                        .iter()
                        .rposition(|y| y == x)
                        .expect("prepared formulas are closed"),
                ),
                Term::Const(c) => match self.layout.constants.iter().position(|k| k == c) {
                    Some(i) => Tm::Const(i),
                    None => Tm::Injected(t.injected_index().expect("prepared formulas use known constants")),
                },
            }
        }
        fn bind(&mut self, x: &'a str, body: &'a Formula) -> (usize, Box<Node>) {
            let slot = self.scope.len();
            self.scope.push(x);
            self.slots = self.slots.max(self.scope.len());
            let n = self.node(body);
            self.scope.pop();
            (slot, Box::new(n))
        }
        fn node(&mut self, a: &'a Formula) -> Node {
            let b = |cx: &mut Self, x: &'a Formula| Box::new(cx.node(x));
            match a {
                Formula::Atom { pred, args } => match pred.as_str() {
                    PRIMED_EXISTENCE => Node::NeverExists(self.term(&args[0])),
                    PRIMED_IDENTITY => Node::PrimedEq(self.term(&args[0]), self.term(&args[1])),
                    _ => {
                        let p = self
                            .layout
                            .predicates
                            .iter()
                            .position(|(q, n)| q == pred && *n == args.len())
                            .expect("prepared formulas use known predicates");
                        Node::Pred(p, args.iter().map(|t| self.term(t)).collect())
                    }
                },
                Formula::Eq(l, r) => Node::Eq(self.term(l), self.term(r)),
                Formula::Existent(t) => Node::Existent(self.term(t)),
                Formula::Bot => Node::Bot,
                Formula::Not(x) => Node::Not(b(self, x)),
                Formula::And(x, y) => Node::And(b(self, x), b(self, y)),
                Formula::Or(x, y) => Node::Or(b(self, x), b(self, y)),
                Formula::Imp(x, y) => Node::Imp(b(self, x), b(self, y)),
                Formula::Forall(x, body) => {
                    let (s, n) = self.bind(x, body);
                    Node::Forall(s, n)
                }
                Formula::Exists(x, body) => {
                    let (s, n) = self.bind(x, body);
                    Node::Exists(s, n)
                }
                Formula::Descr {
                    var,
                    restrictor,
                    scope,
                } => {
                    let (s, f) = self.bind(var, restrictor);
                    let (_, g) = self.bind(var, scope);
                    Node::Descr(s, f, g)
                }
            }
        }
    }
    let mut cx = Cx {
        layout,
        scope: free.to_vec(),
        slots: free.len(),
    };
    let node = cx.node(a);
    Compiled {
        node,
        slots: cx.slots,
        free: free.len(),
        layout: layout.clone(),
    }
}

/// An extension as a bit set over tuple codes, or the set itself when the
/// code space is large.
enum Ext {
    Dense(Vec<u64>),
    Sparse(Extension),
}

const DENSE_LIMIT: usize = 1 << 16;

impl Ext {
    fn new(e: &Extension, objects: usize, arity: usize) -> Self {
        match objects.checked_pow(arity as u32) {
            Some(size) if size <= DENSE_LIMIT => {
                let mut words = vec![0u64; size.div_ceil(64).max(1)];
                for t in e {
                    let c = code(t.iter().copied(), objects);
                    words[c / 64] |= 1 << (c % 64);
                }
                Ext::Dense(words)
            }
            _ => Ext::Sparse(e.clone()),
        }
    }

    fn contains(&self, tuple: &[usize], objects: usize) -> bool {
        match self {
            Ext::Dense(words) => {
                let c = code(tuple.iter().copied(), objects);
                words[c / 64] >> (c % 64) & 1 == 1
            }
            Ext::Sparse(set) => set.contains(tuple),
        }
    }
}

fn code(tuple: impl Iterator<Item = usize>, objects: usize) -> usize {
    tuple.fold(0, |acc, h| acc * objects + h)
}

/// At most this many worlds; successor sets are bit masks.
pub const MAX_WORLDS: usize = 64;

/// Evaluates [`Compiled`] formulas on one model.
pub struct Evaluator<'m> {
    m: &'m KripkeModel,
    nelson: bool,
    objects: usize,
    succ: Vec<u64>,
    /// `J_w` as a set of objects.
    j: Vec<Ext>,
    pos: Vec<Vec<Ext>>,
    neg: Vec<Vec<Ext>>,
    neg_eq: Vec<Ext>,
    layout: Layout,
}

impl<'m> Evaluator<'m> {
    /// Panics on more than [`MAX_WORLDS`] worlds; [`prepare`] reports that
    /// as an error.
    pub fn new_checked(m: &'m KripkeModel) -> Result<Self, EvalError> {
        if m.worlds.len() > MAX_WORLDS {
            return Err(EvalError::TooManyWorlds(m.worlds.len()));
        }
        Ok(Self::new(m))
    }

    pub fn new(m: &'m KripkeModel) -> Self {
        let n = m.worlds.len();
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds");
        let h = m.objects.len().max(1);
        let succ = (0..n)
            .map(|w| m.successors(w).fold(0u64, |acc, v| acc | 1 << v))
            .collect();
        let j = (0..n)
            .map(|w| {
                let vals: Extension = m.existent_values(w).into_iter().map(|x| vec![x]).collect();
                Ext::new(&vals, h, 1)
            })
            .collect();
        let ext = |es: &[Extension], arity: usize| es.iter().map(|e| Ext::new(e, h, arity)).collect::<Vec<_>>();
        Evaluator {
            m,
            nelson: m.kind == Kind::Nelsonian,
            objects: h,
            succ,
            j,
            pos: m.predicates.iter().map(|p| ext(&p.pos, p.arity)).collect(),
            neg: m.predicates.iter().map(|p| ext(&p.neg, p.arity)).collect(),
            neg_eq: ext(&m.neg_eq, 2),
            layout: Layout::of(m),
        }
    }

    /// Checks `a` with [`prepare`] and resolves its names. `free` lists the
    /// variables an assignment will supply, in order.
    pub fn compile(&self, a: &Formula, free: &[&str], env: &Environment) -> Result<Compiled, EvalError> {
        prepare(self.m, a, free, env)?;
        Ok(compile(&self.layout, a, free))
    }

    /// `m, w ⊨ c` with the free variables of `c` denoting `assignment`.
    /// `c` must have been compiled for a model that it [`fits`](Compiled::fits).
    pub fn holds(&self, w: usize, c: &Compiled, assignment: &[usize]) -> bool {
        debug_assert!(c.fits(self.m));
        debug_assert_eq!(assignment.len(), c.free);
        let mut stack = [0usize; 16];
        let mut heap;
        let env: &mut [usize] = if c.slots <= stack.len() {
            &mut stack[..c.slots]
        } else {
            heap = vec![0; c.slots];
            &mut heap
        };
        env[..assignment.len()].copy_from_slice(assignment);
        self.node(w, &c.node, env)
    }

    fn intension(&self, t: Tm, env: &[usize]) -> usize {
        match t {
            Tm::Slot(i) => env[i],
            Tm::Const(i) => self.m.constants[i].1,
            Tm::Injected(d) => d,
        }
    }

    fn value(&self, t: Tm, w: usize, env: &[usize]) -> usize {
        self.m.value(self.intension(t, env), w)
    }

    fn member(&self, ext: &Ext, w: usize, args: &[Tm], env: &[usize]) -> bool {
        let mut buf = [0usize; 8];
        if args.len() <= buf.len() {
            for (slot, &t) in buf.iter_mut().zip(args) {
                *slot = self.value(t, w, env);
            }
            ext.contains(&buf[..args.len()], self.objects)
        } else {
            let tuple: Vec<usize> = args.iter().map(|&t| self.value(t, w, env)).collect();
            ext.contains(&tuple, self.objects)
        }
    }

    fn successors(&self, w: usize) -> impl Iterator<Item = usize> {
        super::model::bits(self.succ[w])
    }

    fn existents(&self, w: usize) -> impl Iterator<Item = usize> {
        super::model::bits(self.m.exists[w])
    }

    /// `~E!t`, read hereditarily: `t` exists at no successor.
    fn never_exists(&self, w: usize, d: usize) -> bool {
        self.successors(w).all(|v| !self.m.exists_at(d, v))
    }

    /// `k_d = k_e`: the diagonal of `J_w`.
    fn identical(&self, w: usize, d: usize, e: usize) -> bool {
        let h = self.m.value(d, w);
        h == self.m.value(e, w) && self.j[w].contains(&[h], self.objects)
    }

    fn node(&self, w: usize, a: &Node, env: &mut [usize]) -> bool {
        match a {
            Node::Pred(p, args) => self.member(&self.pos[*p][w], w, args, env),
            Node::PrimedEq(l, r) => self.member(&self.neg_eq[w], w, &[*l, *r], env),
            Node::NeverExists(t) => self.never_exists(w, self.intension(*t, env)),
            Node::Eq(l, r) => self.identical(w, self.intension(*l, env), self.intension(*r, env)),
            Node::Existent(t) => self.m.exists_at(self.intension(*t, env), w),
            Node::Bot => false,
            Node::Not(inner) => {
                debug_assert!(self.nelson);
                self.refuted(w, inner, env)
            }
            Node::And(x, y) => self.node(w, x, env) && self.node(w, y, env),
            Node::Or(x, y) => self.node(w, x, env) || self.node(w, y, env),
            Node::Imp(x, y) => self
                .successors(w)
                .all(|v| !self.node(v, x, env) || self.node(v, y, env)),
            Node::Forall(s, body) => self.successors(w).all(|v| {
                self.existents(v).all(|d| {
                    env[*s] = d;
                    self.node(v, body, env)
                })
            }),
            Node::Exists(s, body) => self.existents(w).any(|d| {
                env[*s] = d;
                self.node(w, body, env)
            }),
            Node::Descr(s, f, g) => self.description(w, *s, f, g, env),
        }
    }

    /// Some existent `d` satisfies `F` and `G` here, and from here on every
    /// existent satisfying `F` at any later world is identical to `d` there.
    fn description(&self, w: usize, s: usize, f: &Node, g: &Node, env: &mut [usize]) -> bool {
        self.existents(w).any(|d| {
            env[s] = d;
            if !(self.node(w, f, env) && self.node(w, g, env)) {
                return false;
            }
            self.successors(w).all(|v| {
                self.existents(v).all(|e| {
                    self.successors(v).all(|u| {
                        env[s] = e;
                        !self.node(u, f, env) || self.identical(u, d, e)
                    })
                })
            })
        })
    }

    /// `m, w ⊨ ~A`.
    fn refuted(&self, w: usize, a: &Node, env: &mut [usize]) -> bool {
        match a {
            Node::Pred(p, args) => self.member(&self.neg[*p][w], w, args, env),
            Node::Eq(l, r) => self.member(&self.neg_eq[w], w, &[*l, *r], env),
            Node::Existent(t) => self.never_exists(w, self.intension(*t, env)),
            // Primed built-ins never occur under strong negation.
            Node::PrimedEq(..) | Node::NeverExists(_) | Node::Bot => false,
            Node::Not(inner) => self.node(w, inner, env),
            Node::Imp(x, y) => self.node(w, x, env) && self.refuted(w, y, env),
            Node::And(x, y) => self.refuted(w, x, env) || self.refuted(w, y, env),
            Node::Or(x, y) => self.refuted(w, x, env) && self.refuted(w, y, env),
            Node::Forall(s, body) => self.existents(w).any(|d| {
                env[*s] = d;
                self.refuted(w, body, env)
            }),
            Node::Exists(s, body) => self.successors(w).all(|v| {
                self.existents(v).all(|d| {
                    env[*s] = d;
                    self.refuted(v, body, env)
                })
            }),
            Node::Descr(s, f, g) => self.description_refuted(w, *s, f, g, env),
        }
    }

    /// The unfolding `forall x.(~F | exists y.(F(y) & ~y=x) | ~G)`.
    fn description_refuted(&self, w: usize, s: usize, f: &Node, g: &Node, env: &mut [usize]) -> bool {
        let m = self.m;
        self.successors(w).all(|v| {
            self.existents(v).all(|d| {
                env[s] = d;
                self.refuted(v, f, env)
                    || self.refuted(v, g, env)
                    || self.existents(v).any(|e| {
                        env[s] = e;
                        self.node(v, f, env)
                            && self.neg_eq[v].contains(&[m.value(e, v), m.value(d, v)], self.objects)
                    })
            })
        })
    }
}

/// Free variables of a sequent, in a fixed order.
pub(crate) fn sequent_vars(assumptions: &[Formula], conclusion: &Formula) -> Vec<String> {
    let mut vars: BTreeSet<String> = free_vars(conclusion);
    for a in assumptions {
        vars.extend(free_vars(a));
    }
    vars.into_iter().collect()
}

/// Intensions a free variable may denote at `w`: anything in a free model,
/// the domain of `w` in an ordinary one.
pub(crate) fn assignable(m: &KripkeModel, w: usize) -> Vec<usize> {
    if m.free {
        (0..m.intensions.len()).collect()
    } else {
        m.domain_at(w).collect()
    }
}

/// A world and assignment where every assumption holds and the conclusion
/// fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Falsifier {
    pub world: usize,
    pub assignment: Vec<(String, usize)>,
}

/// A sequent compiled for repeated checks on models of one layout.
pub struct CompiledSequent {
    vars: Vec<String>,
    assumptions: Vec<Compiled>,
    conclusion: Compiled,
}

impl CompiledSequent {
    pub fn new(
        m: &KripkeModel,
        assumptions: &[Formula],
        conclusion: &Formula,
        env: &Environment,
    ) -> Result<Self, EvalError> {
        let vars = sequent_vars(assumptions, conclusion);
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        let ev = Evaluator::new(m);
        let assumptions = assumptions
            .iter()
            .map(|a| ev.compile(a, &names, env))
            .collect::<Result<_, _>>()?;
        let conclusion = ev.compile(conclusion, &names, env)?;
        Ok(CompiledSequent {
            vars,
            assumptions,
            conclusion,
        })
    }

    pub fn fits(&self, m: &KripkeModel) -> bool {
        self.conclusion.fits(m)
    }

    /// First falsifying world and assignment on `m`, if any.
    pub fn falsify(&self, m: &KripkeModel) -> Option<Falsifier> {
        let ev = Evaluator::new(m);
        let mut assignment = vec![0usize; self.vars.len()];
        for w in 0..m.worlds.len() {
            let range = assignable(m, w);
            if range.is_empty() && !self.vars.is_empty() {
                continue;
            }
            loop {
                if self.assumptions.iter().all(|a| ev.holds(w, a, &assignment))
                    && !ev.holds(w, &self.conclusion, &assignment)
                {
                    return Some(Falsifier {
                        world: w,
                        assignment: self.vars.iter().cloned().zip(assignment.iter().copied()).collect(),
                    });
                }
                if !advance(&mut assignment, &range) {
                    break;
                }
            }
        }
        None
    }
}

/// Next assignment over `range` in odometer order; false after the last.
/// Values are positions in `range` mapped back to intensions.
fn advance(assignment: &mut [usize], range: &[usize]) -> bool {
    for slot in assignment.iter_mut().rev() {
        let i = range.iter().position(|&d| d == *slot).map_or(0, |i| i + 1);
        if i < range.len() {
            *slot = range[i];
            return true;
        }
        *slot = range[0];
    }
    false
}

pub fn falsify_sequent(
    m: &KripkeModel,
    assumptions: &[Formula],
    conclusion: &Formula,
    env: &Environment,
) -> Result<Option<Falsifier>, EvalError> {
    Ok(CompiledSequent::new(m, assumptions, conclusion, env)?.falsify(m))
}

/// Truth preservation at every world under every assignment.
pub fn holds_sequent(
    m: &KripkeModel,
    assumptions: &[Formula],
    conclusion: &Formula,
    env: &Environment,
) -> Result<bool, EvalError> {
    falsify_sequent(m, assumptions, conclusion, env).map(|f| f.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula_inferring, substitute, Language, Signature};

    fn f(text: &str) -> Formula {
        let mut sig = Signature::new(Language::Negation).with_free(true).with_descriptions(true);
        let mut a = parse_formula_inferring(text, &mut sig);
        if a.is_err() {
            let mut sig = Signature::new(Language::Falsum)
                .with_free(true)
                .with_descriptions(true)
                .with_primed(true);
            a = parse_formula_inferring(text, &mut sig);
        }
        a.unwrap()
    }

    fn one_world(kind: Kind) -> KripkeModel {
        let mut m = KripkeModel::skeleton(kind, false, 1, 1);
        m.add_intension("d", vec![0]);
        m.constants.push(("a".into(), 0));
        for p in ["P", "Q", "F", "G"] {
            m.add_predicate(p, 1);
        }
        m.predicate_mut("P").unwrap().pos[0].insert(vec![0]);
        m
    }

    fn at(m: &KripkeModel, w: usize, text: &str) -> bool {
        eval(m, w, &f(text), &Environment::of(m)).unwrap()
    }

    #[test]
    fn intuitionistic_clauses() {
        let m = one_world(Kind::Intuitionistic);
        assert!(at(&m, 0, "P(a)"));
        assert!(!at(&m, 0, "P(a) -> bot"));
        assert!(at(&m, 0, "(P(a) -> bot) -> bot"));
        assert!(at(&m, 0, "forall x.P(x)"));
        assert!(!at(&m, 0, "exists x.Q(x)"));
    }

    #[test]
    fn glut() {
        let mut m = one_world(Kind::Nelsonian);
        m.predicate_mut("P").unwrap().neg[0].insert(vec![0]);
        assert!(at(&m, 0, "P(a)"));
        assert!(at(&m, 0, "~P(a)"));
        assert!(!at(&m, 0, "Q(a)"));
        assert_eq!(at(&m, 0, "~~P(a)"), at(&m, 0, "P(a)"));
    }

    #[test]
    fn de_morgan() {
        let mut m = one_world(Kind::Nelsonian);
        m.predicate_mut("Q").unwrap().neg[0].insert(vec![0]);
        assert!(at(&m, 0, "~(P(a) & Q(a))"));
        assert!(!at(&m, 0, "~(P(a) | Q(a))"));
        assert!(at(&m, 0, "~(P(a) -> Q(a))"));
    }

    fn two_existents() -> KripkeModel {
        let mut m = KripkeModel::skeleton(Kind::Intuitionistic, true, 1, 2);
        m.add_intension("d", vec![0]);
        let e = m.add_intension("e", vec![1]);
        m.exists[0] &= !(1 << e);
        m.domain[0] &= !(1 << e);
        for p in ["F", "G"] {
            let i = m.add_predicate(p, 1);
            m.predicates[i].pos[0].insert(vec![0]);
        }
        m
    }

    #[test]
    fn description_needs_uniqueness() {
        let mut m = two_existents();
        assert!(at(&m, 0, "I x[F(x),G(x)]"));
        m.exists[0] |= 0b10;
        m.domain[0] |= 0b10;
        m.predicate_mut("F").unwrap().pos[0].insert(vec![1]);
        assert!(!at(&m, 0, "I x[F(x),G(x)]"));
    }

    #[test]
    fn description_looks_ahead() {
        // Unique at w0, but a second F appears at w1.
        let mut m = KripkeModel::skeleton(Kind::Intuitionistic, true, 2, 2);
        m.add_intension("d", vec![0, 0]);
        let e = m.add_intension("e", vec![1, 1]);
        m.exists[0] &= !(1 << e);
        m.relate(0, 1);
        let fp = m.add_predicate("F", 1);
        m.predicates[fp].pos[0].insert(vec![0]);
        m.predicates[fp].pos[1].extend([vec![0], vec![1]]);
        let g = m.add_predicate("G", 1);
        m.predicates[g].pos[0].insert(vec![0]);
        m.predicates[g].pos[1].insert(vec![0]);
        assert!(!at(&m, 0, "I x[F(x),G(x)]"));
        assert!(at(&m, 0, "exists x.(F(x) & G(x))"));
    }

    #[test]
    fn negated_description_is_the_unfolding() {
        let mut m = KripkeModel::skeleton(Kind::Nelsonian, false, 1, 2);
        m.add_intension("d", vec![0]);
        m.add_intension("e", vec![1]);
        m.add_predicate("G", 1);
        let fp = m.add_predicate("F", 1);
        m.predicates[fp].pos[0].extend([vec![0], vec![1]]);
        assert!(!at(&m, 0, "~I x[F(x),G(x)]"));
        m.neg_eq[0].extend([vec![0, 1], vec![1, 0]]);
        assert!(at(&m, 0, "~I x[F(x),G(x)]"));
        assert_eq!(
            at(&m, 0, "~I x[F(x),G(x)]"),
            at(&m, 0, "forall x.(~F(x) | (exists y.(F(y) & ~y=x)) | ~G(x))")
        );
    }

    #[test]
    fn existence_and_its_refutation() {
        let mut m = KripkeModel::skeleton(Kind::Nelsonian, true, 2, 2);
        m.add_intension("d", vec![0, 0]);
        let e = m.add_intension("e", vec![1, 1]);
        m.constants.push(("c".into(), e));
        m.relate(0, 1);
        m.exists[0] &= !(1 << e);
        assert!(!at(&m, 0, "E!(c)"));
        assert!(at(&m, 1, "E!(c)"));
        // c comes to exist, so its non-existence is not yet settled at w0.
        assert!(!at(&m, 0, "~E!(c)"));
        m.exists[1] &= !(1 << e);
        assert!(at(&m, 0, "~E!(c)"));
    }

    #[test]
    fn errors() {
        let m = one_world(Kind::Intuitionistic);
        let env = Environment::of(&m);
        assert_eq!(eval(&m, 0, &f("P(x)"), &env), Err(EvalError::OpenFormula("x".into())));
        assert_eq!(eval(&m, 0, &f("P(b)"), &env), Err(EvalError::UnknownConstant("b".into())));
        assert_eq!(eval(&m, 0, &f("~P(a)"), &env), Err(EvalError::NegationInIntuitionistic));
        assert!(matches!(eval_nelson(&m, 0, &f("P(a)"), &env), Err(EvalError::KindMismatch { .. })));
        assert!(eval(&m, 0, &f("P(k0)"), &env).unwrap());
        assert!(eval(&m, 0, &f("P(k1)"), &env).is_err());
    }

    #[test]
    fn sequents() {
        let mut m = one_world(Kind::Nelsonian);
        m.predicate_mut("P").unwrap().neg[0].insert(vec![0]);
        let env = Environment::of(&m);
        assert!(holds_sequent(&m, &[f("P(a)")], &f("P(a)"), &env).unwrap());
        assert!(!holds_sequent(&m, &[f("P(a)"), f("~P(a)")], &f("Q(a)"), &env).unwrap());
        // Free variables range over the domain.
        assert!(holds_sequent(&m, &[f("Q(y)")], &f("P(y)"), &env).unwrap());
        assert!(!holds_sequent(&m, &[], &f("Q(y)"), &env).unwrap());
    }

    /// Evaluation by literal substitution of `k_d`, as a reference.
    fn by_substitution(m: &KripkeModel, w: usize, a: &Formula, positive: bool) -> bool {
        let k = Term::injected;
        let sub = |x: &str, body: &Formula, d: usize| substitute(body, x, &k(d)).unwrap();
        let env = Environment::of(m);
        match (a, positive) {
            (Formula::Not(b), true) => by_substitution(m, w, b, false),
            (Formula::Not(b), false) => by_substitution(m, w, b, true),
            (Formula::And(x, y), true) => by_substitution(m, w, x, true) && by_substitution(m, w, y, true),
            (Formula::And(x, y), false) => by_substitution(m, w, x, false) || by_substitution(m, w, y, false),
            (Formula::Or(x, y), true) => by_substitution(m, w, x, true) || by_substitution(m, w, y, true),
            (Formula::Or(x, y), false) => by_substitution(m, w, x, false) && by_substitution(m, w, y, false),
            (Formula::Imp(x, y), true) => m
                .successors(w)
                .all(|v| !by_substitution(m, v, x, true) || by_substitution(m, v, y, true)),
            (Formula::Imp(x, y), false) => by_substitution(m, w, x, true) && by_substitution(m, w, y, false),
            (Formula::Forall(x, b), true) => m
                .successors(w)
                .all(|v| m.existents(v).all(|d| by_substitution(m, v, &sub(x, b, d), true))),
            (Formula::Forall(x, b), false) => m.existents(w).any(|d| by_substitution(m, w, &sub(x, b, d), false)),
            (Formula::Exists(x, b), true) => m.existents(w).any(|d| by_substitution(m, w, &sub(x, b, d), true)),
            (Formula::Exists(x, b), false) => m
                .successors(w)
                .all(|v| m.existents(v).all(|d| by_substitution(m, v, &sub(x, b, d), false))),
            (atomic, true) => eval(m, w, atomic, &env).unwrap(),
            (atomic, false) => eval(m, w, &Formula::not(atomic.clone()), &env).unwrap(),
        }
    }

    #[test]
    fn bindings_agree_with_substitution() {
        let mut m = KripkeModel::skeleton(Kind::Nelsonian, false, 2, 2);
        m.add_intension("d", vec![0, 0]);
        m.add_intension("e", vec![1, 1]);
        m.constants.push(("a".into(), 0));
        m.relate(0, 1);
        m.domain[0] = 0b01;
        m.exists[0] = 0b01;
        let p = m.add_predicate("P", 1);
        m.predicates[p].pos[0].insert(vec![0]);
        m.predicates[p].pos[1].insert(vec![0]);
        m.predicates[p].neg[1].insert(vec![1]);
        m.neg_eq[1].insert(vec![0, 1]);
        assert!(super::super::validate_model(&m).is_empty());
        for text in [
            "forall x.P(x)",
            "~forall x.P(x)",
            "exists x.~P(x)",
            "~exists x.(P(x) & ~x=a)",
            "forall x.(P(x) | ~P(x))",
            "~forall x.exists y.(~y=x -> P(y))",
            "exists x.forall y.(P(y) -> y=x)",
        ] {
            let a = f(text);
            for w in 0..2 {
                assert_eq!(at(&m, w, text), by_substitution(&m, w, &a, true), "{text} at {w}");
            }
        }
    }
}
