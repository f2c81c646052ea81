//! Exhaustive property sweeps over enumerated models and generated formulas.
//!
//! Formulas are not evaluated one by one. On each model the generated
//! formulas of one depth are grouped into classes that agree on every table
//! the sweep looks at, and a formula of the next depth is evaluated once per
//! combination of classes, using placeholder leaves for its parts. This is
//! exact because every clause of both semantics, and every clause of the
//! translation, is compositional. Class sizes are tracked, so the reports
//! count formulas, not classes, and each count is checked against the
//! number of formulas the generator would produce.

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};

use crate::embedding::{pair_model, tau, unpair_model, EmbeddingError};
use crate::semantics::{KripkeModel, Kind, Table, Tabulated, Tabulator};
use crate::syntax::{free_vars, print, Formula, Language, Term};

use super::generate::{FormulaSpec, Levels};
use super::{enumerate_models, Bounds, SearchError};

/// How many failures a report keeps in full.
pub const MAX_EXAMPLES: usize = 3;

/// One falsified instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub model: KripkeModel,
    pub world: usize,
    pub formula: Formula,
    pub what: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at world {}: {}",
            print(&self.formula),
            self.model.worlds[self.world],
            self.what
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub models: u64,
    /// Formula instances checked, summed over models.
    pub checked: u64,
    /// Instances outside the property's scope, such as formulas the
    /// translation does not cover.
    pub skipped: u64,
    pub failures: u64,
    pub examples: Vec<Failure>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.failures == 0
    }

    /// Records `count` failing instances, keeping the first as an example.
    fn fail(&mut self, count: u64, make: impl FnOnce() -> Failure) {
        self.failures += count;
        if self.examples.len() < MAX_EXAMPLES {
            self.examples.push(make());
        }
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} models, {} checked, {} skipped, {} failures",
            self.models, self.checked, self.skipped, self.failures
        )?;
        for e in &self.examples {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Not,
    Forall,
    Exists,
    And,
    Or,
    Imp,
    Descr,
}

impl Op {
    fn binary(self) -> bool {
        matches!(self, Op::And | Op::Or | Op::Imp | Op::Descr)
    }

    fn binds(self) -> bool {
        matches!(self, Op::Forall | Op::Exists | Op::Descr)
    }

    fn build(self, x: &str, a: Formula, b: Formula) -> Formula {
        match self {
            Op::Not => Formula::not(a),
            Op::Forall => Formula::forall(x, a),
            Op::Exists => Formula::exists(x, a),
            Op::And => Formula::and(a, b),
            Op::Or => Formula::or(a, b),
            Op::Imp => Formula::imp(a, b),
            Op::Descr => Formula::descr(x, a, b),
        }
    }
}

/// The tables a sweep tracks for one formula on one model: its own (`n`)
/// and, in the pairing sweeps, those of its translation on the partner
/// model (`i`: truth of `tau(C)` as truth, truth of `tau(~C)` as falsity).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
struct Sig {
    n: Table,
    i: Table,
    /// Bit 0: `tau(C)` is defined. Bit 1: `tau(~C)` is defined.
    defined: u8,
}

/// Multiplicative hashing for the small fixed-size keys of the class index.
#[derive(Default)]
struct WordHasher(u64);

impl Hasher for WordHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0.rotate_left(5) ^ x).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn write_u8(&mut self, x: u8) {
        self.write_u64(x as u64);
    }
}

type Index<K, V> = HashMap<K, V, BuildHasherDefault<WordHasher>>;

#[derive(Clone, Copy, Debug)]
enum Origin {
    Literal(usize),
    Node(Op, (usize, usize), (usize, usize)),
}

#[derive(Clone, Copy, Debug)]
struct Class {
    sig: Sig,
    closed: bool,
    count: u64,
    origin: Origin,
}

/// Generated formulas of each depth, as classes on one model.
struct Engine {
    spec: FormulaSpec,
    depth: usize,
    literals: Vec<Formula>,
    atoms: usize,
    ops: Vec<Op>,
    expected: Vec<u64>,
}

impl Engine {
    fn new(spec: &FormulaSpec, depth: usize) -> Self {
        let literals = spec.literals();
        let atoms = literals.iter().take_while(|a| a.is_atomic()).count();
        let mut ops = Vec::new();
        if spec.language == Language::Negation {
            ops.push(Op::Not);
        }
        ops.extend([Op::Forall, Op::Exists, Op::And, Op::Or, Op::Imp]);
        if spec.descriptions {
            ops.push(Op::Descr);
        }
        let levels = Levels::build(spec, depth.saturating_sub(1));
        let expected = (0..=depth).map(|k| levels.count_at(k)).collect();
        Engine {
            spec: spec.clone(),
            depth,
            literals,
            atoms,
            ops,
            expected,
        }
    }

    fn formula(&self, levels: &[Vec<Class>], at: (usize, usize)) -> Formula {
        match levels[at.0][at.1].origin {
            Origin::Literal(i) => self.literals[i].clone(),
            Origin::Node(op, a, b) => {
                let b = if op.binary() { self.formula(levels, b) } else { Formula::Bot };
                op.build(&self.spec.variable, self.formula(levels, a), b)
            }
        }
    }

    /// Calls `visit` on every closed formula up to the depth, once per class
    /// with the class size. Returns the number of closed formulas.
    fn run(
        &self,
        lits: &[Sig],
        combine: &mut dyn FnMut(Op, &Sig, &Sig) -> Sig,
        visit: &mut dyn FnMut(&Sig, u64, &dyn Fn() -> Formula),
    ) -> u64 {
        let mut closed = 0;
        let mut levels: Vec<Vec<Class>> = vec![lits
            .iter()
            .enumerate()
            .map(|(i, s)| Class {
                sig: *s,
                closed: free_vars(&self.literals[i]).is_empty(),
                count: 1,
                origin: Origin::Literal(i),
            })
            .collect()];
        for (i, c) in levels[0].iter().enumerate() {
            if c.closed {
                closed += 1;
                visit(&c.sig, 1, &|| self.literals[i].clone());
            }
        }
        for k in 1..=self.depth {
            let last = k == self.depth;
            let mut index: Index<(Sig, bool), usize> = Index::default();
            let mut next: Vec<Class> = Vec::new();
            let mut total = 0u64;
            for &op in &self.ops {
                let pairs: Vec<(usize, usize)> = if op.binary() {
                    (0..k).map(|i| (i, k - 1 - i)).collect()
                } else {
                    vec![(k - 1, k - 1)]
                };
                for (la, lb) in pairs {
                    let skip = if op == Op::Not && la == 0 { self.atoms } else { 0 };
                    for (ia, a) in levels[la].iter().enumerate().skip(skip) {
                        let partners: &[Class] = if op.binary() { &levels[lb] } else { std::slice::from_ref(a) };
                        for (ib, b) in partners.iter().enumerate() {
                            let count = if op.binary() { a.count * b.count } else { a.count };
                            total += count;
                            let is_closed = op.binds() || (a.closed && (!op.binary() || b.closed));
                            if last && !is_closed {
                                continue;
                            }
                            let sig = combine(op, &a.sig, &b.sig);
                            let origin = Origin::Node(op, (la, ia), (lb, if op.binary() { ib } else { ia }));
                            if last {
                                closed += count;
                                let built = || {
                                    let bf = if op.binary() { self.formula(&levels, (lb, ib)) } else { Formula::Bot };
                                    op.build(&self.spec.variable, self.formula(&levels, (la, ia)), bf)
                                };
                                visit(&sig, count, &built);
                            } else {
                                match index.get(&(sig, is_closed)) {
                                    Some(&j) => next[j].count += count,
                                    None => {
                                        index.insert((sig, is_closed), next.len());
                                        next.push(Class {
                                            sig,
                                            closed: is_closed,
                                            count,
                                            origin,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(total, self.expected[k], "depth {k} formulas were not all generated");
            if !last {
                levels.push(next);
                let lv = levels.len() - 1;
                for j in 0..levels[lv].len() {
                    let c = levels[lv][j];
                    if c.closed {
                        closed += c.count;
                        visit(&c.sig, c.count, &|| self.formula(&levels, (lv, j)));
                    }
                }
            }
        }
        closed
    }
}

/// Placeholder leaves of the operator templates.
const LEAVES: [&str; 2] = ["L", "R"];
const PRIMED_LEAVES: [&str; 4] = ["L", "L'", "R", "R'"];

fn template(op: Op, x: &str) -> Formula {
    let leaf = |l: &str| Formula::atom(l, vec![Term::var(x)]);
    op.build(x, leaf(LEAVES[0]), leaf(LEAVES[1]))
}

fn second_var(x: &str) -> &'static str {
    if x == "y" {
        "z"
    } else {
        "y"
    }
}

/// A translated template with the partner tables it reads.
struct Translated {
    formula: Formula,
    /// Leaves used, as in [`PRIMED_LEAVES`].
    uses: [bool; 4],
    wide: bool,
}

impl Translated {
    fn of(a: &Formula, x: &str) -> Option<Self> {
        let t = tau(a).ok()?;
        let preds = t.predicates();
        let uses = PRIMED_LEAVES.map(|l| preds.iter().any(|(p, _)| p == l));
        let wide = t.all_vars().iter().any(|v| v != x);
        Some(Translated { formula: t, uses, wide })
    }

    fn defined(&self, a: &Sig, b: &Sig) -> bool {
        let have = [a.defined & 1 != 0, a.defined & 2 != 0, b.defined & 1 != 0, b.defined & 2 != 0];
        self.uses.iter().zip(have).all(|(&u, h)| !u || h)
    }
}

/// Operator templates and their translations, shared by every model.
struct Templates {
    /// One per operator of the engine, in `Op` order.
    ops: Vec<(Op, Formula, Option<Translated>, Option<Translated>)>,
    /// `Op` discriminant of the first entry.
    first: usize,
}

impl Templates {
    fn new(engine: &Engine) -> Self {
        let x = &engine.spec.variable;
        let ops = engine
            .ops
            .iter()
            .map(|&op| {
                let t = template(op, x);
                let pos = Translated::of(&t, x);
                let neg = Translated::of(&Formula::not(t.clone()), x);
                (op, t, pos, neg)
            })
            .collect::<Vec<_>>();
        let first = engine.ops[0] as usize;
        debug_assert!(ops.iter().enumerate().all(|(k, t)| t.0 as usize == first + k));
        Templates { ops, first }
    }
}

type Compiled = (Tabulated, Option<(Tabulated, bool)>, Option<(Tabulated, bool)>);

/// Per-model tabulators and compiled templates.
struct Pair<'m> {
    own: Tabulator<'m>,
    partner: Option<(Tabulator<'m>, Tabulator<'m>)>,
    /// Indexed like [`Templates::ops`].
    compiled: Vec<Compiled>,
}

impl<'m> Pair<'m> {
    fn new(
        own: &'m KripkeModel,
        partner: Option<&'m KripkeModel>,
        templates: &Templates,
        x: &str,
    ) -> Result<Self, SearchError> {
        let tab = Tabulator::new(own, &[x])?;
        let partner = match partner {
            Some(p) => Some((Tabulator::new(p, &[x])?, Tabulator::new(p, &[x, second_var(x)])?)),
            None => None,
        };
        let mut compiled = Vec::new();
        for (_, t, pos, neg) in &templates.ops {
            let n = tab.compile(t, &LEAVES)?;
            let side = |tr: &Option<Translated>| -> Result<Option<(Tabulated, bool)>, SearchError> {
                match (&partner, tr) {
                    (Some((narrow, wide)), Some(tr)) => {
                        let tabl = if tr.wide { wide } else { narrow };
                        Ok(Some((tabl.compile(&tr.formula, &PRIMED_LEAVES)?, tr.wide)))
                    }
                    _ => Ok(None),
                }
            };
            compiled.push((n, side(pos)?, side(neg)?));
        }
        Ok(Pair {
            own: tab,
            partner,
            compiled,
        })
    }

    fn literal(&self, a: &Formula) -> Result<Sig, SearchError> {
        let n = self.own.table(a)?;
        let Some((narrow, _)) = &self.partner else {
            return Ok(Sig {
                n,
                ..Sig::default()
            });
        };
        let pos = narrow.table(&tau(a)?)?;
        let neg = narrow.table(&tau(&Formula::not(a.clone()))?)?;
        Ok(Sig {
            n,
            i: Table {
                truth: pos.truth,
                falsity: neg.truth,
            },
            defined: 3,
        })
    }

    fn combine(&self, templates: &Templates, op: Op, a: &Sig, b: &Sig) -> Sig {
        let k = op as usize - templates.first;
        let (n, pos, neg) = &self.compiled[k];
        let own = self.own.run(n, &[a.n, b.n]);
        let Some((narrow, wide)) = &self.partner else {
            return Sig {
                n: own,
                ..Sig::default()
            };
        };
        let leaves = [
            Table {
                truth: a.i.truth,
                falsity: 0,
            },
            Table {
                truth: a.i.falsity,
                falsity: 0,
            },
            Table {
                truth: b.i.truth,
                falsity: 0,
            },
            Table {
                truth: b.i.falsity,
                falsity: 0,
            },
        ];
        let (_, _, tpos, tneg) = &templates.ops[k];
        let mut defined = 0;
        let mut side = |c: &Option<(Tabulated, bool)>, tr: &Option<Translated>, bit: u8| -> u64 {
            match (c, tr) {
                (Some((c, is_wide)), Some(tr)) if tr.defined(a, b) => {
                    defined |= bit;
                    if *is_wide {
                        wide.narrow(wide.run(c, &leaves), 0).truth
                    } else {
                        narrow.run(c, &leaves).truth
                    }
                }
                _ => 0,
            }
        };
        let truth = side(pos, tpos, 1);
        let falsity = side(neg, tneg, 2);
        Sig {
            n: own,
            i: Table { truth, falsity },
            defined,
        }
    }
}

/// Formulas over the signature of `b`: its unary predicates and constants,
/// one variable, identity, descriptions, and `E!` in free models.
pub fn sweep_spec(b: &Bounds, language: Language) -> Result<FormulaSpec, SearchError> {
    let mut predicates = Vec::new();
    for (p, n) in &b.predicates {
        if *n != 1 {
            return Err(SearchError::Bounds(format!("sweeps need unary predicates, {p} has arity {n}")));
        }
        if !p.ends_with('\'') {
            predicates.push(p.clone());
        }
    }
    Ok(FormulaSpec {
        predicates,
        constants: b.constants.clone(),
        variable: "x".into(),
        identity: true,
        existence: b.free,
        descriptions: true,
        language,
    })
}

/// Bits of the first world block of a closed formula's table: one per world.
fn worlds_of(tab: &Tabulator, x: u64, worlds: usize) -> Vec<usize> {
    (0..worlds).filter(|&w| tab.at(x, w, &[0])).collect()
}

/// Reports from one pass of the pairing sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairingSweep {
    /// `C` against `tau(C)`, and `~C` against `tau(~C)`.
    pub agreement: SweepReport,
    /// Truth and falsity persist along the relation, on both sides.
    pub heredity: SweepReport,
}

/// Compares every generated closed formula of depth at most `depth` with its
/// translation, over all Nelsonian models in `b` and their paired models.
pub fn check_pairing_lemma(b: &Bounds, depth: usize) -> Result<SweepReport, SearchError> {
    Ok(pairing_sweep(b, depth, |m| pair_model(m))?.agreement)
}

/// [`check_pairing_lemma`] with a replacement for [`pair_model`].
pub fn check_pairing_lemma_with(
    b: &Bounds,
    depth: usize,
    pair: impl Fn(&KripkeModel) -> Result<KripkeModel, EmbeddingError>,
) -> Result<SweepReport, SearchError> {
    Ok(pairing_sweep(b, depth, pair)?.agreement)
}

/// The pairing sweep in full: agreement and heredity over Nelsonian models.
pub fn pairing_sweep(
    b: &Bounds,
    depth: usize,
    pair: impl Fn(&KripkeModel) -> Result<KripkeModel, EmbeddingError>,
) -> Result<PairingSweep, SearchError> {
    if b.kind != Kind::Nelsonian {
        return Err(SearchError::Bounds("the pairing sweep enumerates Nelsonian models".into()));
    }
    b.check()?;
    let spec = sweep_spec(b, Language::Negation)?;
    let models = enumerate_models(b).map(|m| {
        let p = pair(&m)?;
        Ok((m, p))
    });
    sweep_pairs(&spec, depth, models)
}

/// The other direction: every intuitionistic model in `b` (over `P` and
/// `P'` with `='`) against its unpairing.
pub fn check_unpairing_lemma(b: &Bounds, depth: usize) -> Result<PairingSweep, SearchError> {
    if b.kind != Kind::Intuitionistic {
        return Err(SearchError::Bounds("the unpairing sweep enumerates intuitionistic models".into()));
    }
    b.check()?;
    let spec = sweep_spec(b, Language::Negation)?;
    let models = enumerate_models(b).map(|i| {
        let n = unpair_model(&i)?;
        Ok((n, i))
    });
    sweep_pairs(&spec, depth, models)
}

/// Intuitionistic bounds over the primed signature of Nelsonian bounds.
pub fn primed_bounds(b: &Bounds) -> Bounds {
    let mut out = b.clone();
    out.kind = Kind::Intuitionistic;
    out.predicates = b
        .predicates
        .iter()
        .flat_map(|(p, n)| [(p.clone(), *n), (crate::embedding::primed(p), *n)])
        .collect();
    out.identity_extension = b.identity_extension;
    out
}

fn sweep_pairs(
    spec: &FormulaSpec,
    depth: usize,
    models: impl Iterator<Item = Result<(KripkeModel, KripkeModel), EmbeddingError>>,
) -> Result<PairingSweep, SearchError> {
    let engine = Engine::new(spec, depth);
    let templates = Templates::new(&engine);
    let x = spec.variable.clone();
    let mut out = PairingSweep::default();
    for pair in models {
        let (n, i) = pair?;
        let p = Pair::new(&n, Some(&i), &templates, &x)?;
        let lits = engine
            .literals
            .iter()
            .map(|a| p.literal(a))
            .collect::<Result<Vec<_>, _>>()?;
        let worlds = n.worlds.len();
        let (narrow, _) = p.partner.as_ref().expect("partner");
        let agreement = &mut out.agreement;
        let heredity = &mut out.heredity;
        engine.run(
            &lits,
            &mut |op, a, b| p.combine(&templates, op, a, b),
            &mut |sig, count, formula| {
                for (bit, mine, theirs, what) in [
                    (1u8, sig.n.truth, sig.i.truth, "truth against tau(C)"),
                    (2u8, sig.n.falsity, sig.i.falsity, "falsity against tau(~C)"),
                ] {
                    if sig.defined & bit == 0 {
                        agreement.skipped += count;
                        continue;
                    }
                    agreement.checked += count;
                    if mine != theirs {
                        agreement.fail(count, || Failure {
                            model: n.clone(),
                            world: worlds_of(&p.own, mine ^ theirs, worlds)[0],
                            formula: formula(),
                            what: format!("{what} differs"),
                        });
                    }
                }
                let tables = [
                    (&p.own, sig.n.truth, true, "truth"),
                    (&p.own, sig.n.falsity, true, "falsity"),
                    (narrow, sig.i.truth, sig.defined & 1 != 0, "truth of tau(C)"),
                    (narrow, sig.i.falsity, sig.defined & 2 != 0, "truth of tau(~C)"),
                ];
                for (tab, x, defined, what) in tables {
                    if !defined {
                        continue;
                    }
                    heredity.checked += count;
                    let bad = tab.unhereditary(x);
                    if bad != 0 {
                        heredity.fail(count, || Failure {
                            model: n.clone(),
                            world: worlds_of(tab, bad, worlds)[0],
                            formula: formula(),
                            what: format!("{what} does not persist"),
                        });
                    }
                }
            },
        );
        out.agreement.models += 1;
        out.heredity.models += 1;
    }
    Ok(out)
}

/// Truth (and in Nelsonian models falsity) of every generated closed formula
/// persists along the relation, over all models in `b`.
pub fn check_heredity(b: &Bounds, depth: usize) -> Result<SweepReport, SearchError> {
    b.check()?;
    let language = match b.kind {
        Kind::Nelsonian => Language::Negation,
        Kind::Intuitionistic => Language::Falsum,
    };
    let spec = sweep_spec(b, language)?;
    let engine = Engine::new(&spec, depth);
    let templates = Templates::new(&engine);
    let mut report = SweepReport::default();
    for m in enumerate_models(b) {
        let p = Pair::new(&m, None, &templates, &spec.variable)?;
        let lits = engine
            .literals
            .iter()
            .map(|a| p.literal(a))
            .collect::<Result<Vec<_>, _>>()?;
        let worlds = m.worlds.len();
        engine.run(
            &lits,
            &mut |op, a, b| p.combine(&templates, op, a, b),
            &mut |sig, count, formula| {
                for (x, what) in [(sig.n.truth, "truth"), (sig.n.falsity, "falsity")] {
                    report.checked += count;
                    let bad = p.own.unhereditary(x);
                    if bad != 0 {
                        let ws = worlds_of(&p.own, bad, worlds);
                        report.fail(count, || Failure {
                            model: m.clone(),
                            world: ws[0],
                            formula: formula(),
                            what: format!("{what} does not persist"),
                        });
                    }
                }
            },
        );
        report.models += 1;
    }
    Ok(report)
}

/// `I x[F,G]` against `exists x.(F & forall y.(F(y) -> y=x) & G)` for every
/// pair of generated formulas `F`, `G` of depth at most `depth` with at most
/// `x` free, at every world of every model in `b`. Truth is compared, and
/// falsity too in Nelsonian models.
pub fn check_unfolding(b: &Bounds, depth: usize) -> Result<SweepReport, SearchError> {
    b.check()?;
    let language = match b.kind {
        Kind::Nelsonian => Language::Negation,
        Kind::Intuitionistic => Language::Falsum,
    };
    let spec = sweep_spec(b, language)?;
    let x = spec.variable.clone();
    let y = second_var(&x);
    let parts = super::generate::open_formulas(&spec, depth);
    let leaf = |l: &str, v: &str| Formula::atom(l, vec![Term::var(v)]);
    let descr = Formula::descr(x.clone(), leaf("L", &x), leaf("R", &x));
    // The unfolding is evaluated in two stages: its left conjunct depends on
    // F alone and is tabulated once per class of F.
    let unique = Formula::and(
        leaf("L", &x),
        Formula::forall(y, Formula::imp(leaf("L", y), Formula::eq(Term::var(y), Term::var(x.clone())))),
    );
    let unfolded = Formula::exists(x.clone(), Formula::and(leaf("A", &x), leaf("R", &x)));
    let mut report = SweepReport::default();
    let n = parts.len() as u64;
    for m in enumerate_models(b) {
        let narrow = Tabulator::new(&m, &[&x])?;
        let wide = Tabulator::new(&m, &[&x, y])?;
        let d = narrow.compile(&descr, &LEAVES)?;
        let head = wide.compile(&unique, &LEAVES[..1])?;
        let tail = narrow.compile(&unfolded, &["A", "R"])?;
        // Classes of parts with equal tables, with a representative each.
        let mut classes: HashMap<Table, usize> = HashMap::new();
        let mut reps: Vec<(Table, usize)> = Vec::new();
        let mut sizes: Vec<u64> = Vec::new();
        for (k, a) in parts.iter().enumerate() {
            let t = narrow.table(a)?;
            let c = *classes.entry(t).or_insert_with(|| {
                reps.push((t, k));
                sizes.push(0);
                reps.len() - 1
            });
            sizes[c] += 1;
        }
        for (fi, &(ft, fk)) in reps.iter().enumerate() {
            let a = wide.narrow(wide.run(&head, &[ft]), 0);
            for (gi, &(gt, gk)) in reps.iter().enumerate() {
                let count = sizes[fi] * sizes[gi];
                let left = narrow.run(&d, &[ft, gt]);
                let right = narrow.run(&tail, &[a, gt]);
                report.checked += count;
                let mut diff = left.truth ^ right.truth;
                if m.kind == Kind::Nelsonian {
                    diff |= left.falsity ^ right.falsity;
                }
                if diff != 0 {
                    report.fail(count, || Failure {
                        model: m.clone(),
                        world: worlds_of(&narrow, diff, m.worlds.len())[0],
                        formula: Formula::descr(x.clone(), parts[fk].clone(), parts[gk].clone()),
                        what: "description and its unfolding differ".into(),
                    });
                }
            }
        }
        debug_assert_eq!(sizes.iter().sum::<u64>(), n);
        report.models += 1;
    }
    Ok(report)
}
