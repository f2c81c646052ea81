//! Structural conditions on Kripke structures.
//!
//! Besides the conditions read off the structure definitions, two
//! intension-level conditions are enforced. Atoms are evaluated on the values
//! `|d|_w`, and values may change along `R`, so plain monotonicity of the
//! object-level extensions does not make atomic truth persist. `Transport`
//! and `IdentityTransport` close that gap. `ValueCollision` keeps the value of
//! a non-existent intension out of `J_w`, which makes the intension-level
//! reading of `E!` agree with strictness.

use std::fmt;

use super::model::{bits, Extension, KripkeModel, Kind, MAX_INTENSIONS};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Violation {
    Empty(&'static str),
    Malformed(String),
    NotReflexive { world: String },
    NotTransitive { w: String, v: String, u: String },
    DomainMonotonicity { w: String, v: String, intension: String },
    ExistenceMonotonicity { w: String, v: String, intension: String },
    ExistenceOutsideDomain { world: String, intension: String },
    OrdinaryExistence { world: String },
    ConstantDenotation { constant: String, world: String },
    Monotonicity { relation: String, w: String, v: String, tuple: Vec<String> },
    Transport { relation: String, w: String, v: String, intensions: Vec<String> },
    Strictness { relation: String, world: String, tuple: Vec<String> },
    ValueCollision { world: String, intension: String },
    IdentityTransport { w: String, v: String, left: String, right: String },
    NegativeExtension { relation: String },
}

impl Violation {
    /// Short clause name, stable across releases.
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::Empty(_) => "non-emptiness",
            Violation::Malformed(_) => "well-formedness",
            Violation::NotReflexive { .. } => "reflexivity",
            Violation::NotTransitive { .. } => "transitivity",
            Violation::DomainMonotonicity { .. } => "domain-monotonicity",
            Violation::ExistenceMonotonicity { .. } => "existence-monotonicity",
            Violation::ExistenceOutsideDomain { .. } => "existence-in-domain",
            Violation::OrdinaryExistence { .. } => "ordinary-existence",
            Violation::ConstantDenotation { .. } => "constant-denotation",
            Violation::Monotonicity { .. } => "monotonicity",
            Violation::Transport { .. } => "transport",
            Violation::Strictness { .. } => "strictness",
            Violation::ValueCollision { .. } => "value-collision",
            Violation::IdentityTransport { .. } => "identity-transport",
            Violation::NegativeExtension { .. } => "negative-extension",
        }
    }
}

fn tuple(t: &[String]) -> String {
    format!("({})", t.join(","))
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.clause())?;
        match self {
            Violation::Empty(what) => write!(f, "no {what}"),
            Violation::Malformed(msg) => f.write_str(msg),
            Violation::NotReflexive { world } => write!(f, "{world} does not see itself"),
            Violation::NotTransitive { w, v, u } => write!(f, "{w}R{v} and {v}R{u} but not {w}R{u}"),
            Violation::DomainMonotonicity { w, v, intension } => {
                write!(f, "{intension} in D_{w} but not in D_{v}")
            }
            Violation::ExistenceMonotonicity { w, v, intension } => {
                write!(f, "{intension} in E_{w} but not in E_{v}")
            }
            Violation::ExistenceOutsideDomain { world, intension } => {
                write!(f, "{intension} in E_{world} but not in D_{world}")
            }
            Violation::OrdinaryExistence { world } => {
                write!(f, "E_{world} differs from D_{world} in an ordinary model")
            }
            Violation::ConstantDenotation { constant, world } => {
                write!(f, "constant {constant} denotes outside D_{world}")
            }
            Violation::Monotonicity { relation, w, v, tuple: t } => {
                write!(f, "{} in {relation} at {w} but not at {v}", tuple(t))
            }
            Violation::Transport { relation, w, v, intensions } => write!(
                f,
                "values of {} are in {relation} at {w} but not at {v}",
                tuple(intensions)
            ),
            Violation::Strictness { relation, world, tuple: t } => {
                write!(f, "{} in {relation} at {world} is not a tuple of existents", tuple(t))
            }
            Violation::ValueCollision { world, intension } => write!(
                f,
                "{intension} does not exist at {world} but its value is that of an existent"
            ),
            Violation::IdentityTransport { w, v, left, right } => {
                write!(f, "{left} and {right} coincide at {w} but not at {v}")
            }
            Violation::NegativeExtension { relation } => {
                write!(f, "intuitionistic model carries a negative extension for {relation}")
            }
        }
    }
}

/// Every violated condition; empty iff the model is a structure of its kind.
pub fn validate_model(m: &KripkeModel) -> Vec<Violation> {
    let mut out = Vec::new();
    if !shape(m, &mut out) {
        return out;
    }
    frame(m, &mut out);
    domains(m, &mut out);
    extensions(m, &mut out);
    identity(m, &mut out);
    out
}

/// Index and size sanity. Later checks assume it.
fn shape(m: &KripkeModel, out: &mut Vec<Violation>) -> bool {
    let (nw, nh, nd) = (m.worlds.len(), m.objects.len(), m.intensions.len());
    if nw == 0 {
        out.push(Violation::Empty("worlds"));
    }
    if nh == 0 {
        out.push(Violation::Empty("objects"));
    }
    if nd == 0 {
        out.push(Violation::Empty("intensions"));
    }
    let mut bad = |msg: String| out.push(Violation::Malformed(msg));
    if nd > MAX_INTENSIONS {
        bad(format!("{nd} intensions exceed the limit of {MAX_INTENSIONS}"));
    }
    if m.rel.len() != nw || m.rel.iter().any(|r| r.len() != nw) {
        bad("accessibility matrix has the wrong size".into());
    }
    if m.domain.len() != nw || m.exists.len() != nw || m.neg_eq.len() != nw {
        bad("per-world domain, existence or ~= tables have the wrong length".into());
    }
    for d in &m.intensions {
        if d.values.len() != nw || d.values.iter().any(|&h| h >= nh) {
            bad(format!("intension {} is not a total map into the objects", d.name));
        }
    }
    let mask = if nd >= 64 { u64::MAX } else { (1u64 << nd) - 1 };
    if m.domain.iter().chain(&m.exists).any(|s| s & !mask != 0) {
        bad("domain or existence set names an unknown intension".into());
    }
    for (c, d) in &m.constants {
        if *d >= nd {
            bad(format!("constant {c} names an unknown intension"));
        }
    }
    let ext_ok = |e: &[Extension], arity: usize| {
        e.len() == nw && e.iter().flatten().all(|t| t.len() == arity && t.iter().all(|&h| h < nh))
    };
    for p in &m.predicates {
        if !ext_ok(&p.pos, p.arity) || !ext_ok(&p.neg, p.arity) {
            bad(format!("extension of {} has tuples of the wrong shape", p.name));
        }
    }
    if !ext_ok(&m.neg_eq, 2) {
        bad("~= has tuples of the wrong shape".into());
    }
    out.is_empty()
}

fn frame(m: &KripkeModel, out: &mut Vec<Violation>) {
    let n = m.worlds.len();
    for w in 0..n {
        if !m.rel[w][w] {
            out.push(Violation::NotReflexive {
                world: m.worlds[w].clone(),
            });
        }
        for v in 0..n {
            for u in 0..n {
                if m.rel[w][v] && m.rel[v][u] && !m.rel[w][u] {
                    out.push(Violation::NotTransitive {
                        w: m.worlds[w].clone(),
                        v: m.worlds[v].clone(),
                        u: m.worlds[u].clone(),
                    });
                }
            }
        }
    }
}

fn pairs(m: &KripkeModel) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = m.worlds.len();
    (0..n).flat_map(move |w| (0..n).filter(move |&v| v != w && m.rel[w][v]).map(move |v| (w, v)))
}

fn domains(m: &KripkeModel, out: &mut Vec<Violation>) {
    let name = |d: usize| m.intensions[d].name.clone();
    for (w, v) in pairs(m) {
        for d in bits(m.domain[w] & !m.domain[v]) {
            out.push(Violation::DomainMonotonicity {
                w: m.worlds[w].clone(),
                v: m.worlds[v].clone(),
                intension: name(d),
            });
        }
        for d in bits(m.exists[w] & !m.exists[v]) {
            out.push(Violation::ExistenceMonotonicity {
                w: m.worlds[w].clone(),
                v: m.worlds[v].clone(),
                intension: name(d),
            });
        }
    }
    for w in 0..m.worlds.len() {
        for d in bits(m.exists[w] & !m.domain[w]) {
            out.push(Violation::ExistenceOutsideDomain {
                world: m.worlds[w].clone(),
                intension: name(d),
            });
        }
        if !m.free {
            if m.exists[w] != m.domain[w] {
                out.push(Violation::OrdinaryExistence {
                    world: m.worlds[w].clone(),
                });
            }
            if m.domain[w] == 0 {
                out.push(Violation::Empty("individuals in an ordinary domain"));
            }
            for (c, d) in &m.constants {
                if !m.in_domain(*d, w) {
                    out.push(Violation::ConstantDenotation {
                        constant: c.clone(),
                        world: m.worlds[w].clone(),
                    });
                }
            }
        } else {
            let j = m.existent_values(w);
            for d in bits(!m.exists[w] & mask(m)) {
                if j.contains(&m.value(d, w)) {
                    out.push(Violation::ValueCollision {
                        world: m.worlds[w].clone(),
                        intension: name(d),
                    });
                }
            }
        }
    }
}

fn mask(m: &KripkeModel) -> u64 {
    let nd = m.intensions.len();
    if nd >= 64 {
        u64::MAX
    } else {
        (1u64 << nd) - 1
    }
}

/// Every relation the model carries, with its display name.
fn relations(m: &KripkeModel) -> Vec<(String, &Vec<Extension>, usize)> {
    let mut out = Vec::new();
    for p in &m.predicates {
        out.push((p.name.clone(), &p.pos, p.arity));
        out.push((format!("~{}", p.name), &p.neg, p.arity));
    }
    let ne = match m.kind {
        Kind::Nelsonian => "~=",
        Kind::Intuitionistic => "='",
    };
    out.push((ne.to_string(), &m.neg_eq, 2));
    out
}

fn extensions(m: &KripkeModel, out: &mut Vec<Violation>) {
    let objects = |t: &[usize]| t.iter().map(|&h| m.objects[h].clone()).collect::<Vec<_>>();
    if m.kind == Kind::Intuitionistic {
        for p in &m.predicates {
            if p.neg.iter().any(|e| !e.is_empty()) {
                out.push(Violation::NegativeExtension {
                    relation: p.name.clone(),
                });
            }
        }
    }
    let js: Vec<_> = (0..m.worlds.len()).map(|w| m.existent_values(w)).collect();
    for (rel, ext, arity) in relations(m) {
        for (w, e) in ext.iter().enumerate() {
            for t in e {
                if !t.iter().all(|h| js[w].contains(h)) {
                    out.push(Violation::Strictness {
                        relation: rel.clone(),
                        world: m.worlds[w].clone(),
                        tuple: objects(t),
                    });
                }
            }
        }
        for (w, v) in pairs(m) {
            for t in ext[w].difference(&ext[v]) {
                out.push(Violation::Monotonicity {
                    relation: rel.clone(),
                    w: m.worlds[w].clone(),
                    v: m.worlds[v].clone(),
                    tuple: objects(t),
                });
            }
            // Intension tuples over the existents at w; by strictness and
            // value collision nothing else can have its values in ext[w].
            let ds: Vec<usize> = m.existents(w).collect();
            for_each_tuple(&ds, arity, &mut |idx| {
                let at = |u: usize| idx.iter().map(|&d| m.value(d, u)).collect::<Vec<_>>();
                if ext[w].contains(&at(w)) && !ext[v].contains(&at(v)) {
                    out.push(Violation::Transport {
                        relation: rel.clone(),
                        w: m.worlds[w].clone(),
                        v: m.worlds[v].clone(),
                        intensions: idx.iter().map(|&d| m.intensions[d].name.clone()).collect(),
                    });
                }
            });
        }
    }
}

fn for_each_tuple(items: &[usize], arity: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(items: &[usize], arity: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == arity {
            f(cur);
            return;
        }
        for &i in items {
            cur.push(i);
            go(items, arity, cur, f);
            cur.pop();
        }
    }
    go(items, arity, &mut Vec::with_capacity(arity), f);
}

/// `φ_w(=)` is the diagonal on `J_w`: it must grow along `R`, and two
/// existents that coincide must keep coinciding.
fn identity(m: &KripkeModel, out: &mut Vec<Violation>) {
    for (w, v) in pairs(m) {
        let (jw, jv) = (m.existent_values(w), m.existent_values(v));
        for h in jw.difference(&jv) {
            out.push(Violation::Monotonicity {
                relation: "=".into(),
                w: m.worlds[w].clone(),
                v: m.worlds[v].clone(),
                tuple: vec![m.objects[*h].clone(); 2],
            });
        }
        let ds: Vec<usize> = m.existents(w).collect();
        for (i, &d) in ds.iter().enumerate() {
            for &e in &ds[i + 1..] {
                if m.value(d, w) == m.value(e, w) && m.value(d, v) != m.value(e, v) {
                    out.push(Violation::IdentityTransport {
                        w: m.worlds[w].clone(),
                        v: m.worlds[v].clone(),
                        left: m.intensions[d].name.clone(),
                        right: m.intensions[e].name.clone(),
                    });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_world(kind: Kind) -> KripkeModel {
        let mut m = KripkeModel::skeleton(kind, false, 1, 1);
        m.add_intension("d", vec![0]);
        m.constants.push(("a".into(), 0));
        let p = m.add_predicate("P", 1);
        m.predicates[p].pos[0].insert(vec![0]);
        m
    }

    fn clauses(m: &KripkeModel) -> Vec<&'static str> {
        validate_model(m).iter().map(Violation::clause).collect()
    }

    #[test]
    fn one_world_model_is_fine() {
        assert!(validate_model(&one_world(Kind::Nelsonian)).is_empty());
        assert!(validate_model(&one_world(Kind::Intuitionistic)).is_empty());
    }

    #[test]
    fn shrinking_extension() {
        let mut m = KripkeModel::skeleton(Kind::Nelsonian, false, 2, 1);
        m.add_intension("d", vec![0, 0]);
        m.relate(0, 1);
        let p = m.add_predicate("P", 1);
        m.predicates[p].pos[0].insert(vec![0]);
        let v = validate_model(&m);
        assert!(v.contains(&Violation::Monotonicity {
            relation: "P".into(),
            w: "w0".into(),
            v: "w1".into(),
            tuple: vec!["h0".into()],
        }));
    }

    #[test]
    fn refutation_of_a_non_existent() {
        let mut m = KripkeModel::skeleton(Kind::Nelsonian, true, 1, 2);
        m.add_intension("d", vec![0]);
        let e = m.add_intension("e", vec![1]);
        m.exists[0] &= !(1 << e);
        let p = m.add_predicate("P", 1);
        m.predicates[p].neg[0].insert(vec![1]);
        assert_eq!(clauses(&m), vec!["strictness"]);
    }

    #[test]
    fn ordinary_models_need_total_existence() {
        let mut m = one_world(Kind::Intuitionistic);
        m.exists[0] = 0;
        assert!(clauses(&m).contains(&"ordinary-existence"));
    }

    #[test]
    fn non_rigid_values_must_carry_atoms() {
        let mut m = KripkeModel::skeleton(Kind::Intuitionistic, false, 2, 2);
        m.add_intension("d", vec![0, 1]);
        m.relate(0, 1);
        let p = m.add_predicate("P", 1);
        m.predicates[p].pos[0].insert(vec![0]);
        m.predicates[p].pos[1].insert(vec![0]);
        // h0 stays in P but d has moved on to h1, and h0 is no longer anyone's value.
        let c = clauses(&m);
        assert!(c.contains(&"transport"));
        assert!(c.contains(&"strictness"));
    }

    #[test]
    fn collisions_and_split_identities() {
        let mut m = KripkeModel::skeleton(Kind::Nelsonian, true, 1, 1);
        m.add_intension("d", vec![0]);
        let e = m.add_intension("e", vec![0]);
        m.exists[0] &= !(1 << e);
        assert_eq!(clauses(&m), vec!["value-collision"]);

        let mut m = KripkeModel::skeleton(Kind::Nelsonian, false, 2, 2);
        m.add_intension("d", vec![0, 0]);
        m.add_intension("e", vec![0, 1]);
        m.relate(0, 1);
        assert!(clauses(&m).contains(&"identity-transport"));
    }

    #[test]
    fn negative_extensions_are_nelsonian_only() {
        let mut m = one_world(Kind::Intuitionistic);
        m.predicates[0].neg[0].insert(vec![0]);
        assert_eq!(clauses(&m), vec!["negative-extension"]);
    }
}
