//! Exhaustive model enumeration in a fixed canonical order.
//!
//! Only frames rooted at `w0` are produced (every world is reachable from
//! `w0`), and every object is the value of some intension somewhere. Truth
//! at a world depends only on the worlds above it, so a countermodel that
//! exists within the bounds also exists in this reduced family.
//!
//! Order: world count, accessibility bitmask, object count, intension set
//! (by size, then lexicographically over the candidate functions), domains,
//! existents, constant denotations, and finally the relation extensions
//! with the last relation varying fastest.

use std::collections::BTreeSet;
use std::rc::Rc;

use crate::semantics::{bits, Extension, KripkeModel, Kind, Predicate};

use super::Bounds;

/// One per-world choice of extension for a relation.
type Family = Vec<Extension>;

#[derive(Clone, Copy, Debug)]
enum Slot {
    Pos(usize),
    Neg(usize),
    NegEq,
}

/// Streams every model within `b`.
pub fn enumerate_models(b: &Bounds) -> Models {
    Models {
        skeletons: skeletons(b).into_iter(),
        bounds: b.clone(),
        current: None,
    }
}

/// Number of models [`enumerate_models`] yields, without building them.
pub fn count_models(b: &Bounds) -> u128 {
    let mut total = 0u128;
    for sk in skeletons(b) {
        let slots = slots(b, &sk);
        total += slots.iter().map(|(_, f)| f.len() as u128).product::<u128>();
    }
    total
}

pub struct Models {
    skeletons: std::vec::IntoIter<KripkeModel>,
    bounds: Bounds,
    current: Option<Odometer>,
}

struct Odometer {
    base: KripkeModel,
    slots: Vec<(Slot, Rc<Vec<Family>>)>,
    counter: Vec<usize>,
}

impl Iterator for Models {
    type Item = KripkeModel;

    fn next(&mut self) -> Option<KripkeModel> {
        loop {
            if let Some(od) = &mut self.current {
                if let Some(m) = od.next() {
                    return Some(m);
                }
                self.current = None;
            }
            let base = self.skeletons.next()?;
            let slots = slots(&self.bounds, &base);
            self.current = Some(Odometer {
                counter: vec![0; slots.len()],
                base,
                slots,
            });
        }
    }
}

impl Odometer {
    fn next(&mut self) -> Option<KripkeModel> {
        if self.counter.first() == Some(&usize::MAX) {
            return None;
        }
        let mut m = self.base.clone();
        for ((slot, fams), &i) in self.slots.iter().zip(&self.counter) {
            let fam = fams[i].clone();
            match *slot {
                Slot::Pos(p) => m.predicates[p].pos = fam,
                Slot::Neg(p) => m.predicates[p].neg = fam,
                Slot::NegEq => m.neg_eq = fam,
            }
        }
        // Advance, last slot fastest. A skeleton with no slots yields once.
        let mut k = self.counter.len();
        loop {
            if k == 0 {
                match self.counter.first_mut() {
                    Some(c) => *c = usize::MAX,
                    None => self.counter.push(usize::MAX),
                }
                break;
            }
            k -= 1;
            self.counter[k] += 1;
            if self.counter[k] < self.slots[k].1.len() {
                break;
            }
            self.counter[k] = 0;
        }
        Some(m)
    }
}

/// Reflexive transitive relations on `n` worlds in which `w0` sees every
/// world, by ascending bitmask over the off-diagonal pairs.
pub(crate) fn rooted_frames(n: usize) -> Vec<Vec<Vec<bool>>> {
    let offdiag: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << offdiag.len()) {
        let mut rel: Vec<Vec<bool>> = (0..n).map(|w| (0..n).map(|v| v == w).collect()).collect();
        for (k, &(i, j)) in offdiag.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rel[i][j] = true;
            }
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| !(rel[a][b] && rel[b][c]) || rel[a][c]))
        });
        if transitive && rel[0].iter().all(|&r| r) {
            out.push(rel);
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` with every vector in `options[0] x options[1] x ...`, first
/// position most significant.
fn product<T: Copy>(options: &[Vec<T>], f: &mut dyn FnMut(&[T])) {
    fn go<T: Copy>(options: &[Vec<T>], cur: &mut Vec<T>, f: &mut dyn FnMut(&[T])) {
        match options.get(cur.len()) {
            None => f(cur),
            Some(opts) => {
                for &o in opts {
                    cur.push(o);
                    go(options, cur, f);
                    cur.pop();
                }
            }
        }
    }
    go(options, &mut Vec::new(), f)
}

fn subsets_of(set: u64) -> Vec<u64> {
    // Ascending order of the subset bitmask.
    let mut out: Vec<u64> = Vec::new();
    let mut s = 0u64;
    loop {
        out.push(s);
        if s == set {
            break;
        }
        s = (s.wrapping_sub(set)) & set;
    }
    out
}

fn related_pairs(rel: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = rel.len();
    (0..n)
        .flat_map(|w| (0..n).filter(move |&v| v != w).map(move |v| (w, v)))
        .filter(|&(w, v)| rel[w][v])
        .collect()
}

/// Every structure without extensions: frame, intensions, domains,
/// existents and constants.
fn skeletons(b: &Bounds) -> Vec<KripkeModel> {
    let mut out = Vec::new();
    for n in 1..=b.max_worlds {
        for rel in rooted_frames(n) {
            let pairs = related_pairs(&rel);
            for h in 1..=b.max_objects {
                let rigid = b.rigid(n, h);
                let funcs: Vec<Vec<usize>> = (0..h.pow(n as u32))
                    .map(|code| {
                        (0..n)
                            .map(|w| code / h.pow((n - 1 - w) as u32) % h)
                            .collect::<Vec<usize>>()
                    })
                    .filter(|f| !rigid || f.iter().all(|&x| x == f[0]))
                    .collect();
                for k in 1..=b.max_intensions.min(funcs.len()) {
                    for pick in combinations(funcs.len(), k) {
                        let values: Vec<&Vec<usize>> = pick.iter().map(|&i| &funcs[i]).collect();
                        let hit: BTreeSet<usize> = values.iter().flat_map(|f| f.iter().copied()).collect();
                        if hit.len() != h {
                            continue;
                        }
                        let mut base = KripkeModel::skeleton(b.kind, b.free, n, h);
                        base.rel = rel.clone();
                        for (i, f) in values.iter().enumerate() {
                            base.add_intension(format!("d{i}"), (*f).clone());
                        }
                        with_domains(b, &base, &pairs, &mut out);
                    }
                }
            }
        }
    }
    out
}

fn with_domains(b: &Bounds, base: &KripkeModel, pairs: &[(usize, usize)], out: &mut Vec<KripkeModel>) {
    let n = base.worlds.len();
    let all = (1u64 << base.intensions.len()) - 1;
    let per_world: Vec<Vec<u64>> = vec![subsets_of(all); n];
    let monotone = |s: &[u64]| pairs.iter().all(|&(w, v)| s[w] & !s[v] == 0);
    product(&per_world, &mut |dom| {
        if !monotone(dom) || (!b.free && dom.contains(&0)) {
            return;
        }
        let exist_options: Vec<Vec<u64>> = if b.free {
            dom.iter().map(|&d| subsets_of(d)).collect()
        } else {
            dom.iter().map(|&d| vec![d]).collect()
        };
        product(&exist_options, &mut |ex| {
            if !monotone(ex) {
                return;
            }
            let mut m = base.clone();
            m.domain = dom.to_vec();
            m.exists = ex.to_vec();
            if admissible_existence(&m, pairs) {
                with_constants(b, &m, out);
            }
        });
    });
}

/// Value collision, growth of `J` and identity transport.
fn admissible_existence(m: &KripkeModel, pairs: &[(usize, usize)]) -> bool {
    let n = m.worlds.len();
    let nd = m.intensions.len();
    let js: Vec<BTreeSet<usize>> = (0..n).map(|w| m.existent_values(w)).collect();
    if m.free {
        for w in 0..n {
            if (0..nd).any(|d| !m.exists_at(d, w) && js[w].contains(&m.value(d, w))) {
                return false;
            }
        }
    }
    pairs.iter().all(|&(w, v)| {
        js[w].is_subset(&js[v])
            && m.existents(w).all(|d| {
                m.existents(w)
                    .all(|e| m.value(d, w) != m.value(e, w) || m.value(d, v) == m.value(e, v))
            })
    })
}

fn with_constants(b: &Bounds, m: &KripkeModel, out: &mut Vec<KripkeModel>) {
    let n = m.worlds.len();
    let denotable: Vec<usize> = (0..m.intensions.len())
        .filter(|&d| m.free || (0..n).all(|w| m.in_domain(d, w)))
        .collect();
    let options = vec![denotable; b.constants.len()];
    product(&options, &mut |pick| {
        let mut c = m.clone();
        c.constants = b.constants.iter().cloned().zip(pick.iter().copied()).collect();
        for (p, arity) in &b.predicates {
            c.predicates.push(Predicate::new(p.clone(), *arity, n));
        }
        out.push(c);
    });
}

fn slots(b: &Bounds, sk: &KripkeModel) -> Vec<(Slot, Rc<Vec<Family>>)> {
    let mut cache: Vec<(usize, Rc<Vec<Family>>)> = Vec::new();
    let mut fams = |arity: usize| {
        if let Some((_, f)) = cache.iter().find(|(a, _)| *a == arity) {
            return f.clone();
        }
        let f = Rc::new(families(sk, arity));
        cache.push((arity, f.clone()));
        f
    };
    let mut out = Vec::new();
    for (i, p) in sk.predicates.iter().enumerate() {
        out.push((Slot::Pos(i), fams(p.arity)));
        if b.kind == Kind::Nelsonian {
            out.push((Slot::Neg(i), fams(p.arity)));
        }
    }
    if b.identity_extension {
        out.push((Slot::NegEq, fams(2)));
    }
    out
}

fn tuples_over(values: &[usize], arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                values.iter().map(move |&h| {
                    let mut t = t.clone();
                    t.push(h);
                    t
                })
            })
            .collect();
    }
    out
}

/// Per-world extensions over `J_w^arity` that grow along the relation and
/// carry every existent tuple forward.
fn families(m: &KripkeModel, arity: usize) -> Vec<Family> {
    let n = m.worlds.len();
    let pairs = related_pairs(&m.rel);
    let tuples: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|w| tuples_over(&m.existent_values(w).into_iter().collect::<Vec<_>>(), arity))
        .collect();
    if tuples.iter().any(|t| t.len() >= 64) {
        panic!("relation of arity {arity} is too large to enumerate");
    }
    let options: Vec<Vec<u64>> = tuples.iter().map(|t| subsets_of((1u64 << t.len()) - 1)).collect();
    let existents: Vec<Vec<usize>> = (0..n).map(|w| m.existents(w).collect()).collect();
    let mut out = Vec::new();
    product(&options, &mut |masks| {
        let fam: Family = (0..n)
            .map(|w| bits(masks[w]).map(|i| tuples[w][i].clone()).collect())
            .collect();
        let ok = pairs.iter().all(|&(w, v)| {
            fam[w].is_subset(&fam[v])
                && tuples_over(&existents[w], arity).iter().all(|ds| {
                    let at = |u: usize| ds.iter().map(|&d| m.value(d, u)).collect::<Vec<_>>();
                    !fam[w].contains(&at(w)) || fam[v].contains(&at(v))
                })
        });
        if ok {
            out.push(fam);
        }
    });
    out
}
