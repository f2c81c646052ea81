use std::collections::BTreeSet;
use std::fmt;

/// A set of object tuples.
pub type Extension = BTreeSet<Vec<usize>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Intuitionistic,
    Nelsonian,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Intuitionistic => "intuitionistic",
            Kind::Nelsonian => "nelsonian",
        })
    }
}

/// A function from worlds to objects, `|d|_w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Intension {
    pub name: String,
    pub values: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    pub name: String,
    pub arity: usize,
    /// `φ_w(P)` per world.
    pub pos: Vec<Extension>,
    /// `φ_w(~P)` per world; empty in intuitionistic models.
    pub neg: Vec<Extension>,
}

impl Predicate {
    pub fn new(name: impl Into<String>, arity: usize, worlds: usize) -> Self {
        Predicate {
            name: name.into(),
            arity,
            pos: vec![Extension::new(); worlds],
            neg: vec![Extension::new(); worlds],
        }
    }
}

/// A finite Kripke structure.
///
/// Worlds, objects and intensions are indices into the name vectors. Domains
/// and existents are bit sets over intensions, so a model has at most 64
/// intensions. `rel` is kept reflexive and transitive by the constructors in
/// this crate; hand-built values are checked by
/// [`validate_model`](super::validate_model).
///
/// In an intuitionistic model over a primed signature, `neg_eq` holds the
/// extension of `='` and primed predicates appear as ordinary entries of
/// `predicates` named `P'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KripkeModel {
    pub kind: Kind,
    pub free: bool,
    pub worlds: Vec<String>,
    /// `rel[w][v]` iff `wRv`.
    pub rel: Vec<Vec<bool>>,
    pub objects: Vec<String>,
    pub intensions: Vec<Intension>,
    /// `D_w` as a bit set over intensions.
    pub domain: Vec<u64>,
    /// `E_w` as a bit set over intensions.
    pub exists: Vec<u64>,
    pub constants: Vec<(String, usize)>,
    pub predicates: Vec<Predicate>,
    /// `φ_w(~=)`.
    pub neg_eq: Vec<Extension>,
}

pub const MAX_INTENSIONS: usize = 64;

impl KripkeModel {
    /// A model with `worlds` worlds named `w0, w1, ...`, only reflexive
    /// accessibility, objects `h0, ...` and no intensions.
    pub fn skeleton(kind: Kind, free: bool, worlds: usize, objects: usize) -> Self {
        KripkeModel {
            kind,
            free,
            worlds: (0..worlds).map(|i| format!("w{i}")).collect(),
            rel: (0..worlds).map(|w| (0..worlds).map(|v| v == w).collect()).collect(),
            objects: (0..objects).map(|i| format!("h{i}")).collect(),
            intensions: Vec::new(),
            domain: vec![0; worlds],
            exists: vec![0; worlds],
            constants: Vec::new(),
            predicates: Vec::new(),
            neg_eq: vec![Extension::new(); worlds],
        }
    }

    /// Adds an intension existing everywhere and returns its index.
    pub fn add_intension(&mut self, name: impl Into<String>, values: Vec<usize>) -> usize {
        let d = self.intensions.len();
        self.intensions.push(Intension {
            name: name.into(),
            values,
        });
        for w in 0..self.worlds.len() {
            self.domain[w] |= 1 << d;
            self.exists[w] |= 1 << d;
        }
        d
    }

    pub fn add_predicate(&mut self, name: impl Into<String>, arity: usize) -> usize {
        self.predicates.push(Predicate::new(name, arity, self.worlds.len()));
        self.predicates.len() - 1
    }

    /// Adds `(w, v)` and closes the relation reflexively and transitively.
    pub fn relate(&mut self, w: usize, v: usize) {
        self.rel[w][v] = true;
        self.close_relation();
    }

    pub fn close_relation(&mut self) {
        let n = self.worlds.len();
        for w in 0..n {
            self.rel[w][w] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if self.rel[i][k] {
                    for j in 0..n {
                        if self.rel[k][j] {
                            self.rel[i][j] = true;
                        }
                    }
                }
            }
        }
    }

    pub fn successors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.rel[w].iter().enumerate().filter(|(_, &r)| r).map(|(v, _)| v)
    }

    pub fn value(&self, d: usize, w: usize) -> usize {
        self.intensions[d].values[w]
    }

    pub fn in_domain(&self, d: usize, w: usize) -> bool {
        self.domain[w] >> d & 1 == 1
    }

    pub fn exists_at(&self, d: usize, w: usize) -> bool {
        self.exists[w] >> d & 1 == 1
    }

    pub fn existents(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.exists[w])
    }

    pub fn domain_at(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.domain[w])
    }

    /// `J_w`: values of the existents at `w`.
    pub fn existent_values(&self, w: usize) -> BTreeSet<usize> {
        self.existents(w).map(|d| self.value(d, w)).collect()
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.iter().find(|(c, _)| c == name).map(|&(_, d)| d)
    }

    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn predicate_mut(&mut self, name: &str) -> Option<&mut Predicate> {
        self.predicates.iter_mut().find(|p| p.name == name)
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|h| h == name)
    }

    pub fn intension(&self, name: &str) -> Option<usize> {
        self.intensions.iter().position(|d| d.name == name)
    }
}

pub(crate) fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(i)
        }
    })
}
