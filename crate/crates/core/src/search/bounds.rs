use std::collections::BTreeSet;
use std::fmt;

use crate::semantics::Kind;
use crate::syntax::{Formula, PRIMED_EXISTENCE, PRIMED_IDENTITY};

use super::SearchError;

/// Size limits and signature for model enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_worlds: usize,
    pub max_objects: usize,
    pub max_intensions: usize,
    /// Intensions are constant functions when `worlds * objects` exceeds this.
    pub intension_cap: usize,
    pub predicates: Vec<(String, usize)>,
    pub constants: Vec<String>,
    pub kind: Kind,
    pub free: bool,
    /// Enumerate the `~=` extension (`='` in intuitionistic models).
    pub identity_extension: bool,
}

pub const DEFAULT_INTENSION_CAP: usize = 4;

impl Bounds {
    /// `max_intensions` defaults to `objects`; Nelsonian bounds enumerate
    /// `~=`, intuitionistic ones do not.
    pub fn new(kind: Kind, free: bool, worlds: usize, objects: usize) -> Self {
        Bounds {
            max_worlds: worlds,
            max_objects: objects,
            max_intensions: objects,
            intension_cap: DEFAULT_INTENSION_CAP,
            predicates: Vec::new(),
            constants: Vec::new(),
            kind,
            free,
            identity_extension: kind == Kind::Nelsonian,
        }
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.predicates.push((name.to_string(), arity));
        self
    }

    pub fn with_constant(mut self, name: &str) -> Self {
        self.constants.push(name.to_string());
        self
    }

    pub fn with_intensions(mut self, n: usize) -> Self {
        self.max_intensions = n;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.intension_cap = cap;
        self
    }

    pub fn with_identity_extension(mut self, on: bool) -> Self {
        self.identity_extension = on;
        self
    }

    /// Bounds whose signature is exactly what `formulas` mention.
    ///
    /// The identity extension is enumerated only when it can matter: a
    /// Nelsonian query with identity or a description under `~`, or an
    /// intuitionistic one that mentions `='`.
    pub fn for_formulas<'a>(
        kind: Kind,
        free: bool,
        worlds: usize,
        objects: usize,
        formulas: impl IntoIterator<Item = &'a Formula> + Clone,
    ) -> Self {
        let mut preds = BTreeSet::new();
        let mut consts = BTreeSet::new();
        let mut identity = false;
        for a in formulas {
            for (p, n) in a.predicates() {
                match p.as_str() {
                    PRIMED_IDENTITY => identity = true,
                    PRIMED_EXISTENCE => {}
                    _ => {
                        preds.insert((p, n));
                    }
                }
            }
            consts.extend(a.constants().into_iter().filter(|c| crate::syntax::injected_index(c).is_none()));
            if kind == Kind::Nelsonian && negates_identity(a) {
                identity = true;
            }
        }
        let mut b = Bounds::new(kind, free, worlds, objects).with_identity_extension(identity);
        b.predicates = preds.into_iter().collect();
        b.constants = consts.into_iter().collect();
        b
    }

    pub fn check(&self) -> Result<(), SearchError> {
        for (what, v) in [
            ("worlds", self.max_worlds),
            ("objects", self.max_objects),
            ("intensions", self.max_intensions),
        ] {
            if v == 0 {
                return Err(SearchError::Bounds(format!("at least one of {what} is needed")));
            }
        }
        if self.max_intensions > crate::semantics::MAX_INTENSIONS {
            return Err(SearchError::Bounds(format!(
                "at most {} intensions",
                crate::semantics::MAX_INTENSIONS
            )));
        }
        if self.max_worlds > 4 {
            return Err(SearchError::Bounds("at most 4 worlds".into()));
        }
        Ok(())
    }

    pub(crate) fn rigid(&self, worlds: usize, objects: usize) -> bool {
        worlds * objects > self.intension_cap
    }
}

/// Identity or a description somewhere under strong negation.
fn negates_identity(a: &Formula) -> bool {
    fn go(a: &Formula, under: bool) -> bool {
        match a {
            Formula::Eq(..) | Formula::Descr { .. } if under => true,
            Formula::Not(b) => go(b, true),
            Formula::And(b, c) | Formula::Or(b, c) | Formula::Imp(b, c) => go(b, under) || go(c, under),
            Formula::Forall(_, b) | Formula::Exists(_, b) => go(b, under),
            Formula::Descr { restrictor, scope, .. } => go(restrictor, under) || go(scope, under),
            _ => false,
        }
    }
    go(a, false)
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} worlds<={} objects<={} intensions<={} cap={}",
            self.kind,
            if self.free { " free" } else { "" },
            self.max_worlds,
            self.max_objects,
            self.max_intensions,
            self.intension_cap
        )
    }
}
