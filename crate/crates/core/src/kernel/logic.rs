use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::syntax::{Language, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    N4,
    Int,
}

/// One of the eight logics: N4 or Int, ordinary or negative free, with or
/// without the description quantifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogicId {
    pub base: Base,
    pub free: bool,
    pub descriptions: bool,
}

impl LogicId {
    pub const N4: LogicId = LogicId::new(Base::N4, false, false);
    pub const N4F: LogicId = LogicId::new(Base::N4, true, false);
    pub const N4I: LogicId = LogicId::new(Base::N4, false, true);
    pub const N4FI: LogicId = LogicId::new(Base::N4, true, true);
    pub const INT: LogicId = LogicId::new(Base::Int, false, false);
    pub const INTF: LogicId = LogicId::new(Base::Int, true, false);
    pub const INTI: LogicId = LogicId::new(Base::Int, false, true);
    pub const INTFI: LogicId = LogicId::new(Base::Int, true, true);

    pub const ALL: [LogicId; 8] = [
        LogicId::N4,
        LogicId::N4F,
        LogicId::N4I,
        LogicId::N4FI,
        LogicId::INT,
        LogicId::INTF,
        LogicId::INTI,
        LogicId::INTFI,
    ];

    pub const fn new(base: Base, free: bool, descriptions: bool) -> Self {
        LogicId {
            base,
            free,
            descriptions,
        }
    }

    pub fn is_nelsonian(self) -> bool {
        self.base == Base::N4
    }

    pub fn language(self) -> Language {
        match self.base {
            Base::N4 => Language::Negation,
            Base::Int => Language::Falsum,
        }
    }

    /// An empty signature carrying this logic's language tags. Intuitionistic
    /// signatures admit primed predicates so that translated formulas fit.
    pub fn signature(self) -> Signature {
        Signature::new(self.language())
            .with_free(self.free)
            .with_descriptions(self.descriptions)
            .with_primed(self.base == Base::Int)
    }

    /// The same logic over the other base.
    pub fn with_base(self, base: Base) -> Self {
        LogicId { base, ..self }
    }

    pub fn available_rules(self) -> BTreeSet<RuleId> {
        RuleId::ALL
            .iter()
            .copied()
            .filter(|r| r.available_in(self))
            .collect()
    }

    pub fn name(self) -> &'static str {
        match (self.base, self.free, self.descriptions) {
            (Base::N4, false, false) => "N4",
            (Base::N4, true, false) => "N4F",
            (Base::N4, false, true) => "N4I",
            (Base::N4, true, true) => "N4FI",
            (Base::Int, false, false) => "INT",
            (Base::Int, true, false) => "INTF",
            (Base::Int, false, true) => "INTI",
            (Base::Int, true, true) => "INTFI",
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogicId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LogicId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown logic `{s}` (expected one of N4, N4F, N4I, N4FI, INT, INTF, INTI, INTFI)"))
    }
}

macro_rules! rules {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum RuleId {
            $($variant,)*
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$variant,)*];

            /// Script spelling; primed variants end in an apostrophe.
            pub fn name(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $name,)*
                }
            }
        }
    };
}

rules! {
    OrI1 => "orI1",
    OrI2 => "orI2",
    OrE => "orE",
    ImpI => "impI",
    ImpE => "impE",
    AndI => "andI",
    AndE1 => "andE1",
    AndE2 => "andE2",
    NegNegI => "negnegI",
    NegNegE => "negnegE",
    NegImpI => "negimpI",
    NegImpE1 => "negimpE1",
    NegImpE2 => "negimpE2",
    NegOrI => "negorI",
    NegOrE1 => "negorE1",
    NegOrE2 => "negorE2",
    NegAndI1 => "negandI1",
    NegAndI2 => "negandI2",
    NegAndE => "negandE",
    AllI => "allI",
    AllE => "allE",
    NegAllI => "negallI",
    NegAllE => "negallE",
    AllIP => "allI'",
    AllEP => "allE'",
    NegAllIP => "negallI'",
    NegAllEP => "negallE'",
    ExI => "exI",
    ExE => "exE",
    NegExI => "negexI",
    NegExE => "negexE",
    ExIP => "exI'",
    ExEP => "exE'",
    NegExIP => "negexI'",
    NegExEP => "negexE'",
    EqI => "eqI",
    EqIP => "eqI'",
    EqE => "eqE",
    PD => "PD",
    NegPD => "negPD",
    II => "II",
    IIP => "II'",
    NegIE => "negIE",
    NegIEP => "negIE'",
    IE1 => "IE1",
    IE1P => "IE1'",
    IE2 => "IE2",
    IE2P => "IE2'",
    NegII1 => "negII1",
    NegII2 => "negII2",
    NegII3 => "negII3",
    NegII3P => "negII3'",
    BotE => "botE",
}

/// Which family of logics a rule belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Scope {
    /// Every logic.
    All,
    /// Free logics only, or ordinary logics only.
    Free(bool),
}

impl RuleId {
    fn is_negated(self) -> bool {
        use RuleId::*;
        matches!(
            self,
            NegNegI
                | NegNegE
                | NegImpI
                | NegImpE1
                | NegImpE2
                | NegOrI
                | NegOrE1
                | NegOrE2
                | NegAndI1
                | NegAndI2
                | NegAndE
                | NegAllI
                | NegAllE
                | NegAllIP
                | NegAllEP
                | NegExI
                | NegExE
                | NegExIP
                | NegExEP
                | NegPD
                | NegIE
                | NegIEP
                | NegII1
                | NegII2
                | NegII3
                | NegII3P
        )
    }

    fn is_description_rule(self) -> bool {
        use RuleId::*;
        matches!(
            self,
            II | IIP | NegIE | NegIEP | IE1 | IE1P | IE2 | IE2P | NegII1 | NegII2 | NegII3 | NegII3P
        )
    }

    fn scope(self) -> Scope {
        use RuleId::*;
        match self {
            AllI | AllE | NegAllI | NegAllE | ExI | ExE | NegExI | NegExE | EqI | PD | NegPD
            | II | NegIE | IE1 | IE2 | NegII3 => Scope::Free(true),
            AllIP | AllEP | NegAllIP | NegAllEP | ExIP | ExEP | NegExIP | NegExEP | EqIP | IIP
            | NegIEP | IE1P | IE2P | NegII3P => Scope::Free(false),
            _ => Scope::All,
        }
    }

    pub fn available_in(self, logic: LogicId) -> bool {
        if self == RuleId::BotE {
            return logic.base == Base::Int;
        }
        if self.is_negated() && logic.base != Base::N4 {
            return false;
        }
        if self.is_description_rule() && !logic.descriptions {
            return false;
        }
        match self.scope() {
            Scope::All => true,
            Scope::Free(free) => free == logic.free,
        }
    }

    /// Whether the script must name an eigenvariable with `:var`.
    pub fn takes_var(self) -> bool {
        use RuleId::*;
        matches!(
            self,
            AllI | AllIP
                | ExE
                | ExEP
                | NegAllE
                | NegAllEP
                | NegExI
                | NegExIP
                | II
                | IIP
                | NegIE
                | NegIEP
                | IE1
                | IE1P
                | NegII1
                | NegII2
        )
    }

    /// Whether the script must name a witness term with `:term`.
    pub fn takes_term(self) -> bool {
        use RuleId::*;
        matches!(
            self,
            AllE | AllEP | ExI | ExIP | NegAllI | NegAllIP | NegExE | NegExEP | II | IIP | NegIE | NegIEP
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}
