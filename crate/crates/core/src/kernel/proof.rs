use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::lexer::{tokenize, Tok};
use crate::syntax::{end_pos, print, Formula, FormulaParser, ParseError, ParseErrorKind, Signature, Term};

use super::logic::{LogicId, RuleId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofNode {
    Assumption {
        label: u64,
        formula: Formula,
    },
    Inference {
        rule: RuleId,
        conclusion: Formula,
        discharges: Vec<u64>,
        var: Option<String>,
        term: Option<Term>,
        premises: Vec<ProofNode>,
    },
}

impl ProofNode {
    pub fn assume(label: u64, formula: Formula) -> Self {
        ProofNode::Assumption { label, formula }
    }

    pub fn conclusion(&self) -> &Formula {
        match self {
            ProofNode::Assumption { formula, .. } => formula,
            ProofNode::Inference { conclusion, .. } => conclusion,
        }
    }

    /// Node at `path`, following premise indices from the root.
    pub fn at(&self, path: &[usize]) -> Option<&ProofNode> {
        match (path.split_first(), self) {
            (None, _) => Some(self),
            (Some((&i, rest)), ProofNode::Inference { premises, .. }) => premises.get(i)?.at(rest),
            (Some(_), ProofNode::Assumption { .. }) => None,
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut ProofNode> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                ProofNode::Inference { premises, .. } => premises.get_mut(i)?.at_mut(rest),
                ProofNode::Assumption { .. } => None,
            },
        }
    }

    pub fn formulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.visit(&mut |n| out.push(n.conclusion()));
        out
    }

    pub fn rules(&self) -> BTreeSet<RuleId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |n| {
            if let ProofNode::Inference { rule, .. } = n {
                out.insert(*rule);
            }
        });
        out
    }

    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a ProofNode)) {
        f(self);
        if let ProofNode::Inference { premises, .. } = self {
            for p in premises {
                p.visit(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

/// The result of a successful check: open assumptions, conclusion, logic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub assumptions: BTreeSet<Formula>,
    pub conclusion: Formula,
    pub logic: LogicId,
}

impl Sequent {
    pub fn new(assumptions: impl IntoIterator<Item = Formula>, conclusion: Formula, logic: LogicId) -> Self {
        Sequent {
            assumptions: assumptions.into_iter().collect(),
            conclusion,
            logic,
        }
    }

    /// `A, B |- C` in the `.seq` file syntax.
    pub fn to_seq(&self) -> String {
        let lhs: Vec<String> = self.assumptions.iter().map(print).collect();
        if lhs.is_empty() {
            format!("|- {}", self.conclusion)
        } else {
            format!("{} |- {}", lhs.join(", "), self.conclusion)
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs: Vec<String> = self.assumptions.iter().map(print).collect();
        write!(
            f,
            "⊢_{} derived: {} from {{{}}}",
            self.logic,
            self.conclusion,
            lhs.join(", ")
        )
    }
}

/// A parsed proof file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Script {
    pub logic: LogicId,
    pub proof: ProofNode,
    /// Predicates and constants collected from the script.
    pub signature: Signature,
}

fn unexpected(p: &FormulaParser<'_>, expected: &str) -> ParseError {
    let pos = p.here();
    match p.peek() {
        Some(t) => ParseError::new(
            pos,
            ParseErrorKind::Expected {
                expected: expected.into(),
                found: t.to_string(),
            },
        ),
        None => ParseError::new(pos, ParseErrorKind::UnexpectedEnd),
    }
}

fn ident(p: &mut FormulaParser<'_>, expected: &str) -> Result<String, ParseError> {
    match p.peek() {
        Some(Tok::Ident(w)) => {
            let w = w.clone();
            p.bump();
            Ok(w)
        }
        _ => Err(unexpected(p, expected)),
    }
}

fn integer(p: &mut FormulaParser<'_>) -> Result<u64, ParseError> {
    match p.peek() {
        Some(Tok::Int(n)) => {
            let n = *n;
            p.bump();
            Ok(n)
        }
        _ => Err(unexpected(p, "label")),
    }
}

/// Reads `(proof LOGIC node)`.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let toks = tokenize(text)?;
    let end = end_pos(text);
    // The logic is not known until the header is read, so peek at it first.
    let logic = match (toks.first(), toks.get(1), toks.get(2)) {
        (Some(open), Some(head), Some(name)) if open.tok == Tok::LParen && head.tok == Tok::Ident("proof".into()) => {
            match &name.tok {
                Tok::Ident(w) => w.parse::<LogicId>().map_err(|e| {
                    ParseError::new(name.pos, ParseErrorKind::Unexpected(e))
                })?,
                other => {
                    return Err(ParseError::new(
                        name.pos,
                        ParseErrorKind::Expected {
                            expected: "logic id".into(),
                            found: other.to_string(),
                        },
                    ))
                }
            }
        }
        _ => {
            let pos = toks.first().map_or(end, |t| t.pos);
            return Err(ParseError::new(
                pos,
                ParseErrorKind::Expected {
                    expected: "`(proof <logic> <node>)`".into(),
                    found: toks.first().map_or("end of input".into(), |t| t.tok.to_string()),
                },
            ));
        }
    };
    let mut signature = logic.signature();
    let proof = {
        let mut p = FormulaParser::new(&toks, end, &mut signature, true).lenient();
        p.seek(3);
        let node = parse_node(&mut p)?;
        p.expect(&Tok::RParen)?;
        p.expect_end()?;
        node
    };
    Ok(Script {
        logic,
        proof,
        signature,
    })
}

fn parse_node(p: &mut FormulaParser<'_>) -> Result<ProofNode, ParseError> {
    p.expect(&Tok::LParen)?;
    let head_pos = p.here();
    let head = ident(p, "rule name or `assume`")?;
    if head == "assume" {
        let label = integer(p)?;
        let formula = p.formula()?;
        p.expect(&Tok::RParen)?;
        return Ok(ProofNode::Assumption { label, formula });
    }
    let rule: RuleId = head
        .parse()
        .map_err(|e| ParseError::new(head_pos, ParseErrorKind::Unexpected(e)))?;
    let conclusion = p.formula()?;
    let mut discharges = Vec::new();
    let mut var = None;
    let mut term = None;
    let mut premises = Vec::new();
    loop {
        let pos = p.here();
        match p.peek() {
            Some(Tok::RParen) => {
                p.bump();
                break;
            }
            Some(Tok::LParen) => premises.push(parse_node(p)?),
            Some(Tok::Keyword(k)) => {
                let k = k.clone();
                p.bump();
                let duplicate = match k.as_str() {
                    "discharge" => {
                        p.expect(&Tok::LParen)?;
                        while !p.eat(&Tok::RParen) {
                            discharges.push(integer(p)?);
                        }
                        false
                    }
                    "var" => var.replace(p.variable()?).is_some(),
                    "term" => term.replace(p.term()?).is_some(),
                    _ => {
                        return Err(ParseError::new(
                            pos,
                            ParseErrorKind::Unexpected(format!("keyword `:{k}`")),
                        ))
                    }
                };
                if duplicate {
                    return Err(ParseError::new(
                        pos,
                        ParseErrorKind::Unexpected(format!("repeated `:{k}`")),
                    ));
                }
            }
            _ => return Err(unexpected(p, "premise, keyword or `)`")),
        }
    }
    Ok(ProofNode::Inference {
        rule,
        conclusion,
        discharges,
        var,
        term,
        premises,
    })
}

/// Prints a proof in script syntax, one node per line.
pub fn write_script(logic: LogicId, proof: &ProofNode) -> String {
    let mut out = format!("(proof {logic}\n");
    write_node(&mut out, proof, 1);
    out.push_str(")\n");
    out
}

fn write_node(out: &mut String, node: &ProofNode, depth: usize) {
    let pad = "  ".repeat(depth);
    match node {
        ProofNode::Assumption { label, formula } => {
            out.push_str(&format!("{pad}(assume {label} {formula})\n"));
        }
        ProofNode::Inference {
            rule,
            conclusion,
            discharges,
            var,
            term,
            premises,
        } => {
            out.push_str(&format!("{pad}({rule} {conclusion}"));
            if !discharges.is_empty() {
                let labels: Vec<String> = discharges.iter().map(u64::to_string).collect();
                out.push_str(&format!(" :discharge ({})", labels.join(" ")));
            }
            if let Some(v) = var {
                out.push_str(&format!(" :var {v}"));
            }
            if let Some(t) = term {
                out.push_str(&format!(" :term {t}"));
            }
            out.push('\n');
            for p in premises {
                write_node(out, p, depth + 1);
            }
            out.push_str(&format!("{pad})\n"));
        }
    }
}

/// Reads `A, B |- C`; the assumption list may be empty.
pub fn parse_sequent(text: &str, logic: LogicId) -> Result<(Vec<Formula>, Formula, Signature), ParseError> {
    let toks = tokenize(text)?;
    let end = end_pos(text);
    let mut signature = logic.signature();
    let mut assumptions = Vec::new();
    let conclusion = {
        let mut p = FormulaParser::new(&toks, end, &mut signature, true);
        if !p.eat(&Tok::Turnstile) {
            loop {
                assumptions.push(p.formula()?);
                if p.eat(&Tok::Turnstile) {
                    break;
                }
                if !p.eat(&Tok::Comma) {
                    return Err(unexpected(&p, "`,` or `|-`"));
                }
            }
        }
        let c = p.formula()?;
        p.expect_end()?;
        c
    };
    Ok((assumptions, conclusion, signature))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "
        # modus ponens under a hypothesis
        (proof N4
          (impI P(a) -> Q(a) :discharge (1)
            (impE Q(a)
              (assume 0 P(a) -> Q(a))
              (assume 1 P(a)))))";

    #[test]
    fn reads_scripts() {
        let s = parse_script(SMALL).unwrap();
        assert_eq!(s.logic, LogicId::N4);
        assert_eq!(s.proof.size(), 4);
        assert_eq!(s.signature.arity("Q"), Some(1));
        match &s.proof {
            ProofNode::Inference { rule, discharges, .. } => {
                assert_eq!(*rule, RuleId::ImpI);
                assert_eq!(discharges, &vec![1]);
            }
            _ => panic!("expected an inference"),
        }
    }

    #[test]
    fn writes_what_it_reads() {
        let s = parse_script(SMALL).unwrap();
        let text = write_script(s.logic, &s.proof);
        assert_eq!(parse_script(&text).unwrap().proof, s.proof);
    }

    #[test]
    fn parameters_and_primes() {
        let s = parse_script(
            "(proof N4I (allI' forall x.P(x) :var y :term a (assume 1 P(y))))",
        )
        .unwrap();
        match s.proof {
            ProofNode::Inference { rule, var, term, .. } => {
                assert_eq!(rule, RuleId::AllIP);
                assert_eq!(var.as_deref(), Some("y"));
                assert_eq!(term, Some(Term::constant("a")));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn script_errors_are_positioned() {
        let err = parse_script("(proof N5 (assume 1 P(a)))").unwrap_err();
        assert_eq!(err.pos.col, 8);
        let err = parse_script("(proof N4\n  (frob P(a)))").unwrap_err();
        assert_eq!((err.pos.line, err.pos.col), (2, 4));
        assert!(parse_script("(proof N4 (assume 1 P(a))").is_err());
        assert!(parse_script("(proof N4 (impI P(a) :var x :var y (assume 1 P(a))))").is_err());
    }

    #[test]
    fn sequents() {
        let (lhs, rhs, _) = parse_sequent("P(a), ~P(a) |- Q(a)", LogicId::N4).unwrap();
        assert_eq!(lhs.len(), 2);
        assert_eq!(rhs.to_string(), "Q(a)");
        let (lhs, _, _) = parse_sequent("|- P(a) | (P(a) -> bot)", LogicId::INT).unwrap();
        assert!(lhs.is_empty());
        assert!(parse_sequent("P(a) |- bot", LogicId::N4).is_err());
    }
}
