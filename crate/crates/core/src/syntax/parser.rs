//! Recursive-descent parser for formulas.
//!
//! Precedence, loosest first: `->` (right-associative), `|`, `&`, then the
//! prefix forms `~`, `forall x.`, `exists x.`. A quantifier body extends as
//! far right as possible.

use std::fmt;

use thiserror::Error;

use super::formula::{injected_index, Formula, Term, PRIMED_EXISTENCE, PRIMED_IDENTITY};
use super::lexer::{classify, tokenize, IdentClass, Pos, Tok, Token};
use super::signature::{Language, Signature, SignatureError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected}, found {found}")]
    Expected { expected: String, found: String },
    #[error("unclosed parenthesis")]
    UnclosedParen,
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.kind)
    }
}

impl ParseError {
    pub fn new(pos: Pos, kind: ParseErrorKind) -> Self {
        ParseError { pos, kind }
    }
}

/// Parses a formula over a fixed signature.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut local = sig.clone();
    parse_with(text, &mut local, false)
}

/// Parses a formula, declaring predicates and constants on first use.
pub fn parse_formula_inferring(text: &str, sig: &mut Signature) -> Result<Formula, ParseError> {
    parse_with(text, sig, true)
}

fn parse_with(text: &str, sig: &mut Signature, infer: bool) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let end = end_pos(text);
    let mut p = FormulaParser::new(&toks, end, sig, infer);
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// Position just past the last character of `text`.
pub fn end_pos(text: &str) -> Pos {
    let line = text.matches('\n').count() + 1;
    let col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, col }
}

/// A cursor over a token slice; reused by the proof-script and sequent readers.
pub struct FormulaParser<'a> {
    toks: &'a [Token],
    at: usize,
    end: Pos,
    sig: &'a mut Signature,
    infer: bool,
    lenient: bool,
}

impl<'a> FormulaParser<'a> {
    pub fn new(toks: &'a [Token], end: Pos, sig: &'a mut Signature, infer: bool) -> Self {
        FormulaParser {
            toks,
            at: 0,
            end,
            sig,
            infer,
            lenient: false,
        }
    }

    /// Skips the language-tag checks (`~`, `bot`, `E!`, `I`) so that a
    /// checker can report them against the logic instead.
    pub fn lenient(mut self) -> Self {
        self.lenient = true;
        self
    }

    pub fn position(&self) -> usize {
        self.at
    }

    pub fn seek(&mut self, at: usize) {
        self.at = at;
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    pub fn here(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    pub fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.at);
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Pos, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(t) if &t.tok == tok => Ok(pos),
            Some(t) => Err(ParseError::new(
                pos,
                ParseErrorKind::Expected {
                    expected: tok.to_string(),
                    found: t.tok.to_string(),
                },
            )),
            None => Err(ParseError::new(pos, ParseErrorKind::UnexpectedEnd)),
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        match self.toks.get(self.at) {
            None => Ok(()),
            Some(t) => Err(ParseError::new(
                t.pos,
                ParseErrorKind::Unexpected(t.tok.to_string()),
            )),
        }
    }

    fn closing(&mut self, close: &Tok, open: Pos) -> Result<(), ParseError> {
        if self.peek().is_none() {
            return Err(ParseError::new(open, ParseErrorKind::UnclosedParen));
        }
        self.expect(close).map(|_| ())
    }

    fn sig_err(pos: Pos, e: SignatureError) -> ParseError {
        ParseError::new(pos, ParseErrorKind::Signature(e))
    }

    /// Entry point: one formula, stopping at the first token that cannot
    /// continue it.
    pub fn formula(&mut self) -> Result<Formula, ParseError> {
        self.imp()
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.here();
        match self.peek() {
            Some(Tok::Tilde) => {
                self.at += 1;
                if !self.lenient && self.sig.language == Language::Falsum {
                    return Err(Self::sig_err(pos, SignatureError::NegationInFalsumLanguage));
                }
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(w)) if w == "forall" || w == "exists" => {
                self.at += 1;
                let x = self.variable()?;
                self.expect(&Tok::Dot)?;
                let body = self.imp()?;
                Ok(if w == "forall" {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.here();
        let tok = match self.peek() {
            Some(t) => t,
            None => return Err(ParseError::new(pos, ParseErrorKind::UnexpectedEnd)),
        };
        match tok {
            Tok::LParen => {
                self.at += 1;
                let f = self.imp()?;
                self.closing(&Tok::RParen, pos)?;
                Ok(f)
            }
            Tok::Existence | Tok::ExistencePrimed => {
                self.at += 1;
                let primed = *tok == Tok::ExistencePrimed;
                if !self.lenient && !self.sig.free {
                    return Err(Self::sig_err(pos, SignatureError::ExistenceNotFree));
                }
                if primed && !self.lenient && !self.sig.primed {
                    return Err(Self::sig_err(
                        pos,
                        SignatureError::PrimedNotAllowed(PRIMED_EXISTENCE.into()),
                    ));
                }
                let open = self.expect(&Tok::LParen)?;
                let t = self.term()?;
                self.closing(&Tok::RParen, open)?;
                Ok(if primed {
                    Formula::atom(PRIMED_EXISTENCE, vec![t])
                } else {
                    Formula::existent(t)
                })
            }
            Tok::Ident(w) => match classify(w) {
                IdentClass::Keyword if w == "bot" => {
                    self.at += 1;
                    if !self.lenient && self.sig.language == Language::Negation {
                        return Err(Self::sig_err(pos, SignatureError::FalsumInNegationLanguage));
                    }
                    Ok(Formula::Bot)
                }
                IdentClass::Keyword if w == "I" => {
                    self.at += 1;
                    if !self.lenient && !self.sig.descriptions {
                        return Err(Self::sig_err(pos, SignatureError::DescriptionNotAllowed));
                    }
                    let x = self.variable()?;
                    let open = self.expect(&Tok::LBrack)?;
                    let restrictor = self.imp()?;
                    self.expect(&Tok::Comma)?;
                    let scope = self.imp()?;
                    self.closing(&Tok::RBrack, open)?;
                    Ok(Formula::descr(x, restrictor, scope))
                }
                IdentClass::Keyword => Err(ParseError::new(
                    pos,
                    ParseErrorKind::Unexpected(tok.to_string()),
                )),
                IdentClass::Predicate => {
                    self.at += 1;
                    let open = self.expect(&Tok::LParen)?;
                    let mut args = vec![self.term()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.term()?);
                    }
                    self.closing(&Tok::RParen, open)?;
                    self.predicate_use(w, args.len(), pos)?;
                    Ok(Formula::atom(w.clone(), args))
                }
                IdentClass::Variable | IdentClass::Constant => {
                    let lhs = self.term()?;
                    let eq_pos = self.here();
                    let primed = match self.bump().map(|t| &t.tok) {
                        Some(Tok::Equals) => false,
                        Some(Tok::EqualsPrimed) => true,
                        Some(other) => {
                            return Err(ParseError::new(
                                eq_pos,
                                ParseErrorKind::Expected {
                                    expected: "`=`".into(),
                                    found: other.to_string(),
                                },
                            ))
                        }
                        None => return Err(ParseError::new(eq_pos, ParseErrorKind::UnexpectedEnd)),
                    };
                    let rhs = self.term()?;
                    if primed {
                        if !self.sig.primed {
                            return Err(Self::sig_err(
                                eq_pos,
                                SignatureError::PrimedNotAllowed(PRIMED_IDENTITY.into()),
                            ));
                        }
                        Ok(Formula::atom(PRIMED_IDENTITY, vec![lhs, rhs]))
                    } else {
                        Ok(Formula::eq(lhs, rhs))
                    }
                }
            },
            other => Err(ParseError::new(
                pos,
                ParseErrorKind::Unexpected(other.to_string()),
            )),
        }
    }

    fn predicate_use(&mut self, name: &str, arity: usize, pos: Pos) -> Result<(), ParseError> {
        if self.infer {
            return self
                .sig
                .declare_predicate(name, arity)
                .map_err(|e| Self::sig_err(pos, e));
        }
        if name.ends_with('\'') && !self.sig.primed {
            return Err(Self::sig_err(pos, SignatureError::PrimedNotAllowed(name.into())));
        }
        match self.sig.arity(name) {
            None => Err(Self::sig_err(pos, SignatureError::UnknownPredicate(name.into()))),
            Some(declared) if declared != arity => Err(Self::sig_err(
                pos,
                SignatureError::ArityMismatch {
                    name: name.into(),
                    declared,
                    used: arity,
                },
            )),
            Some(_) => Ok(()),
        }
    }

    pub fn variable(&mut self) -> Result<String, ParseError> {
        let pos = self.here();
        match self.bump().map(|t| &t.tok) {
            Some(Tok::Ident(w)) if classify(w) == IdentClass::Variable && !w.ends_with('\'') => {
                Ok(w.clone())
            }
            Some(other) => Err(ParseError::new(
                pos,
                ParseErrorKind::Expected {
                    expected: "variable".into(),
                    found: other.to_string(),
                },
            )),
            None => Err(ParseError::new(pos, ParseErrorKind::UnexpectedEnd)),
        }
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.here();
        match self.bump().map(|t| &t.tok) {
            Some(Tok::Ident(w)) if !w.ends_with('\'') => match classify(w) {
                IdentClass::Variable => Ok(Term::var(w.clone())),
                IdentClass::Constant => {
                    if injected_index(w).is_none() && !self.sig.constants.contains(w) {
                        if self.infer {
                            self.sig
                                .declare_constant(w)
                                .map_err(|e| Self::sig_err(pos, e))?;
                        } else {
                            return Err(Self::sig_err(
                                pos,
                                SignatureError::UnknownConstant(w.clone()),
                            ));
                        }
                    }
                    Ok(Term::constant(w.clone()))
                }
                _ => Err(ParseError::new(
                    pos,
                    ParseErrorKind::Expected {
                        expected: "term".into(),
                        found: format!("`{w}`"),
                    },
                )),
            },
            Some(other) => Err(ParseError::new(
                pos,
                ParseErrorKind::Expected {
                    expected: "term".into(),
                    found: other.to_string(),
                },
            )),
            None => Err(ParseError::new(pos, ParseErrorKind::UnexpectedEnd)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n4() -> Signature {
        Signature::new(Language::Negation)
            .with_predicate("P", 1)
            .with_predicate("Q", 1)
            .with_predicate("F", 1)
            .with_predicate("G", 1)
            .with_constant("a")
            .with_descriptions(true)
    }

    fn pa() -> Formula {
        Formula::atom("P", vec![Term::constant("a")])
    }

    #[test]
    fn conjunction_with_negated_atom() {
        let f = parse_formula("P(a) & ~P(a)", &n4()).unwrap();
        assert_eq!(f, Formula::and(pa(), Formula::not(pa())));
    }

    #[test]
    fn description_binds_in_both_arguments() {
        let f = parse_formula("I x [F(x), ~G(x)]", &n4()).unwrap();
        let x = Term::var("x");
        assert_eq!(
            f,
            Formula::descr(
                "x",
                Formula::atom("F", vec![x.clone()]),
                Formula::not(Formula::atom("G", vec![x]))
            )
        );
    }

    #[test]
    fn unclosed_parenthesis_is_located() {
        let err = parse_formula("forall x. P(x", &n4()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnclosedParen);
        assert_eq!(err.pos, Pos { line: 1, col: 12 });
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("P(a) | Q(a) & P(a) -> Q(a) -> P(a)", &n4()).unwrap();
        let q = Formula::atom("Q", vec![Term::constant("a")]);
        assert_eq!(
            f,
            Formula::imp(
                Formula::or(pa(), Formula::and(q.clone(), pa())),
                Formula::imp(q, pa())
            )
        );
        let g = parse_formula("P(a) | P(a) | P(a)", &n4()).unwrap();
        assert_eq!(g, Formula::or(Formula::or(pa(), pa()), pa()));
    }

    #[test]
    fn quantifier_scope_is_maximal() {
        let f = parse_formula("forall x. P(x) & Q(x)", &n4()).unwrap();
        assert!(matches!(f, Formula::Forall(_, ref b) if matches!(**b, Formula::And(..))));
        let g = parse_formula("~forall x. P(x) -> Q(x)", &n4()).unwrap();
        assert!(matches!(g, Formula::Not(_)));
    }

    #[test]
    fn signature_errors_carry_positions() {
        let err = parse_formula("P(a) & R(a)", &n4()).unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 8 });
        assert!(matches!(
            err.kind,
            ParseErrorKind::Signature(SignatureError::UnknownPredicate(_))
        ));
        let err = parse_formula("P(a,a)", &n4()).unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::Signature(SignatureError::ArityMismatch { .. })
        ));
        let err = parse_formula("P(a) -> bot", &n4()).unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::Signature(SignatureError::FalsumInNegationLanguage)
        );
        let int = Signature::new(Language::Falsum).with_predicate("P", 1).with_constant("a");
        let err = parse_formula("~P(a)", &int).unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::Signature(SignatureError::NegationInFalsumLanguage)
        );
        assert!(parse_formula("P(b)", &n4()).is_err());
        assert!(parse_formula("P(k3)", &n4()).is_ok());
    }

    #[test]
    fn inferring_mode_learns_the_signature() {
        let mut sig = Signature::new(Language::Negation).with_free(true);
        let f = parse_formula_inferring("R(a, x) & E!(b) & ~c = d", &mut sig).unwrap();
        assert_eq!(sig.arity("R"), Some(2));
        assert_eq!(sig.constants.len(), 4);
        assert!(f.contains_existence());
        assert!(parse_formula_inferring("R(a)", &mut sig).is_err());
    }

    #[test]
    fn primed_builtins() {
        let sig = Signature::new(Language::Falsum)
            .with_free(true)
            .with_constant("a")
            .with_predicate("P", 1)
            .primed_extension();
        let f = parse_formula("a =' a & E!'(a) & P'(a)", &sig).unwrap();
        assert_eq!(f.predicates().len(), 3);
        assert!(parse_formula("a =' a", &n4()).is_err());
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        assert!(parse_formula("P(a) P(a)", &n4()).is_err());
        assert!(parse_formula("", &n4()).is_err());
        assert!(parse_formula("P(a) &", &n4()).is_err());
    }
}
