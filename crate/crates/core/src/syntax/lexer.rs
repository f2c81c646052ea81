//! Tokenizer shared by the formula, sequent, proof-script and model readers.

use std::fmt;

use super::parser::{ParseError, ParseErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Identifier, possibly with one trailing apostrophe.
    Ident(String),
    Int(u64),
    /// `:name`
    Keyword(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Turnstile,
    Equals,
    EqualsPrimed,
    Existence,
    ExistencePrimed,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Keyword(k) => write!(f, "`:{k}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::EqualsPrimed => f.write_str("`='`"),
            Tok::Existence => f.write_str("`E!`"),
            Tok::ExistencePrimed => f.write_str("`E!'`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let peek = chars.get(i + 1).copied();
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };

        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, pos });
            advance(1, &mut i, &mut col);
            continue;
        }

        match c {
            '|' => {
                if peek == Some('-') {
                    out.push(Token {
                        tok: Tok::Turnstile,
                        pos,
                    });
                    advance(2, &mut i, &mut col);
                } else {
                    out.push(Token { tok: Tok::Bar, pos });
                    advance(1, &mut i, &mut col);
                }
            }
            '-' if peek == Some('>') => {
                out.push(Token {
                    tok: Tok::Arrow,
                    pos,
                });
                advance(2, &mut i, &mut col);
            }
            '=' => {
                if peek == Some('\'') {
                    out.push(Token {
                        tok: Tok::EqualsPrimed,
                        pos,
                    });
                    advance(2, &mut i, &mut col);
                } else {
                    out.push(Token {
                        tok: Tok::Equals,
                        pos,
                    });
                    advance(1, &mut i, &mut col);
                }
            }
            ':' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                if j == start {
                    return Err(ParseError::new(pos, ParseErrorKind::Unexpected(":".into())));
                }
                let word: String = chars[start..j].iter().collect();
                out.push(Token {
                    tok: Tok::Keyword(word),
                    pos,
                });
                advance(j - i, &mut i, &mut col);
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                let n = digits
                    .parse()
                    .map_err(|_| ParseError::new(pos, ParseErrorKind::Unexpected(digits.clone())))?;
                out.push(Token {
                    tok: Tok::Int(n),
                    pos,
                });
                advance(j - i, &mut i, &mut col);
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                if a == 'E' && peek == Some('!') {
                    if chars.get(i + 2) == Some(&'\'') {
                        out.push(Token {
                            tok: Tok::ExistencePrimed,
                            pos,
                        });
                        advance(3, &mut i, &mut col);
                    } else {
                        out.push(Token {
                            tok: Tok::Existence,
                            pos,
                        });
                        advance(2, &mut i, &mut col);
                    }
                    continue;
                }
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                if chars.get(j) == Some(&'\'') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                out.push(Token {
                    tok: Tok::Ident(word),
                    pos,
                });
                advance(j - i, &mut i, &mut col);
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    ParseErrorKind::Unexpected(other.to_string()),
                ))
            }
        }
    }
    Ok(out)
}

/// Lexical class of an identifier in formula position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentClass {
    Variable,
    Constant,
    Predicate,
    Keyword,
}

pub fn classify(ident: &str) -> IdentClass {
    match ident {
        "forall" | "exists" | "bot" | "I" => return IdentClass::Keyword,
        _ => {}
    }
    let first = ident.chars().next().unwrap_or('_');
    if first.is_ascii_uppercase() {
        IdentClass::Predicate
    } else if matches!(first, 'u' | 'v' | 'w' | 'x' | 'y' | 'z') {
        IdentClass::Variable
    } else {
        IdentClass::Constant
    }
}
