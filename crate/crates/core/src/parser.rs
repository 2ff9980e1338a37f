//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := iff
//! iff     := implies ("<->" iff)?          right-associative
//! implies := or ("->" implies)?            right-associative
//! or      := and ("|" and)*                left-associative
//! and     := unary ("&" unary)*            left-associative
//! unary   := "!" unary | atom
//! atom    := ident | "true" | "false" | "(" formula ")"
//! ```
//!
//! Identifiers start with a letter or underscore, continue with letters,
//! digits, or underscores, and may end in one or more apostrophes, so `a'`
//! is a legal proposition name.

use crate::error::{Error, Result, SyntaxError};
use crate::formula::Formula;
use crate::worlds::Signature;

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::Ident(n) => format!("`{n}`"),
            TokKind::True => "`true`".into(),
            TokKind::False => "`false`".into(),
            TokKind::Not => "`!`".into(),
            TokKind::And => "`&`".into(),
            TokKind::Or => "`|`".into(),
            TokKind::Implies => "`->`".into(),
            TokKind::Iff => "`<->`".into(),
            TokKind::LParen => "`(`".into(),
            TokKind::RParen => "`)`".into(),
            TokKind::Eof => "end of input".into(),
        }
    }
}

/// True when `name` is a lexically valid proposition or rule name.
pub(crate) fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars().peekable();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    let mut in_primes = false;
    for c in chars {
        if c == '\'' {
            in_primes = true;
        } else if in_primes {
            return false; // apostrophes only at the end
        } else if !(c.is_ascii_alphanumeric() || c == '_') {
            return false;
        }
    }
    true
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let kind = match c {
            '(' => {
                bump(&mut chars);
                TokKind::LParen
            }
            ')' => {
                bump(&mut chars);
                TokKind::RParen
            }
            '!' => {
                bump(&mut chars);
                TokKind::Not
            }
            '&' => {
                bump(&mut chars);
                TokKind::And
            }
            '|' => {
                bump(&mut chars);
                TokKind::Or
            }
            '-' => {
                bump(&mut chars);
                match chars.peek() {
                    Some('>') => {
                        bump(&mut chars);
                        TokKind::Implies
                    }
                    _ => {
                        return Err(SyntaxError::new(tl, tc, "expected `->`").into());
                    }
                }
            }
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    if chars.peek() == Some(&'>') {
                        bump(&mut chars);
                        TokKind::Iff
                    } else {
                        return Err(SyntaxError::new(tl, tc, "expected `<->`").into());
                    }
                } else {
                    return Err(SyntaxError::new(tl, tc, "expected `<->`").into());
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                while chars.peek() == Some(&'\'') {
                    name.push(bump(&mut chars));
                }
                match name.as_str() {
                    "true" => TokKind::True,
                    "false" => TokKind::False,
                    _ => TokKind::Ident(name),
                }
            }
            other => {
                return Err(
                    SyntaxError::new(tl, tc, format!("unexpected character `{other}`")).into(),
                );
            }
        };
        toks.push(Tok { kind, line: tl, col: tc });
    }
    toks.push(Tok {
        kind: TokKind::Eof,
        line,
        col,
    });
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    sig: Option<&'a Signature>,
    inferred: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, tok: &Tok, msg: impl Into<String>) -> Error {
        SyntaxError::new(tok.line, tok.col, msg).into()
    }

    fn parse_iff(&mut self) -> Result<Formula> {
        let left = self.parse_implies()?;
        if self.peek().kind == TokKind::Iff {
            self.bump();
            let right = self.parse_iff()?;
            Ok(Formula::iff(left, right))
        } else {
            Ok(left)
        }
    }

    fn parse_implies(&mut self) -> Result<Formula> {
        let left = self.parse_or()?;
        if self.peek().kind == TokKind::Implies {
            self.bump();
            let right = self.parse_implies()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut left = self.parse_and()?;
        while self.peek().kind == TokKind::Or {
            self.bump();
            let right = self.parse_and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut left = self.parse_unary()?;
        while self.peek().kind == TokKind::And {
            self.bump();
            let right = self.parse_unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> Result<Formula> {
        if self.peek().kind == TokKind::Not {
            self.bump();
            Ok(Formula::not(self.parse_unary()?))
        } else {
            self.parse_atom()
        }
    }

    fn parse_atom(&mut self) -> Result<Formula> {
        let tok = self.bump();
        let (line, col) = (tok.line, tok.col);
        match tok.kind {
            TokKind::Ident(name) => {
                if let Some(sig) = self.sig {
                    if !sig.contains(&name) {
                        return Err(SyntaxError::new(
                            line,
                            col,
                            format!("unknown proposition `{name}`"),
                        )
                        .into());
                    }
                } else if !self.inferred.iter().any(|n| n == &name) {
                    self.inferred.push(name.clone());
                }
                Ok(Formula::Atom(name))
            }
            TokKind::True => Ok(Formula::Top),
            TokKind::False => Ok(Formula::Bottom),
            TokKind::LParen => {
                let inner = self.parse_iff()?;
                let close = self.bump();
                if close.kind != TokKind::RParen {
                    return Err(self.err_at(&close, "expected `)`"));
                }
                Ok(inner)
            }
            other => Err(SyntaxError::new(
                line,
                col,
                format!("expected a formula, found {}", other.describe()),
            )
            .into()),
        }
    }

    fn finish(mut self, formula: Formula) -> Result<(Formula, Vec<String>)> {
        let tok = self.bump();
        if tok.kind != TokKind::Eof {
            return Err(self.err_at(&tok, format!("unexpected {}", tok.kind.describe())));
        }
        Ok((formula, self.inferred))
    }
}

fn parse_with(text: &str, sig: Option<&Signature>) -> Result<(Formula, Vec<String>)> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        inferred: Vec::new(),
    };
    let f = p.parse_iff()?;
    p.finish(f)
}

/// Parse `text` against a fixed signature; atoms outside it are rejected.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    parse_with(text, Some(sig)).map(|(f, _)| f)
}

/// Parse `text` with no fixed signature; also returns the atom names seen,
/// in first-encounter order.
pub fn parse_formula_inferring(text: &str) -> Result<(Formula, Vec<String>)> {
    parse_with(text, None)
}
