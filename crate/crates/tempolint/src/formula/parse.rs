//! Text grammar for requirements.
//!
//! ```text
//! formula  := or ("->" formula)?          right-associative
//! or       := and ("||" and)*
//! and      := unary ("&&" unary)*
//! unary    := "!" unary | ("G"|"F") interval unary | primary
//! primary  := "(" formula ")" | "true" | "false" | ident (cmp number)?
//! interval := ("["|"(") number "," number ("]"|")")
//! number   := decimal | decimal "/" decimal
//! ```
//!
//! `!` and the temporal operators bind tightest, then `&&`, then `||`,
//! then `->`. The pretty-printer in [`super::Formula`] emits this grammar
//! back, fully parenthesized.

use super::{Atom, Cmp, Formula};
use crate::interval::Interval;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(Rational),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bang,
    AndAnd,
    OrOr,
    Arrow,
    Cmp(Cmp),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let (line, column) = (self.line, self.column);
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '!' => {
                    self.bump();
                    Tok::Bang
                }
                '&' => {
                    self.bump();
                    if self.chars.peek() == Some(&'&') {
                        self.bump();
                        Tok::AndAnd
                    } else {
                        return Err(self.error("expected `&&`"));
                    }
                }
                '|' => {
                    self.bump();
                    if self.chars.peek() == Some(&'|') {
                        self.bump();
                        Tok::OrOr
                    } else {
                        return Err(self.error("expected `||`"));
                    }
                }
                '-' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        return Err(self.error("expected `->`"));
                    }
                }
                '<' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Cmp(Cmp::Le)
                    } else {
                        Tok::Cmp(Cmp::Lt)
                    }
                }
                '>' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Cmp(Cmp::Ge)
                    } else {
                        Tok::Cmp(Cmp::Gt)
                    }
                }
                c if c.is_ascii_digit() || c == '.' => self.lex_number()?,
                c if c.is_alphabetic() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            ident.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(ident)
                }
                other => return Err(self.error(format!("unexpected character `{other}`"))),
            };
            out.push(Spanned { tok, line, column });
        }
        Ok(out)
    }

    fn lex_number(&mut self) -> Result<Tok, ParseError> {
        let mut text = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() || c == '.' {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // Fraction form a/b.
        if self.chars.peek() == Some(&'/') {
            text.push('/');
            self.bump();
            let mut saw_digit = false;
            while let Some(&c) = self.chars.peek() {
                if c.is_ascii_digit() || c == '.' {
                    saw_digit = true;
                    text.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if !saw_digit {
                return Err(self.error("expected denominator after `/`"));
            }
        }
        let value = parse_rational(&text).map_err(|e| self.error(e.to_string()))?;
        Ok(Tok::Number(value))
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(spanned) => ParseError {
                line: spanned.line,
                column: spanned.column,
                message: message.into(),
            },
            None => {
                let (line, column) = self
                    .tokens
                    .last()
                    .map(|s| (s.line, s.column + 1))
                    .unwrap_or((1, 1));
                ParseError {
                    line,
                    column,
                    message: format!("{} (at end of input)", message.into()),
                }
            }
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        match self.peek() {
            Some(s) if s.tok == tok => Ok(self.next().unwrap()),
            _ => Err(self.error_here(format!("expected {what}"))),
        }
    }

    fn parse_formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_or()?;
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Arrow)) {
            self.next();
            let rhs = self.parse_formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_and()?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::OrOr)) {
            self.next();
            let rhs = self.parse_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_unary()?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::AndAnd)) {
            self.next();
            let rhs = self.parse_unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Bang) => {
                self.next();
                Ok(Formula::not(self.parse_unary()?))
            }
            Some(Tok::Ident(name)) if (name == "G" || name == "F") && self.starts_interval() => {
                self.next();
                let interval = self.parse_interval()?;
                let child = self.parse_unary()?;
                Ok(if name == "G" {
                    Formula::always(interval, child)
                } else {
                    Formula::eventually(interval, child)
                })
            }
            _ => self.parse_primary(),
        }
    }

    /// After a `G`/`F` ident, an interval begins with `[`, or with `(` that
    /// is immediately followed by a number (to tell `F(0,1]p` apart from a
    /// parenthesized formula, which cannot start with a number).
    fn starts_interval(&self) -> bool {
        match self.tokens.get(self.pos + 1).map(|s| &s.tok) {
            Some(Tok::LBracket) => true,
            Some(Tok::LParen) => {
                matches!(self.tokens.get(self.pos + 2).map(|s| &s.tok), Some(Tok::Number(_)))
            }
            _ => false,
        }
    }

    fn parse_interval(&mut self) -> Result<Interval, ParseError> {
        let open_tok = self
            .next()
            .ok_or_else(|| self.error_here("expected interval"))?;
        let lower_closed = match open_tok.tok {
            Tok::LBracket => true,
            Tok::LParen => false,
            _ => return Err(self.error_here("expected `[` or `(`")),
        };
        let lower = self.parse_number()?;
        self.expect(Tok::Comma, "`,`")?;
        let upper = self.parse_number()?;
        let close = self
            .next()
            .ok_or_else(|| self.error_here("expected `]` or `)`"))?;
        let upper_closed = match close.tok {
            Tok::RBracket => true,
            Tok::RParen => false,
            _ => {
                return Err(ParseError {
                    line: close.line,
                    column: close.column,
                    message: "expected `]` or `)`".to_string(),
                })
            }
        };
        Interval::operator(lower, upper, lower_closed, upper_closed).map_err(|e| ParseError {
            line: open_tok.line,
            column: open_tok.column,
            message: format!("malformed interval: {e}"),
        })
    }

    fn parse_number(&mut self) -> Result<Rational, ParseError> {
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Number(v)) => {
                self.next();
                Ok(v)
            }
            _ => Err(self.error_here("expected a number")),
        }
    }

    fn parse_primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::LParen) => {
                self.next();
                let inner = self.parse_formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.next();
                match name.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => {
                        if let Some(Tok::Cmp(cmp)) = self.peek().map(|s| s.tok.clone()) {
                            self.next();
                            let threshold = self.parse_number()?;
                            Ok(Formula::Atom(Atom::pred(name, cmp, threshold)))
                        } else {
                            Ok(Formula::atom(name))
                        }
                    }
                }
            }
            Some(_) => Err(self.error_here("expected a formula")),
            None => Err(self.error_here("expected a formula")),
        }
    }
}

/// Parses a specification string into a formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser { tokens, pos: 0 };
    let formula = parser.parse_formula()?;
    if let Some(extra) = parser.peek() {
        return Err(ParseError {
            line: extra.line,
            column: extra.column,
            message: "unexpected trailing input".to_string(),
        });
    }
    Ok(formula)
}
