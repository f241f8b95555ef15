//! Lexer and expression grammar for polynomial text.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary ("*"? power)*        -- juxtaposition multiplies
//! unary := "-" unary | power
//! power := atom ("^" INT)?
//! atom  := INT ("/" INT)? | IDENT | "(" expr ")"
//! ```
//!
//! Identifiers that are not variable names but split into a sequence of
//! variable names (`xy` over `[x, y]`) are read as products.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::poly::{PolyRing, Polynomial};
use crate::error::{Error, ParseError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(BigInt),
    Str(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    Colon,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Int(n) => format!("integer `{n}`"),
            TokenKind::Str(s) => format!("string \"{s}\""),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Caret => "^",
            TokenKind::Slash => "/",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Comma => ",",
            TokenKind::Semi => ";",
            TokenKind::Eq => "=",
            TokenKind::Colon => ":",
            _ => "?",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

/// Splits source text into tokens. `#` and `//` start comments running to end of line.
pub fn tokenize(src: &str) -> std::result::Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                kind: TokenKind::Ident(s),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                kind: TokenKind::Int(s.parse().expect("digits")),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if j >= chars.len() || chars[j] != '"' {
                return Err(ParseError::new(tl, tc, "unterminated string literal"));
            }
            let s: String = chars[start..j].iter().collect();
            col += j + 1 - i;
            i = j + 1;
            out.push(Token {
                kind: TokenKind::Str(s),
                line: tl,
                column: tc,
            });
            continue;
        }
        let kind = match c {
            '+' => TokenKind::Plus,
            '-' => TokenKind::Minus,
            '*' => TokenKind::Star,
            '^' => TokenKind::Caret,
            '/' => TokenKind::Slash,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ',' => TokenKind::Comma,
            ';' => TokenKind::Semi,
            '=' => TokenKind::Eq,
            ':' => TokenKind::Colon,
            other => {
                return Err(ParseError::new(
                    tl,
                    tc,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        i += 1;
        col += 1;
        out.push(Token {
            kind,
            line: tl,
            column: tc,
        });
    }
    out.push(Token {
        kind: TokenKind::Eof,
        line,
        column: col,
    });
    Ok(out)
}

/// Syntax tree of a polynomial expression, independent of any ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Int(BigInt),
    Rational(BigInt, BigInt),
    Var(String),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

/// Recursive-descent parser over a token slice; shared with the script language.
pub struct TokenCursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> TokenCursor<'a> {
    pub fn new(tokens: &'a [Token]) -> Self {
        TokenCursor { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub fn peek_at(&self, k: usize) -> &Token {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)]
    }

    pub fn advance(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn at(&self, kind: &TokenKind) -> bool {
        &self.peek().kind == kind
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn error_here(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::new(t.line, t.column, message).expecting(expected)
    }

    pub fn expect(&mut self, kind: &TokenKind) -> std::result::Result<Token, ParseError> {
        if self.at(kind) {
            Ok(self.advance())
        } else {
            let found = self.peek().kind.describe();
            Err(self.error_here(
                format!("unexpected {found}"),
                &[&format!("`{}`", kind.symbol())],
            ))
        }
    }

    pub fn expect_ident(&mut self) -> std::result::Result<String, ParseError> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            other => {
                let found = other.describe();
                Err(self.error_here(format!("unexpected {found}"), &["identifier"]))
            }
        }
    }

    pub fn expect_int(&mut self) -> std::result::Result<BigInt, ParseError> {
        match &self.peek().kind {
            TokenKind::Int(n) => {
                let n = n.clone();
                self.advance();
                Ok(n)
            }
            other => {
                let found = other.describe();
                Err(self.error_here(format!("unexpected {found}"), &["integer"]))
            }
        }
    }

    pub fn parse_expr(&mut self) -> std::result::Result<PolyExpr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                let rhs = self.parse_term()?;
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&TokenKind::Minus) {
                let rhs = self.parse_term()?;
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_term(&mut self) -> std::result::Result<PolyExpr, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            if self.eat(&TokenKind::Star) {
                let rhs = self.parse_unary()?;
                lhs = PolyExpr::Mul(Box::new(lhs), Box::new(rhs));
            } else if matches!(
                self.peek().kind,
                TokenKind::Ident(_) | TokenKind::Int(_) | TokenKind::LParen
            ) {
                let rhs = self.parse_power()?;
                lhs = PolyExpr::Mul(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_unary(&mut self) -> std::result::Result<PolyExpr, ParseError> {
        if self.eat(&TokenKind::Minus) {
            Ok(PolyExpr::Neg(Box::new(self.parse_unary()?)))
        } else {
            self.parse_power()
        }
    }

    fn parse_power(&mut self) -> std::result::Result<PolyExpr, ParseError> {
        let base = self.parse_atom()?;
        if self.eat(&TokenKind::Caret) {
            let n = self.expect_int()?;
            let e = n
                .to_u32()
                .ok_or_else(|| self.error_here("exponent too large", &["integer"]))?;
            Ok(PolyExpr::Pow(Box::new(base), e))
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> std::result::Result<PolyExpr, ParseError> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Int(n) => {
                self.advance();
                if self.at(&TokenKind::Slash) && matches!(self.peek_at(1).kind, TokenKind::Int(_)) {
                    self.advance();
                    let d = self.expect_int()?;
                    if d.is_zero() {
                        return Err(ParseError::new(t.line, t.column, "zero denominator"));
                    }
                    Ok(PolyExpr::Rational(n, d))
                } else {
                    Ok(PolyExpr::Int(n))
                }
            }
            TokenKind::Ident(s) => {
                self.advance();
                Ok(PolyExpr::Var(s))
            }
            TokenKind::LParen => {
                self.advance();
                let e = self.parse_expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(e)
            }
            other => Err(self.error_here(
                format!("unexpected {}", other.describe()),
                &["number", "identifier", "`(`", "`-`"],
            )),
        }
    }
}

/// Parses a standalone polynomial expression.
pub fn parse_expr(src: &str) -> std::result::Result<PolyExpr, ParseError> {
    let tokens = tokenize(src)?;
    let mut cur = TokenCursor::new(&tokens);
    let e = cur.parse_expr()?;
    if !cur.at(&TokenKind::Eof) {
        let found = cur.peek().kind.describe();
        return Err(cur.error_here(
            format!("unexpected {found}"),
            &["`+`", "`-`", "`*`", "end of input"],
        ));
    }
    Ok(e)
}

fn split_identifier(name: &str, vars: &[String]) -> Option<Vec<usize>> {
    if name.is_empty() {
        return Some(Vec::new());
    }
    // longest match first keeps `x1y` over [x, x1, y] unambiguous in the common case
    let mut candidates: Vec<usize> = (0..vars.len())
        .filter(|&i| name.starts_with(vars[i].as_str()))
        .collect();
    candidates.sort_by_key(|&i| std::cmp::Reverse(vars[i].len()));
    for i in candidates {
        if let Some(mut rest) = split_identifier(&name[vars[i].len()..], vars) {
            rest.insert(0, i);
            return Some(rest);
        }
    }
    None
}

impl PolyExpr {
    /// Evaluates the expression in `ring`.
    pub fn to_polynomial(&self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        Ok(match self {
            PolyExpr::Int(n) => Polynomial::constant(ring, ring.field().from_bigint(n)),
            PolyExpr::Rational(n, d) => {
                let q = BigRational::new(n.clone(), d.clone());
                Polynomial::constant(ring, ring.field().from_rational(&q)?)
            }
            PolyExpr::Var(name) => match ring.var_index(name) {
                Some(i) => Polynomial::var(ring, i),
                None => match split_identifier(name, ring.vars()) {
                    Some(idx) => idx.iter().fold(Polynomial::one(ring), |acc, &i| {
                        &acc * &Polynomial::var(ring, i)
                    }),
                    None => {
                        return Err(Error::Context(format!(
                            "unknown variable `{name}` (ring variables: {})",
                            ring.vars().join(", ")
                        )))
                    }
                },
            },
            PolyExpr::Neg(e) => e.to_polynomial(ring)?.neg(),
            PolyExpr::Add(a, b) => &a.to_polynomial(ring)? + &b.to_polynomial(ring)?,
            PolyExpr::Sub(a, b) => &a.to_polynomial(ring)? - &b.to_polynomial(ring)?,
            PolyExpr::Mul(a, b) => &a.to_polynomial(ring)? * &b.to_polynomial(ring)?,
            PolyExpr::Pow(a, k) => a.to_polynomial(ring)?.pow(*k),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            PolyExpr::Add(..) | PolyExpr::Sub(..) => 1,
            PolyExpr::Neg(..) => 2,
            PolyExpr::Mul(..) => 3,
            PolyExpr::Pow(..) => 4,
            PolyExpr::Rational(..) => 4,
            PolyExpr::Int(..) | PolyExpr::Var(..) => 5,
        }
    }
}

fn wrap(e: &PolyExpr, min: u8) -> String {
    if e.precedence() < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyExpr::Int(n) => write!(f, "{n}"),
            PolyExpr::Rational(n, d) => write!(f, "{n}/{d}"),
            PolyExpr::Var(s) => write!(f, "{s}"),
            PolyExpr::Neg(e) => write!(f, "-{}", wrap(e, 4)),
            PolyExpr::Add(a, b) => write!(f, "{} + {}", a, wrap(b, 2)),
            PolyExpr::Sub(a, b) => write!(f, "{} - {}", a, wrap(b, 2)),
            PolyExpr::Mul(a, b) => write!(f, "{}*{}", wrap(a, 3), wrap(b, 4)),
            PolyExpr::Pow(a, k) => write!(f, "{}^{}", wrap(a, 5), k),
        }
    }
}

impl Polynomial {
    /// Parses `text` as a polynomial in `ring`.
    pub fn parse(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial> {
        parse_expr(text)?.to_polynomial(ring)
    }
}
