//! Text grammar for free-algebra expressions and matrix polynomials.
//!
//! ```text
//! expr    := term (('+' | '-') term)* ;
//! term    := (coeff '*')? factor (('*')? factor)* ;
//! factor  := 'D[' labels ';' labels ']' ('@' nat)? | 't[' nat ',' nat ']' ;
//! labels  := nat (',' nat)* ;
//! coeff   := signed Laurent polynomial in q: integers, 'q', '^' with
//!            optionally negative integer exponents, '+', '-', '*',
//!            parentheses ;
//! ```
//!
//! Whitespace is insignificant between tokens and `#` starts a comment that
//! runs to the end of the line. `t[r,c]` is sugar for the 1x1 symbol
//! `D[r;c]`. Rendering is deterministic (monomials in symbol-sequence
//! order, coefficients canonical with the highest power of `q` first) and
//! `parse_expr . render_expr` is the identity.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::free_algebra::{FreeExpr, MinorSymbol, MultiLabel};
use crate::laurent::LaurentInt;
use crate::ncpoly::NCPoly;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Q,
    D,
    T,
    Caret,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    At,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Q => write!(f, "`q`"),
            Tok::D => write!(f, "`D`"),
            Tok::T => write!(f, "`t`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::At => write!(f, "`@`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let value = digits.parse::<BigInt>().expect("decimal digits");
            tokens.push(Token { tok: Tok::Int(value), line, col: start_col });
            continue;
        }
        let tok = match c {
            'q' => Tok::Q,
            'D' => Tok::D,
            't' => Tok::T,
            '^' => Tok::Caret,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '@' => Tok::At,
            other => {
                return Err(ParseError::new(line, col, format!("unexpected character `{other}`")))
            }
        };
        chars.next();
        col += 1;
        tokens.push(Token { tok, line, col: start_col });
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let lines: Vec<&str> = text.lines().collect();
        let end_line = lines.len().max(1);
        let end_col = lines.last().map(|l| l.chars().count() + 1).unwrap_or(1);
        Ok(Parser { tokens, pos: 0, end_line, end_col })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.tokens.get(self.pos).map(|t| (t.line, t.col)).unwrap_or((self.end_line, self.end_col))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, message)
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        match self.peek() {
            Some(t) if *t == tok => Ok(self.next().expect("peeked")),
            Some(t) => Err(self.error(format!("expected {tok}, found {t}"))),
            None => Err(self.error(format!("expected {tok}, found end of input"))),
        }
    }

    fn starts_factor(tok: Option<&Tok>) -> bool {
        matches!(tok, Some(Tok::D) | Some(Tok::T))
    }

    fn starts_coeff(tok: Option<&Tok>) -> bool {
        matches!(
            tok,
            Some(Tok::Int(_))
                | Some(Tok::Q)
                | Some(Tok::LParen)
                | Some(Tok::Minus)
                | Some(Tok::Plus)
        )
    }

    fn parse_expr(&mut self) -> Result<FreeExpr, ParseError> {
        let mut out = FreeExpr::zero();
        self.parse_term(&mut out, false)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    self.parse_term(&mut out, false)?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    self.parse_term(&mut out, true)?;
                }
                Some(_) => return Err(self.error("expected `+`, `-` or end of expression")),
                None => return Ok(out),
            }
        }
    }

    fn parse_term(&mut self, out: &mut FreeExpr, negate: bool) -> Result<(), ParseError> {
        let coeff = if Self::starts_coeff(self.peek()) {
            let c = self.parse_coeff_sum()?;
            self.expect(Tok::Star).map_err(|e| {
                ParseError::new(e.line, e.col, "expected `*` between coefficient and symbol")
            })?;
            c
        } else {
            LaurentInt::one()
        };
        let coeff = if negate { -coeff } else { coeff };
        let mut factors = vec![self.parse_factor()?];
        loop {
            if Self::starts_factor(self.peek()) {
                factors.push(self.parse_factor()?);
            } else if self.peek() == Some(&Tok::Star) && Self::starts_factor(self.peek_at(1)) {
                self.next();
                factors.push(self.parse_factor()?);
            } else {
                break;
            }
        }
        out.add_monomial(factors, coeff);
        Ok(())
    }

    /// Sum level of a coefficient. Stops at a `*` that introduces a symbol
    /// factor, at a closing parenthesis, or at anything that is not `+`/`-`.
    fn parse_coeff_sum(&mut self) -> Result<LaurentInt, ParseError> {
        let mut acc = self.parse_coeff_product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc + self.parse_coeff_product()?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc - self.parse_coeff_product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_coeff_product(&mut self) -> Result<LaurentInt, ParseError> {
        let mut negative = false;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    negative = !negative;
                    self.next();
                }
                Some(Tok::Plus) => {
                    self.next();
                }
                _ => break,
            }
        }
        let mut acc = self.parse_coeff_atom()?;
        while self.peek() == Some(&Tok::Star) && !Self::starts_factor(self.peek_at(1)) {
            self.next();
            acc = acc * self.parse_coeff_atom()?;
        }
        if negative {
            acc = -acc;
        }
        Ok(acc)
    }

    fn parse_coeff_atom(&mut self) -> Result<LaurentInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let Some(Token { tok: Tok::Int(n), .. }) = self.next() else { unreachable!() };
                Ok(LaurentInt::term(n, 0))
            }
            Some(Tok::Q) => {
                self.next();
                let exp = if self.peek() == Some(&Tok::Caret) {
                    self.next();
                    self.parse_exponent()?
                } else {
                    1
                };
                Ok(LaurentInt::q_pow(exp))
            }
            Some(Tok::LParen) => {
                self.next();
                let inner = self.parse_coeff_sum()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.error("expected an integer, `q` or `(` in a coefficient")),
        }
    }

    fn parse_exponent(&mut self) -> Result<i64, ParseError> {
        let negative = match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                true
            }
            Some(Tok::Plus) => {
                self.next();
                false
            }
            _ => false,
        };
        match self.next() {
            Some(Token { tok: Tok::Int(n), line, col }) => {
                let magnitude: i64 = (&n)
                    .try_into()
                    .map_err(|_| ParseError::new(line, col, "exponent too large"))?;
                Ok(if negative { -magnitude } else { magnitude })
            }
            Some(Token { tok, line, col }) => {
                Err(ParseError::new(line, col, format!("expected an exponent, found {tok}")))
            }
            None => Err(self.error("expected an exponent, found end of input")),
        }
    }

    fn parse_factor(&mut self) -> Result<MinorSymbol, ParseError> {
        match self.peek() {
            Some(Tok::D) => {
                let at = self.here();
                self.next();
                self.expect(Tok::LBracket)?;
                let rows = self.parse_labels()?;
                self.expect(Tok::Semi)?;
                let cols = self.parse_labels()?;
                self.expect(Tok::RBracket)?;
                let decoration = if self.peek() == Some(&Tok::At) {
                    self.next();
                    self.parse_nat(u32::MAX, "decoration")?
                } else {
                    0
                };
                let rows = MultiLabel::new(rows)
                    .map_err(|e| ParseError::new(at.0, at.1, e.to_string()))?;
                let cols = MultiLabel::new(cols)
                    .map_err(|e| ParseError::new(at.0, at.1, e.to_string()))?;
                MinorSymbol::new(rows, cols, decoration)
                    .map_err(|e| ParseError::new(at.0, at.1, e.to_string()))
            }
            Some(Tok::T) => {
                self.next();
                self.expect(Tok::LBracket)?;
                let row = self.parse_label()?;
                self.expect(Tok::Comma)?;
                let col = self.parse_label()?;
                self.expect(Tok::RBracket)?;
                Ok(MinorSymbol::entry(row, col, 0))
            }
            _ => Err(self.error("expected a symbol `D[...]` or `t[...]`")),
        }
    }

    fn parse_labels(&mut self) -> Result<Vec<u32>, ParseError> {
        let mut labels = vec![self.parse_label()?];
        while self.peek() == Some(&Tok::Comma) {
            self.next();
            labels.push(self.parse_label()?);
        }
        Ok(labels)
    }

    fn parse_label(&mut self) -> Result<u32, ParseError> {
        let n = self.parse_nat(u32::MAX, "label")?;
        if n == 0 {
            let (line, col) = self.here();
            return Err(ParseError::new(line, col, "labels must be positive"));
        }
        Ok(n)
    }

    fn parse_nat(&mut self, max: u32, what: &str) -> Result<u32, ParseError> {
        match self.next() {
            Some(Token { tok: Tok::Int(n), line, col }) => {
                let value: u32 = (&n)
                    .try_into()
                    .map_err(|_| ParseError::new(line, col, format!("{what} out of range")))?;
                if value > max {
                    return Err(ParseError::new(line, col, format!("{what} out of range")));
                }
                Ok(value)
            }
            Some(Token { tok, line, col }) => {
                Err(ParseError::new(line, col, format!("expected a {what}, found {tok}")))
            }
            None => Err(self.error(format!("expected a {what}, found end of input"))),
        }
    }
}

/// Parses an expression in the grammar above.
pub fn parse_expr(text: &str) -> Result<FreeExpr, ParseError> {
    let mut parser = Parser::new(text)?;
    if parser.tokens.is_empty() {
        return Err(ParseError::new(1, 1, "empty input"));
    }
    // a bare `0` denotes the zero expression
    if parser.tokens.len() == 1 {
        if let Tok::Int(n) = &parser.tokens[0].tok {
            if n.is_zero() {
                return Ok(FreeExpr::zero());
            }
        }
    }
    let expr = parser.parse_expr()?;
    Ok(expr)
}

/// Renders a coefficient for use inside a monomial: single terms go bare,
/// sums go in parentheses. The input must not be zero.
fn render_coeff(c: &LaurentInt) -> String {
    if c.num_terms() == 1 {
        c.to_string()
    } else {
        format!("({c})")
    }
}

/// Deterministic rendering of an expression; `parse_expr` inverts it.
pub fn render_expr(f: &FreeExpr) -> String {
    if f.is_structurally_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (monomial, coeff)) in f.terms().enumerate() {
        let negative = coeff.leading_is_negative();
        let magnitude = if negative { -coeff } else { coeff.clone() };
        if i == 0 {
            if negative {
                if magnitude.is_one() {
                    out.push_str("-1*");
                } else {
                    out.push('-');
                    out.push_str(&render_coeff(&magnitude));
                    out.push('*');
                }
            } else if !magnitude.is_one() {
                out.push_str(&render_coeff(&magnitude));
                out.push('*');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
            if !magnitude.is_one() {
                out.push_str(&render_coeff(&magnitude));
                out.push('*');
            }
        }
        let factors: Vec<String> = monomial.iter().map(|s| s.to_string()).collect();
        out.push_str(&factors.join("*"));
    }
    out
}

/// Deterministic rendering of a matrix polynomial in `t[r,c]` form; purely
/// for output, there is no matching parser.
pub fn render_poly(p: &NCPoly) -> String {
    let mut terms: Vec<(String, bool)> = Vec::new();
    for (word, coeff) in p.terms() {
        let negative = coeff.leading_is_negative();
        let magnitude = if negative { -coeff } else { coeff.clone() };
        let body = if word.is_empty() {
            render_coeff(&magnitude)
        } else if magnitude.is_one() {
            word.to_string()
        } else {
            format!("{}*{}", render_coeff(&magnitude), word)
        };
        terms.push((body, negative));
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (body, negative)) in terms.iter().enumerate() {
        if i == 0 {
            if *negative {
                out.push('-');
            }
        } else {
            out.push_str(if *negative { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}
