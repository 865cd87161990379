//! Text grammar for insertion expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? integer)?
//! atom    := integer | 'H' | 'h' | 'psi' | 'lambda' | '(' expr ')'
//! ```
//!
//! Rationals are written as quotients, e.g. `1/2*H`. Whitespace is ignored.

use gwloc_core::arith::Rational;
use gwloc_core::cohomology::{expand_insertion, DescendantInsertion, Expr, Ring};
use num_bigint::BigInt;
use thiserror::Error;

/// Exponents beyond this are rejected to keep expansion cheap.
const MAX_EXPONENT: u64 = 64;
const MAX_DEPTH: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {msg}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    depth: usize,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[start..i].parse().expect("ascii digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = s[i..].chars().next().unwrap();
            return Err(ParseError { pos: i, msg: format!("unexpected character {ch:?}") });
        }
    }
    Ok(out)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat('-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat('/') {
                lhs = Expr::div(lhs, self.unary()?);
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return self.err("expression nested too deeply");
            }
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let e: u64 = match u64::try_from(&n) {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => return Err(ParseError { pos, msg: format!("exponent larger than {MAX_EXPONENT}") }),
                };
                let e = e as i64;
                Ok(Expr::pow(base, if negative { -e } else { e }))
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Int(n) => {
                self.at += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Tok::Ident(name) => {
                let e = match name.as_str() {
                    "H" => Expr::BaseHyperplane,
                    "h" => Expr::Tautological,
                    "psi" => Expr::Psi,
                    "lambda" => Expr::Lambda,
                    _ => return self.err(format!("unknown symbol {name:?}")),
                };
                self.at += 1;
                Ok(e)
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Tok::Sym(c) => self.err(format!("unexpected {c:?}")),
        }
    }
}

/// Parse an expression without interpreting it in any ring.
pub fn parse_expr(s: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(s)?, at: 0, end: s.len(), depth: 0 };
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[derive(Debug, Error)]
pub enum InsertionError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Engine(#[from] gwloc_core::error::Error),
}

/// Parse and expand an insertion, truncating ψ-series above `dim_bound`.
pub fn parse_insertion(s: &str, ring: &Ring, dim_bound: u32) -> Result<DescendantInsertion, InsertionError> {
    let e = parse_expr(s)?;
    Ok(expand_insertion(&e, ring, dim_bound)?)
}

/// Render an expression back to the grammar, fully parenthesized.
pub fn render(e: &Expr) -> String {
    match e {
        Expr::Num(r) => {
            if r.is_integer() {
                r.to_string()
            } else {
                format!("({})", r)
            }
        }
        Expr::BaseHyperplane => "H".into(),
        Expr::Tautological => "h".into(),
        Expr::Psi => "psi".into(),
        Expr::Lambda => "lambda".into(),
        Expr::Neg(a) => format!("(-{})", render(a)),
        Expr::Add(a, b) => format!("({} + {})", render(a), render(b)),
        Expr::Sub(a, b) => format!("({} - {})", render(a), render(b)),
        Expr::Mul(a, b) => format!("({} * {})", render(a), render(b)),
        Expr::Div(a, b) => format!("({} / {})", render(a), render(b)),
        Expr::Pow(a, k) => format!("({})^{}", render(a), k),
    }
}
