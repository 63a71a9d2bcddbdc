//! Recursive-descent parser for polynomial expressions in `x`, `y`, `s`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::qpoly::Q;

/// Sparse polynomial in `x, y, s`, keyed by `(i, j, k)` for `x^i y^j s^k`.
pub type Terms = BTreeMap<(u32, u32, u32), Q>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based column.
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownSymbol(String),
    Syntax(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol '{s}' at column {}", self.column),
            ParseErrorKind::Syntax(s) => write!(f, "syntax error at column {}: {s}", self.column),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let var = match s.as_str() {
                "x" => 0,
                "y" => 1,
                "s" => 2,
                _ => {
                    return Err(ParseError {
                        column: col,
                        kind: ParseErrorKind::UnknownSymbol(s),
                    })
                }
            };
            toks.push((Tok::Var(var), col));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ParseError {
                column: col,
                kind: ParseErrorKind::UnknownSymbol(c.to_string()),
            });
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexer { toks })
}

struct Parser {
    lx: Lexer,
    pos: usize,
}

fn syntax(column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        column,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.lx.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.lx.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.lx.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Terms, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = add(&acc, &self.term()?, &Q::one());
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = add(&acc, &self.term()?, &-Q::one());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Terms, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = mul(&acc, &self.unary()?);
                }
                Tok::Op('/') => {
                    self.bump();
                    let col = self.col();
                    let d = self.unary()?;
                    let c = match constant(&d) {
                        Some(c) if !c.is_zero() => c,
                        Some(_) => return Err(syntax(col, "division by zero")),
                        None => return Err(syntax(col, "only division by nonzero constants is supported")),
                    };
                    acc = scale(&acc, &c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Terms, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(scale(&self.unary()?, &-Q::one()))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Terms, ParseError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let parenthesised = self.peek() == &Tok::Op('(');
        if parenthesised {
            self.bump();
        }
        let e = match self.bump() {
            Tok::Num(n) => n,
            Tok::Op('-') => return Err(syntax(col, "exponents must be nonnegative integers")),
            _ => return Err(syntax(col, "expected an integer exponent")),
        };
        if parenthesised && self.bump() != Tok::Op(')') {
            return Err(syntax(self.col(), "expected ')'"));
        }
        let e = e
            .to_u32()
            .filter(|&e| e <= 10_000)
            .ok_or_else(|| syntax(col, "exponent too large"))?;
        if self.peek() == &Tok::Op('^') {
            return Err(syntax(self.col(), "chained exponents need parentheses"));
        }
        let mut out = one();
        for _ in 0..e {
            out = mul(&out, &base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Terms, ParseError> {
        let col = self.col();
        match self.bump() {
            Tok::Num(n) => Ok(constant_terms(Q::from_integer(n))),
            Tok::Var(v) => {
                let mut k = [0u32; 3];
                k[v] = 1;
                Ok(Terms::from([((k[0], k[1], k[2]), Q::one())]))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.bump() != Tok::Op(')') {
                    return Err(syntax(self.lx.toks[self.pos.saturating_sub(1)].1, "expected ')'"));
                }
                Ok(e)
            }
            Tok::End => Err(syntax(col, "unexpected end of input")),
            Tok::Op(c) => Err(syntax(col, format!("unexpected '{c}'"))),
        }
    }
}

fn one() -> Terms {
    constant_terms(Q::one())
}

fn constant_terms(c: Q) -> Terms {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert((0, 0, 0), c);
    }
    t
}

fn constant(t: &Terms) -> Option<Q> {
    match t.len() {
        0 => Some(Q::zero()),
        1 => t.get(&(0, 0, 0)).cloned(),
        _ => None,
    }
}

fn add(a: &Terms, b: &Terms, sign: &Q) -> Terms {
    let mut out = a.clone();
    for (k, c) in b {
        let e = out.entry(*k).or_insert_with(Q::zero);
        *e += c * sign;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn scale(a: &Terms, c: &Q) -> Terms {
    let mut out: Terms = a.iter().map(|(k, v)| (*k, v * c)).collect();
    out.retain(|_, c| !c.is_zero());
    out
}

fn mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k = (ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2);
            *out.entry(k).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn parse_terms(text: &str) -> Result<Terms, ParseError> {
    let lx = lex(text)?;
    let mut p = Parser { lx, pos: 0 };
    let t = p.expr()?;
    match p.peek() {
        Tok::End => Ok(t),
        Tok::Op(c) => Err(syntax(p.col(), format!("unexpected '{c}'"))),
        _ => Err(syntax(p.col(), "expected an operator")),
    }
}
