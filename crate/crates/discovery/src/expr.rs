//! Priority-rule expressions over job features.
//!
//! Text form is ordinary infix arithmetic plus `max`, `min` and `sq`:
//!
//! ```text
//! max(1.1 * P + T, D) + P / (T + MEANP)
//! ```
//!
//! Evaluation never fails. Division by a (near) zero denominator and any
//! non-finite intermediate collapse to [`SENTINEL`].

use std::fmt;
use std::str::FromStr;

use crate::error::{DiscoveryError, Result};

/// Value substituted for undefined or overflowing results.
pub const SENTINEL: f64 = 1e12;

/// Denominators with smaller magnitude count as zero.
pub const DIV_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Terminal {
    /// Processing time of the job being scored.
    P,
    /// Due date of the job being scored.
    D,
    /// Current time.
    T,
    /// Largest processing time among unscheduled jobs.
    MaxP,
    SumP,
    MeanP,
    /// Number of unscheduled jobs.
    Remaining,
}

impl Terminal {
    pub const ALL: [Terminal; 7] = [
        Terminal::P,
        Terminal::D,
        Terminal::T,
        Terminal::MaxP,
        Terminal::SumP,
        Terminal::MeanP,
        Terminal::Remaining,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Terminal::P => "P",
            Terminal::D => "D",
            Terminal::T => "T",
            Terminal::MaxP => "MAXP",
            Terminal::SumP => "SUMP",
            Terminal::MeanP => "MEANP",
            Terminal::Remaining => "REMAINING",
        }
    }

    fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.keyword() == word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    /// Safe division.
    Div,
    Max,
    Min,
}

impl BinOp {
    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => {
                if b.abs() < DIV_EPSILON {
                    SENTINEL
                } else {
                    a / b
                }
            }
            BinOp::Max => a.max(b),
            BinOp::Min => a.min(b),
        }
    }

    /// Binding strength of infix operators; functions bind tightest.
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Max | BinOp::Min => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PriorityExpr {
    Const(f64),
    Var(Terminal),
    Bin(BinOp, Box<PriorityExpr>, Box<PriorityExpr>),
    Square(Box<PriorityExpr>),
}

/// Inputs for one evaluation: the job being scored and the state of the
/// unscheduled set it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Features {
    pub p: f64,
    pub d: f64,
    pub t: f64,
    pub max_p: f64,
    pub sum_p: f64,
    pub mean_p: f64,
    pub remaining: f64,
}

impl Features {
    fn get(&self, term: Terminal) -> f64 {
        match term {
            Terminal::P => self.p,
            Terminal::D => self.d,
            Terminal::T => self.t,
            Terminal::MaxP => self.max_p,
            Terminal::SumP => self.sum_p,
            Terminal::MeanP => self.mean_p,
            Terminal::Remaining => self.remaining,
        }
    }
}

fn finite_or_sentinel(x: f64) -> f64 {
    if x.is_nan() {
        SENTINEL
    } else if x.is_infinite() {
        SENTINEL.copysign(x)
    } else {
        x.clamp(-SENTINEL, SENTINEL)
    }
}

impl PriorityExpr {
    pub fn constant(value: f64) -> Self {
        PriorityExpr::Const(value)
    }

    pub fn var(term: Terminal) -> Self {
        PriorityExpr::Var(term)
    }

    pub fn bin(op: BinOp, a: PriorityExpr, b: PriorityExpr) -> Self {
        PriorityExpr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn square(a: PriorityExpr) -> Self {
        PriorityExpr::Square(Box::new(a))
    }

    /// `max(P + T, D)`.
    pub fn mdd() -> Self {
        use Terminal::*;
        Self::bin(
            BinOp::Max,
            Self::bin(BinOp::Add, Self::var(P), Self::var(T)),
            Self::var(D),
        )
    }

    /// The MDDC priority written in the expression language.
    pub fn mddc() -> Self {
        "max(1.1 * P + T, D) * (1 + sq(min(P / (T + MAXP), 1)) / (1 + sq(min(P / (T + MAXP), 1)))) + P / (T + MEANP)"
            .parse()
            .expect("valid built-in expression")
    }

    /// Always returns a finite value.
    pub fn eval(&self, f: &Features) -> f64 {
        let v = match self {
            PriorityExpr::Const(c) => *c,
            PriorityExpr::Var(t) => f.get(*t),
            PriorityExpr::Bin(op, a, b) => op.apply(a.eval(f), b.eval(f)),
            PriorityExpr::Square(a) => {
                let x = a.eval(f);
                x * x
            }
        };
        finite_or_sentinel(v)
    }

    pub fn depth(&self) -> usize {
        match self {
            PriorityExpr::Const(_) | PriorityExpr::Var(_) => 1,
            PriorityExpr::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
            PriorityExpr::Square(a) => 1 + a.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PriorityExpr::Const(_) | PriorityExpr::Var(_) => 1,
            PriorityExpr::Bin(_, a, b) => 1 + a.size() + b.size(),
            PriorityExpr::Square(a) => 1 + a.size(),
        }
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&PriorityExpr> {
        let mut out = Vec::with_capacity(self.size());
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            match node {
                PriorityExpr::Bin(_, a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                PriorityExpr::Square(a) => stack.push(a),
                _ => {}
            }
        }
        out
    }

    /// Copy with the `index`-th pre-order node replaced by `f(node)`.
    pub fn replace_node(&self, index: usize, f: &mut dyn FnMut(&PriorityExpr) -> PriorityExpr) -> PriorityExpr {
        let mut counter = 0;
        self.replace_walk(index, &mut counter, f)
    }

    fn replace_walk(
        &self,
        index: usize,
        counter: &mut usize,
        f: &mut dyn FnMut(&PriorityExpr) -> PriorityExpr,
    ) -> PriorityExpr {
        let here = *counter;
        *counter += 1;
        if here == index {
            *counter += self.size() - 1;
            return f(self);
        }
        match self {
            PriorityExpr::Bin(op, a, b) => {
                let a = a.replace_walk(index, counter, f);
                let b = b.replace_walk(index, counter, f);
                PriorityExpr::bin(*op, a, b)
            }
            PriorityExpr::Square(a) => PriorityExpr::square(a.replace_walk(index, counter, f)),
            leaf => leaf.clone(),
        }
    }
}

fn write_const(out: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
        write!(out, "({c})")
    } else {
        write!(out, "{c}")
    }
}

impl PriorityExpr {
    fn fmt_child(&self, out: &mut fmt::Formatter<'_>, parent: u8, right: bool) -> fmt::Result {
        let needs_parens = match self {
            PriorityExpr::Bin(op, ..) if op.precedence() < 3 => {
                let p = op.precedence();
                p < parent || (right && p == parent)
            }
            _ => false,
        };
        if needs_parens {
            write!(out, "({self})")
        } else {
            write!(out, "{self}")
        }
    }
}

impl fmt::Display for PriorityExpr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriorityExpr::Const(c) => write_const(out, *c),
            PriorityExpr::Var(t) => out.write_str(t.keyword()),
            PriorityExpr::Square(a) => write!(out, "sq({a})"),
            PriorityExpr::Bin(op @ (BinOp::Max | BinOp::Min), a, b) => {
                let name = if *op == BinOp::Max { "max" } else { "min" };
                write!(out, "{name}({a}, {b})")
            }
            PriorityExpr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    _ => "/",
                };
                let prec = op.precedence();
                a.fmt_child(out, prec, false)?;
                write!(out, " {sym} ")?;
                b.fmt_child(out, prec, true)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == 'e' || bytes[i] == 'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == '+' || bytes[j] == '-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit: String = bytes[start..i].iter().collect();
            let value: f64 = lit
                .parse()
                .map_err(|_| DiscoveryError::Parse(format!("bad number {lit:?}")))?;
            if !value.is_finite() {
                return Err(DiscoveryError::Parse(format!("number out of range {lit:?}")));
            }
            tokens.push(Token::Num(value));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            tokens.push(Token::Ident(bytes[start..i].iter().collect()));
        } else if "+-*/(),".contains(c) {
            tokens.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(DiscoveryError::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, sym: char) -> Result<()> {
        match self.next() {
            Some(Token::Sym(c)) if c == sym => Ok(()),
            other => Err(DiscoveryError::Parse(format!("expected {sym:?}, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<PriorityExpr> {
        let mut lhs = self.term()?;
        while let Some(Token::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = PriorityExpr::bin(op, lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<PriorityExpr> {
        let mut lhs = self.factor()?;
        while let Some(Token::Sym(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = PriorityExpr::bin(op, lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<PriorityExpr> {
        match self.next() {
            Some(Token::Num(v)) => Ok(PriorityExpr::Const(v)),
            Some(Token::Sym('-')) => match self.peek() {
                Some(Token::Num(v)) => {
                    let v = -*v;
                    self.pos += 1;
                    Ok(PriorityExpr::Const(v))
                }
                _ => Ok(PriorityExpr::bin(BinOp::Sub, PriorityExpr::Const(0.0), self.factor()?)),
            },
            Some(Token::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Token::Ident(word)) => match word.as_str() {
                "max" | "min" => {
                    self.expect('(')?;
                    let a = self.expr()?;
                    self.expect(',')?;
                    let b = self.expr()?;
                    self.expect(')')?;
                    let op = if word == "max" { BinOp::Max } else { BinOp::Min };
                    Ok(PriorityExpr::bin(op, a, b))
                }
                "sq" => {
                    self.expect('(')?;
                    let a = self.expr()?;
                    self.expect(')')?;
                    Ok(PriorityExpr::square(a))
                }
                _ => Terminal::from_keyword(&word)
                    .map(PriorityExpr::Var)
                    .ok_or_else(|| DiscoveryError::Parse(format!("unknown name {word:?}"))),
            },
            other => Err(DiscoveryError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl FromStr for PriorityExpr {
    type Err = DiscoveryError;

    fn from_str(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        if tokens.is_empty() {
            return Err(DiscoveryError::Parse("empty expression".into()));
        }
        let mut parser = Parser { tokens, pos: 0 };
        let e = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(DiscoveryError::Parse(format!(
                "trailing input after {e}: {:?}",
                &parser.tokens[parser.pos..]
            )));
        }
        Ok(e)
    }
}

/// First line of `text` that parses as an expression. A leading
/// `name:` label and surrounding backticks are ignored.
pub fn extract_expression(text: &str) -> Option<PriorityExpr> {
    text.lines().find_map(|line| {
        let mut body = line.trim().trim_matches('`').trim();
        if let Some((label, rest)) = body.split_once(':') {
            if !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                body = rest.trim();
            }
        }
        body.parse().ok()
    })
}
