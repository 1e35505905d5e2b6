//! Integer expressions over the sweep parameters `alpha`, `beta`, `gamma` and
//! `p`, as written in the claim catalog (`16*3^(4*alpha+1)*5^(4*beta)`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Alpha,
    Beta,
    Gamma,
    P,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Alpha, Var::Beta, Var::Gamma, Var::P];

    pub fn name(self) -> &'static str {
        match self {
            Var::Alpha => "alpha",
            Var::Beta => "beta",
            Var::Gamma => "gamma",
            Var::P => "p",
        }
    }

    fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Num(i128),
    Var(Var),
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Pow,
}

/// A parsed expression; keeps its source text for display and errors.
#[derive(Clone, Debug)]
pub struct Expr {
    src: String,
    root: Node,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn constant(v: i128) -> Expr {
        Expr { src: v.to_string(), root: Node::Num(v) }
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        fn walk(n: &Node, out: &mut BTreeSet<Var>) {
            match n {
                Node::Num(_) => {}
                Node::Var(v) => {
                    out.insert(*v);
                }
                Node::Neg(a) => walk(a, out),
                Node::Bin(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(&self.root, &mut out);
        out
    }

    /// Evaluates with checked `i128` arithmetic; `lookup` supplies variable
    /// values and returns `None` for an unbound variable.
    pub fn eval(&self, lookup: impl Fn(Var) -> Option<i128>) -> Result<i128> {
        let err = |reason: String| Error::ExprEval { expr: self.src.clone(), reason };
        fn go(n: &Node, lookup: &dyn Fn(Var) -> Option<i128>) -> std::result::Result<i128, String> {
            match n {
                Node::Num(v) => Ok(*v),
                Node::Var(v) => lookup(*v).ok_or_else(|| format!("{} is not bound", v.name())),
                Node::Neg(a) => go(a, lookup)?.checked_neg().ok_or_else(|| "overflow".into()),
                Node::Bin(op, a, b) => {
                    let (x, y) = (go(a, lookup)?, go(b, lookup)?);
                    let r = match op {
                        Op::Add => x.checked_add(y),
                        Op::Sub => x.checked_sub(y),
                        Op::Mul => x.checked_mul(y),
                        Op::Pow => {
                            if y < 0 {
                                return Err(format!("negative exponent {y}"));
                            }
                            u32::try_from(y).ok().and_then(|e| x.checked_pow(e))
                        }
                    };
                    r.ok_or_else(|| "overflow".into())
                }
            }
        }
        go(&self.root, &lookup).map_err(err)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i128),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::ExprSyntax { input: self.src.to_string(), reason: reason.into() }
    }

    fn lex(src: &'a str) -> Result<Self> {
        let mut toks = Vec::new();
        let cs: Vec<char> = src.chars().collect();
        let mut i = 0;
        let bad = |reason: String| Error::ExprSyntax { input: src.to_string(), reason };
        while i < cs.len() {
            let c = cs[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = cs[start..i].iter().collect();
                toks.push(Tok::Num(text.parse().map_err(|_| bad(format!("number {text} too large")))?));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(cs[start..i].iter().collect()));
            } else if "+-*^()".contains(c) {
                toks.push(Tok::Sym(c));
                i += 1;
            } else {
                return Err(bad(format!("unexpected character {c:?}")));
            }
        }
        Ok(Parser { src, toks, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // sum := term (('+' | '-') term)*
    fn sum(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                Op::Add
            } else if self.eat('-') {
                Op::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    // term := unary ('*' unary)*
    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Node::Bin(Op::Mul, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // power := atom ('^' unary)?   (right associative)
    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Node::Bin(Op::Pow, Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Node::Num(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Var::from_name(&name).map(Node::Var).ok_or_else(|| self.fail(format!("unknown variable {name:?}")))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.fail("missing ')'"));
                }
                Ok(inner)
            }
            Some(t) => Err(self.fail(format!("unexpected token {t:?}"))),
            None => Err(self.fail("unexpected end of input")),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::lex(s)?;
        let root = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(p.fail("trailing input"));
        }
        Ok(Expr { src: s.trim().to_string(), root })
    }
}
