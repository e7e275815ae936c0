//! Plain-text expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := integer | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ident  := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! means `-(x^2)`. Multiplication is always explicit. Function calls are
//! only meaningful to the summand compiler; a rational-function context
//! rejects them.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ratfunc::RationalFunction;
use super::rational::Q;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((s, Tok::Int(src[s..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((s, Tok::Ident(src[s..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::parse(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(Error::parse(at, format!("unexpected `{c}`"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

/// Parses an expression into its syntax tree.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, pos: 0, end: src.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(p.offset(), "trailing input"));
    }
    Ok(e)
}

/// Parses an expression that must denote a rational function.
pub fn parse_rf(src: &str) -> Result<RationalFunction> {
    parse_expr(src)?.to_rf()
}

impl Expr {
    /// Interprets the tree as a rational function of its variables.
    pub fn to_rf(&self) -> Result<RationalFunction> {
        Ok(match self {
            Expr::Int(n) => RationalFunction::constant(Q::from_integer(n.clone())),
            Expr::Var(v) => RationalFunction::var(v),
            Expr::Neg(a) => -&a.to_rf()?,
            Expr::Add(a, b) => &a.to_rf()? + &b.to_rf()?,
            Expr::Sub(a, b) => &a.to_rf()? - &b.to_rf()?,
            Expr::Mul(a, b) => &a.to_rf()? * &b.to_rf()?,
            Expr::Div(a, b) => a.to_rf()?.checked_div(&b.to_rf()?)?,
            Expr::Pow(a, b) => a.to_rf()?.pow(b.const_int()?)?,
            Expr::Call(name, _) => {
                return Err(Error::parse(0, format!("function `{name}` not allowed here")))
            }
        })
    }

    /// Evaluates an exponent that must be a constant integer.
    pub fn const_int(&self) -> Result<i32> {
        let v = self
            .to_rf()?
            .as_constant()
            .ok_or_else(|| Error::parse(0, "exponent must be a constant"))?;
        if !v.is_integer() {
            return Err(Error::parse(0, format!("exponent {v} is not an integer")));
        }
        v.to_integer()
            .to_i32()
            .ok_or_else(|| Error::parse(0, "exponent out of range"))
    }

    /// True when the tree mentions `var`.
    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Expr::Int(_) => false,
            Expr::Var(v) => v == var,
            Expr::Neg(a) => a.mentions(var),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.mentions(var) || b.mentions(var)
            }
            Expr::Call(_, args) => args.iter().any(|a| a.mentions(var)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{q, qf};
    use crate::exact::ratfunc::rf_equal;

    #[test]
    fn precedence() {
        let f = parse_rf("-x^2 + 2*x/4").unwrap();
        assert_eq!(f.eval_at(&[("x", q(3))]).unwrap(), qf(-15, 2));
        let g = parse_rf("2^3^2").unwrap();
        assert_eq!(g.as_constant(), Some(q(512)));
        let h = parse_rf("x^-1").unwrap();
        assert!(rf_equal(&h, &parse_rf("1/x").unwrap(), 1));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_expr("x + $"), Err(Error::Parse { pos: 4, msg: "unexpected character `$`".into() }));
        assert!(matches!(parse_expr("(x+1"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_expr("x y"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_rf("x^y").is_err());
        assert!(parse_rf("binom(4,2)").is_err());
        assert!(parse_rf("1/(x-x)").is_err());
    }

    #[test]
    fn calls_parse() {
        let e = parse_expr("binom(2*n, n)^3").unwrap();
        assert!(matches!(e, Expr::Pow(ref b, _) if matches!(**b, Expr::Call(ref f, ref a) if f == "binom" && a.len() == 2)));
        assert!(e.mentions("n"));
    }
}
