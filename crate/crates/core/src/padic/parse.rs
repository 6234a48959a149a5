//! Small expression language for field elements and exponential sums.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! exponent := ['-'] integer | '(' ['-'] integer ')' | 'x'
//! atom   := integer | 'zeta' | 'pi' | 'p' | '(' expr ')'
//! ```
//!
//! `b^x` is only meaningful to [`exp_terms`]; evaluating it as a constant
//! is an error.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{CycloElement, CyclotomicField, PadicError};
use crate::rational::Q;
use crate::scalar::ResidueInt;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Zeta,
    Pi,
    P,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    /// `base^x`
    PowX(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, PadicError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
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
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(PadicError::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, PadicError> {
        Err(PadicError::Parse(format!("{msg} at token {}", self.pos)))
    }

    fn expr(&mut self) -> Result<Expr, PadicError> {
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

    fn term(&mut self) -> Result<Expr, PadicError> {
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

    fn unary(&mut self) -> Result<Expr, PadicError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        if self.peek() == Some(&Tok::Ident("x".into())) {
            self.pos += 1;
            return Ok(Expr::PowX(Box::new(base)));
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let k = match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i64::try_from(n).or_else(|_| self.err("exponent too large"))?
            }
            _ => return self.err("expected an integer exponent or x"),
        };
        if paren && !self.eat(')') {
            return self.err("expected ')'");
        }
        Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Expr, PadicError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "zeta" | "z" => Ok(Expr::Zeta),
                    "pi" => Ok(Expr::Pi),
                    "p" => Ok(Expr::P),
                    _ => self.err(&format!("unknown name {id:?}")),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            _ => self.err("expected a value"),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, PadicError> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Evaluate a constant expression in `field`.
pub fn eval<I: ResidueInt>(
    e: &Expr,
    field: &Arc<CyclotomicField<I>>,
) -> Result<CycloElement<I>, PadicError> {
    Ok(match e {
        Expr::Int(n) => CycloElement::from_rational(field, &Q::from_integer(n.clone())),
        Expr::Zeta => CycloElement::zeta(field),
        Expr::Pi => CycloElement::pi(field),
        Expr::P => CycloElement::from_int(field, field.p() as i64),
        Expr::Add(a, b) => &eval(a, field)? + &eval(b, field)?,
        Expr::Sub(a, b) => &eval(a, field)? - &eval(b, field)?,
        Expr::Mul(a, b) => &eval(a, field)? * &eval(b, field)?,
        Expr::Div(a, b) => &eval(a, field)? * &eval(b, field)?.invert()?,
        Expr::Neg(a) => -&eval(a, field)?,
        Expr::Pow(a, k) => eval(a, field)?.powi(*k)?,
        Expr::PowX(_) => {
            return Err(PadicError::Parse("b^x is not a constant".into()));
        }
    })
}

pub fn parse_element<I: ResidueInt>(
    s: &str,
    field: &Arc<CyclotomicField<I>>,
) -> Result<CycloElement<I>, PadicError> {
    eval(&parse_expr(s)?, field)
}

/// `(c_j, b_j)` pairs of `Σ c_j · b_j^x`.
pub type ExpTerms<I> = Vec<(CycloElement<I>, CycloElement<I>)>;

/// Expand an expression into `Σ c_j · b_j^x`; constants come out with
/// base 1.
pub fn exp_terms<I: ResidueInt>(
    e: &Expr,
    field: &Arc<CyclotomicField<I>>,
) -> Result<ExpTerms<I>, PadicError> {
    let one = || CycloElement::one(field);
    Ok(match e {
        Expr::PowX(b) => vec![(one(), eval(b, field)?)],
        Expr::Add(a, b) => {
            let mut t = exp_terms(a, field)?;
            t.extend(exp_terms(b, field)?);
            t
        }
        Expr::Sub(a, b) => {
            let mut t = exp_terms(a, field)?;
            t.extend(exp_terms(b, field)?.into_iter().map(|(c, b)| (-&c, b)));
            t
        }
        Expr::Neg(a) => exp_terms(a, field)?
            .into_iter()
            .map(|(c, b)| (-&c, b))
            .collect(),
        Expr::Mul(a, b) => {
            let (l, r) = (exp_terms(a, field)?, exp_terms(b, field)?);
            let mut t = Vec::with_capacity(l.len() * r.len());
            for (c1, b1) in &l {
                for (c2, b2) in &r {
                    t.push((c1 * c2, b1 * b2));
                }
            }
            t
        }
        Expr::Div(a, b) => {
            let d = eval(b, field)?.invert()?;
            exp_terms(a, field)?
                .into_iter()
                .map(|(c, b)| (&c * &d, b))
                .collect()
        }
        Expr::Pow(a, k) if *k >= 0 && contains_x(a) => {
            let base = exp_terms(a, field)?;
            let mut acc = vec![(one(), one())];
            for _ in 0..*k {
                let mut next = Vec::new();
                for (c1, b1) in &acc {
                    for (c2, b2) in &base {
                        next.push((c1 * c2, b1 * b2));
                    }
                }
                acc = next;
            }
            acc
        }
        other => vec![(eval(other, field)?, one())],
    })
}

fn contains_x(e: &Expr) -> bool {
    match e {
        Expr::PowX(_) => true,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            contains_x(a) || contains_x(b)
        }
        Expr::Neg(a) | Expr::Pow(a, _) => contains_x(a),
        _ => false,
    }
}
