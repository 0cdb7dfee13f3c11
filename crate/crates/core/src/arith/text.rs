use super::mono::Mono;
use super::poly::MPoly;
use super::ratfunc::RatFunc;
use super::rational::{Coeff, Rational};
use super::universe::VarUniverse;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed};

fn mono_str(m: &Mono, names: &dyn Fn(usize) -> String) -> String {
    m.iter()
        .map(|(i, e)| if e == 1 { names(i) } else { format!("{}^{}", names(i), e) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text of a polynomial: terms in grevlex order, explicit `*`.
pub fn poly_to_string(p: &MPoly, names: &dyn Fn(usize) -> String) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let cs = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
        if m.is_one() {
            s.push_str(&cs);
        } else if a.is_one() {
            s.push_str(&mono_str(m, names));
        } else {
            s.push_str(&cs);
            s.push('*');
            s.push_str(&mono_str(m, names));
        }
    }
    s
}

fn is_atom(p: &MPoly) -> bool {
    if p.len() != 1 {
        return false;
    }
    let (m, c) = &p.terms()[0];
    (m.is_one() && c.is_integer() && !c.is_negative()) || (c.is_one() && m.iter().count() == 1)
}

pub fn ratfunc_to_string(r: &RatFunc, names: &dyn Fn(usize) -> String) -> String {
    let n = poly_to_string(r.num(), names);
    if r.den().is_one() {
        return n;
    }
    let n = if r.num().len() > 1 { format!("({n})") } else { n };
    let d = poly_to_string(r.den(), names);
    let d = if is_atom(r.den()) { d } else { format!("({d})") };
    format!("{n}/{d}")
}

/// Display-name printer for a universe.
pub fn namer(u: &VarUniverse) -> impl Fn(usize) -> String + '_ {
    move |i| u.display(i)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = chars[st..i].iter().collect();
            out.push((Tok::Num(t.parse().unwrap()), col));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            out.push((Tok::Ident(chars[st..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(Error::Parse { line, col, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        let col = self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col);
        Error::Parse { line: self.line, col, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.c_add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.c_sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.c_mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            return Ok(self.unary()?.c_neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek() {
                Some(Tok::Num(n)) => {
                    let n = n.clone();
                    self.pos += 1;
                    i32::try_from(n).map_err(|_| self.err("exponent too large"))?
                }
                _ => return Err(self.err("expected integer exponent")),
            };
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::from_rational(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match (self.resolve)(&name) {
                    Some(i) => Ok(RatFunc::var(i)),
                    None => Err(Error::UndeclaredSymbol(name)),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected number, symbol or `(`")),
        }
    }
}

/// Parses a rational expression. `line`/`col0` locate the text for errors.
pub fn parse_expr_at(
    s: &str,
    resolve: &dyn Fn(&str) -> Option<usize>,
    line: usize,
    col0: usize,
) -> Result<RatFunc> {
    let toks = tokenize(s, line, col0)?;
    let end_col = col0 + s.chars().count();
    let mut p = Parser { toks, pos: 0, line, end_col, resolve };
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

pub fn parse_expr(s: &str, resolve: &dyn Fn(&str) -> Option<usize>) -> Result<RatFunc> {
    parse_expr_at(s, resolve, 1, 1)
}

/// Parses against the display names of a universe.
pub fn parse_in(s: &str, u: &VarUniverse) -> Result<RatFunc> {
    parse_expr(s, &|n| u.lookup_display(n))
}

pub fn parse_poly_in(s: &str, u: &VarUniverse) -> Result<MPoly> {
    let r = parse_in(s, u)?;
    r.as_poly().ok_or_else(|| Error::Parse { line: 1, col: 1, msg: "expected a polynomial".into() })
}
