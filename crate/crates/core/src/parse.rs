//! Literal grammar for multivectors, covectors and polynomial forms.
//!
//! ```text
//! sum   := ['-'] prod (('+' | '-') prod)*
//! prod  := wedge (('*' wedge) | ('/' INT))*
//! wedge := atom ('^' atom)*       (power when the left side is scalar and the right an integer)
//! atom  := INT ['/' INT] | x1 y1 t | X1 Y1 T | dx1 dy1 th | '(' sum ')'
//! ```

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::forms::PolyForm;
use crate::multivec::{wedge_sign, Blade, CoVector, MultiVector};
use crate::poly::{Polynomial, Var};
use crate::scalar::Q;

/// What a parsed literal turned out to be.
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Scalar(Polynomial),
    MultiVector(MultiVector),
    CoVector(CoVector),
    PolyForm(PolyForm),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, col, msg: msg.into() })
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
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
        let start = (line, col);
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: start.0, col: start.1 });
            col += j - i;
            i = j;
        } else if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                j += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[i..j].iter().collect()), line: start.0, col: start.1 });
            col += j - i;
            i = j;
        } else if "+-*^/()".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: start.0, col: start.1 });
            i += 1;
            col += 1;
        } else {
            return err(line, col, format!("unexpected character `{c}`"));
        }
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Var,
    Vector,
    Covector,
}

/// Classify an identifier as `(kind, family, index)`; family 0/1/2 is x/y/t.
fn classify(name: &str) -> Option<(Kind, usize, usize)> {
    let split = |prefix: &str| -> Option<usize> {
        let rest = name.strip_prefix(prefix)?;
        if rest.is_empty() || rest.starts_with('0') {
            return None;
        }
        rest.parse().ok()
    };
    match name {
        "t" => return Some((Kind::Var, 2, 0)),
        "T" => return Some((Kind::Vector, 2, 0)),
        "th" => return Some((Kind::Covector, 2, 0)),
        _ => {}
    }
    for (p, kind, fam) in [
        ("dx", Kind::Covector, 0),
        ("dy", Kind::Covector, 1),
        ("x", Kind::Var, 0),
        ("y", Kind::Var, 1),
        ("X", Kind::Vector, 0),
        ("Y", Kind::Vector, 1),
    ] {
        if let Some(i) = split(p) {
            return Some((kind, fam, i));
        }
    }
    None
}

#[derive(Clone, Debug)]
struct Val {
    side: Option<Kind>,
    terms: BTreeMap<Blade, Polynomial>,
}

impl Val {
    fn scalar(p: Polynomial) -> Val {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(0, p);
        }
        Val { side: None, terms }
    }

    fn as_scalar(&self) -> Option<Polynomial> {
        if self.side.is_some() {
            return None;
        }
        Some(self.terms.get(&0).cloned().unwrap_or_else(Polynomial::zero))
    }

    fn grade(&self) -> Option<usize> {
        self.terms.keys().next().map(|b| b.count_ones() as usize)
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn combine_sides(a: Option<Kind>, b: Option<Kind>, t: &Token) -> Result<Option<Kind>> {
        match (a, b) {
            (None, s) | (s, None) => Ok(s),
            (Some(x), Some(y)) if x == y => Ok(Some(x)),
            _ => err(t.line, t.col, "cannot combine vectors with covectors"),
        }
    }

    fn add(&self, a: Val, b: Val, negate: bool, t: &Token) -> Result<Val> {
        let side = Self::combine_sides(a.side, b.side, t)?;
        if let (Some(ga), Some(gb)) = (a.grade(), b.grade()) {
            if ga != gb {
                return err(t.line, t.col, format!("grade inconsistency: adding grade {ga} to grade {gb}"));
            }
        }
        let mut terms = a.terms;
        for (k, v) in b.terms {
            let v = if negate { -v } else { v };
            let e = terms.entry(k).or_insert_with(Polynomial::zero);
            *e = &*e + &v;
            if e.is_zero() {
                terms.remove(&k);
            }
        }
        Ok(Val { side, terms })
    }

    fn wedge(&self, a: &Val, b: &Val, t: &Token) -> Result<Val> {
        let side = Self::combine_sides(a.side, b.side, t)?;
        let mut terms: BTreeMap<Blade, Polynomial> = BTreeMap::new();
        for (ba, ca) in &a.terms {
            for (bb, cb) in &b.terms {
                let Some(neg) = wedge_sign(*ba, *bb) else { continue };
                let c = ca * cb;
                let c = if neg { -c } else { c };
                let e = terms.entry(ba | bb).or_insert_with(Polynomial::zero);
                *e = &*e + &c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Val { side, terms })
    }

    fn sum(&mut self) -> Result<Val> {
        let neg = if self.at_sym('-') {
            self.next();
            true
        } else {
            false
        };
        let mut acc = self.prod()?;
        if neg {
            acc.terms.values_mut().for_each(|c| *c = -c.clone());
        }
        loop {
            let t = self.peek().clone();
            let negate = match t.tok {
                Tok::Sym('+') => false,
                Tok::Sym('-') => true,
                _ => return Ok(acc),
            };
            self.next();
            let rhs = self.prod()?;
            acc = self.add(acc, rhs, negate, &t)?;
        }
    }

    fn prod(&mut self) -> Result<Val> {
        let mut acc = self.wedge_expr()?;
        while self.at_sym('*') || self.at_sym('/') {
            let t = self.next();
            if t.tok == Tok::Sym('/') {
                let d = self.next();
                match d.tok {
                    Tok::Int(b) if !b.is_zero() => {
                        let inv = Polynomial::constant(Q::new(BigInt::one(), b));
                        acc.terms.values_mut().for_each(|c| *c = &*c * &inv);
                    }
                    Tok::Int(_) => return err(d.line, d.col, "division by zero"),
                    _ => return err(d.line, d.col, "can only divide by an integer"),
                }
                continue;
            }
            let rhs = self.wedge_expr()?;
            if acc.side.is_some() && rhs.side.is_some() {
                return err(t.line, t.col, "`*` needs a scalar factor; use `^` for the wedge product");
            }
            acc = self.wedge(&acc, &rhs, &t)?;
        }
        Ok(acc)
    }

    fn wedge_expr(&mut self) -> Result<Val> {
        let mut acc = self.atom()?;
        while self.at_sym('^') {
            let t = self.next();
            if let (Some(base), Tok::Int(e)) = (acc.as_scalar(), &self.peek().tok) {
                let e: u32 = e.try_into().map_err(|_| Error::Parse { line: t.line, col: t.col, msg: "exponent too large".into() })?;
                self.next();
                acc = Val::scalar(base.pow(e));
                continue;
            }
            let rhs = self.atom()?;
            acc = self.wedge(&acc, &rhs, &t)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Val> {
        let t = self.next();
        match &t.tok {
            Tok::Int(a) => {
                let mut v = Q::from_integer(a.clone());
                if self.at_sym('/') {
                    self.next();
                    let d = self.next();
                    match d.tok {
                        Tok::Int(b) if !b.is_zero() => v = Q::new(a.clone(), b),
                        Tok::Int(_) => return err(d.line, d.col, "division by zero"),
                        _ => return err(d.line, d.col, "expected an integer denominator"),
                    }
                }
                Ok(Val::scalar(Polynomial::constant(v)))
            }
            Tok::Ident(name) => {
                let Some((kind, fam, idx)) = classify(name) else {
                    return err(t.line, t.col, format!("unknown generator `{name}`"));
                };
                let n = self.n;
                if fam < 2 && idx > n {
                    return err(t.line, t.col, format!("`{name}` does not exist in H^{n}"));
                }
                let pos = match fam {
                    0 => idx - 1,
                    1 => n + idx - 1,
                    _ => 2 * n,
                };
                match kind {
                    Kind::Var => Ok(Val::scalar(Polynomial::var(pos as Var))),
                    side => {
                        let mut terms = BTreeMap::new();
                        terms.insert(1 << pos, Polynomial::one());
                        Ok(Val { side: Some(side), terms })
                    }
                }
            }
            Tok::Sym('(') => {
                let v = self.sum()?;
                let c = self.next();
                if c.tok != Tok::Sym(')') {
                    return err(c.line, c.col, "expected `)`");
                }
                Ok(v)
            }
            Tok::End => err(t.line, t.col, "unexpected end of input"),
            Tok::Sym(c) => err(t.line, t.col, format!("unexpected `{c}`")),
        }
    }
}

fn infer_n(toks: &[Token]) -> usize {
    toks.iter()
        .filter_map(|t| match &t.tok {
            Tok::Ident(s) => classify(s).map(|(_, _, i)| i),
            _ => None,
        })
        .max()
        .unwrap_or(1)
        .max(1)
}

/// Parse a literal; `n` defaults to the largest generator index present.
pub fn parse_expression(text: &str, n: Option<usize>) -> Result<Parsed> {
    let toks = lex(text)?;
    let n = n.unwrap_or_else(|| infer_n(&toks));
    if n == 0 || n > crate::multivec::MAX_N {
        return err(1, 1, format!("unsupported dimension n={n}"));
    }
    let mut p = Parser { toks, pos: 0, n };
    let v = p.sum()?;
    let end = p.peek().clone();
    if end.tok != Tok::End {
        return err(end.line, end.col, "unexpected trailing input");
    }
    let constant = |c: &Polynomial| c.as_constant();
    match v.side {
        None => Ok(Parsed::Scalar(v.as_scalar().expect("scalar"))),
        Some(Kind::Vector) => {
            let mut terms = Vec::new();
            for (b, c) in &v.terms {
                let Some(q) = constant(c) else {
                    return err(1, 1, "multivector coefficients must be constants");
                };
                terms.push((*b, q));
            }
            Ok(Parsed::MultiVector(MultiVector::from_terms(n, terms)))
        }
        Some(_) => {
            if v.terms.values().all(|c| c.as_constant().is_some()) {
                Ok(Parsed::CoVector(CoVector::from_terms(n, v.terms.iter().map(|(b, c)| (*b, c.as_constant().expect("constant"))))))
            } else {
                let mut f = PolyForm::zero(n);
                for (b, c) in v.terms {
                    f.add_term(b, c);
                }
                Ok(Parsed::PolyForm(f))
            }
        }
    }
}

pub fn parse_multivector(text: &str, n: Option<usize>) -> Result<MultiVector> {
    match parse_expression(text, n)? {
        Parsed::MultiVector(m) => Ok(m),
        Parsed::Scalar(p) if p.is_zero() => Ok(MultiVector::zero(n.unwrap_or(1))),
        Parsed::Scalar(p) if p.as_constant().is_some() => Ok(MultiVector::scalar(n.unwrap_or(1), p.as_constant().expect("constant"))),
        _ => err(1, 1, "expected a multivector"),
    }
}

pub fn parse_covector(text: &str, n: Option<usize>) -> Result<CoVector> {
    match parse_expression(text, n)? {
        Parsed::CoVector(c) => Ok(c),
        Parsed::Scalar(p) if p.as_constant().is_some() => Ok(CoVector::scalar(n.unwrap_or(1), p.as_constant().expect("constant"))),
        _ => err(1, 1, "expected a covector with constant coefficients"),
    }
}

pub fn parse_polyform(text: &str, n: Option<usize>) -> Result<PolyForm> {
    let toks = lex(text)?;
    let nn = n.unwrap_or_else(|| infer_n(&toks));
    match parse_expression(text, Some(nn))? {
        Parsed::PolyForm(f) => Ok(f),
        Parsed::CoVector(c) => Ok(PolyForm::from_covector(&c)),
        Parsed::Scalar(p) => Ok(PolyForm::from_poly(nn, p)),
        Parsed::MultiVector(_) => err(1, 1, "expected a form, found a multivector"),
    }
}

/// Parse `k` newline- or semicolon-separated polynomials in the coordinates of `H^n`.
pub fn parse_polynomials(text: &str, n: usize) -> Result<Vec<Polynomial>> {
    text.split([';', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match parse_expression(s, Some(n))? {
            Parsed::Scalar(p) => Ok(p),
            _ => err(1, 1, format!("expected a polynomial, found `{s}`")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multivec::blade_of;
    use crate::scalar::{q, qr};

    #[test]
    fn examples() {
        let c = parse_covector("dx1^dy1 - dx2^dy2", None).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.coeff(blade_of(&[0, 2])), q(1));
        assert_eq!(c.coeff(blade_of(&[1, 3])), q(-1));
        let m = parse_multivector("3/2*X1^Y2^T", None).unwrap();
        assert_eq!(m.terms().len(), 1);
        assert_eq!(m.coeff(blade_of(&[0, 3, 4])), qr(3, 2));
        let f = parse_polyform("x1^2*dx1 + t*th", None).unwrap();
        assert_eq!(f.to_string(), "x1^2*dx1 + t*th");
        let g = parse_polyform("y1^2/2*dx1 - t/3*th", None).unwrap();
        assert_eq!(g, parse_polyform("1/2*y1^2*dx1 - 1/3*t*th", None).unwrap());
        assert!(parse_polyform("x1/y1", None).is_err());
    }

    #[test]
    fn round_trips() {
        for s in ["3/2*X1^Y2^T - X3^Y1^T", "x1^2*dx1 + (x1 + 1)*dy1 + t*th", "dx1^dy1 - dx2^dy2", "-3/2*x1^2*y1 + 4"] {
            let shown = match parse_expression(s, None).unwrap() {
                Parsed::MultiVector(m) => m.to_string(),
                Parsed::CoVector(c) => c.to_string(),
                Parsed::PolyForm(f) => f.to_string(),
                Parsed::Scalar(p) => p.display(1).to_string(),
            };
            assert_eq!(shown, s);
        }
    }

    #[test]
    fn errors() {
        match parse_expression("dx1 +\n  dz1", None) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("X1 + X1^Y1", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("X1 + dx1", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("dx1 * dy1", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("(x1", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("x3", Some(2)), Err(Error::Parse { .. })));
    }

    #[test]
    fn wedge_signs() {
        let a = parse_covector("dy1^dx1", None).unwrap();
        assert_eq!(a, parse_covector("-dx1^dy1", None).unwrap());
        assert!(parse_covector("dx1^dx1", None).unwrap().is_zero());
    }
}
