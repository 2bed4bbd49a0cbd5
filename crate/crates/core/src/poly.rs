//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are numbered in the ambient order of `H^n`: `0..n` are `x`,
//! `n..2n` are `y`, `2n` is `t`. Polynomials themselves do not store `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::multivec::fmt_terms;
use crate::scalar::{Scalar, Q};

pub type Var = u8;

/// Sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u16)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(vec![])
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u16)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort_unstable();
        let mut out: Vec<(Var, u16)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(l) if l.0 == v => l.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(Var, u16)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1 as u32).sum()
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        while i < self.0.len() || j < o.0.len() {
            match (self.0.get(i), o.0.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    out.push(*a);
                    i += 1;
                }
                (Some(a), None) => {
                    out.push(*a);
                    i += 1;
                }
                (_, Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    fn name(&self, n: usize) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&(v, e)| {
                let base = var_name(n, v);
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

pub fn var_name(n: usize, v: Var) -> String {
    let v = v as usize;
    match v {
        v if v < n => format!("x{}", v + 1),
        v if v < 2 * n => format!("y{}", v - n + 1),
        v if v == 2 * n => "t".into(),
        _ => format!("v{v}"),
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn constant(c: Q) -> Self {
        let mut p = Polynomial::default();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Polynomial::default();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Largest variable index that occurs, if any.
    pub fn max_var(&self) -> Option<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|p| p.0)).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Polynomial::default();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let pairs: Vec<(Var, u16)> = m.0.iter().map(|&(w, f)| if w == v { (w, f - 1) } else { (w, f) }).collect();
            out.add_term(Monomial::from_pairs(pairs), c * Q::from_integer(e.into()));
        }
        out
    }

    /// Evaluate in any scalar ring; `vals[v]` is substituted for variable `v`.
    pub fn eval<S: Scalar>(&self, vals: &[S]) -> S {
        let mut maxe: Vec<u16> = vec![0; vals.len()];
        for m in self.terms.keys() {
            for &(v, e) in &m.0 {
                let slot = maxe.get_mut(v as usize).expect("variable outside the evaluation point");
                *slot = (*slot).max(e);
            }
        }
        let powers: Vec<Vec<S>> = vals
            .iter()
            .zip(&maxe)
            .map(|(x, &e)| {
                let mut p = Vec::with_capacity(e as usize + 1);
                p.push(S::one());
                for i in 0..e as usize {
                    let next = p[i].clone() * x.clone();
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut term = S::from_q(c);
            for &(v, e) in &m.0 {
                term = term * powers[v as usize][e as usize].clone();
            }
            acc = acc + term;
        }
        acc
    }

    /// Substitute `subs[v]` for every variable `v`.
    pub fn compose(&self, subs: &[Polynomial]) -> Polynomial {
        self.eval(subs)
    }

    /// Substitute only the listed variables.
    pub fn substitute(&self, subs: &BTreeMap<Var, Polynomial>) -> Polynomial {
        let top = self.max_var().map_or(0, |v| v as usize + 1);
        let all: Vec<Polynomial> = (0..top).map(|v| subs.get(&(v as Var)).cloned().unwrap_or_else(|| Polynomial::var(v as Var))).collect();
        self.compose(&all)
    }

    pub fn display(&self, n: usize) -> PolyDisplay<'_> {
        PolyDisplay { p: self, n }
    }

    /// Terms sorted by descending degree, then by monomial order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        v
    }
}

pub struct PolyDisplay<'a> {
    p: &'a Polynomial,
    n: usize,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Q)> = self.p.sorted_terms().into_iter().map(|(m, c)| (m.name(self.n), c.clone())).collect();
        fmt_terms(f, &terms)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.max_var().map_or(1, |v| v as usize / 2 + 1);
        write!(f, "Poly({})", self.display(n))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let (mut big, small) = if self.terms.len() >= o.terms.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        let mut r = Polynomial::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                r.add_term(a.mul(b), ca * cb);
            }
        }
        r
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, o: Polynomial) -> Polynomial {
        &self + &o
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, o: Polynomial) -> Polynomial {
        &self - &o
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, o: Polynomial) -> Polynomial {
        &self * &o
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Polynomial {
    fn one() -> Self {
        Polynomial::constant(Q::one())
    }
}

impl Scalar for Polynomial {
    fn from_q(q: &Q) -> Self {
        Polynomial::constant(q.clone())
    }
}

/// Ambient coordinate variables as polynomials: `x_1..x_n, y_1..y_n, t`.
pub fn coordinates(n: usize) -> Vec<Polynomial> {
    (0..=2 * n).map(|v| Polynomial::var(v as Var)).collect()
}

/// Apply the left-invariant frame field `W_i` (1-based, `1..=2n+1`) to `f`:
/// `X_j = d/dx_j - (y_j/2) d/dt`, `Y_j = d/dy_j + (x_j/2) d/dt`, `T = d/dt`.
pub fn frame_derive(n: usize, i: usize, f: &Polynomial) -> Polynomial {
    assert!(i >= 1 && i <= 2 * n + 1, "frame index out of range");
    let t = (2 * n) as Var;
    let v = (i - 1) as Var;
    if i == 2 * n + 1 {
        return f.derivative(t);
    }
    let ft = f.derivative(t);
    let main = f.derivative(v);
    if ft.is_zero() {
        return main;
    }
    let half = Q::new(1.into(), 2.into());
    if i <= n {
        &main - &(&Polynomial::var((n + i - 1) as Var) * &ft).scale(&half)
    } else {
        &main + &(&Polynomial::var((i - 1 - n) as Var) * &ft).scale(&half)
    }
}
