//! Exact exterior algebra over the Heisenberg Lie algebra and its dual.
//!
//! Basis `W_1..W_n = X`, `W_{n+1}..W_{2n} = Y`, `W_{2n+1} = T`, dual basis `dx, dy, th`.
//! A blade is a bitmask: bit `i` stands for `W_{i+1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::linalg::{self, Mat};
use crate::scalar::Q;

pub type Blade = u32;

pub const MAX_N: usize = 15;

pub fn blade_of(indices: &[usize]) -> Blade {
    indices.iter().fold(0, |b, &i| b | (1 << i))
}

pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..32).filter(|i| b & (1 << i) != 0).collect()
}

pub fn grade_of(b: Blade) -> usize {
    b.count_ones() as usize
}

/// Sign of `W_a ^ W_b` relative to `W_{a|b}`; `None` when they share an index.
pub fn wedge_sign(a: Blade, b: Blade) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// All blades of a given grade on `dim` generators, in lexicographic order of index lists.
pub fn blades_of_grade(dim: usize, g: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    fn rec(start: usize, dim: usize, left: usize, acc: Blade, out: &mut Vec<Blade>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..dim {
            if dim - i < left {
                break;
            }
            rec(i + 1, dim, left - 1, acc | (1 << i), out);
        }
    }
    rec(0, dim, g, 0, &mut out);
    out
}

fn lex_key(b: Blade) -> (usize, Vec<usize>) {
    (grade_of(b), blade_indices(b))
}

pub trait Side: Clone + Copy + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    fn generator(n: usize, i: usize) -> String;
    const UNIT: &'static str;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vectors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Covectors;

impl Side for Vectors {
    fn generator(n: usize, i: usize) -> String {
        match i {
            i if i < n => format!("X{}", i + 1),
            i if i < 2 * n => format!("Y{}", i - n + 1),
            _ => "T".to_string(),
        }
    }
    const UNIT: &'static str = "1";
}

impl Side for Covectors {
    fn generator(n: usize, i: usize) -> String {
        match i {
            i if i < n => format!("dx{}", i + 1),
            i if i < 2 * n => format!("dy{}", i - n + 1),
            _ => "th".to_string(),
        }
    }
    const UNIT: &'static str = "1";
}

/// A (possibly inhomogeneous) element of the exterior algebra on `2n+1` generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ext<K: Side> {
    n: usize,
    terms: BTreeMap<Blade, Q>,
    _side: PhantomData<K>,
}

pub type MultiVector = Ext<Vectors>;
pub type CoVector = Ext<Covectors>;

impl<K: Side> Ext<K> {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n), "n must be in 1..={MAX_N}");
        Ext { n, terms: BTreeMap::new(), _side: PhantomData }
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        Self::from_terms(n, [(0, c)])
    }

    pub fn basis(n: usize, b: Blade) -> Self {
        Self::from_terms(n, [(b, Q::one())])
    }

    /// The generator `W_i`, 1-based as in `W_1..W_{2n+1}`.
    pub fn gen(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= 2 * n + 1, "generator index out of range");
        Self::basis(n, 1 << (i - 1))
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::gen(n, i)
    }

    pub fn y(n: usize, i: usize) -> Self {
        Self::gen(n, n + i)
    }

    pub fn t(n: usize) -> Self {
        Self::gen(n, 2 * n + 1)
    }

    /// `dx_i ^ dy_i` (or `X_i ^ Y_i`).
    pub fn xy(n: usize, i: usize) -> Self {
        Self::basis(n, (1 << (i - 1)) | (1 << (n + i - 1)))
    }

    pub fn from_terms<I: IntoIterator<Item = (Blade, Q)>>(n: usize, it: I) -> Self {
        let mut e = Self::zero(n);
        for (b, c) in it {
            e.add_term(b, c);
        }
        e
    }

    /// A 1-vector from its `2n+1` coordinates.
    pub fn from_vector(n: usize, v: &[Q]) -> Self {
        Self::from_terms(n, v.iter().enumerate().map(|(i, c)| (1 << i, c.clone())))
    }

    pub fn add_term(&mut self, b: Blade, c: Q) {
        assert!(b >> (2 * self.n + 1) == 0, "blade outside the algebra");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn terms(&self) -> &BTreeMap<Blade, Q> {
        &self.terms
    }

    /// Terms sorted by grade, then lexicographically by index list.
    pub fn sorted_terms(&self) -> Vec<(Blade, &Q)> {
        let mut v: Vec<(Blade, &Q)> = self.terms.iter().map(|(b, c)| (*b, c)).collect();
        v.sort_by_key(|(b, _)| lex_key(*b));
        v
    }

    pub fn coeff(&self, b: Blade) -> Q {
        self.terms.get(&b).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common grade of all terms; `None` for zero or mixed elements.
    pub fn grade(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|b| grade_of(*b));
        let g = it.next()?;
        it.all(|h| h == g).then_some(g)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Ext { n: self.n, terms: self.terms.iter().map(|(b, v)| (*b, v * c)).collect(), _side: PhantomData }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "wedge of elements over different H^n");
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let c = ca * cb;
                    out.add_term(a | b, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Wedge of 1-vectors given by coordinates.
    pub fn wedge_vectors(n: usize, vecs: &[Vec<Q>]) -> Self {
        vecs.iter().fold(Self::scalar(n, Q::one()), |acc, v| acc.wedge(&Self::from_vector(n, v)))
    }

    /// Hodge star `*W_I = (-1)^{sigma(I)} W_{I*}`.
    pub fn hodge_star(&self) -> Self {
        let full: Blade = (1 << self.dim()) - 1;
        let mut out = Self::zero(self.n);
        for (b, c) in &self.terms {
            let comp = full & !b;
            let neg = wedge_sign(*b, comp).expect("disjoint");
            out.add_term(comp, if neg { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Euclidean inner product making the `W_I` orthonormal.
    pub fn inner(&self, other: &Self) -> Q {
        self.terms.iter().filter_map(|(b, c)| other.terms.get(b).map(|d| c * d)).fold(Q::zero(), |s, x| s + x)
    }

    pub fn norm_sq(&self) -> Q {
        self.inner(self)
    }

    /// `tau = tau_h1 + sigma ^ T` with both parts free of `T`.
    pub fn horizontal_split(&self) -> (Self, Self) {
        let tbit: Blade = 1 << (2 * self.n);
        let mut h = Self::zero(self.n);
        let mut s = Self::zero(self.n);
        for (b, c) in &self.terms {
            if b & tbit == 0 {
                h.add_term(*b, c.clone());
            } else {
                // W_I ^ T with I below T: no sign.
                s.add_term(b & !tbit, c.clone());
            }
        }
        (h, s)
    }

    pub fn is_horizontal(&self) -> bool {
        let tbit: Blade = 1 << (2 * self.n);
        self.terms.keys().all(|b| b & tbit == 0)
    }

    /// Coordinates of a 1-vector.
    pub fn to_vector(&self) -> Result<Vec<Q>> {
        if self.terms.keys().any(|b| grade_of(*b) != 1) {
            return domain("not a 1-vector");
        }
        Ok((0..self.dim()).map(|i| self.coeff(1 << i)).collect())
    }

    /// Coefficient vector over all blades of grade `g`, in lexicographic order.
    pub fn coordinates(&self, g: usize) -> Vec<Q> {
        blades_of_grade(self.dim(), g).into_iter().map(|b| self.coeff(b)).collect()
    }
}

impl<K: Side> Add for &Ext<K> {
    type Output = Ext<K>;
    fn add(self, o: &Ext<K>) -> Ext<K> {
        assert_eq!(self.n, o.n);
        let mut r = self.clone();
        for (b, c) in &o.terms {
            r.add_term(*b, c.clone());
        }
        r
    }
}

impl<K: Side> Sub for &Ext<K> {
    type Output = Ext<K>;
    fn sub(self, o: &Ext<K>) -> Ext<K> {
        self + &(-o)
    }
}

impl<K: Side> Neg for &Ext<K> {
    type Output = Ext<K>;
    fn neg(self) -> Ext<K> {
        Ext { n: self.n, terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(), _side: PhantomData }
    }
}

impl<K: Side> Add for Ext<K> {
    type Output = Ext<K>;
    fn add(self, o: Ext<K>) -> Ext<K> {
        &self + &o
    }
}

impl<K: Side> Sub for Ext<K> {
    type Output = Ext<K>;
    fn sub(self, o: Ext<K>) -> Ext<K> {
        &self - &o
    }
}

impl<K: Side> Neg for Ext<K> {
    type Output = Ext<K>;
    fn neg(self) -> Ext<K> {
        -&self
    }
}

pub(crate) fn fmt_blade<K: Side>(n: usize, b: Blade) -> String {
    if b == 0 {
        return K::UNIT.to_string();
    }
    blade_indices(b).iter().map(|&i| K::generator(n, i)).collect::<Vec<_>>().join("^")
}

/// Writes `c*name` terms joined by ` + ` / ` - ` in the literal grammar.
pub(crate) fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &[(String, Q)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (name, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        match (i, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        if name == "1" {
            write!(f, "{a}")?;
        } else if a.is_one() {
            f.write_str(name)?;
        } else {
            write!(f, "{a}*{name}")?;
        }
    }
    Ok(())
}

impl<K: Side> fmt::Display for Ext<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Q)> = self.sorted_terms().into_iter().map(|(b, c)| (fmt_blade::<K>(self.n, b), c.clone())).collect();
        fmt_terms(f, &terms)
    }
}

impl<K: Side> fmt::Debug for Ext<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext[n={}]({self})", self.n)
    }
}

/// `<W_I | th_J> = delta_{IJ}`, extended bilinearly.
pub fn pair(tau: &MultiVector, lam: &CoVector) -> Result<Q> {
    if tau.n != lam.n {
        return Err(Error::DimensionMismatch { expected: tau.n, found: lam.n });
    }
    if let (Some(a), Some(b)) = (tau.grade(), lam.grade()) {
        if a != b {
            return Err(Error::GradeMismatch(a, b));
        }
    }
    Ok(pair_unchecked(tau, lam))
}

pub(crate) fn pair_unchecked(tau: &MultiVector, lam: &CoVector) -> Q {
    let (small, large) = if tau.terms.len() <= lam.terms.len() { (&tau.terms, &lam.terms) } else { (&lam.terms, &tau.terms) };
    small.iter().filter_map(|(b, c)| large.get(b).map(|d| c * d)).fold(Q::zero(), |s, x| s + x)
}

/// Matrix whose column `i` holds the coordinates of `W_i ^ tau`.
fn wedge_matrix(tau: &MultiVector, g: usize) -> Mat {
    let dim = tau.dim();
    let rows = blades_of_grade(dim, g + 1);
    let index: BTreeMap<Blade, usize> = rows.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut m = linalg::zeros(rows.len(), dim);
    for i in 0..dim {
        let w = MultiVector::basis(tau.n, 1 << i).wedge(tau);
        for (b, c) in w.terms() {
            m[index[b]][i] = c.clone();
        }
    }
    m
}

/// `{v : v ^ tau = 0}` as coordinate vectors.
pub fn annihilator(tau: &MultiVector) -> Result<Vec<Vec<Q>>> {
    let g = match tau.grade() {
        Some(g) if g >= 1 => g,
        Some(_) => return domain("simplicity is defined for grade >= 1"),
        None if tau.is_zero() => return domain("the zero multivector has no span"),
        None => return domain("inhomogeneous multivector"),
    };
    if g == tau.dim() {
        return Ok(linalg::identity(g));
    }
    Ok(linalg::kernel(&wedge_matrix(tau, g), tau.dim()))
}

pub fn is_simple(tau: &MultiVector) -> Result<bool> {
    let g = annihilator(tau)?.len();
    Ok(Some(g) == tau.grade())
}

pub fn span_if_simple(tau: &MultiVector) -> Result<Option<PlaneSpan>> {
    let k = annihilator(tau)?;
    if Some(k.len()) != tau.grade() {
        return Ok(None);
    }
    Ok(Some(PlaneSpan::new(tau.n, &k)))
}

/// A linear subspace of the Lie algebra, stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneSpan {
    n: usize,
    basis: Vec<Vec<Q>>,
}

impl PlaneSpan {
    /// The span of the given coordinate vectors (dependent ones are dropped).
    pub fn new(n: usize, vectors: &[Vec<Q>]) -> Self {
        let mut m: Mat = vectors.to_vec();
        for v in &m {
            assert_eq!(v.len(), 2 * n + 1, "vector length must be 2n+1");
        }
        let r = linalg::rref(&mut m).len();
        m.truncate(r);
        PlaneSpan { n, basis: m }
    }

    pub fn from_multivectors(n: usize, vs: &[MultiVector]) -> Result<Self> {
        let rows = vs.iter().map(|v| v.to_vector()).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(n, &rows))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn basis_multivectors(&self) -> Vec<MultiVector> {
        self.basis.iter().map(|v| MultiVector::from_vector(self.n, v)).collect()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut m = self.basis.clone();
        m.push(v.to_vec());
        linalg::rank(&m) == self.dim()
    }

    pub fn contains_t(&self) -> bool {
        let mut t = vec![Q::zero(); 2 * self.n + 1];
        t[2 * self.n] = Q::one();
        self.contains(&t)
    }

    pub fn is_horizontal(&self) -> bool {
        self.basis.iter().all(|v| v[2 * self.n].is_zero())
    }

    pub fn sum(&self, other: &PlaneSpan) -> PlaneSpan {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        PlaneSpan::new(self.n, &rows)
    }

    pub fn intersection_dim(&self, other: &PlaneSpan) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    /// Wedge of the canonical basis: a tangent multivector of the plane.
    pub fn tangent(&self) -> MultiVector {
        MultiVector::wedge_vectors(self.n, &self.basis)
    }
}

impl fmt::Display for PlaneSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis_multivectors().iter().map(|v| v.to_string()).collect();
        write!(f, "span({})", parts.join(", "))
    }
}

impl fmt::Debug for PlaneSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn rank_one_connected(p1: &PlaneSpan, p2: &PlaneSpan) -> Result<bool> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { expected: p1.dim(), found: p2.dim() });
    }
    if p1.n != p2.n {
        return Err(Error::DimensionMismatch { expected: p1.n, found: p2.n });
    }
    Ok(p1.intersection_dim(p2) + 1 >= p1.dim())
}

/// Cross-check: rank-one connectedness agrees with simplicity of `t1 - t2`.
pub fn whyrank1_check(p1: &PlaneSpan, p2: &PlaneSpan) -> Result<bool> {
    let connected = rank_one_connected(p1, p2)?;
    let d = &p1.tangent() - &p2.tangent();
    let simple = d.is_zero() || is_simple(&d)?;
    Ok(connected == simple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr};

    type MV = MultiVector;
    type CV = CoVector;

    #[test]
    fn wedge_basics() {
        let n = 2;
        assert!(MV::x(n, 1).wedge(&MV::x(n, 1)).is_zero());
        let xy = MV::x(n, 1).wedge(&MV::y(n, 1));
        assert_eq!(pair(&xy, &CV::x(n, 1).wedge(&CV::y(n, 1))).unwrap(), q(1));
        let a = &CV::xy(n, 1) - &CV::xy(n, 2);
        let b = &CV::xy(n, 1) + &CV::xy(n, 2);
        assert!(a.wedge(&b).is_zero());
    }

    #[test]
    fn pairing_values() {
        let n = 2;
        let t = MV::x(n, 1).wedge(&MV::y(n, 1)).wedge(&MV::t(n));
        let lam = (&CV::xy(n, 1) - &CV::xy(n, 2)).wedge(&CV::t(n));
        assert_eq!(pair(&t, &lam).unwrap(), q(1));
        assert!(pair(&MV::x(n, 1), &CV::xy(n, 1)).is_err());
    }

    #[test]
    fn hodge_values() {
        assert_eq!(MV::x(1, 1).hodge_star(), MV::y(1, 1).wedge(&MV::t(1)));
        assert_eq!(MV::y(1, 1).hodge_star(), -MV::x(1, 1).wedge(&MV::t(1)));
        let s = MV::x(2, 1).wedge(&MV::y(2, 1)).hodge_star();
        assert_eq!(s, -MV::x(2, 2).wedge(&MV::y(2, 2)).wedge(&MV::t(2)));
    }

    #[test]
    fn horizontal_split_values() {
        let n = 2;
        let xy = MV::x(n, 1).wedge(&MV::y(n, 1));
        assert_eq!(xy.horizontal_split(), (xy.clone(), MV::zero(n)));
        let xt = MV::x(n, 1).wedge(&MV::t(n));
        assert_eq!(xt.horizontal_split(), (MV::zero(n), MV::x(n, 1)));
        let mix = &xy + &MV::x(n, 2).wedge(&MV::t(n));
        assert_eq!(mix.horizontal_split(), (xy, MV::x(n, 2)));
    }

    #[test]
    fn simplicity() {
        let n = 2;
        let xy1 = MV::x(n, 1).wedge(&MV::y(n, 1));
        assert!(is_simple(&xy1).unwrap());
        let sp = span_if_simple(&xy1).unwrap().unwrap();
        assert_eq!(sp, PlaneSpan::from_multivectors(n, &[MV::x(n, 1), MV::y(n, 1)]).unwrap());
        let xy2 = MV::x(n, 2).wedge(&MV::y(n, 2));
        let sum = &xy1 + &xy2;
        assert_eq!(annihilator(&sum).unwrap().len(), 0);
        assert!(!is_simple(&sum).unwrap());
        let t = MV::t(n);
        assert!(!is_simple(&(&xy1.wedge(&t) + &xy2.wedge(&t))).unwrap());
        assert!(is_simple(&MV::zero(n)).is_err());
    }

    #[test]
    fn rank_one() {
        let n = 2;
        let p1 = PlaneSpan::from_multivectors(n, &[MV::x(n, 1), MV::y(n, 1), MV::t(n)]).unwrap();
        let p2 = PlaneSpan::from_multivectors(n, &[MV::x(n, 2), MV::y(n, 2), MV::t(n)]).unwrap();
        assert!(rank_one_connected(&p1, &p1).unwrap());
        assert!(!rank_one_connected(&p1, &p2).unwrap());
        assert!(whyrank1_check(&p1, &p1).unwrap());
        assert!(whyrank1_check(&p1, &p2).unwrap());
        // Graphs of x -> A x and x -> B x over span{X1, X2} with B - A of rank one.
        let row = |a: [i64; 2], b: usize| {
            let mut v = vec![q(0); 5];
            v[b] = q(1);
            v[2] = q(a[0]);
            v[3] = q(a[1]);
            v
        };
        let ga = PlaneSpan::new(n, &[row([1, 2], 0), row([3, 4], 1)]);
        let gb = PlaneSpan::new(n, &[row([2, 4], 0), row([4, 6], 1)]);
        assert!(rank_one_connected(&ga, &gb).unwrap());
        assert!(whyrank1_check(&ga, &gb).unwrap());
    }

    #[test]
    fn display_literals() {
        let n = 3;
        let v = &MV::x(n, 1).wedge(&MV::y(n, 2)).wedge(&MV::t(n)).scale(&qr(3, 2)) - &MV::x(n, 3).wedge(&MV::y(n, 1)).wedge(&MV::t(n));
        assert_eq!(v.to_string(), "3/2*X1^Y2^T - X3^Y1^T");
        assert_eq!(CV::scalar(1, q(-2)).to_string(), "-2");
        assert_eq!(CV::zero(1).to_string(), "0");
    }
}
