//! Differential forms in the left-invariant coframe `dx, dy, th`, the exterior
//! derivative, the second-order Rumin operator `D`, and `d_C`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{domain, Result};
use crate::jet::{Jet, MAXV};
use crate::multivec::{fmt_blade, wedge_sign, Blade, CoVector, Covectors};
use crate::poly::{frame_derive, Polynomial};
use crate::rumin::lefschetz_inv_table;
use crate::scalar::{Scalar, Q};

/// Coefficient rings on which the frame fields `W_i` act.
pub trait FrameRing: Scalar {
    type Ctx: Clone + Send + Sync;

    /// `W_i f`, 1-based `i` in `1..=2n+1`.
    fn frame_derive(&self, ctx: &Self::Ctx, n: usize, i: usize) -> Self;

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

impl FrameRing for Polynomial {
    type Ctx = ();

    fn frame_derive(&self, _: &(), n: usize, i: usize) -> Self {
        frame_derive(n, i, self)
    }
}

/// A jet center: the point where coordinates are expanded.
#[derive(Clone, Debug)]
pub struct JetCtx {
    pub center: [f64; MAXV],
}

impl JetCtx {
    pub fn new(coords: &[f64]) -> Self {
        assert!(coords.len() <= MAXV, "jets support n <= 3");
        let mut center = [0.0; MAXV];
        center[..coords.len()].copy_from_slice(coords);
        JetCtx { center }
    }

    pub fn coord(&self, v: usize) -> Jet {
        Jet::var(self.center[v], v)
    }
}

impl FrameRing for Jet {
    type Ctx = JetCtx;

    fn frame_derive(&self, ctx: &JetCtx, n: usize, i: usize) -> Self {
        let t = 2 * n;
        if i == 2 * n + 1 {
            return self.derivative(t);
        }
        let main = self.derivative(i - 1);
        let ft = self.derivative(t);
        if i <= n {
            main - (ctx.coord(n + i - 1) * ft).half()
        } else {
            main + (ctx.coord(i - 1 - n) * ft).half()
        }
    }
}

/// A differential form with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct Form<C> {
    n: usize,
    terms: BTreeMap<Blade, C>,
}

pub type PolyForm = Form<Polynomial>;

impl<C: FrameRing> Form<C> {
    pub fn zero(n: usize) -> Self {
        Form { n, terms: BTreeMap::new() }
    }

    pub fn term(n: usize, b: Blade, c: C) -> Self {
        let mut f = Self::zero(n);
        f.add_term(b, c);
        f
    }

    pub fn from_covector(cv: &CoVector) -> Self {
        let mut f = Self::zero(cv.n());
        for (b, c) in cv.terms() {
            f.add_term(*b, C::from_q(c));
        }
        f
    }

    pub fn add_term(&mut self, b: Blade, c: C) {
        assert!(b >> (2 * self.n + 1) == 0, "blade outside the algebra");
        if c.is_exact_zero() {
            return;
        }
        match self.terms.remove(&b) {
            Some(old) => {
                let s = old + c;
                if !s.is_exact_zero() {
                    self.terms.insert(b, s);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Blade, C> {
        &self.terms
    }

    pub fn coeff(&self, b: Blade) -> C {
        self.terms.get(&b).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn grade(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|b| b.count_ones() as usize);
        let g = it.next()?;
        it.all(|h| h == g).then_some(g)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut r = self.clone();
        for (b, c) in &o.terms {
            r.add_term(*b, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Form { n: self.n, terms: self.terms.iter().map(|(b, c)| (*b, -c.clone())).collect() }
    }

    pub fn scale(&self, f: &C) -> Self {
        let mut r = Self::zero(self.n);
        for (b, c) in &self.terms {
            r.add_term(*b, c.clone() * f.clone());
        }
        r
    }

    pub fn scale_q(&self, q: &Q) -> Self {
        self.scale(&C::from_q(q))
    }

    pub fn wedge(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut r = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let c = ca.clone() * cb.clone();
                    r.add_term(a | b, if neg { -c } else { c });
                }
            }
        }
        r
    }

    pub fn wedge_covector(&self, cv: &CoVector) -> Self {
        self.wedge(&Self::from_covector(cv))
    }

    fn tbit(&self) -> Blade {
        1 << (2 * self.n)
    }

    /// `omega = h + s ^ th` with `h`, `s` free of `th`.
    pub fn horizontal_split(&self) -> (Self, Self) {
        let tb = self.tbit();
        let mut h = Self::zero(self.n);
        let mut s = Self::zero(self.n);
        for (b, c) in &self.terms {
            if b & tb == 0 {
                h.add_term(*b, c.clone());
            } else {
                s.add_term(b & !tb, c.clone());
            }
        }
        (h, s)
    }

    pub fn horizontal_part(&self) -> Self {
        self.horizontal_split().0
    }

    pub fn is_horizontal(&self) -> bool {
        let tb = self.tbit();
        self.terms.keys().all(|b| b & tb == 0)
    }

    pub fn map_coeffs<D: FrameRing, F: Fn(&C) -> D>(&self, f: F) -> Form<D> {
        let mut r = Form::<D>::zero(self.n);
        for (b, c) in &self.terms {
            r.add_term(*b, f(c));
        }
        r
    }

    /// Exterior derivative, using `d th = -sum dx_i ^ dy_i`.
    pub fn exterior_d(&self, ctx: &C::Ctx) -> Self {
        let n = self.n;
        let tb = self.tbit();
        let mut r = Self::zero(n);
        for (b, f) in &self.terms {
            for i in 0..=2 * n {
                if b & (1 << i) != 0 {
                    continue;
                }
                let g = f.frame_derive(ctx, n, i + 1);
                if g.is_exact_zero() {
                    continue;
                }
                let neg = wedge_sign(1 << i, *b).expect("disjoint");
                r.add_term((1 << i) | b, if neg { -g } else { g });
            }
            if b & tb != 0 {
                // d(th_I ^ th) = (-1)^{|I|} th_I ^ d th
                let rest = b & !tb;
                let odd = rest.count_ones() % 2 == 1;
                for j in 0..n {
                    let xy: Blade = (1 << j) | (1 << (n + j));
                    if rest & xy != 0 {
                        continue;
                    }
                    let neg_wedge = wedge_sign(rest, xy).expect("disjoint");
                    // -th_I ^ dxy_j, times (-1)^{|I|}
                    let flip = neg_wedge ^ odd;
                    let c = f.clone();
                    r.add_term(rest | xy, if flip { c } else { -c });
                }
            }
        }
        r
    }

    /// `D omega = d(omega - th ^ L^{-1}((d omega)_h))` on horizontal `n`-forms.
    pub fn rumin_d(&self, ctx: &C::Ctx) -> Result<Self> {
        let n = self.n;
        if self.is_zero() {
            return Ok(Self::zero(n));
        }
        if !self.is_horizontal() || self.grade() != Some(n) {
            return domain(format!("D acts on horizontal {n}-forms"));
        }
        let dh = self.exterior_d(ctx).horizontal_part();
        let table = lefschetz_inv_table(n);
        let tb = self.tbit();
        // th ^ th_B = (-1)^{n-1} th_B ^ th for |B| = n - 1.
        let sign_neg = (n - 1) % 2 == 1;
        let mut corrected = self.clone();
        for (b, f) in &dh.terms {
            for (sb, v) in &table[b] {
                let c = f.clone() * C::from_q(v);
                // subtract th ^ beta
                corrected.add_term(sb | tb, if sign_neg { c } else { -c });
            }
        }
        Ok(corrected.exterior_d(ctx))
    }

    /// `d` below the middle degree, `D` in degree `n` (on the horizontal part), `d` on `J`-valued forms above.
    pub fn d_c(&self, ctx: &C::Ctx) -> Result<Self> {
        let n = self.n;
        let Some(g) = self.grade() else {
            if self.is_zero() {
                return Ok(Self::zero(n));
            }
            return domain("d_C needs a homogeneous form");
        };
        match g.cmp(&n) {
            std::cmp::Ordering::Less => Ok(self.exterior_d(ctx)),
            std::cmp::Ordering::Equal => self.horizontal_part().rumin_d(ctx),
            std::cmp::Ordering::Greater => {
                if !self.in_j() {
                    return domain("forms of degree above n must take values in J");
                }
                Ok(self.exterior_d(ctx))
            }
        }
    }

    /// Pointwise membership in `J`: `omega ^ th = 0` and `omega ^ d th = 0`.
    pub fn in_j(&self) -> bool {
        let n = self.n;
        self.wedge_covector(&CoVector::t(n)).is_zero() && self.wedge_covector(&crate::rumin::dtheta_const(n)).is_zero()
    }
}

impl<C: FrameRing> Form<C> {
    /// Constant coefficients of a jet form, or exact coefficients of a constant polynomial form.
    pub fn values(&self, value: impl Fn(&C) -> f64) -> BTreeMap<Blade, f64> {
        self.terms.iter().map(|(b, c)| (*b, value(c))).collect()
    }
}

impl PolyForm {
    pub fn d(&self) -> PolyForm {
        self.exterior_d(&())
    }

    pub fn rumin(&self) -> Result<PolyForm> {
        self.rumin_d(&())
    }

    pub fn dc(&self) -> Result<PolyForm> {
        self.d_c(&())
    }

    pub fn from_poly(n: usize, f: Polynomial) -> PolyForm {
        PolyForm::term(n, 0, f)
    }

    /// Evaluate the coefficients at a point with rational coordinates.
    pub fn at(&self, p: &[Q]) -> CoVector {
        CoVector::from_terms(self.n, self.terms.iter().map(|(b, c)| (*b, c.eval(p))))
    }

    /// Coefficient jets around `ctx.center`.
    pub fn to_jets(&self, ctx: &JetCtx) -> Form<Jet> {
        let vars: Vec<Jet> = (0..=2 * self.n).map(|v| ctx.coord(v)).collect();
        self.map_coeffs(|c| c.eval(&vars))
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut sorted: Vec<(&Blade, &Polynomial)> = self.terms.iter().collect();
        sorted.sort_by_key(|(b, _)| (b.count_ones(), crate::multivec::blade_indices(**b)));
        for (i, (b, p)) in sorted.into_iter().enumerate() {
            let blade = fmt_blade::<Covectors>(self.n, *b);
            let single = p.len() == 1;
            let body = if single {
                let (m, c) = p.terms().iter().next().expect("one term");
                let neg = c < &Q::zero();
                let mono = Polynomial::term(m.clone(), if neg { -c.clone() } else { c.clone() });
                let s = mono.display(self.n).to_string();
                let joined = match (s.as_str(), *b == 0) {
                    (_, true) => s,
                    ("1", false) => blade,
                    (_, false) => format!("{s}*{blade}"),
                };
                (neg, joined)
            } else if *b == 0 {
                (false, format!("{}", p.display(self.n)))
            } else {
                (false, format!("({})*{blade}", p.display(self.n)))
            };
            match (i, body.0) {
                (0, true) => write!(f, "-{}", body.1)?,
                (0, false) => write!(f, "{}", body.1)?,
                (_, true) => write!(f, " - {}", body.1)?,
                (_, false) => write!(f, " + {}", body.1)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyForm[n={}]({self})", self.n)
    }
}

impl fmt::Debug for Form<Jet> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.terms.iter().map(|(b, c)| format!("{}*{}", c.value(), fmt_blade::<Covectors>(self.n, *b))).collect();
        write!(f, "JetForm[n={}]({})", self.n, vals.join(" + "))
    }
}

/// `f dx_i`, `f dy_i`, `f th` and friends for tests and examples.
pub fn poly_form(n: usize, parts: &[(Blade, Polynomial)]) -> PolyForm {
    let mut r = PolyForm::zero(n);
    for (b, p) in parts {
        r.add_term(*b, p.clone());
    }
    r
}

/// A random polynomial with up to `terms` monomials of degree `<= max_deg` in the coordinates of `H^n`.
pub fn random_polynomial<R: rand::Rng>(n: usize, max_deg: u32, terms: usize, rng: &mut R) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let mut m = Polynomial::one();
        for _ in 0..deg {
            m = &m * &Polynomial::var(rng.gen_range(0..=2 * n) as crate::poly::Var);
        }
        let c = Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into());
        p = &p + &m.scale(&c);
    }
    p
}

/// A random homogeneous form of the given grade with polynomial coefficients.
pub fn random_form<R: rand::Rng>(n: usize, grade: usize, max_deg: u32, rng: &mut R) -> PolyForm {
    let blades = crate::multivec::blades_of_grade(2 * n + 1, grade);
    let mut f = PolyForm::zero(n);
    for b in blades {
        if rng.gen_bool(0.6) {
            f.add_term(b, random_polynomial(n, max_deg, 3, rng));
        }
    }
    f
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ComplexCheck {
    pub trials: usize,
    /// Trials with `D(d alpha) = 0` exactly for a random `(n-1)`-form `alpha`.
    pub d_after_d: usize,
    /// Trials with `d(D beta) = 0` exactly for a random `n`-form `beta`.
    pub d_after_big_d: usize,
}

impl ComplexCheck {
    pub fn all_ok(&self) -> bool {
        self.d_after_d == self.trials && self.d_after_big_d == self.trials
    }
}

/// Exact check of `D o d = 0` and `d o D = 0` on seeded random forms with coefficient degree `<= 3`.
pub fn check_rumin_complex(n: usize, trials: usize, seed: u64) -> Result<ComplexCheck> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = ComplexCheck { trials, d_after_d: 0, d_after_big_d: 0 };
    for _ in 0..trials {
        let alpha = random_form(n, n - 1, 3, &mut rng);
        if alpha.d().horizontal_part().rumin()?.is_zero() {
            out.d_after_d += 1;
        }
        let beta = random_form(n, n, 3, &mut rng);
        if beta.horizontal_part().rumin()?.d().is_zero() {
            out.d_after_big_d += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;
    use crate::scalar::{q, qr};
    use num::One;

    fn v(i: Var) -> Polynomial {
        Polynomial::var(i)
    }

    // H^1 blades: dx = 1, dy = 2, th = 4.
    const DX: Blade = 1;
    const DY: Blade = 2;
    const TH: Blade = 4;

    #[test]
    fn d_of_theta() {
        let th = PolyForm::term(2, 1 << 4, Polynomial::one());
        assert_eq!(th.d(), PolyForm::from_covector(&crate::rumin::dtheta_const(2)));
        let xdx = PolyForm::term(1, DX, v(0));
        assert!(xdx.d().is_zero());
    }

    #[test]
    fn d_of_t_theta() {
        let f = PolyForm::term(1, TH, v(2));
        let expect = poly_form(1, &[(DX | TH, v(1).scale(&qr(-1, 2))), (DY | TH, v(0).scale(&qr(1, 2))), (DX | DY, -v(2))]);
        assert_eq!(f.d(), expect);
    }

    #[test]
    fn rumin_h1_examples() {
        let w = PolyForm::term(1, DY, &v(0) * &v(1));
        assert_eq!(w.rumin().unwrap(), PolyForm::term(1, DY | TH, Polynomial::one()));
        let w = PolyForm::term(1, DX, v(1));
        assert!(w.rumin().unwrap().is_zero());
        assert!(PolyForm::term(1, TH, v(1)).rumin().is_err());
    }

    #[test]
    fn d_c_of_zero() {
        assert!(PolyForm::zero(2).dc().unwrap().is_zero());
        let not_j = PolyForm::term(2, 1 | (1 << 2) | (1 << 3), Polynomial::one());
        assert!(not_j.dc().is_err());
    }

    #[test]
    fn jets_match_polynomials() {
        let n = 1;
        let f = &(&v(0).pow(2) * &v(2)) + &v(1).pow(3);
        let g = &v(0) * &v(1);
        let w = poly_form(n, &[(DX, f), (DY, g)]);
        let exact = w.rumin().unwrap();
        let p = [q(1), qr(1, 2), q(-2)];
        let ctx = JetCtx::new(&[1.0, 0.5, -2.0]);
        let jet = w.to_jets(&ctx).rumin_d(&ctx).unwrap();
        let at = exact.at(&p);
        for (b, c) in jet.terms() {
            assert!((c.value() - crate::scalar::to_f64(&at.coeff(*b))).abs() < 1e-12);
        }
        assert_eq!(jet.terms().len(), at.terms().len());
    }

    #[test]
    fn display_roundtrip_shape() {
        let w = poly_form(1, &[(DX, v(0).pow(2)), (TH, v(2)), (DY, &v(0) + &Polynomial::one())]);
        assert_eq!(w.to_string(), "x1^2*dx1 + (x1 + 1)*dy1 + t*th");
    }
}
