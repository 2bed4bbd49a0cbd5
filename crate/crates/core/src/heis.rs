//! The Heisenberg group in exponential coordinates `(x, y, t)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
    pub t: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: Vec<S>, y: Vec<S>, t: S) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        if x.is_empty() {
            return domain("points need n >= 1");
        }
        Ok(Point { x, y, t })
    }

    pub fn identity(n: usize) -> Self {
        Point { x: vec![S::zero(); n], y: vec![S::zero(); n], t: S::zero() }
    }

    /// From `[x_1..x_n, y_1..y_n, t]`.
    pub fn from_coords(c: &[S]) -> Result<Self> {
        if c.len() < 3 || c.len().is_multiple_of(2) {
            return domain(format!("a point of H^n has 2n+1 coordinates, got {}", c.len()));
        }
        let n = (c.len() - 1) / 2;
        Ok(Point { x: c[..n].to_vec(), y: c[n..2 * n].to_vec(), t: c[2 * n].clone() })
    }

    pub fn coords(&self) -> Vec<S> {
        let mut c = self.x.clone();
        c.extend(self.y.iter().cloned());
        c.push(self.t.clone());
        c
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Homogeneous dimension `2n + 2`.
    pub fn homogeneous_dim(&self) -> usize {
        2 * self.n() + 2
    }

    pub fn inverse(&self) -> Self {
        Point { x: self.x.iter().map(|a| -a.clone()).collect(), y: self.y.iter().map(|a| -a.clone()).collect(), t: -self.t.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.y).all(|a| a.is_zero()) && self.t.is_zero()
    }

    pub fn map<T, F: Fn(&S) -> T>(&self, f: F) -> Point<T> {
        Point { x: self.x.iter().map(&f).collect(), y: self.y.iter().map(&f).collect(), t: f(&self.t) }
    }
}

impl Point<crate::scalar::Q> {
    pub fn to_f64(&self) -> Point<f64> {
        self.map(crate::scalar::to_f64)
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |s, (u, v)| s + u.clone() * v.clone())
}

pub fn group_mul<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Result<Point<S>> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), found: q.n() });
    }
    Ok(mul_unchecked(p, q))
}

pub(crate) fn mul_unchecked<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Point<S> {
    let x = p.x.iter().zip(&q.x).map(|(a, b)| a.clone() + b.clone()).collect();
    let y = p.y.iter().zip(&q.y).map(|(a, b)| a.clone() + b.clone()).collect();
    let twist = (dot(&p.x, &q.y) - dot(&q.x, &p.y)).half();
    Point { x, y, t: p.t.clone() + q.t.clone() + twist }
}

pub fn dilate<S: Scalar + PartialOrd>(lambda: &S, p: &Point<S>) -> Result<Point<S>> {
    if *lambda <= S::zero() {
        return domain("dilation factor must be positive");
    }
    Ok(dilate_unchecked(lambda, p))
}

pub(crate) fn dilate_unchecked<S: Scalar>(lambda: &S, p: &Point<S>) -> Point<S> {
    Point {
        x: p.x.iter().map(|a| lambda.clone() * a.clone()).collect(),
        y: p.y.iter().map(|a| lambda.clone() * a.clone()).collect(),
        t: lambda.clone() * lambda.clone() * p.t.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
pub enum Metric {
    #[default]
    #[serde(rename = "d-infinity")]
    DInfinity,
    #[serde(rename = "koranyi")]
    Koranyi,
}

impl Metric {
    pub fn norm(&self, p: &Point<f64>) -> f64 {
        let h2: f64 = p.x.iter().chain(&p.y).map(|a| a * a).sum();
        match self {
            Metric::DInfinity => h2.sqrt().max(2.0 * p.t.abs().sqrt()),
            Metric::Koranyi => (h2 * h2 + 16.0 * p.t * p.t).sqrt().sqrt(),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d-infinity" | "dinf" | "d_inf" => Ok(Metric::DInfinity),
            "koranyi" | "korányi" => Ok(Metric::Koranyi),
            _ => domain(format!("unknown metric `{s}` (expected d-infinity or koranyi)")),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::DInfinity => "d-infinity",
            Metric::Koranyi => "koranyi",
        })
    }
}

/// `d(p, q) = ||p^{-1} q||`.
pub fn distance(metric: Metric, p: &Point<f64>, q: &Point<f64>) -> Result<f64> {
    Ok(metric.norm(&group_mul(&p.inverse(), q)?))
}

/// The smooth homogeneous pseudo-norm `(sum |h_i|^4 + t^2)^(1/4)`.
pub fn star_norm(p: &Point<f64>) -> f64 {
    let h4: f64 = p.x.iter().chain(&p.y).map(|a| a.powi(4)).sum();
    (h4 + p.t * p.t).sqrt().sqrt()
}

/// Sampled lower bound for the smallest `C >= 1` with `||p||/C <= ||p||_* <= C ||p||`.
///
/// The axis and vertical directions are always included since the extremes sit there.
pub fn estimate_c_star(n: usize, metric: Metric, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 1.0;
    let mut consider = |p: &Point<f64>| {
        let a = metric.norm(p);
        let b = star_norm(p);
        if a > 0.0 && b > 0.0 {
            best = best.max(a / b).max(b / a);
        }
    };
    for i in 0..=2 * n {
        let mut c = vec![0.0; 2 * n + 1];
        c[i] = 1.0;
        consider(&Point::from_coords(&c).expect("odd length"));
    }
    let mut tilt = vec![0.0; 2 * n + 1];
    tilt[0] = 1.0;
    tilt[2 * n] = 0.25;
    consider(&Point::from_coords(&tilt).expect("odd length"));
    let mut diag = vec![1.0; 2 * n + 1];
    diag[2 * n] = 0.0;
    consider(&Point::from_coords(&diag).expect("odd length"));
    diag[2 * n] = 0.25;
    consider(&Point::from_coords(&diag).expect("odd length"));
    for _ in 0..samples {
        let c: Vec<f64> = (0..=2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        consider(&Point::from_coords(&c).expect("odd length"));
    }
    best
}

/// `H^n = W V` with `V = exp span{X_1..X_k}` and `W = {x_1 = .. = x_k = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Splitting {
    pub n: usize,
    pub k: usize,
}

impl Splitting {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return domain(format!("splitting needs 1 <= k <= n, got n={n}, k={k}"));
        }
        Ok(Splitting { n, k })
    }

    /// Dimension of `W`, that is `2n + 1 - k`.
    pub fn w_dim(&self) -> usize {
        2 * self.n + 1 - self.k
    }

    /// Ambient coordinate index (0-based, order x, y, t) of the `a`-th coordinate of `W`.
    pub fn w_axis(&self, a: usize) -> usize {
        a + self.k
    }

    /// Coordinates `(x_{k+1}..x_n, y_1..y_n, t)` of a point of `W`.
    pub fn w_coords<S: Scalar>(&self, w: &Point<S>) -> Vec<S> {
        w.coords()[self.k..].to_vec()
    }

    pub fn w_point<S: Scalar>(&self, c: &[S]) -> Point<S> {
        let mut full = vec![S::zero(); self.k];
        full.extend(c.iter().cloned());
        Point::from_coords(&full).expect("W coordinates have the right length")
    }

    pub fn v_point<S: Scalar>(&self, v: &[S]) -> Point<S> {
        let mut p = Point::identity(self.n);
        for (i, a) in v.iter().enumerate() {
            p.x[i] = a.clone();
        }
        p
    }

    /// `p = w v` with `v = p_V = (x_1..x_k)` and `w = p v^{-1}`.
    pub fn split<S: Scalar>(&self, p: &Point<S>) -> Result<(Point<S>, Point<S>)> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n() });
        }
        let v = self.v_point(&p.x[..self.k]);
        let w = mul_unchecked(p, &v.inverse());
        Ok((w, v))
    }
}

/// Membership in the closed cone `{ ||p_W|| <= alpha ||p_V|| }` whose axis is `V`.
pub fn cone_contains(alpha: f64, p: &Point<f64>, s: &Splitting, m: Metric) -> Result<bool> {
    if alpha < 0.0 {
        return domain("cone aperture must be nonnegative");
    }
    let (w, v) = s.split(p)?;
    Ok(m.norm(&w) <= alpha * m.norm(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr, Q};

    fn pq(c: &[i64]) -> Point<Q> {
        Point::from_coords(&c.iter().map(|&a| q(a)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn group_law_values() {
        let r = group_mul(&pq(&[1, 0, 0]), &pq(&[0, 1, 0])).unwrap();
        assert_eq!(r, Point::from_coords(&[q(1), q(1), qr(1, 2)]).unwrap());
        let p = pq(&[3, -1, 2, 5, 7]);
        assert_eq!(group_mul(&p, &Point::identity(2)).unwrap(), p);
        assert!(group_mul(&p, &p.inverse()).unwrap().is_identity());
        assert!(group_mul(&p, &pq(&[1, 2, 3])).is_err());
    }

    #[test]
    fn dilation_values() {
        assert_eq!(dilate(&q(2), &pq(&[1, 1, 1])).unwrap(), pq(&[2, 2, 4]));
        let p = pq(&[1, -2, 3]);
        assert_eq!(dilate(&q(1), &p).unwrap(), p);
        assert!(dilate(&q(0), &p).is_err());
        assert!(dilate(&q(-1), &p).is_err());
    }

    #[test]
    fn distance_values() {
        let o = Point::identity(1);
        let e = Point::from_coords(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(distance(Metric::DInfinity, &o, &e).unwrap(), 2.0);
        assert!((distance(Metric::Koranyi, &o, &e).unwrap() - 2.0).abs() < 1e-15);
        let h = Point::from_coords(&[3.0, 4.0, 0.0]).unwrap();
        assert_eq!(distance(Metric::DInfinity, &o, &h).unwrap(), 5.0);
    }

    #[test]
    fn split_cases() {
        let s = Splitting::new(2, 1).unwrap();
        let v = pq(&[3, 0, 0, 0, 0]);
        let (w, vv) = s.split(&v).unwrap();
        assert!(w.is_identity());
        assert_eq!(vv, v);
        let w0 = pq(&[0, 1, 2, 3, 4]);
        let (w, vv) = s.split(&w0).unwrap();
        assert_eq!(w, w0);
        assert!(vv.is_identity());
        let p = pq(&[1, 2, 3, 4, 5]);
        let (w, v) = s.split(&p).unwrap();
        assert_eq!(group_mul(&w, &v).unwrap(), p);
        assert!(w.x[0] == q(0) && v.x[1] == q(0) && v.y.iter().all(|a| *a == q(0)));
    }

    #[test]
    fn cones() {
        let s = Splitting::new(1, 1).unwrap();
        let v = Point::from_coords(&[2.0, 0.0, 0.0]).unwrap();
        for a in [0.0, 0.5, 3.0] {
            assert!(cone_contains(a, &v, &s, Metric::DInfinity).unwrap());
        }
        let w = Point::from_coords(&[0.0, 1.0, 0.3]).unwrap();
        assert!(!cone_contains(0.7, &w, &s, Metric::DInfinity).unwrap());
        // ||p_W|| = 1 and ||p_V|| = 2 with alpha = 1/2 sits on the boundary.
        let b = Point::from_coords(&[2.0, 1.0, 1.0]).unwrap();
        let (ww, vv) = s.split(&b).unwrap();
        let alpha = Metric::DInfinity.norm(&ww) / Metric::DInfinity.norm(&vv);
        assert!(cone_contains(alpha, &b, &s, Metric::DInfinity).unwrap());
    }

    #[test]
    fn c_star_matches_closed_form_for_d_infinity() {
        // On the d-infinity sphere the pseudo-norm ranges over [min((2n)^-1/4, 1/2), (17/16)^(1/4)].
        for n in 1..=3 {
            let lo = (1.0 / (2.0 * n as f64)).powf(0.25).min(0.5);
            let expect = (1.0 / lo).max((17.0f64 / 16.0).powf(0.25));
            let est = estimate_c_star(n, Metric::DInfinity, 2000, 1);
            assert!(est <= expect + 1e-12 && est >= expect - 1e-9, "n={n} est={est} expect={expect}");
        }
    }
}
