//! Second-order jets in up to seven variables, used to evaluate `D` pointwise
//! on forms whose coefficients are not polynomial.

use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::scalar::{to_f64, Scalar, Q};

pub const MAXV: usize = 7;
const NLIN: usize = 1 + MAXV;
pub const NCOEF: usize = NLIN + MAXV * (MAXV + 1) / 2;

const fn quad_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    // Row-major upper triangle.
    NLIN + a * MAXV - a * (a + 1) / 2 + b
}

/// Truncated Taylor polynomial `c0 + sum c_i u_i + sum_{i<=j} c_ij u_i u_j` around a center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet(pub [f64; NCOEF]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        let mut a = [0.0; NCOEF];
        a[0] = c;
        Jet(a)
    }

    /// The coordinate function `v` at a point where it has value `value`.
    pub fn var(value: f64, v: usize) -> Self {
        let mut j = Jet::constant(value);
        j.0[1 + v] = 1.0;
        j
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// Partial derivative; the result is exact to first order only.
    pub fn derivative(&self, v: usize) -> Self {
        let mut out = [0.0; NCOEF];
        out[0] = self.0[1 + v];
        for i in 0..MAXV {
            let c = self.0[quad_index(v, i)];
            out[1 + i] = if i == v { 2.0 * c } else { c };
        }
        Jet(out)
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.0;
        for x in out.iter_mut() {
            *x *= c;
        }
        Jet(out)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        for (a, b) in self.0.iter_mut().zip(o.0.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        for (a, b) in self.0.iter_mut().zip(o.0.iter()) {
            *a -= b;
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let a = &self.0;
        let b = &o.0;
        let mut out = [0.0; NCOEF];
        out[0] = a[0] * b[0];
        for i in 0..MAXV {
            out[1 + i] = a[0] * b[1 + i] + a[1 + i] * b[0];
        }
        for i in 0..MAXV {
            for j in i..MAXV {
                let q = quad_index(i, j);
                let cross = if i == j { a[1 + i] * b[1 + i] } else { a[1 + i] * b[1 + j] + a[1 + j] * b[1 + i] };
                out[q] = a[0] * b[q] + a[q] * b[0] + cross;
            }
        }
        Jet(out)
    }
}

impl Zero for Jet {
    fn zero() -> Self {
        Jet([0.0; NCOEF])
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }
}

impl One for Jet {
    fn one() -> Self {
        Jet::constant(1.0)
    }
}

impl Scalar for Jet {
    fn from_q(q: &Q) -> Self {
        Jet::constant(to_f64(q))
    }

    fn half(&self) -> Self {
        self.scale(0.5)
    }
}
