//! H-linear maps: Lie algebra automorphisms of the Heisenberg algebra that
//! preserve the horizontal layer, acting by `A` on `h1` and by `c` on `T`.

use num::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::forms::PolyForm;
use crate::linalg::{self, Mat};
use crate::multivec::{blade_indices, CoVector, MultiVector, PlaneSpan};
use crate::poly::{Polynomial, Var};
use crate::scalar::{to_f64, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HLinearMap {
    pub n: usize,
    pub a: Mat,
    pub c: Q,
}

/// `B(v, w) = <[v, w], T> = sum v_xj w_yj - v_yj w_xj` on horizontal coordinates.
pub fn symplectic_form(n: usize, v: &[Q], w: &[Q]) -> Q {
    (0..n).fold(Q::zero(), |s, j| s + &v[j] * &w[n + j] - &v[n + j] * &w[j])
}

fn col(a: &Mat, j: usize) -> Vec<Q> {
    a.iter().map(|r| r[j].clone()).collect()
}

impl HLinearMap {
    pub fn new(n: usize, a: Mat, c: Q) -> Result<Self> {
        if a.len() != 2 * n || a.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::DimensionMismatch { expected: 2 * n, found: a.len() });
        }
        let m = HLinearMap { n, a, c };
        if !m.validate() {
            return domain("matrix does not preserve the bracket up to c");
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        HLinearMap { n, a: linalg::identity(2 * n), c: Q::one() }
    }

    pub fn dilation(n: usize, lambda: &Q) -> Self {
        let mut a = linalg::identity(2 * n);
        for (i, r) in a.iter_mut().enumerate() {
            r[i] = lambda.clone();
        }
        HLinearMap { n, a, c: lambda * lambda }
    }

    /// `B(Av, Aw) = c B(v, w)` on all basis pairs.
    pub fn validate(&self) -> bool {
        let n = self.n;
        if self.a.len() != 2 * n {
            return false;
        }
        let cols: Vec<Vec<Q>> = (0..2 * n).map(|j| col(&self.a, j)).collect();
        let e = |i: usize| {
            let mut v = vec![Q::zero(); 2 * n];
            v[i] = Q::one();
            v
        };
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                if symplectic_form(n, &cols[i], &cols[j]) != &self.c * symplectic_form(n, &e(i), &e(j)) {
                    return false;
                }
            }
        }
        true
    }

    /// The full `(2n+1) x (2n+1)` matrix on `h`.
    pub fn full_matrix(&self) -> Mat {
        let d = 2 * self.n + 1;
        let mut m = linalg::zeros(d, d);
        for i in 0..2 * self.n {
            for j in 0..2 * self.n {
                m[i][j] = self.a[i][j].clone();
            }
        }
        m[d - 1][d - 1] = self.c.clone();
        m
    }

    pub fn compose(&self, o: &HLinearMap) -> HLinearMap {
        HLinearMap { n: self.n, a: linalg::mat_mul(&self.a, &o.a), c: &self.c * &o.c }
    }

    pub fn inverse(&self) -> Result<HLinearMap> {
        let a = linalg::inverse(&self.a).ok_or_else(|| Error::Domain("singular map".into()))?;
        if self.c.is_zero() {
            return domain("singular map");
        }
        Ok(HLinearMap { n: self.n, a, c: self.c.recip() })
    }

    pub fn push_vector(&self, v: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.full_matrix(), v)
    }

    pub fn push_multivector(&self, tau: &MultiVector) -> MultiVector {
        let n = self.n;
        let m = self.full_matrix();
        let images: Vec<MultiVector> = (0..=2 * n).map(|j| MultiVector::from_vector(n, &col(&m, j))).collect();
        let mut out = MultiVector::zero(n);
        for (b, c) in tau.terms() {
            let w = blade_indices(*b).iter().fold(MultiVector::scalar(n, Q::one()), |acc, &j| acc.wedge(&images[j]));
            out = &out + &w.scale(c);
        }
        out
    }

    pub fn pull_covector(&self, lam: &CoVector) -> CoVector {
        let n = self.n;
        let m = self.full_matrix();
        // L^* th_i = sum_j m[i][j] th_j
        let images: Vec<CoVector> = (0..=2 * n).map(|i| CoVector::from_vector(n, &m[i])).collect();
        let mut out = CoVector::zero(n);
        for (b, c) in lam.terms() {
            let w = blade_indices(*b).iter().fold(CoVector::scalar(n, Q::one()), |acc, &i| acc.wedge(&images[i]));
            out = &out + &w.scale(c);
        }
        out
    }

    /// The map in exponential coordinates, as polynomials in `x, y, t`.
    pub fn coordinate_polys(&self) -> Vec<Polynomial> {
        let m = self.full_matrix();
        m.iter()
            .map(|row| {
                let mut p = Polynomial::zero();
                for (j, c) in row.iter().enumerate() {
                    p = &p + &Polynomial::var(j as Var).scale(c);
                }
                p
            })
            .collect()
    }

    /// `(L^* omega)(p) = L^*(omega(L p))`.
    pub fn pull_polyform(&self, omega: &PolyForm) -> PolyForm {
        let n = self.n;
        let subs = self.coordinate_polys();
        let mut out = PolyForm::zero(n);
        for (b, f) in omega.terms() {
            let g = f.compose(&subs);
            let cv = self.pull_covector(&CoVector::basis(n, *b));
            out = out.add(&PolyForm::from_covector(&cv).scale(&g));
        }
        out
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.a.iter().map(|r| r.iter().map(to_f64).collect()).collect()
    }
}

/// A random H-linear map: a product of symplectic shears and a block
/// `diag(G, G^{-T})`, scaled by a small rational `lambda`, and with
/// probability 1/2 composed with the swap `x <-> y` (so `c` may be negative).
pub fn random_hlinear<R: rand::Rng>(n: usize, rng: &mut R) -> HLinearMap {
    let small = |rng: &mut R| -> Q {
        let v = [-2, -1, 0, 0, 1, 2][rng.gen_range(0..6)];
        Q::from_integer(v.into())
    };
    let d = 2 * n;
    let mut a = linalg::identity(d);
    for round in 0..3 {
        let mut s = linalg::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = small(rng);
                s[i][j] = v.clone();
                s[j][i] = v;
            }
        }
        let mut m = linalg::identity(d);
        for i in 0..n {
            for j in 0..n {
                if round % 2 == 0 {
                    m[i][n + j] = s[i][j].clone();
                } else {
                    m[n + i][j] = s[i][j].clone();
                }
            }
        }
        a = linalg::mat_mul(&m, &a);
    }
    // Unit upper-triangular G keeps G^{-T} rational and cheap.
    let mut g = linalg::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            g[i][j] = small(rng);
        }
    }
    let gi = linalg::transpose(&linalg::inverse(&g).expect("unit triangular"));
    let mut blk = linalg::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            blk[i][j] = g[i][j].clone();
            blk[n + i][n + j] = gi[i][j].clone();
        }
    }
    a = linalg::mat_mul(&blk, &a);
    let lambda = [Q::new(1.into(), 2.into()), Q::one(), Q::from_integer(2.into()), Q::new((-3).into(), 2.into())][rng.gen_range(0..4)].clone();
    for r in a.iter_mut() {
        for c in r.iter_mut() {
            *c = &*c * &lambda;
        }
    }
    let mut c = &lambda * &lambda;
    if rng.gen_bool(0.5) {
        let mut swap = linalg::zeros(d, d);
        for i in 0..n {
            swap[i][n + i] = Q::one();
            swap[n + i][i] = Q::one();
        }
        a = linalg::mat_mul(&swap, &a);
        c = -c;
    }
    HLinearMap { n, a, c }
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

fn axpy(y: &[Q], a: &Q, x: &[Q]) -> Vec<Q> {
    y.iter().zip(x).map(|(u, v)| u + a * v).collect()
}

/// Symplectic Gram-Schmidt on `vecs` (all B-orthogonal to `pairs`), appending new `(e, f)` pairs.
fn symplectic_gram_schmidt(n: usize, mut vecs: Vec<Vec<Q>>, pairs: &mut Vec<(Vec<Q>, Vec<Q>)>) {
    loop {
        vecs.retain(|v| v.iter().any(|c| !c.is_zero()));
        let Some(e) = vecs.first().cloned() else { return };
        let Some(pos) = vecs.iter().position(|w| !symplectic_form(n, &e, w).is_zero()) else {
            // e is in the radical of what is left; callers only pass symplectic spans.
            vecs.remove(0);
            continue;
        };
        let s = symplectic_form(n, &e, &vecs[pos]);
        let f: Vec<Q> = vecs[pos].iter().map(|c| c / &s).collect();
        vecs = vecs
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != 0 && *i != pos)
            .map(|(_, x)| {
                let x1 = axpy(&x, &-symplectic_form(n, &x, &f), &e);
                axpy(&x1, &symplectic_form(n, &x, &e), &f)
            })
            .collect();
        pairs.push((e, f));
    }
}

/// Project onto the B-orthogonal complement of the span of the given pairs.
fn project_out(n: usize, x: &[Q], pairs: &[(Vec<Q>, Vec<Q>)]) -> Vec<Q> {
    let mut v = x.to_vec();
    for (e, f) in pairs {
        let bf = symplectic_form(n, &v, f);
        let be = symplectic_form(n, &v, e);
        v = axpy(&v, &-bf, e);
        v = axpy(&v, &be, f);
    }
    v
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub a: usize,
    pub b: usize,
    pub map: HLinearMap,
}

fn horizontal_rows(v: &PlaneSpan) -> Result<Vec<Vec<Q>>> {
    let n = v.n();
    if !v.is_horizontal() {
        return domain("subspace is not horizontal");
    }
    Ok(v.basis().iter().map(|r| r[..2 * n].to_vec()).collect())
}

/// An H-linear `l` with `c = 1` and `l(V) = span{X_1..X_{a+b}, Y_1..Y_a}`.
pub fn symplectic_normalize(v: &PlaneSpan) -> Result<Normalized> {
    let n = v.n();
    let rows = horizontal_rows(v)?;
    if rows.is_empty() {
        return domain("subspace must have dimension >= 1");
    }
    let d = rows.len();
    let gram: Mat = rows.iter().map(|r| rows.iter().map(|s| symplectic_form(n, r, s)).collect()).collect();
    let coeffs = linalg::kernel(&gram, d);
    let radical: Vec<Vec<Q>> = coeffs.iter().map(|c| c.iter().zip(&rows).fold(vec![Q::zero(); 2 * n], |acc, (ci, r)| axpy(&acc, ci, r))).collect();
    let b = radical.len();
    // complement of the radical inside V, lowest-index rows first
    let mut basis = radical.clone();
    let mut comp = Vec::new();
    for r in &rows {
        let mut test = basis.clone();
        test.push(r.clone());
        if linalg::rank(&test) > basis.len() {
            basis.push(r.clone());
            comp.push(r.clone());
        }
    }
    let mut pairs: Vec<(Vec<Q>, Vec<Q>)> = Vec::new();
    symplectic_gram_schmidt(n, comp, &mut pairs);
    let a = pairs.len();
    debug_assert_eq!(2 * a + b, d);
    // Witt partners g_j: B(r_i, g_j) = delta_ij, B(e, g_j) = B(f, g_j) = 0, B(g_i, g_j) = 0.
    let mut partners: Vec<Vec<Q>> = Vec::new();
    for j in 0..b {
        let mut cons: Vec<Vec<Q>> = Vec::new();
        let mut rhs: Vec<Q> = Vec::new();
        let row_of = |u: &[Q]| -> Vec<Q> { (0..2 * n).map(|i| symplectic_form(n, u, &unit(2 * n, i))).collect() };
        for (i, r) in radical.iter().enumerate() {
            cons.push(row_of(r));
            rhs.push(if i == j { Q::one() } else { Q::zero() });
        }
        for (e, f) in &pairs {
            cons.push(row_of(e));
            rhs.push(Q::zero());
            cons.push(row_of(f));
            rhs.push(Q::zero());
        }
        for g in &partners {
            cons.push(row_of(g));
            rhs.push(Q::zero());
        }
        let g = linalg::solve(&cons, &rhs).ok_or_else(|| Error::Infeasible("Witt partner".into()))?;
        partners.push(g);
    }
    let mut all: Vec<(Vec<Q>, Vec<Q>)> = pairs.clone();
    all.extend(radical.iter().cloned().zip(partners.iter().cloned()));
    // remaining pairs from the lowest-index coordinate vectors
    let rest: Vec<Vec<Q>> = (0..2 * n).map(|i| project_out(n, &unit(2 * n, i), &all)).collect();
    let mut extra = Vec::new();
    symplectic_gram_schmidt(n, rest, &mut extra);
    all.extend(extra);
    if all.len() != n {
        return Err(Error::Infeasible("symplectic completion".into()));
    }
    // P sends X_i -> e_i, Y_i -> f_i; the order puts V's e's first.
    let mut p = linalg::zeros(2 * n, 2 * n);
    for (i, (e, f)) in all.iter().enumerate() {
        for r in 0..2 * n {
            p[r][i] = e[r].clone();
            p[r][n + i] = f[r].clone();
        }
    }
    let inv = linalg::inverse(&p).ok_or_else(|| Error::Infeasible("degenerate symplectic basis".into()))?;
    let map = HLinearMap { n, a: inv, c: Q::one() };
    Ok(Normalized { a, b, map })
}

/// `span{X_1..X_{a+b}, Y_1..Y_a}` and, with `vertical`, also `T`.
pub fn canonical_span(n: usize, a: usize, b: usize, vertical: bool) -> PlaneSpan {
    let dim = 2 * n + 1;
    let mut rows: Vec<Vec<Q>> = (0..a + b).map(|i| unit(dim, i)).collect();
    rows.extend((0..a).map(|i| unit(dim, n + i)));
    if vertical {
        rows.push(unit(dim, 2 * n));
    }
    PlaneSpan::new(n, &rows)
}

pub fn push_span(map: &HLinearMap, v: &PlaneSpan) -> PlaneSpan {
    let rows: Vec<Vec<Q>> = v.basis().iter().map(|r| map.push_vector(r)).collect();
    PlaneSpan::new(v.n(), &rows)
}

/// `c = 1` map sending a vertical plane to the model plane `P_{a,b}`.
pub fn canonicalize_vertical_plane(p: &PlaneSpan) -> Result<Normalized> {
    let n = p.n();
    if !p.contains_t() {
        return domain("plane does not contain T");
    }
    let rows: Vec<Vec<Q>> = p
        .basis()
        .iter()
        .map(|r| {
            let mut h = r.clone();
            h[2 * n] = Q::zero();
            h
        })
        .collect();
    let hspan = PlaneSpan::new(n, &rows);
    if hspan.dim() == 0 {
        return Ok(Normalized { a: 0, b: 0, map: HLinearMap::identity(n) });
    }
    symplectic_normalize(&hspan)
}

/// Orthogonal symplectic normalization of an isotropic subspace, in floating point.
///
/// Returns `b = dim V` and an orthogonal matrix `A` on `h1` with `B(Av, Aw) = B(v, w)`
/// and `A(V) = span{X_1..X_b}`.
pub fn isometric_normalize(v: &PlaneSpan) -> Result<(usize, Vec<Vec<f64>>)> {
    let n = v.n();
    let rows = horizontal_rows(v)?;
    for r in &rows {
        for s in &rows {
            if !symplectic_form(n, r, s).is_zero() {
                return domain("isometric normalization needs [V, V] = 0");
            }
        }
    }
    let dim = 2 * n;
    let omega = |u: &[f64]| -> Vec<f64> {
        // Omega u with B(v, w) = v^T Omega w, Omega = [[0, I], [-I, 0]].
        let mut o = vec![0.0; dim];
        for j in 0..n {
            o[j] = u[n + j];
            o[n + j] = -u[j];
        }
        o
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut frame: Vec<Vec<f64>> = Vec::new();
    let orth = |frame: &Vec<Vec<f64>>, u: &[f64]| -> Option<Vec<f64>> {
        let mut w = u.to_vec();
        for _ in 0..2 {
            for e in frame {
                let c = dot(&w, e);
                for (wi, ei) in w.iter_mut().zip(e) {
                    *wi -= c * ei;
                }
            }
        }
        let norm = dot(&w, &w).sqrt();
        (norm > 1e-9).then(|| w.iter().map(|x| x / norm).collect())
    };
    let mut es: Vec<Vec<f64>> = Vec::new();
    let mut fs: Vec<Vec<f64>> = Vec::new();
    let mut push_pair = |frame: &mut Vec<Vec<f64>>, e: Vec<f64>| {
        let f: Vec<f64> = omega(&e).iter().map(|x| -x).collect();
        frame.push(e.clone());
        frame.push(f.clone());
        es.push(e);
        fs.push(f);
    };
    let mut vb: Vec<Vec<f64>> = Vec::new();
    for r in &rows {
        let u: Vec<f64> = r.iter().map(to_f64).collect();
        if let Some(e) = orth(&vb, &u) {
            vb.push(e);
        }
    }
    for e in vb.clone() {
        push_pair(&mut frame, e);
    }
    for i in 0..dim {
        let mut u = vec![0.0; dim];
        u[i] = 1.0;
        if let Some(e) = orth(&frame, &u) {
            push_pair(&mut frame, e);
        }
    }
    if es.len() != n {
        return Err(Error::NoConvergence("unitary completion".into()));
    }
    // A = P^T where P has columns e_1..e_n, f_1..f_n.
    let mut a = vec![vec![0.0; dim]; dim];
    for i in 0..n {
        for r in 0..dim {
            a[i][r] = es[i][r];
            a[n + i][r] = fs[i][r];
        }
    }
    let b = rows.len();
    Ok((b, a))
}

/// Largest deviation of `A^T A` from the identity.
pub fn orthogonality_defect(a: &[Vec<f64>]) -> f64 {
    let d = a.len();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let s: f64 = (0..d).map(|r| a[r][i] * a[r][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

/// Largest deviation of `A^T Omega A` from `Omega`.
pub fn symplectic_defect(n: usize, a: &[Vec<f64>]) -> f64 {
    let d = 2 * n;
    let b = |v: &[f64], w: &[f64]| (0..n).map(|j| v[j] * w[n + j] - v[n + j] * w[j]).sum::<f64>();
    let cols: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|r| a[r][j]).collect()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut ei = vec![0.0; d];
            let mut ej = vec![0.0; d];
            ei[i] = 1.0;
            ej[j] = 1.0;
            worst = worst.max((b(&cols[i], &cols[j]) - b(&ei, &ej)).abs());
        }
    }
    worst
}

/// Row-major JSON-friendly form `{A: [...], c}` with rationals as strings.
pub fn to_strings(m: &HLinearMap) -> (Vec<String>, String) {
    (m.a.iter().flat_map(|r| r.iter().map(|c| c.to_string())).collect(), m.c.to_string())
}

pub fn from_strings(n: usize, a: &[String], c: &str) -> Result<HLinearMap> {
    let parse = |s: &str| crate::scalar::parse_q(s).ok_or_else(|| Error::Domain(format!("bad rational {s:?}")));
    if a.len() != 4 * n * n {
        return Err(Error::DimensionMismatch { expected: 4 * n * n, found: a.len() });
    }
    let vals = a.iter().map(|s| parse(s)).collect::<Result<Vec<Q>>>()?;
    let mat: Mat = vals.chunks(2 * n).map(|r| r.to_vec()).collect();
    HLinearMap::new(n, mat, parse(c)?)
}
