//! Intrinsic graphs `w -> w phi(w)` of maps `phi: W -> V` for the splitting
//! `H^n = W V`, with `V = exp span{X_1..X_k}`.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::heis::{estimate_c_star, mul_unchecked, star_norm, Metric, Point, Splitting};
use crate::multivec::MultiVector;
use crate::poly::{Polynomial, Var};
use crate::scalar::{Scalar, Q};

/// One sampled graph value: `w` in `W` coordinates, `phi` in `R^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSample {
    pub w: Vec<f64>,
    pub phi: Vec<f64>,
}

/// A rectilinear grid in `W` coordinates; the last axis varies fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.counts).fold(0, |acc, (i, c)| acc * c + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.counts.len()];
        for a in (0..self.counts.len()).rev() {
            out[a] = flat % self.counts[a];
            flat /= self.counts[a];
        }
        out
    }

    pub fn point(&self, multi: &[usize]) -> Vec<f64> {
        multi.iter().enumerate().map(|(a, &i)| self.origin[a] + self.spacing[a] * i as f64).collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|f| self.point(&self.multi_index(f))).collect()
    }

    /// Symmetric grid `[-h, h]^dim` with `m` points per axis.
    pub fn centered(dim: usize, h: f64, m: usize) -> Grid {
        let step = if m > 1 { 2.0 * h / (m - 1) as f64 } else { 0.0 };
        Grid { origin: vec![-h; dim], spacing: vec![step; dim], counts: vec![m; dim] }
    }
}

#[derive(Clone, Debug)]
pub enum GraphBody {
    /// `k` polynomials in the ambient variables of `W` (`x_{k+1..n}, y, t`).
    Symbolic(Vec<Polynomial>),
    Sampled {
        samples: Vec<GraphSample>,
        grid: Option<Grid>,
    },
}

#[derive(Clone, Debug)]
pub struct GraphFunction {
    pub split: Splitting,
    pub body: GraphBody,
    pub lip: Option<f64>,
}

impl GraphFunction {
    pub fn symbolic(split: Splitting, phi: Vec<Polynomial>) -> Result<Self> {
        if phi.len() != split.k {
            return Err(Error::DimensionMismatch { expected: split.k, found: phi.len() });
        }
        for p in &phi {
            for m in p.terms().keys() {
                if m.pairs().iter().any(|(v, _)| (*v as usize) < split.k || *v as usize > 2 * split.n) {
                    return domain("graph polynomials may only use the coordinates of W");
                }
            }
        }
        Ok(GraphFunction { split, body: GraphBody::Symbolic(phi), lip: None })
    }

    pub fn sampled(split: Splitting, samples: Vec<GraphSample>, grid: Option<Grid>) -> Result<Self> {
        for s in &samples {
            if s.w.len() != split.w_dim() || s.phi.len() != split.k {
                return Err(Error::DimensionMismatch { expected: split.w_dim(), found: s.w.len() });
            }
        }
        Ok(GraphFunction { split, body: GraphBody::Sampled { samples, grid }, lip: None })
    }

    pub fn polys(&self) -> Result<&[Polynomial]> {
        match &self.body {
            GraphBody::Symbolic(p) => Ok(p),
            GraphBody::Sampled { .. } => domain("operation needs a symbolic graph"),
        }
    }

    /// `phi(w)` for `W` coordinates `w`.
    pub fn eval<S: Scalar>(&self, w: &[S]) -> Result<Vec<S>> {
        let amb = ambient(&self.split, w);
        match &self.body {
            GraphBody::Symbolic(p) => Ok(p.iter().map(|f| f.eval(&amb)).collect()),
            GraphBody::Sampled { .. } => domain("pointwise evaluation of sampled graphs is not interpolated"),
        }
    }

    /// Samples of a symbolic graph on a grid.
    pub fn sample_on(&self, grid: &Grid) -> Result<Vec<GraphSample>> {
        let polys = self.polys()?;
        Ok(grid
            .points()
            .into_iter()
            .map(|w| {
                let amb = ambient(&self.split, &w);
                GraphSample { phi: polys.iter().map(|p| p.eval(&amb)).collect(), w }
            })
            .collect())
    }
}

/// Ambient coordinates `(0..0, x_{k+1}.., y, t)` of a point of `W`.
pub fn ambient<S: Scalar>(s: &Splitting, w: &[S]) -> Vec<S> {
    let mut c = vec![S::zero(); s.k];
    c.extend(w.iter().cloned());
    c
}

/// `Phi(w) = w phi(w)`.
pub fn graph_map<S: Scalar>(s: &Splitting, w: &[S], phi: &[S]) -> Point<S> {
    let wp = s.w_point(w);
    mul_unchecked(&wp, &s.v_point(phi))
}

pub fn graph_point<S: Scalar>(g: &GraphFunction, w: &[S]) -> Result<Point<S>> {
    if w.len() != g.split.w_dim() {
        return Err(Error::DimensionMismatch { expected: g.split.w_dim(), found: w.len() });
    }
    let phi = g.eval(w)?;
    Ok(graph_map(&g.split, w, &phi))
}

/// Ambient coordinates of `Phi(w)` as polynomials in the variables of `W`.
pub fn graph_polys(g: &GraphFunction) -> Result<Vec<Polynomial>> {
    let s = g.split;
    let w: Vec<Polynomial> = (s.k..=2 * s.n).map(|v| Polynomial::var(v as Var)).collect();
    Ok(graph_point(g, &w)?.coords())
}

/// Largest `|phi(w) - phi(w')| / ||(Phi(w')^{-1} Phi(w))_W||` over sample pairs.
pub fn lip_constant_estimate(s: &Splitting, samples: &[GraphSample], metric: Metric) -> Result<f64> {
    if samples.len() < 2 {
        return domain("need at least two samples");
    }
    let pts: Vec<Point<f64>> = samples.iter().map(|g| graph_map(s, &g.w, &g.phi)).collect();
    let worst = (0..pts.len())
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut best: f64 = 0.0;
            for j in 0..pts.len() {
                if i == j {
                    continue;
                }
                let dv: f64 = samples[i].phi.iter().zip(&samples[j].phi).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                if dv == 0.0 {
                    continue;
                }
                let q = mul_unchecked(&pts[j].inverse(), &pts[i]);
                let (w, _) = s.split(&q)?;
                let dw = metric.norm(&w);
                if dw == 0.0 {
                    return Err(Error::Domain("coincident W points with different values".into()));
                }
                best = best.max(dv / dw);
            }
            Ok(best)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// `phi_{wbar}(w) = phi(wbar)^{-1} phi(pbar w phi(wbar)^{-1})`, so that its graph is `Phi(wbar)^{-1} gr phi`.
pub fn translate_graph(g: &GraphFunction, wbar: &[Q]) -> Result<GraphFunction> {
    let s = g.split;
    let polys = g.polys()?;
    let phibar = g.eval(wbar)?;
    let pbar = graph_map(&s, wbar, &phibar).map(|c| Polynomial::constant(c.clone()));
    let vinv = s.v_point(&phibar).inverse().map(|c| Polynomial::constant(c.clone()));
    let w: Vec<Polynomial> = (s.k..=2 * s.n).map(|v| Polynomial::var(v as Var)).collect();
    let q = mul_unchecked(&mul_unchecked(&pbar, &s.w_point(&w)), &vinv);
    let qc = q.coords();
    debug_assert!(qc[..s.k].iter().all(|c| c.is_zero()));
    let out: Vec<Polynomial> = polys.iter().zip(&phibar).map(|(p, c)| &p.compose(&qc) - &Polynomial::constant(c.clone())).collect();
    GraphFunction::symbolic(s, out)
}

/// `phi^r(w) = r phi(delta_{1/r} w)`, whose graph is `delta_r gr phi`.
pub fn dilate_graph(g: &GraphFunction, r: &Q) -> Result<GraphFunction> {
    let s = g.split;
    if !r.is_positive() {
        return domain("dilation factor must be positive");
    }
    let polys = g.polys()?;
    if polys.iter().any(|p| !p.terms().get(&crate::poly::Monomial::one()).is_none_or(|c| c.is_zero())) {
        return domain("dilation of graphs needs phi(0) = 0");
    }
    let inv = r.recip();
    let mut subs = BTreeMap::new();
    for v in 0..2 * s.n {
        subs.insert(v as Var, Polynomial::var(v as Var).scale(&inv));
    }
    subs.insert((2 * s.n) as Var, Polynomial::var((2 * s.n) as Var).scale(&(&inv * &inv)));
    GraphFunction::symbolic(s, polys.iter().map(|p| p.substitute(&subs).scale(r)).collect())
}

/// The field `nabla^phi_i` (1-based `i` in `k+1..=2n`) applied to `f`.
pub fn nabla_field(s: &Splitting, phi: &[Polynomial], i: usize, f: &Polynomial) -> Polynomial {
    let n = s.n;
    assert!(i > s.k && i <= 2 * n, "nabla index out of range");
    let t = (2 * n) as Var;
    let ft = f.derivative(t);
    let half = Q::new(1.into(), 2.into());
    if i <= n {
        &f.derivative((i - 1) as Var) - &(&Polynomial::var((n + i - 1) as Var) * &ft).scale(&half)
    } else if i <= n + s.k {
        &f.derivative((i - 1) as Var) + &(&phi[i - n - 1] * &ft)
    } else {
        &f.derivative((i - 1) as Var) + &(&Polynomial::var((i - n - 1) as Var) * &ft).scale(&half)
    }
}

/// Symbolic intrinsic gradient: `k` rows, `2n - k` columns (fields `k+1..2n`).
pub fn intrinsic_gradient_symbolic(g: &GraphFunction) -> Result<Vec<Vec<Polynomial>>> {
    let s = g.split;
    let phi = g.polys()?;
    Ok(phi.iter().map(|f| (s.k + 1..=2 * s.n).map(|i| nabla_field(&s, phi, i, f)).collect()).collect())
}

pub fn intrinsic_gradient<S: Scalar>(g: &GraphFunction, w: &[S]) -> Result<Vec<Vec<S>>> {
    let amb = ambient(&g.split, w);
    Ok(intrinsic_gradient_symbolic(g)?.iter().map(|r| r.iter().map(|p| p.eval(&amb)).collect()).collect())
}

/// Finite-difference intrinsic gradient of grid samples at node `multi` (central, one-sided on the boundary).
pub fn intrinsic_gradient_sampled(s: &Splitting, grid: &Grid, values: &[Vec<f64>], multi: &[usize]) -> Result<Vec<Vec<f64>>> {
    if values.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
    }
    let dim = s.w_dim();
    let partial = |axis: usize, h: usize| -> f64 {
        let c = grid.counts[axis];
        if c < 2 {
            return 0.0;
        }
        let mut lo = multi.to_vec();
        let mut hi = multi.to_vec();
        let i = multi[axis];
        let (a, b) = if i == 0 {
            (0, 1)
        } else if i + 1 == c {
            (c - 2, c - 1)
        } else {
            (i - 1, i + 1)
        };
        lo[axis] = a;
        hi[axis] = b;
        (values[grid.index_of(&hi)][h] - values[grid.index_of(&lo)][h]) / (grid.spacing[axis] * (b - a) as f64)
    };
    let w = grid.point(multi);
    let phi = &values[grid.index_of(multi)];
    let amb = ambient(s, &w);
    let n = s.n;
    let tax = dim - 1;
    let mut out = vec![vec![0.0; 2 * n - s.k]; s.k];
    for (h, row) in out.iter_mut().enumerate() {
        for (col, i) in (s.k + 1..=2 * n).enumerate() {
            let d = partial(i - 1 - s.k, h);
            let dt = partial(tax, h);
            row[col] = if i <= n {
                d - 0.5 * amb[n + i - 1] * dt
            } else if i <= n + s.k {
                d + phi[i - n - 1] * dt
            } else {
                d + 0.5 * amb[i - n - 1] * dt
            };
        }
    }
    Ok(out)
}

fn det<S: Scalar>(m: &[Vec<S>]) -> S {
    match m.len() {
        0 => S::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        d => {
            let mut acc = S::zero();
            for j in 0..d {
                let minor: Vec<Vec<S>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
                let term = m[0][j].clone() * det(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

fn index_subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    crate::multivec::blades_of_grade(n, r).into_iter().map(crate::multivec::blade_indices).collect()
}

/// `1 + sum of squared minors of all sizes`.
pub fn jacobian_sq<S: Scalar>(m: &[Vec<S>]) -> S {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut acc = S::one();
    for r in 1..=rows.min(cols) {
        for rs in index_subsets(rows, r) {
            for cs in index_subsets(cols, r) {
                let sub: Vec<Vec<S>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                let d = det(&sub);
                acc = acc + d.clone() * d;
            }
        }
    }
    acc
}

pub fn intrinsic_jacobian(m: &[Vec<f64>]) -> f64 {
    jacobian_sq(m).sqrt()
}

/// `nabla_i Phi = W_i + sum_h nabla_i phi_h X_h` for `i = k+1..2n`, as coordinate vectors of length `2n+1`.
pub fn nabla_phi_vectors<S: Scalar>(s: &Splitting, grad: &[Vec<S>]) -> Vec<Vec<S>> {
    (s.k + 1..=2 * s.n)
        .enumerate()
        .map(|(col, i)| {
            let mut v = vec![S::zero(); 2 * s.n + 1];
            v[i - 1] = S::one();
            for (h, row) in grad.iter().enumerate() {
                v[h] = row[col].clone();
            }
            v
        })
        .collect()
}

/// `nabla_{k+1} Phi ^ .. ^ nabla_{2n} Phi ^ T` at a rational point (not normalized).
pub fn tangent_multivector(g: &GraphFunction, w: &[Q]) -> Result<MultiVector> {
    let s = g.split;
    let grad = intrinsic_gradient(g, w)?;
    let mut vecs = nabla_phi_vectors(&s, &grad);
    let mut t = vec![Q::zero(); 2 * s.n + 1];
    t[2 * s.n] = Q::one();
    vecs.push(t);
    Ok(MultiVector::wedge_vectors(s.n, &vecs))
}

/// Squared norm of the wedge of the rows of `V`: the sum of squared maximal minors,
/// which equals `det(V V^T)` without squaring the conditioning.
pub fn gram_det<S: Scalar>(vecs: &[Vec<S>]) -> S {
    let rows = vecs.len();
    let cols = vecs.first().map_or(0, |r| r.len());
    if rows > cols {
        return S::zero();
    }
    let mut acc = S::zero();
    for cs in index_subsets(cols, rows) {
        let sub: Vec<Vec<S>> = vecs.iter().map(|r| cs.iter().map(|&j| r[j].clone()).collect()).collect();
        let d = det(&sub);
        acc = acc + d.clone() * d;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct BlowupReport {
    pub radii: Vec<Q>,
    pub distances: Vec<f64>,
    pub limit: Vec<Vec<Q>>,
}

impl BlowupReport {
    pub fn decreasing(&self) -> bool {
        self.distances.windows(2).all(|w| w[1] <= w[0] + 1e-15)
    }
}

/// Sup distance on `[-h, h]^dim` between `(phi_{wbar})^r` and the intrinsic linear map with the gradient at `wbar`.
pub fn blowup_probe(g: &GraphFunction, wbar: &[Q], radii: &[Q], h: f64, per_axis: usize) -> Result<BlowupReport> {
    let s = g.split;
    let tr = translate_graph(g, wbar)?;
    let m = intrinsic_gradient(g, wbar)?;
    let grid = Grid::centered(s.w_dim(), h, per_axis);
    let pts = grid.points();
    let mf: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(crate::scalar::to_f64).collect()).collect();
    let mut distances = Vec::new();
    for r in radii {
        let d = dilate_graph(&tr, r)?;
        let worst = pts
            .par_iter()
            .map(|w| {
                let v = d.eval(w).expect("symbolic");
                let lin: Vec<f64> = mf.iter().map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum()).collect();
                v.iter().zip(&lin).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        distances.push(worst);
    }
    Ok(BlowupReport { radii: radii.to_vec(), distances, limit: m })
}

/// The intrinsic linear map `w -> M w_H` as a symbolic graph.
pub fn intrinsic_linear(s: Splitting, m: &[Vec<Q>]) -> Result<GraphFunction> {
    if m.len() != s.k || m.iter().any(|r| r.len() != 2 * s.n - s.k) {
        return Err(Error::DimensionMismatch { expected: 2 * s.n - s.k, found: m.first().map_or(0, |r| r.len()) });
    }
    let polys = m
        .iter()
        .map(|row| row.iter().enumerate().fold(Polynomial::zero(), |acc, (c, a)| &acc + &Polynomial::var((s.k + c) as Var).scale(a)))
        .collect();
    GraphFunction::symbolic(s, polys)
}

/// How `beta` is chosen from the aperture `alpha = 1/(2 lip)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaRule {
    /// `beta = k C_*^2 / alpha`.
    #[serde(rename = "cstar")]
    CStar,
    /// `beta = c_W sqrt(1 + (k-1) eps^2) / alpha` with `c_W = sup ||w|| / ||w||_*` on `W`;
    /// the smallest value for which the same two inequalities give `C_{i,beta,eps} in C_alpha`.
    #[default]
    Sharp,
}

impl std::str::FromStr for BetaRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cstar" => Ok(BetaRule::CStar),
            "sharp" => Ok(BetaRule::Sharp),
            _ => domain(format!("unknown beta rule `{s}` (expected cstar or sharp)")),
        }
    }
}

/// `sup ||w|| / ||w||_*` over `W`, for both metrics: `max((2n-k)^(1/4), 2)`.
pub fn w_norm_ratio(s: &Splitting) -> f64 {
    ((2 * s.n - s.k) as f64).powf(0.25).max(2.0)
}

/// Parameters of the cone functions used by the extension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeParams {
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    /// Coercivity constant claimed for the envelope map.
    pub delta: f64,
}

impl ConeParams {
    /// `alpha = 1/(2 lip)`, `eps = 1/(6(k^2 - k))` for `k >= 2`, and `beta` by `rule`.
    pub fn for_lipschitz(s: &Splitting, lip: f64, c_star: f64, rule: BetaRule) -> Self {
        let k = s.k as f64;
        let alpha = 1.0 / (2.0 * lip.max(1e-9));
        let (eps, delta) = if s.k == 1 { (0.5, 1.0) } else { (1.0 / (6.0 * (k * k - k)), 0.5) };
        let beta = match rule {
            BetaRule::CStar => k * c_star * c_star / alpha,
            BetaRule::Sharp => w_norm_ratio(s) * (1.0 + (k - 1.0) * eps * eps).sqrt() / alpha,
        };
        ConeParams { alpha, beta, eps, delta }
    }
}

/// `f_{i, beta, eps}(p)` from the three-case formula, `i` 1-based in `1..=k`.
pub fn cone_function(s: &Splitting, i: usize, beta: f64, eps: f64, p: &Point<f64>) -> f64 {
    let (w, _) = s.split(p).expect("matching dimension");
    cone_value(s, i, beta, eps, &p.x[..s.k], &w)
}

fn cone_value(s: &Splitting, i: usize, beta: f64, eps: f64, xv: &[f64], w: &Point<f64>) -> f64 {
    let mut sum = xv[i - 1];
    for (j, x) in xv.iter().enumerate().take(s.k) {
        if j != i - 1 {
            sum += eps * x;
        }
    }
    cone_piecewise(sum, beta * star_norm(w))
}

fn cone_piecewise(sum: f64, r: f64) -> f64 {
    if sum.abs() <= 2.0 * r {
        2.0 * (sum - r)
    } else if sum > 0.0 {
        sum
    } else {
        3.0 * sum
    }
}

/// `max_y f_{i,beta,eps}(y^{-1} p)` over the graph points `ys`.
pub fn sup_envelope(s: &Splitting, ys: &[Point<f64>], i: usize, c: &ConeParams, p: &Point<f64>) -> Result<f64> {
    if ys.is_empty() {
        return domain("sup envelope over an empty sample");
    }
    Ok(ys.iter().map(|y| cone_function(s, i, c.beta, c.eps, &mul_unchecked(&y.inverse(), p))).fold(f64::NEG_INFINITY, f64::max))
}

/// The envelope along one coset `w V`. For a sample `y = w_s v_s` and `v = v_s u`,
/// `y^{-1} w v = (v_s^{-1} w_s^{-1} w v_s) u`, so the `W` factor does not depend on `v`
/// and is exactly zero when `w` is the sample's own point.
struct CosetEnvelope<'a> {
    s: Splitting,
    c: ConeParams,
    parts: Vec<(f64, &'a [f64])>,
}

impl<'a> CosetEnvelope<'a> {
    fn new(s: Splitting, c: ConeParams, samples: &'a [GraphSample], w: &[f64]) -> Self {
        let wp = s.w_point(w);
        let parts = samples
            .iter()
            .map(|g| {
                let d = mul_unchecked(&s.w_point(&g.w).inverse(), &wp);
                let vs = s.v_point(&g.phi);
                let e = mul_unchecked(&mul_unchecked(&vs.inverse(), &d), &vs);
                (star_norm(&e), g.phi.as_slice())
            })
            .collect();
        CosetEnvelope { s, c, parts }
    }

    fn component(&self, v: &[f64], i: usize) -> f64 {
        let k = self.s.k;
        let mut best = f64::NEG_INFINITY;
        for (norm, phi) in &self.parts {
            let mut sum = v[i] - phi[i];
            for j in 0..k {
                if j != i {
                    sum += self.c.eps * (v[j] - phi[j]);
                }
            }
            best = best.max(cone_piecewise(sum, self.c.beta * norm));
        }
        best
    }
}

const MAX_EXPAND: usize = 80;

/// Root of a monotone increasing-in-sign-change function by bracket expansion and the Illinois method.
fn bracket_root(f: &dyn Fn(f64) -> f64, start: f64, tol: f64) -> Result<f64> {
    let f0 = f(start);
    if f0 == 0.0 {
        return Ok(start);
    }
    let dir = if f0 < 0.0 { 1.0 } else { -1.0 };
    let mut step = 1.0f64.max(start.abs() * 1e-3);
    let (mut a, mut fa) = (start, f0);
    let (mut b, mut fb);
    let mut n = 0;
    loop {
        b = start + dir * step;
        fb = f(b);
        if fb == 0.0 {
            return Ok(b);
        }
        if fb * f0 < 0.0 {
            break;
        }
        a = b;
        fa = fb;
        step *= 2.0;
        n += 1;
        if n >= MAX_EXPAND {
            return Err(Error::NoConvergence("no sign change: input is not coercive".into()));
        }
    }
    let xtol = tol * 1e-3;
    let mut side = 0i8;
    for _ in 0..400 {
        let c = if (b - a).abs() <= xtol * (1.0 + a.abs()) {
            return Ok(0.5 * (a + b));
        } else {
            let r = b - fb * (b - a) / (fb - fa);
            if r.is_finite() && r > a.min(b) && r < a.max(b) {
                r
            } else {
                0.5 * (a + b)
            }
        };
        let fc = f(c);
        if fc == 0.0 || fc.abs() <= tol * 1e-3 {
            return Ok(c);
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            side = 0;
        } else {
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        b = c;
        fb = fc;
    }
    Ok(0.5 * (a + b))
}

fn zero_rec(f: &(dyn Fn(&[f64], usize) -> f64 + Sync), d: usize, start: &[f64], tol: f64) -> Result<Vec<f64>> {
    if d == 1 {
        return Ok(vec![bracket_root(&|x| f(&[x], 0), start[0], tol)?]);
    }
    // g(z) solves f_d(z, g(z)) = 0 in the last coordinate.
    let last = d - 1;
    let g = |z: &[f64]| -> Result<f64> {
        bracket_root(
            &|s| {
                let mut x = z.to_vec();
                x.push(s);
                f(&x, last)
            },
            start[last],
            tol,
        )
    };
    let failed = std::sync::Mutex::new(None);
    let h = |z: &[f64], i: usize| -> f64 {
        match g(z) {
            Ok(s) => {
                let mut x = z.to_vec();
                x.push(s);
                f(&x, i)
            }
            Err(e) => {
                *failed.lock().unwrap() = Some(e);
                0.0
            }
        }
    };
    let z = zero_rec(&h, d - 1, &start[..last], tol)?;
    if let Some(e) = failed.into_inner().unwrap() {
        return Err(e);
    }
    let s = g(&z)?;
    let mut x = z;
    x.push(s);
    Ok(x)
}

/// Zero of a coercive map by reduction on the last coordinate; `f(x, i)` is the `i`-th component.
pub fn coercive_zero_components(f: &(dyn Fn(&[f64], usize) -> f64 + Sync), k: usize, start: &[f64], tol: f64) -> Result<Vec<f64>> {
    if k == 0 || start.len() != k {
        return domain("coercive_zero needs a starting point in R^k with k >= 1");
    }
    zero_rec(f, k, start, tol)
}

/// Zero of a Lipschitz, coercive map `R^k -> R^k`; the residual is checked against `tol`.
pub fn coercive_zero(f: &(dyn Fn(&[f64]) -> Vec<f64> + Sync), k: usize, start: &[f64], tol: f64) -> Result<Vec<f64>> {
    let x = coercive_zero_components(&|x, i| f(x)[i], k, start, tol)?;
    let res = f(&x).iter().map(|c| c.abs()).fold(0.0, f64::max);
    if res > tol {
        return Err(Error::NoConvergence(format!("residual {res:e} above tolerance {tol:e}")));
    }
    Ok(x)
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub values: Vec<GraphSample>,
    pub lip_in: f64,
    pub params: ConeParams,
    pub c_star: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ExtendOptions {
    pub metric: Metric,
    /// Known Lipschitz constant; estimated from the samples when absent.
    pub lip: Option<f64>,
    pub rule: BetaRule,
    pub tol: f64,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        ExtendOptions { metric: Metric::DInfinity, lip: None, rule: BetaRule::Sharp, tol: 1e-12 }
    }
}

/// Extend sampled values to the target points by solving `F(w v) = 0` for `v`,
/// with `F` the vector of sup-envelopes of cone functions.
pub fn extend(s: &Splitting, samples: &[GraphSample], targets: &[Vec<f64>], opts: &ExtendOptions) -> Result<Extension> {
    if samples.is_empty() {
        return domain("extension needs at least one sample");
    }
    if let Some(t) = targets.iter().find(|t| t.len() != s.w_dim()) {
        return Err(Error::DimensionMismatch { expected: s.w_dim(), found: t.len() });
    }
    let lip_in = match opts.lip {
        Some(l) => l,
        None if samples.len() >= 2 => lip_constant_estimate(s, samples, opts.metric)?,
        None => 0.0,
    };
    let c_star = estimate_c_star(s.n, opts.metric, 20_000, 0);
    let params = ConeParams::for_lipschitz(s, lip_in, c_star, opts.rule);
    let start: Vec<f64> = vec![0.0; s.k];
    let values = targets
        .par_iter()
        .map(|w| -> Result<GraphSample> {
            let env = CosetEnvelope::new(*s, params, samples, w);
            let v = coercive_zero_components(&|v, i| env.component(v, i), s.k, &start, opts.tol)?;
            Ok(GraphSample { w: w.clone(), phi: v })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Extension { values, lip_in, params, c_star })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr, to_f64};

    fn h1() -> Splitting {
        Splitting::new(1, 1).unwrap()
    }

    fn y(n: usize, i: usize) -> Polynomial {
        Polynomial::var((n + i - 1) as Var)
    }

    fn t(n: usize) -> Polynomial {
        Polynomial::var((2 * n) as Var)
    }

    #[test]
    fn graph_map_values() {
        let s = h1();
        let p = graph_map(&s, &[2.0, 0.0], &[1.0]);
        assert_eq!(p.coords(), vec![1.0, 2.0, -1.0]);
        let g = GraphFunction::symbolic(s, vec![Polynomial::zero()]).unwrap();
        assert_eq!(graph_point(&g, &[q(3), q(4)]).unwrap().coords(), vec![q(0), q(3), q(4)]);
    }

    #[test]
    fn lip_examples() {
        let s = h1();
        let zero = GraphFunction::symbolic(s, vec![Polynomial::zero()]).unwrap();
        let grid = Grid::centered(2, 1.0, 9);
        assert_eq!(lip_constant_estimate(&s, &zero.sample_on(&grid).unwrap(), Metric::DInfinity).unwrap(), 0.0);
        let lin = GraphFunction::symbolic(s, vec![y(1, 1)]).unwrap();
        let l = lip_constant_estimate(&s, &lin.sample_on(&Grid::centered(2, 1.0, 21)).unwrap(), Metric::DInfinity).unwrap();
        assert!((l - 1.0).abs() < 1e-12, "{l}");
        let dup = vec![GraphSample { w: vec![0.0, 0.0], phi: vec![0.0] }, GraphSample { w: vec![0.0, 0.0], phi: vec![1.0] }];
        assert!(lip_constant_estimate(&s, &dup, Metric::DInfinity).is_err());
    }

    #[test]
    fn gradients() {
        let s = h1();
        let g = GraphFunction::symbolic(s, vec![t(1)]).unwrap();
        assert_eq!(intrinsic_gradient_symbolic(&g).unwrap(), vec![vec![t(1)]]);
        let s2 = Splitting::new(2, 1).unwrap();
        let m = vec![vec![q(1), q(-2), qr(1, 3)]];
        let lin = intrinsic_linear(s2, &m).unwrap();
        assert_eq!(intrinsic_gradient(&lin, &[q(5), q(-1), q(2), q(7)]).unwrap(), m);
        let c = GraphFunction::symbolic(s, vec![Polynomial::constant(q(4))]).unwrap();
        assert_eq!(intrinsic_gradient(&c, &[q(1), q(1)]).unwrap(), vec![vec![q(0)]]);
        assert_eq!(jacobian_sq(&[vec![q(2), q(3)]]), q(14));
        assert_eq!(intrinsic_jacobian(&[vec![0.0, 0.0]]), 1.0);
    }

    #[test]
    fn tangents() {
        let s = h1();
        let g = GraphFunction::symbolic(s, vec![Polynomial::zero()]).unwrap();
        let tm = tangent_multivector(&g, &[q(1), q(2)]).unwrap();
        assert_eq!(tm, MultiVector::y(1, 1).wedge(&MultiVector::t(1)));
    }

    #[test]
    fn translate_and_dilate() {
        let s = h1();
        let g = GraphFunction::symbolic(s, vec![y(1, 1).pow(2)]).unwrap();
        let d = dilate_graph(&g, &q(4)).unwrap();
        assert_eq!(d.polys().unwrap()[0], y(1, 1).pow(2).scale(&qr(1, 4)));
        let lin = intrinsic_linear(s, &[vec![q(3)]]).unwrap();
        let tr = translate_graph(&lin, &[q(1), q(2)]).unwrap();
        assert_eq!(tr.polys().unwrap(), lin.polys().unwrap());
        assert!(dilate_graph(&GraphFunction::symbolic(s, vec![Polynomial::one()]).unwrap(), &q(2)).is_err());
    }

    #[test]
    fn blowups() {
        let s = h1();
        let g = GraphFunction::symbolic(s, vec![y(1, 1).pow(2)]).unwrap();
        let rep = blowup_probe(&g, &[q(0), q(0)], &[q(1), q(2), q(4)], 1.0, 5).unwrap();
        for (r, d) in rep.radii.iter().zip(&rep.distances) {
            assert!((d - 1.0 / to_f64(r)).abs() < 1e-12);
        }
        assert!(rep.decreasing());
    }

    #[test]
    fn cones() {
        let s = Splitting::new(2, 2).unwrap();
        let zero = Point::identity(2);
        assert_eq!(cone_function(&s, 1, 1.0, 0.1, &zero), 0.0);
        let p = Point::from_coords(&[2.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((cone_function(&s, 1, 1.0, 0.1, &p) - 2.1).abs() < 1e-15);
    }

    #[test]
    fn zero_finding() {
        let x = coercive_zero(&|x: &[f64]| vec![x[0] - 3.0], 1, &[0.0], 1e-12).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12);
        // A = [[2, 1], [1, 3]], b = (1, -2): zero at -A^{-1} b = (-1, 1).
        let f = |x: &[f64]| vec![2.0 * x[0] + x[1] + 1.0, x[0] + 3.0 * x[1] - 2.0];
        let z = coercive_zero(&f, 2, &[0.0, 0.0], 1e-12).unwrap();
        assert!((z[0] + 1.0).abs() < 1e-10 && (z[1] - 1.0).abs() < 1e-10, "{z:?}");
    }
}
