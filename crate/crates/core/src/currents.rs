//! Heisenberg currents carried by smooth intrinsic graphs, evaluated by quadrature.
//!
//! A test form is a polynomial core times a polynomial bump in the `W`
//! coordinates `u(p)` of the point, the `W` factor of `p = w v`. On a graph
//! `u(Phi(w)) = w`, so the support along the graph is the bump's box.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::forms::{JetCtx, PolyForm};
use crate::graphs::{ambient, graph_polys, intrinsic_gradient_symbolic, jacobian_sq, nabla_phi_vectors, GraphFunction};
use crate::heis::{mul_unchecked, Metric, Point, Splitting};
use crate::hmaps::HLinearMap;
use crate::jet::Jet;
use crate::multivec::{blade_indices, Blade};
use crate::poly::{Polynomial, Var};
use crate::quadrature::QuadratureSpec;
use crate::scalar::{to_f64, Scalar, Q};

/// The bump `prod (1 - ((u_a - c_a)/R_a)^2)^4` on the box `|u_a - c_a| <= R_a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub split: Splitting,
    pub center: Vec<f64>,
    pub radius: Vec<f64>,
}

impl Window {
    pub fn new(split: Splitting, center: Vec<f64>, radius: Vec<f64>) -> Result<Self> {
        if center.len() != split.w_dim() || radius.len() != split.w_dim() {
            return Err(Error::DimensionMismatch { expected: split.w_dim(), found: center.len() });
        }
        if radius.iter().any(|r| !(*r > 0.0)) {
            return domain("window radii must be positive");
        }
        Ok(Window { split, center, radius })
    }

    pub fn centered(split: Splitting, r: f64) -> Self {
        Window { split, center: vec![0.0; split.w_dim()], radius: vec![r; split.w_dim()] }
    }

    /// `W` coordinates of a point given by ambient coordinates.
    pub fn u_coords<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        let s = self.split;
        let mut u: Vec<S> = p[s.k..].to_vec();
        let last = u.len() - 1;
        for j in 0..s.k {
            u[last] = u[last].clone() + (p[j].clone() * p[s.n + j].clone()).half();
        }
        u
    }

    fn bump<S: Scalar>(&self, u: &[S], value: impl Fn(&S) -> f64, lift: impl Fn(f64) -> S) -> S {
        let mut acc = S::one();
        for (a, ua) in u.iter().enumerate() {
            let off = value(ua) - self.center[a];
            if off.abs() >= self.radius[a] {
                return S::zero();
            }
            let z = (ua.clone() - lift(self.center[a])) * lift(1.0 / self.radius[a]);
            let b = S::one() - z.clone() * z;
            let b2 = b.clone() * b;
            acc = acc * b2.clone() * b2;
        }
        acc
    }

    pub fn value_w(&self, w: &[f64]) -> f64 {
        self.bump(w, |x| *x, |x| x)
    }

    /// Exact integral over `W`: each axis contributes `R * 256/315`.
    pub fn integral(&self) -> f64 {
        self.radius.iter().map(|r| r * 256.0 / 315.0).product()
    }

    pub fn lo(&self) -> Vec<f64> {
        self.center.iter().zip(&self.radius).map(|(c, r)| c - r).collect()
    }

    pub fn hi(&self) -> Vec<f64> {
        self.center.iter().zip(&self.radius).map(|(c, r)| c + r).collect()
    }

    fn covered_by(&self, q: &QuadratureSpec) -> bool {
        q.dim() == self.center.len()
            && self.lo().iter().zip(&q.lo).all(|(a, b)| *b <= *a + 1e-12)
            && self.hi().iter().zip(&q.hi).all(|(a, b)| *b >= *a - 1e-12)
    }
}

/// Smallest Gauss box containing the window.
pub fn window_quadrature(w: &Window, points: usize) -> QuadratureSpec {
    QuadratureSpec { lo: w.lo(), hi: w.hi(), points, rule: crate::quadrature::Rule::GaussLegendre }
}

#[derive(Clone, Debug)]
pub struct TestForm {
    pub core: PolyForm,
    pub window: Window,
}

impl TestForm {
    pub fn new(core: PolyForm, window: Window) -> Result<Self> {
        if core.n() != window.split.n {
            return Err(Error::DimensionMismatch { expected: window.split.n, found: core.n() });
        }
        if core.grade().is_none() && !core.is_zero() {
            return domain("test forms must be homogeneous");
        }
        if core.n() > 3 {
            return domain("test forms are evaluated for n <= 3");
        }
        Ok(TestForm { core, window })
    }

    pub fn degree(&self) -> Option<usize> {
        self.core.grade()
    }

    /// Covector coefficients of the form at a point.
    pub fn at(&self, p: &[f64]) -> BTreeMap<Blade, f64> {
        let u = self.window.u_coords(p);
        let w = self.window.value_w(&u);
        if w == 0.0 {
            return BTreeMap::new();
        }
        self.core.terms().iter().map(|(b, c)| (*b, w * c.eval(p))).collect()
    }

    /// `d_C omega` at a point, through second-order jets of the coefficients.
    pub fn d_c_at(&self, p: &[f64]) -> Result<BTreeMap<Blade, f64>> {
        let ctx = JetCtx::new(p);
        let coords: Vec<Jet> = (0..p.len()).map(|v| ctx.coord(v)).collect();
        let u = self.window.u_coords(&coords);
        let w = self.window.bump(&u, |j| j.value(), Jet::constant);
        if w.value() == 0.0 && w.0.iter().all(|c| *c == 0.0) {
            return Ok(BTreeMap::new());
        }
        let f = self.core.to_jets(&ctx).scale(&w);
        let dc = f.d_c(&ctx)?;
        Ok(dc.values(|j| j.value()))
    }

    /// `delta_r^* omega`: the core is pulled back and the bump box shrinks by the dilation.
    pub fn dilation_pullback(&self, r: &Q) -> Result<TestForm> {
        if !r.is_positive() {
            return domain("dilation factor must be positive");
        }
        let n = self.core.n();
        let core = HLinearMap::dilation(n, r).pull_polyform(&self.core);
        let rf = to_f64(r);
        let last = self.window.center.len() - 1;
        let sc = |a: usize| if a == last { rf * rf } else { rf };
        let center = self.window.center.iter().enumerate().map(|(a, c)| c / sc(a)).collect();
        let radius = self.window.radius.iter().enumerate().map(|(a, c)| c / sc(a)).collect();
        TestForm::new(core, Window::new(self.window.split, center, radius)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentValue {
    pub value: f64,
    /// Difference from the same rule at half the points per axis.
    pub est_error: f64,
}

/// Precomputed symbolic data of a graph: `Phi`, its coordinate Jacobian and `nabla^phi phi`.
#[derive(Clone, Debug)]
pub struct GraphEval {
    pub split: Splitting,
    graph: Vec<Polynomial>,
    jac: Vec<Vec<Polynomial>>,
    grad: Vec<Vec<Polynomial>>,
}

impl GraphEval {
    pub fn new(g: &GraphFunction) -> Result<Self> {
        let split = g.split;
        let graph = graph_polys(g)?;
        let jac = (0..split.w_dim()).map(|a| graph.iter().map(|c| c.derivative(split.w_axis(a) as Var)).collect()).collect();
        Ok(GraphEval { split, graph, jac, grad: intrinsic_gradient_symbolic(g)? })
    }

    pub fn point(&self, w: &[f64]) -> Vec<f64> {
        let amb = ambient(&self.split, w);
        self.graph.iter().map(|c| c.eval(&amb)).collect()
    }

    pub fn gradient(&self, w: &[f64]) -> Vec<Vec<f64>> {
        let amb = ambient(&self.split, w);
        self.grad.iter().map(|r| r.iter().map(|p| p.eval(&amb)).collect()).collect()
    }

    /// `nabla_{k+1} Phi, .., nabla_{2n} Phi, T` in frame coordinates.
    pub fn heisenberg_vectors(&self, w: &[f64]) -> Vec<Vec<f64>> {
        let n = self.split.n;
        let mut v = nabla_phi_vectors(&self.split, &self.gradient(w));
        let mut t = vec![0.0; 2 * n + 1];
        t[2 * n] = 1.0;
        v.push(t);
        v
    }

    /// `d Phi / d w_a` in frame coordinates.
    pub fn classical_vectors(&self, w: &[f64]) -> Vec<Vec<f64>> {
        let n = self.split.n;
        let amb = ambient(&self.split, w);
        let p = self.point(w);
        self.jac
            .iter()
            .map(|col| {
                let mut v: Vec<f64> = col.iter().map(|c| c.eval(&amb)).collect();
                let mut tt = v[2 * n];
                for j in 0..n {
                    tt += 0.5 * p[n + j] * v[j] - 0.5 * p[j] * v[n + j];
                }
                v[2 * n] = tt;
                v
            })
            .collect()
    }

    pub fn jacobian(&self, w: &[f64]) -> f64 {
        jacobian_sq(&self.gradient(w)).sqrt()
    }
}

fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let d = m.len();
    let mut det = 1.0;
    for c in 0..d {
        let piv = (c..d).max_by(|a, b| m[*a][c].abs().total_cmp(&m[*b][c].abs())).unwrap();
        if m[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..d {
            let f = m[r][c] / m[c][c];
            for j in c..d {
                m[r][j] -= f * m[c][j];
            }
        }
    }
    det
}

/// `<v_1 ^ .. ^ v_m | omega>` for frame-coordinate vectors.
pub fn pair_vectors(vecs: &[Vec<f64>], omega: &BTreeMap<Blade, f64>) -> f64 {
    let m = vecs.len();
    omega
        .iter()
        .filter(|(b, c)| b.count_ones() as usize == m && **c != 0.0)
        .map(|(b, c)| {
            let idx = blade_indices(*b);
            c * det_f64(vecs.iter().map(|v| idx.iter().map(|&i| v[i]).collect()).collect())
        })
        .sum()
}

fn check_box(omega: &TestForm, split: &Splitting, q: &QuadratureSpec) -> Result<()> {
    q.validate()?;
    if omega.window.split != *split {
        return domain("test form window and graph use different splittings");
    }
    if !omega.window.covered_by(q) {
        return domain("quadrature box must cover the window support");
    }
    Ok(())
}

fn with_error<F: Fn(&[f64]) -> f64 + Sync>(q: &QuadratureSpec, f: F) -> CurrentValue {
    let value = q.integrate(&f);
    let coarse = q.with_points((q.points / 2).max(1)).integrate(&f);
    CurrentValue { value, est_error: (value - coarse).abs() }
}

/// `[[gr phi]](omega) = C_{n,k} int_W <nabla Phi ^ T | omega(Phi(w))> dw`.
pub fn eval_graph_current(g: &GraphFunction, omega: &TestForm, q: &QuadratureSpec, cnk: f64) -> Result<CurrentValue> {
    let s = g.split;
    let m = s.w_dim();
    if !omega.core.is_zero() && omega.degree() != Some(m) {
        return Err(Error::GradeMismatch(m, omega.degree().unwrap_or(0)));
    }
    if !omega.core.in_j() {
        return domain("test form must take values in J");
    }
    check_box(omega, &s, q)?;
    let ge = GraphEval::new(g)?;
    Ok(scaled(with_error(q, |w| pair_vectors(&ge.heisenberg_vectors(w), &omega.at(&ge.point(w)))), cnk))
}

fn scaled(v: CurrentValue, c: f64) -> CurrentValue {
    CurrentValue { value: c * v.value, est_error: c * v.est_error }
}

/// `int_{gr phi} omega`, the pullback under `Phi` integrated in the `W` coordinate order.
pub fn eval_classical_current(g: &GraphFunction, omega: &TestForm, q: &QuadratureSpec) -> Result<CurrentValue> {
    let s = g.split;
    let m = s.w_dim();
    if !omega.core.is_zero() && omega.degree() != Some(m) {
        return Err(Error::GradeMismatch(m, omega.degree().unwrap_or(0)));
    }
    check_box(omega, &s, q)?;
    let ge = GraphEval::new(g)?;
    Ok(with_error(q, |w| pair_vectors(&ge.classical_vectors(w), &omega.at(&ge.point(w)))))
}

fn check_boundary_form(g: &GraphFunction, omega: &TestForm, q: &QuadratureSpec) -> Result<()> {
    let s = g.split;
    let m = s.w_dim() - 1;
    if !omega.core.is_zero() && omega.degree() != Some(m) {
        return Err(Error::GradeMismatch(m, omega.degree().unwrap_or(0)));
    }
    if m > s.n && !omega.core.in_j() {
        return domain("forms of degree above n must take values in J");
    }
    check_box(omega, &s, q)
}

/// `(d [[gr phi]])(omega) = [[gr phi]](d_C omega)` for `omega` of degree `2n - k`.
pub fn boundary_eval(g: &GraphFunction, omega: &TestForm, q: &QuadratureSpec, cnk: f64) -> Result<CurrentValue> {
    check_boundary_form(g, omega, q)?;
    let ge = GraphEval::new(g)?;
    Ok(scaled(
        with_error(q, |w| {
            let dc = omega.d_c_at(&ge.point(w)).expect("form validated");
            pair_vectors(&ge.heisenberg_vectors(w), &dc)
        }),
        cnk,
    ))
}

/// `C_{n,k} int_W J(w) |d_C omega(Phi(w))| dw`, the natural size of a boundary value.
pub fn mass_scale(g: &GraphFunction, omega: &TestForm, q: &QuadratureSpec, cnk: f64) -> Result<f64> {
    check_boundary_form(g, omega, q)?;
    let ge = GraphEval::new(g)?;
    Ok(cnk
        * q.integrate(|w| {
            let dc = omega.d_c_at(&ge.point(w)).expect("form validated");
            ge.jacobian(w) * dc.values().map(|c| c * c).sum::<f64>().sqrt()
        }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    /// `C_{n,k} int (h o Phi) J dw`.
    pub area_side: f64,
    /// The same mass through the current pairing with `h` times the unit dual of the tangent.
    pub current_side: f64,
    pub rel_deviation: f64,
}

pub fn area_cross_check(g: &GraphFunction, window: &Window, q: &QuadratureSpec, cnk: f64) -> Result<AreaReport> {
    q.validate()?;
    if !window.covered_by(q) || window.split != g.split {
        return domain("quadrature box must cover the window support");
    }
    let ge = GraphEval::new(g)?;
    let s = g.split;
    let area_side = cnk * q.integrate(|w| window.value_w(w) * ge.jacobian(w));
    let tangent_blades: Vec<Blade> =
        crate::multivec::blades_of_grade(2 * s.n + 1, s.w_dim()).into_iter().filter(|b| b & (1 << (2 * s.n)) != 0).collect();
    let current_side = cnk
        * q.integrate(|w| {
            let v = ge.heisenberg_vectors(w);
            let h = window.value_w(&window.u_coords(&ge.point(w)));
            let dual: BTreeMap<Blade, f64> = tangent_blades
                .iter()
                .map(|b| {
                    let idx = blade_indices(*b);
                    (*b, det_f64(v.iter().map(|r| idx.iter().map(|&i| r[i]).collect()).collect()))
                })
                .collect();
            let norm = dual.values().map(|c| c * c).sum::<f64>().sqrt();
            let omega: BTreeMap<Blade, f64> = dual.into_iter().map(|(b, c)| (b, h * c / norm)).collect();
            pair_vectors(&v, &omega)
        });
    let rel_deviation = (area_side - current_side).abs() / area_side.abs().max(f64::MIN_POSITIVE);
    Ok(AreaReport { area_side, current_side, rel_deviation })
}

/// Volume of the Euclidean unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / d as f64 * unit_ball_volume(d - 2),
    }
}

/// For `d_inf` the slice `W cap B(0, 1)` is a `(2n-k)`-ball times `|t| <= 1/4`,
/// so at `p = 0` the constant is `2 / omega_{2n-k}`.
pub fn cnk_closed_form_dinf(n: usize, k: usize) -> f64 {
    2.0 / unit_ball_volume(2 * n - k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnkEstimate {
    pub n: usize,
    pub k: usize,
    pub metric: Metric,
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    /// 95% normal-approximation radius.
    pub ci: f64,
    /// Largest estimated slice measure and the candidate center attaining it.
    pub slice_measure: f64,
    pub argmax: Vec<f64>,
}

const CHUNK: usize = 1 << 14;
const CANDIDATES: usize = 32;

type CnkKey = (usize, usize, Metric, usize, u64);

fn cnk_cache() -> &'static Mutex<HashMap<CnkKey, CnkEstimate>> {
    static CACHE: OnceLock<Mutex<HashMap<CnkKey, CnkEstimate>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Monte-Carlo estimate of `(sup_p L(W cap B(p, 1)))^{-1}` over `p` in the unit ball.
///
/// Hit-or-miss in the box `|w_h| <= 2, |t| <= 1` with one sample set shared by
/// all candidate centers: the origin and random points of `B(0, 1)`.
pub fn estimate_cnk(n: usize, k: usize, metric: Metric, samples: usize, seed: u64) -> Result<CnkEstimate> {
    let s = Splitting::new(n, k)?;
    if samples == 0 {
        return domain("need a positive sample count");
    }
    let key = (n, k, metric, samples, seed);
    if let Some(e) = cnk_cache().lock().expect("cache lock").get(&key) {
        return Ok(e.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut centers = vec![Point::identity(n)];
    while centers.len() < CANDIDATES + 1 {
        let c: Vec<f64> = (0..=2 * n).map(|i| if i == 2 * n { rng.gen_range(-0.25..=0.25) } else { rng.gen_range(-1.0..=1.0) }).collect();
        let p = Point::from_coords(&c)?;
        if metric.norm(&p) <= 1.0 {
            centers.push(p);
        }
    }
    let inv: Vec<Point<f64>> = centers.iter().map(|p| p.inverse()).collect();
    let dim = s.w_dim();
    let chunks = samples.div_ceil(CHUNK);
    let hits = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut h = vec![0u64; inv.len()];
            let mut w = vec![0.0; dim];
            for _ in 0..count {
                for (a, x) in w.iter_mut().enumerate() {
                    *x = if a == dim - 1 { rng.gen_range(-1.0..1.0) } else { rng.gen_range(-2.0..2.0) };
                }
                let q = s.w_point(&w);
                for (i, pi) in inv.iter().enumerate() {
                    if metric.norm(&mul_unchecked(pi, &q)) <= 1.0 {
                        h[i] += 1;
                    }
                }
            }
            h
        })
        .reduce(|| vec![0u64; inv.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let vol = 4f64.powi((dim - 1) as i32) * 2.0;
    let (best, &hb) = hits.iter().enumerate().max_by_key(|(_, h)| **h).expect("nonempty");
    if hb == 0 {
        return Err(Error::NoConvergence("no Monte-Carlo hits".into()));
    }
    let frac = hb as f64 / samples as f64;
    let measure = vol * frac;
    let se = vol * (frac * (1.0 - frac) / samples as f64).sqrt();
    let estimate = 1.0 / measure;
    let e = CnkEstimate {
        n,
        k,
        metric,
        samples,
        seed,
        estimate,
        ci: 1.96 * estimate * se / measure,
        slice_measure: measure,
        argmax: centers[best].coords(),
    };
    cnk_cache().lock().expect("cache lock").insert(key, e.clone());
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::intrinsic_linear;
    use crate::multivec::blade_of;
    use crate::poly::Polynomial;
    use crate::scalar::{q, qr};
    use num::{One, Zero};

    fn h1() -> Splitting {
        Splitting::new(1, 1).unwrap()
    }

    fn zero_graph(s: Splitting) -> GraphFunction {
        GraphFunction::symbolic(s, vec![Polynomial::zero(); s.k]).unwrap()
    }

    #[test]
    fn plane_current_is_window_integral() {
        let s = h1();
        let win = Window::centered(s, 1.0);
        let q = window_quadrature(&win, 16);
        // <Y1 ^ T | dy1 ^ th> = 1 on the flat graph.
        let beta = PolyForm::term(1, blade_of(&[1, 2]), Polynomial::one());
        let tf = TestForm::new(beta, win.clone()).unwrap();
        let v = eval_graph_current(&zero_graph(s), &tf, &q, 1.0).unwrap();
        assert!((v.value - win.integral()).abs() < 1e-12, "{v:?}");
        let cl = eval_classical_current(&zero_graph(s), &tf, &q).unwrap();
        assert!((cl.value - win.integral()).abs() < 1e-12);
    }

    #[test]
    fn heisenberg_equals_classical_pointwise() {
        let s = Splitting::new(2, 2).unwrap();
        let y1 = Polynomial::var(2);
        let t = Polynomial::var(4);
        let g = GraphFunction::symbolic(s, vec![&y1 * &t, y1.scale(&qr(1, 2))]).unwrap();
        let ge = GraphEval::new(&g).unwrap();
        for b in crate::rumin::basis_j(2, 3).unwrap().iter() {
            let om: BTreeMap<Blade, f64> = b.covector.terms().iter().map(|(k, v)| (*k, to_f64(v))).collect();
            let w = [0.3, -0.7, 0.45];
            let a = pair_vectors(&ge.heisenberg_vectors(&w), &om);
            let c = pair_vectors(&ge.classical_vectors(&w), &om);
            assert!((a - c).abs() < 1e-12, "{a} {c}");
        }
    }

    #[test]
    fn flat_boundary_vanishes() {
        let s = h1();
        let win = Window::centered(s, 1.0);
        let quad = window_quadrature(&win, 24);
        let om = PolyForm::term(1, blade_of(&[0]), Polynomial::var(1).pow(2));
        let tf = TestForm::new(om, win).unwrap();
        let lin = intrinsic_linear(s, &[vec![q(2)]]).unwrap();
        let b = boundary_eval(&lin, &tf, &quad, 1.0).unwrap();
        let m = mass_scale(&lin, &tf, &quad, 1.0).unwrap();
        assert!(m > 0.0);
        assert!(b.value.abs() <= 1e-10 * m, "{b:?} {m}");
    }

    #[test]
    fn closed_forms() {
        assert_eq!(cnk_closed_form_dinf(1, 1), 1.0);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((Window::centered(h1(), 2.0).integral() - 4.0 * (256.0f64 / 315.0).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn cnk_h1() {
        let e = estimate_cnk(1, 1, Metric::DInfinity, 200_000, 3).unwrap();
        assert!((e.estimate - 1.0).abs() < 0.02, "{e:?}");
        assert_eq!(estimate_cnk(1, 1, Metric::DInfinity, 200_000, 3).unwrap(), e);
    }

    #[test]
    fn dilated_window() {
        let s = h1();
        let tf = TestForm::new(PolyForm::term(1, blade_of(&[1, 2]), Polynomial::one()), Window::centered(s, 1.0)).unwrap();
        let d = tf.dilation_pullback(&q(2)).unwrap();
        assert_eq!(d.window.radius, vec![0.5, 0.25]);
        assert_eq!(d.core.coeff(blade_of(&[1, 2])), Polynomial::constant(q(8)));
    }
}
