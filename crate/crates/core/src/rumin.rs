//! Algebraic side of the Rumin complex: contact form, Lefschetz operator,
//! Young tableaux, the basis of `J^m`, quotient norms and tangency classes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::linalg::{self, Mat};
use crate::multivec::{blade_of, blades_of_grade, grade_of, pair_unchecked, rank_one_connected, Blade, CoVector, MultiVector, PlaneSpan};
use crate::scalar::{binomial, qr, to_f64, Q};

pub fn theta_const(n: usize) -> CoVector {
    CoVector::t(n)
}

/// `d theta = -sum dx_i ^ dy_i`.
pub fn dtheta_const(n: usize) -> CoVector {
    (1..=n).fold(CoVector::zero(n), |acc, i| &acc - &CoVector::xy(n, i))
}

pub fn lefschetz(lam: &CoVector) -> CoVector {
    lam.wedge(&dtheta_const(lam.n()))
}

fn horizontal_blades(n: usize, g: usize) -> Vec<Blade> {
    blades_of_grade(2 * n, g)
}

type InvTable = HashMap<Blade, Vec<(Blade, Q)>>;

fn inv_cache() -> &'static Mutex<HashMap<usize, Arc<InvTable>>> {
    static C: OnceLock<Mutex<HashMap<usize, Arc<InvTable>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Preimages under `L: Lambda^{n-1} h1 -> Lambda^{n+1} h1` of each basis blade of degree `n+1`.
pub fn lefschetz_inv_table(n: usize) -> Arc<InvTable> {
    if let Some(t) = inv_cache().lock().unwrap().get(&n) {
        return t.clone();
    }
    let src = horizontal_blades(n, n - 1);
    let tgt = horizontal_blades(n, n + 1);
    let index: HashMap<Blade, usize> = tgt.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut m = linalg::zeros(tgt.len(), src.len());
    for (j, b) in src.iter().enumerate() {
        for (tb, c) in lefschetz(&CoVector::basis(n, *b)).terms() {
            m[index[tb]][j] = c.clone();
        }
    }
    let inv = linalg::inverse(&m).expect("L is bijective from degree n-1 to n+1");
    let mut table = InvTable::new();
    for (col, tb) in tgt.iter().enumerate() {
        let pre: Vec<(Blade, Q)> =
            src.iter().enumerate().filter(|(row, _)| !inv[*row][col].is_zero()).map(|(row, sb)| (*sb, inv[row][col].clone())).collect();
        table.insert(*tb, pre);
    }
    let table = Arc::new(table);
    inv_cache().lock().unwrap().insert(n, table.clone());
    table
}

/// `L^{-1}` on horizontal covectors of degree `n+1`.
pub fn lefschetz_inv(mu: &CoVector) -> Result<CoVector> {
    let n = mu.n();
    if mu.is_zero() {
        return Ok(CoVector::zero(n));
    }
    if !mu.is_horizontal() || mu.grade() != Some(n + 1) {
        return domain(format!("L is inverted only on horizontal covectors of degree {}", n + 1));
    }
    let table = lefschetz_inv_table(n);
    let mut out = CoVector::zero(n);
    for (b, c) in mu.terms() {
        for (sb, v) in &table[b] {
            out.add_term(*sb, c * v);
        }
    }
    Ok(out)
}

/// Two-row tableau with entries from `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungTableau {
    pub row1: Vec<usize>,
    pub row2: Vec<usize>,
}

impl YoungTableau {
    pub fn empty() -> Self {
        YoungTableau { row1: vec![], row2: vec![] }
    }

    pub fn is_standard(&self) -> bool {
        let inc = |r: &[usize]| r.windows(2).all(|w| w[0] < w[1]);
        self.row1.len() >= self.row2.len() && inc(&self.row1) && inc(&self.row2) && self.row2.iter().zip(&self.row1).all(|(b, a)| a < b)
    }
}

impl fmt::Display for YoungTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |r: &[usize]| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "[{}|{}]", j(&self.row1), j(&self.row2))
    }
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    blades_of_grade(items.len(), size).into_iter().map(|b| (0..items.len()).filter(|i| b & (1 << i) != 0).map(|i| items[i]).collect()).collect()
}

/// Standard tableaux on `elements` with first row of length `l1`, ordered by row 1.
pub fn syt_enumerate(elements: &[usize], l1: usize) -> Result<Vec<YoungTableau>> {
    let m = elements.len();
    if l1 > m || 2 * l1 < m {
        return Err(Error::Infeasible(format!("tableau shape ({l1},{}) on {m} entries", m as i64 - l1 as i64)));
    }
    let mut el = elements.to_vec();
    el.sort_unstable();
    el.dedup();
    if el.len() != m {
        return domain("tableau entries must be distinct");
    }
    let mut out: Vec<YoungTableau> = subsets(&el, l1)
        .into_iter()
        .map(|row1| {
            let row2 = el.iter().copied().filter(|x| !row1.contains(x)).collect();
            YoungTableau { row1, row2 }
        })
        .filter(|t| t.is_standard())
        .collect();
    out.sort();
    Ok(out)
}

/// `C(m,l) - C(m,l+1)`; zero outside `m <= 2l <= 2m`.
pub fn syt_count(m: usize, l: usize) -> u64 {
    if l > m || 2 * l < m {
        return 0;
    }
    binomial(m, l) - binomial(m, l + 1)
}

fn dxy(n: usize, i: usize) -> CoVector {
    CoVector::xy(n, i)
}

pub fn alpha_r(n: usize, r: &YoungTableau) -> CoVector {
    let mut acc = CoVector::scalar(n, Q::one());
    for (j, a) in r.row1.iter().enumerate() {
        let f = match r.row2.get(j) {
            Some(b) => &dxy(n, *a) - &dxy(n, *b),
            None => dxy(n, *a),
        };
        acc = acc.wedge(&f);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuminBasisElement {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub r: YoungTableau,
    pub covector: CoVector,
}

impl fmt::Display for RuminBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |r: &[usize]| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "I={{{}}} J={{{}}} R={}", j(&self.i), j(&self.j), self.r)
    }
}

fn dx_set(n: usize, s: &[usize]) -> CoVector {
    CoVector::basis(n, blade_of(&s.iter().map(|i| i - 1).collect::<Vec<_>>()))
}

fn dy_set(n: usize, s: &[usize]) -> CoVector {
    CoVector::basis(n, blade_of(&s.iter().map(|i| n + i - 1).collect::<Vec<_>>()))
}

fn basis_cache() -> &'static Mutex<HashMap<(usize, usize), Arc<Vec<RuminBasisElement>>>> {
    static C: OnceLock<Mutex<HashMap<(usize, usize), Arc<Vec<RuminBasisElement>>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Basis `dx_I ^ dy_J ^ alpha_R ^ theta` of `J^m`, `n+1 <= m <= 2n`,
/// ordered lexicographically by `(I, J, row 1 of R)`.
pub fn basis_j(n: usize, m: usize) -> Result<Arc<Vec<RuminBasisElement>>> {
    if n == 0 || m < n + 1 || m > 2 * n {
        return domain(format!("J^{m} in H^{n}: degree must lie in {}..={}", n + 1, 2 * n));
    }
    if let Some(b) = basis_cache().lock().unwrap().get(&(n, m)) {
        return Ok(b.clone());
    }
    let k = 2 * n + 1 - m;
    let all: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for ni in 0..=k.min(n) {
        for i in subsets(&all, ni) {
            let rest: Vec<usize> = all.iter().copied().filter(|x| !i.contains(x)).collect();
            for nj in 0..=(k - ni).min(rest.len()) {
                if (ni + nj) % 2 != k % 2 {
                    continue;
                }
                for j in subsets(&rest, nj) {
                    let free: Vec<usize> = rest.iter().copied().filter(|x| !j.contains(x)).collect();
                    let l1 = (2 * n - k - ni - nj) / 2;
                    let head = dx_set(n, &i).wedge(&dy_set(n, &j));
                    for r in syt_enumerate(&free, l1)? {
                        let covector = head.wedge(&alpha_r(n, &r)).wedge(&theta_const(n));
                        out.push(RuminBasisElement { i: i.clone(), j: j.clone(), r, covector });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| (&a.i, &a.j, &a.r.row1).cmp(&(&b.i, &b.j, &b.r.row1)));
    let out = Arc::new(out);
    basis_cache().lock().unwrap().insert((n, m), out.clone());
    Ok(out)
}

/// Closed-form `dim J^{2n+1-k}`.
pub fn dim_j_closed_form(n: usize, k: usize) -> u64 {
    (0..=k.min(n)).filter(|s| s % 2 == k % 2).map(|s| binomial(n, s) * (1u64 << s) * syt_count(n - s, (2 * n - k - s) / 2)).sum()
}

pub fn in_j(lam: &CoVector) -> bool {
    let n = lam.n();
    lam.wedge(&theta_const(n)).is_zero() && lam.wedge(&dtheta_const(n)).is_zero()
}

/// Membership in the ideal generated by `theta` and `d theta`.
pub fn in_i(lam: &CoVector) -> bool {
    let n = lam.n();
    let (h, _) = split_theta(lam);
    if h.is_zero() {
        return true;
    }
    let Some(g) = h.grade() else {
        return lam.terms().keys().map(|b| grade_of(*b)).collect::<BTreeSet<_>>().into_iter().all(|g| {
            let part = CoVector::from_terms(n, lam.terms().iter().filter(|(b, _)| grade_of(**b) == g).map(|(b, c)| (*b, c.clone())));
            in_i(&part)
        });
    };
    if g < 2 {
        return false;
    }
    let tgt = horizontal_blades(n, g);
    let idx: HashMap<Blade, usize> = tgt.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let src = horizontal_blades(n, g - 2);
    let mut m = linalg::zeros(tgt.len(), src.len());
    for (j, b) in src.iter().enumerate() {
        for (tb, c) in lefschetz(&CoVector::basis(n, *b)).terms() {
            m[idx[tb]][j] = c.clone();
        }
    }
    let rhs: Vec<Q> = tgt.iter().map(|b| h.coeff(*b)).collect();
    linalg::solve(&m, &rhs).is_some()
}

/// `lam = h + s ^ theta` with `h`, `s` free of `theta`.
pub fn split_theta(lam: &CoVector) -> (CoVector, CoVector) {
    lam.horizontal_split()
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientNorm {
    pub representative: CoVector,
    pub norm_sq: Q,
}

impl QuotientNorm {
    pub fn norm(&self) -> f64 {
        to_f64(&self.norm_sq).sqrt()
    }
}

/// Minimal Euclidean norm over `lam + dtheta ^ Lambda^{n-2} h1`.
pub fn quotient_min_norm(lam: &CoVector) -> Result<QuotientNorm> {
    let n = lam.n();
    if !lam.is_zero() && (!lam.is_horizontal() || lam.grade() != Some(n)) {
        return domain(format!("expected a horizontal {n}-covector"));
    }
    if n < 2 || lam.is_zero() {
        return Ok(QuotientNorm { norm_sq: lam.norm_sq(), representative: lam.clone() });
    }
    let cols: Vec<CoVector> = horizontal_blades(n, n - 2).into_iter().map(|b| lefschetz(&CoVector::basis(n, b))).collect();
    let gram: Mat = cols.iter().map(|a| cols.iter().map(|b| a.inner(b)).collect()).collect();
    let rhs: Vec<Q> = cols.iter().map(|a| a.inner(lam)).collect();
    let c = linalg::solve(&gram, &rhs).expect("Gram system of an injective map");
    let proj = cols.iter().zip(&c).fold(CoVector::zero(n), |acc, (v, ci)| &acc + &v.scale(ci));
    let representative = lam - &proj;
    Ok(QuotientNorm { norm_sq: representative.norm_sq(), representative })
}

/// The element of `J_m` induced by a multivector of degree `m`, as pairings against `basis_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JClass {
    pub n: usize,
    pub k: usize,
    pub pairings: Vec<Q>,
}

impl JClass {
    pub fn new(n: usize, k: usize, pairings: Vec<Q>) -> Result<Self> {
        let dim = basis_j(n, 2 * n + 1 - k)?.len();
        if pairings.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: pairings.len() });
        }
        Ok(JClass { n, k, pairings })
    }

    pub fn is_zero(&self) -> bool {
        self.pairings.iter().all(|c| c.is_zero())
    }

    /// `Some(c)` with `self = c * other`, when `other` is nonzero and the classes are parallel.
    pub fn ratio_to(&self, other: &JClass) -> Option<Q> {
        if self.n != other.n || self.k != other.k {
            return None;
        }
        let p = other.pairings.iter().position(|c| !c.is_zero())?;
        let c = &self.pairings[p] / &other.pairings[p];
        self.pairings.iter().zip(&other.pairings).all(|(a, b)| *a == &c * b).then_some(c)
    }

    /// Euclidean norm of the pairing vector (the fixed norm used on `J_m`).
    pub fn norm(&self) -> f64 {
        self.pairings.iter().map(|c| to_f64(c).powi(2)).sum::<f64>().sqrt()
    }
}

impl fmt::Display for JClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairings.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn project_j(tau: &MultiVector) -> Result<JClass> {
    let n = tau.n();
    let m = match tau.grade() {
        Some(m) => m,
        None if tau.is_zero() => return domain("degree of the zero multivector is undefined"),
        None => return domain("inhomogeneous multivector"),
    };
    if m < n + 1 || m > 2 * n {
        return domain(format!("J-classes live in degrees {}..={}", n + 1, 2 * n));
    }
    let basis = basis_j(n, m)?;
    Ok(JClass { n, k: 2 * n + 1 - m, pairings: basis.iter().map(|e| pair_unchecked(tau, &e.covector)).collect() })
}

fn check_ab(a: usize, b: usize, n: usize) -> Result<()> {
    if a + b > n || 2 * a + b < n || 2 * a + b + 1 > 2 * n {
        return Err(Error::Infeasible(format!("(a,b)=({a},{b}) in H^{n}: need a+b<=n<=2a+b<=2n-1")));
    }
    Ok(())
}

/// `X_1..X_{a+b} ^ Y_1..Y_a ^ T`.
pub fn canonical_tangent(a: usize, b: usize, n: usize) -> Result<MultiVector> {
    check_ab(a, b, n)?;
    let mut idx: Vec<usize> = (0..a + b).collect();
    idx.extend((0..a).map(|i| n + i));
    idx.push(2 * n);
    Ok(MultiVector::basis(n, blade_of(&idx)))
}

/// The basis triple that pairs nontrivially with the canonical tangent.
pub fn canonical_triple(a: usize, b: usize, n: usize) -> Result<(Vec<usize>, Vec<usize>, YoungTableau)> {
    check_ab(a, b, n)?;
    Ok(((a + 1..=a + b).collect(), vec![], YoungTableau { row1: (1..=a).collect(), row2: (a + b + 1..=n).collect() }))
}

pub fn canonical_pairing_table(a: usize, b: usize, n: usize) -> Result<Vec<(RuminBasisElement, Q)>> {
    let tau = canonical_tangent(a, b, n)?;
    let basis = basis_j(n, 2 * a + b + 1)?;
    Ok(basis.iter().map(|e| (e.clone(), pair_unchecked(&tau, &e.covector))).collect())
}

/// The simple horizontal multivectors allowed with the canonical class: one, or two when `2a+b = n`.
pub fn admissible_tangents(a: usize, b: usize, n: usize) -> Result<Vec<MultiVector>> {
    let first = canonical_tangent(a, b, n)?;
    let mut out = vec![first];
    if 2 * a + b == n {
        let mut idx: Vec<usize> = (a..n).collect();
        idx.extend((a + b..n).map(|i| n + i));
        idx.push(2 * n);
        let sign = if (a * (b + 1)) % 2 == 1 { -Q::one() } else { Q::one() };
        out.push(MultiVector::basis(n, blade_of(&idx)).scale(&sign));
    }
    Ok(out)
}

/// Matrix of `L_D: span{dxy_K : |K| = l} -> span{dxy_K : |K| = l+1}` on `m` indices.
pub fn l_d_matrix(m: usize, l: usize) -> Mat {
    let src = blades_of_grade(m, l);
    let tgt = blades_of_grade(m, l + 1);
    let idx: HashMap<Blade, usize> = tgt.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut mat = linalg::zeros(tgt.len(), src.len());
    for (j, k) in src.iter().enumerate() {
        for i in 0..m {
            if k & (1 << i) == 0 {
                mat[idx[&(k | (1 << i))]][j] = -Q::one();
            }
        }
    }
    mat
}

pub fn l_d_surjective(m: usize, l: usize) -> bool {
    l >= m || linalg::rank(&l_d_matrix(m, l)) == binomial(m, l + 1) as usize
}

#[derive(Clone, Debug)]
pub struct CensusPlane {
    pub plane: PlaneSpan,
    /// Horizontal-wedge-T tangent rescaled so that its class equals `zeta` exactly.
    pub tangent: MultiVector,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub hits: usize,
    pub planes: Vec<CensusPlane>,
    pub bound: usize,
    pub within_bound: bool,
    pub pairwise_not_rank_one: bool,
}

fn random_entry(rng: &mut ChaCha8Rng) -> Q {
    const VALS: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];
    if rng.gen_bool(0.5) {
        return Q::zero();
    }
    let (p, d) = VALS[rng.gen_range(0..VALS.len())];
    qr(p, d)
}

fn census_trial(zeta: &JClass, seed: u64, trial: usize) -> Option<CensusPlane> {
    let n = zeta.n;
    let m = 2 * n + 1 - zeta.k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let vecs: Vec<Vec<Q>> = (0..m - 1)
        .map(|_| {
            let mut v: Vec<Q> = (0..2 * n).map(|_| random_entry(&mut rng)).collect();
            v.push(Q::zero());
            v
        })
        .collect();
    let mut tvec = vec![Q::zero(); 2 * n + 1];
    tvec[2 * n] = Q::one();
    let tau = MultiVector::wedge_vectors(n, &vecs).wedge(&MultiVector::from_vector(n, &tvec));
    if tau.is_zero() {
        return None;
    }
    let class = project_j(&tau).ok()?;
    let c = class.ratio_to(zeta)?;
    if c.is_zero() {
        return None;
    }
    let mut rows = vecs;
    rows.push(tvec);
    Some(CensusPlane { plane: PlaneSpan::new(n, &rows), tangent: tau.scale(&c.recip()) })
}

/// Randomized search for vertical planes whose tangent class is parallel to `zeta`.
pub fn tangency_census(zeta: &JClass, trials: usize, seed: u64) -> Result<CensusReport> {
    if zeta.is_zero() {
        return domain("zeta must be nonzero");
    }
    JClass::new(zeta.n, zeta.k, zeta.pairings.clone())?;
    let found: Vec<CensusPlane> = (0..trials).into_par_iter().filter_map(|t| census_trial(zeta, seed, t)).collect();
    let hits = found.len();
    let mut planes: Vec<CensusPlane> = Vec::new();
    for p in found {
        if !planes.iter().any(|q| q.plane == p.plane) {
            planes.push(p);
        }
    }
    planes.sort_by(|a, b| a.plane.cmp(&b.plane));
    let bound = if zeta.k < zeta.n { 1 } else { 2 };
    let mut pairwise = true;
    for (i, a) in planes.iter().enumerate() {
        for b in &planes[i + 1..] {
            if rank_one_connected(&a.plane, &b.plane)? {
                pairwise = false;
            }
        }
    }
    Ok(CensusReport { n: zeta.n, k: zeta.k, trials, hits, within_bound: planes.len() <= bound, bound, pairwise_not_rank_one: pairwise, planes })
}

/// Sign convention check: every census tangent, rescaled to class `zeta`, is one of the admissible tangents.
pub fn census_matches_admissible(report: &CensusReport, a: usize, b: usize) -> Result<bool> {
    let adm = admissible_tangents(a, b, report.n)?;
    Ok(report.planes.iter().all(|p| adm.contains(&p.tangent)))
}
