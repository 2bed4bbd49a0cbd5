mod common;

use common::{close, rng};
use num::Zero;
use proptest::prelude::*;
use rand::Rng;
use ruminlab_core::currents::{eval_graph_current, window_quadrature, TestForm, Window};
use ruminlab_core::graphs::{dilate_graph, GraphFunction};
use ruminlab_core::poly::{Polynomial, Var};
use ruminlab_core::rumin::basis_j;
use ruminlab_core::scalar::{qr, Q};
use ruminlab_core::{PolyForm, Splitting};

const SPLITS: [(usize, usize); 2] = [(1, 1), (2, 2)];

fn small_poly(s: &Splitting, r: &mut impl Rng, constant: bool) -> Polynomial {
    let mut p = if constant { Polynomial::constant(qr(r.gen_range(-2..=2), 4)) } else { Polynomial::zero() };
    for _ in 0..3 {
        let mut m = Polynomial::constant(qr(r.gen_range(-2..=2), r.gen_range(2..=4)));
        for _ in 0..r.gen_range(1..=2) {
            m = &m * &Polynomial::var(r.gen_range(s.k..=2 * s.n) as Var);
        }
        p = &p + &m;
    }
    p
}

fn graph(s: Splitting, seed: u64) -> GraphFunction {
    let mut r = rng(seed);
    GraphFunction::symbolic(s, (0..s.k).map(|_| small_poly(&s, &mut r, false)).collect()).unwrap()
}

/// A `J`-valued core: polynomial combinations of the basis of `J^{2n+1-k}`.
fn core(s: Splitting, seed: u64) -> PolyForm {
    let mut r = rng(seed ^ 0x9e37_79b9);
    let mut f = PolyForm::zero(s.n);
    for e in basis_j(s.n, 2 * s.n + 1 - s.k).unwrap().iter() {
        let c = small_poly(&s, &mut r, true);
        f = f.add(&PolyForm::from_covector(&e.covector).scale(&c));
    }
    f
}

fn window(s: Splitting, seed: u64) -> Window {
    let mut r = rng(seed ^ 0x51);
    let center = (0..s.w_dim()).map(|_| r.gen_range(-0.3..0.3)).collect();
    let radius = (0..s.w_dim()).map(|_| r.gen_range(0.5..1.2)).collect();
    Window::new(s, center, radius).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn current_is_linear(i in 0usize..2, seed in any::<u64>(), c in (-5i64..=5, 1i64..=3)) {
        let s = Splitting::new(SPLITS[i].0, SPLITS[i].1).unwrap();
        let g = graph(s, seed);
        let w = window(s, seed);
        let q = window_quadrature(&w, 12);
        let (a, b) = (core(s, seed), core(s, seed.wrapping_add(1)));
        let c: Q = qr(c.0, c.1);
        let combo = TestForm::new(a.add(&b.scale_q(&c)), w.clone()).unwrap();
        let lhs = eval_graph_current(&g, &combo, &q, 1.0).unwrap().value;
        let va = eval_graph_current(&g, &TestForm::new(a, w.clone()).unwrap(), &q, 1.0).unwrap().value;
        let vb = eval_graph_current(&g, &TestForm::new(b, w).unwrap(), &q, 1.0).unwrap().value;
        let rhs = va + ruminlab_core::scalar::to_f64(&c) * vb;
        prop_assert!(close(lhs, rhs, 1e-12 * (1.0 + va.abs() + vb.abs())), "{lhs} vs {rhs}");
    }

    #[test]
    fn dilation_covariance(i in 0usize..2, seed in any::<u64>(), r in (1i64..=4, 1i64..=2)) {
        let s = Splitting::new(SPLITS[i].0, SPLITS[i].1).unwrap();
        let g = graph(s, seed);
        let r: Q = qr(r.0, r.1);
        let omega = TestForm::new(core(s, seed), window(s, seed)).unwrap();
        let pulled = omega.dilation_pullback(&r).unwrap();
        // Both integrands are polynomial in the graph coordinates, so 16 Gauss points are exact.
        let pushed = eval_graph_current(&dilate_graph(&g, &r).unwrap(), &omega, &window_quadrature(&omega.window, 16), 1.0).unwrap().value;
        let direct = eval_graph_current(&g, &pulled, &window_quadrature(&pulled.window, 16), 1.0).unwrap().value;
        prop_assert!(close(pushed, direct, 1e-9), "{pushed} vs {direct}");
    }
}
