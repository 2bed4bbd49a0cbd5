mod common;

use common::{close, floats, rationals};
use proptest::prelude::*;
use ruminlab_core::heis::{cone_contains, dilate, distance, group_mul};
use ruminlab_core::{Metric, Point, Splitting};

fn fpoint(c: &[f64]) -> Point<f64> {
    Point::from_coords(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity_and_inverse(a in rationals(5), b in rationals(5), c in rationals(5)) {
        let (p, q, r) = (Point::from_coords(&a).unwrap(), Point::from_coords(&b).unwrap(), Point::from_coords(&c).unwrap());
        let left = group_mul(&group_mul(&p, &q).unwrap(), &r).unwrap();
        let right = group_mul(&p, &group_mul(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(group_mul(&p, &p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn left_invariance(a in floats(5, 3.0), b in floats(5, 3.0), c in floats(5, 3.0)) {
        let (p, q, r) = (fpoint(&a), fpoint(&b), fpoint(&c));
        for m in [Metric::DInfinity, Metric::Koranyi] {
            let d0 = distance(m, &p, &q).unwrap();
            let d1 = distance(m, &group_mul(&r, &p).unwrap(), &group_mul(&r, &q).unwrap()).unwrap();
            prop_assert!(close(d0, d1, 1e-12), "{m}: {d0} vs {d1}");
        }
    }

    #[test]
    fn homogeneity(a in floats(5, 3.0), b in floats(5, 3.0), lam in 0.05f64..20.0) {
        let (p, q) = (fpoint(&a), fpoint(&b));
        for m in [Metric::DInfinity, Metric::Koranyi] {
            let d0 = distance(m, &p, &q).unwrap();
            let d1 = distance(m, &dilate(&lam, &p).unwrap(), &dilate(&lam, &q).unwrap()).unwrap();
            prop_assert!(close(lam * d0, d1, 1e-12));
        }
    }

    #[test]
    fn rotational_invariance(a in floats(5, 3.0), angle in 0.0f64..6.3, i in 0usize..4, j in 0usize..4) {
        prop_assume!(i != j);
        let mut b = a.clone();
        let (c, s) = (angle.cos(), angle.sin());
        b[i] = c * a[i] - s * a[j];
        b[j] = s * a[i] + c * a[j];
        for m in [Metric::DInfinity, Metric::Koranyi] {
            prop_assert!(close(m.norm(&fpoint(&a)), m.norm(&fpoint(&b)), 1e-12));
        }
    }

    #[test]
    fn cones_are_homogeneous(a in floats(5, 2.0), lam in 0.1f64..10.0, alpha in 0.1f64..3.0, k in 1usize..=2) {
        let s = Splitting::new(2, k).unwrap();
        let p = fpoint(&a);
        let (w, v) = s.split(&p).unwrap();
        let m = Metric::DInfinity;
        // Stay clear of the cone boundary, where rounding decides membership.
        prop_assume!((m.norm(&w) - alpha * m.norm(&v)).abs() > 1e-9 * m.norm(&p).max(1.0));
        let scaled = dilate(&lam, &p).unwrap();
        prop_assert_eq!(cone_contains(alpha, &p, &s, m).unwrap(), cone_contains(alpha, &scaled, &s, m).unwrap());
    }
}
