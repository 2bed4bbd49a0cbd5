mod common;

use common::{rational, rationals, rng};
use proptest::prelude::*;
use ruminlab_core::forms::{random_form, random_polynomial};
use ruminlab_core::hmaps::{
    canonical_span, isometric_normalize, orthogonality_defect, push_span, random_hlinear, symplectic_defect, symplectic_normalize,
};
use ruminlab_core::multivec::{blades_of_grade, pair, Blade};
use ruminlab_core::rumin::{basis_j, dtheta_const, in_i, theta_const};
use ruminlab_core::{CoVector, MultiVector, PlaneSpan, PolyForm};

fn multivector(n: usize, grade: usize) -> impl Strategy<Value = MultiVector> {
    let blades: Vec<Blade> = blades_of_grade(2 * n + 1, grade);
    prop::collection::vec(rational(), blades.len()).prop_map(move |cs| MultiVector::from_terms(n, blades.iter().copied().zip(cs)))
}

fn covector(n: usize, grade: usize) -> impl Strategy<Value = CoVector> {
    let blades: Vec<Blade> = blades_of_grade(2 * n + 1, grade);
    prop::collection::vec(rational(), blades.len()).prop_map(move |cs| CoVector::from_terms(n, blades.iter().copied().zip(cs)))
}

fn horizontal_vectors(n: usize, count: usize) -> impl Strategy<Value = Vec<Vec<ruminlab_core::Q>>> {
    prop::collection::vec(rationals(2 * n), count).prop_map(|vs| {
        vs.into_iter()
            .map(|mut v| {
                v.push(ruminlab_core::scalar::q(0));
                v
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_maps_are_h_linear(n in 1usize..=4, seed in any::<u64>()) {
        let l = random_hlinear(n, &mut rng(seed));
        prop_assert!(l.validate());
        let th = PolyForm::from_covector(&theta_const(n));
        prop_assert_eq!(l.pull_polyform(&th), th.scale_q(&l.c));
    }

    #[test]
    fn push_pull_duality(seed in any::<u64>(), tau in multivector(2, 3), lam in covector(2, 3)) {
        let l = random_hlinear(2, &mut rng(seed));
        prop_assert_eq!(pair(&l.push_multivector(&tau), &lam).unwrap(), pair(&tau, &l.pull_covector(&lam)).unwrap());
    }

    #[test]
    fn pullback_preserves_the_ideal(seed in any::<u64>(), a in covector(2, 1), b in covector(2, 0)) {
        let l = random_hlinear(2, &mut rng(seed));
        let elem = &theta_const(2).wedge(&a) + &dtheta_const(2).wedge(&b);
        prop_assert!(in_i(&l.pull_covector(&elem)));
    }

    #[test]
    fn functoriality(s1 in any::<u64>(), s2 in any::<u64>(), tau in multivector(2, 2)) {
        let (l1, l2) = (random_hlinear(2, &mut rng(s1)), random_hlinear(2, &mut rng(s2)));
        prop_assert_eq!(l1.compose(&l2).push_multivector(&tau), l1.push_multivector(&l2.push_multivector(&tau)));
    }

    #[test]
    fn pullback_commutes_with_d_c(n in 1usize..=2, grade_shift in 0usize..=2, seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = random_hlinear(n, &mut r);
        let w = if grade_shift == 2 {
            let e = &basis_j(n, n + 1).unwrap()[0];
            PolyForm::from_covector(&e.covector).scale(&random_polynomial(n, 2, 3, &mut r))
        } else {
            random_form(n, n - 1 + grade_shift, 2, &mut r)
        };
        let w = if w.grade() == Some(n) { w.horizontal_part() } else { w };
        prop_assert_eq!(l.pull_polyform(&w.dc().unwrap()), l.pull_polyform(&w).dc().unwrap());
    }

    #[test]
    fn symplectic_normal_form((n, vs) in (1usize..=4, 1usize..=4).prop_flat_map(|(n, c)| (Just(n), horizontal_vectors(n, c.min(2 * n))))) {
        let v = PlaneSpan::new(n, &vs);
        prop_assume!(v.dim() > 0);
        let r = symplectic_normalize(&v).unwrap();
        prop_assert!(r.map.validate());
        prop_assert_eq!(2 * r.a + r.b, v.dim());
        prop_assert_eq!(push_span(&r.map, &v), canonical_span(n, r.a, r.b, false));
    }

    #[test]
    fn isotropic_normalization_is_isometric(n in 1usize..=4, b in 1usize..=4, seed in any::<u64>()) {
        prop_assume!(b <= n);
        let l = random_hlinear(n, &mut rng(seed));
        let v = push_span(&l, &canonical_span(n, 0, b, false));
        let (dim, a) = isometric_normalize(&v).unwrap();
        prop_assert_eq!(dim, b);
        prop_assert!(orthogonality_defect(&a) < 1e-10);
        prop_assert!(symplectic_defect(n, &a) < 1e-10);
    }
}
