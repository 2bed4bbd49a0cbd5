mod common;

use common::{rational, rationals};
use proptest::prelude::*;
use ruminlab_core::multivec::{blades_of_grade, pair, span_if_simple, Blade};
use ruminlab_core::scalar::Q;
use ruminlab_core::{CoVector, MultiVector};

const N: usize = 2;
const DIM: usize = 2 * N + 1;

fn multivector(grade: usize) -> impl Strategy<Value = MultiVector> {
    let blades: Vec<Blade> = blades_of_grade(DIM, grade);
    prop::collection::vec(rational(), blades.len()).prop_map(move |cs| MultiVector::from_terms(N, blades.iter().copied().zip(cs)))
}

fn covector(grade: usize) -> impl Strategy<Value = CoVector> {
    let blades: Vec<Blade> = blades_of_grade(DIM, grade);
    prop::collection::vec(rational(), blades.len()).prop_map(move |cs| CoVector::from_terms(N, blades.iter().copied().zip(cs)))
}

fn simple(grade: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(rationals(DIM), grade)
}

fn dual(tau: &MultiVector) -> CoVector {
    CoVector::from_terms(tau.n(), tau.terms().iter().map(|(b, c)| (*b, c.clone())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graded_anticommutativity((a, b, ga, gb) in (0usize..=3, 0usize..=2).prop_flat_map(|(ga, gb)| (multivector(ga), multivector(gb), Just(ga), Just(gb)))) {
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        if (ga * gb) % 2 == 0 { prop_assert_eq!(ab, ba); } else { prop_assert_eq!(ab, -ba); }
    }

    #[test]
    fn hodge_involution(a in multivector(2), b in multivector(3), c in multivector(1)) {
        for v in [a, b, c] {
            prop_assert_eq!(v.hodge_star().hodge_star(), v);
        }
    }

    #[test]
    fn wedge_with_star_is_norm_times_volume(vs in simple(2)) {
        let v = MultiVector::wedge_vectors(N, &vs);
        let vol = MultiVector::basis(N, (1 << DIM) - 1).scale(&v.norm_sq());
        prop_assert_eq!(v.wedge(&v.hodge_star()), vol);
    }

    #[test]
    fn pairing_is_bilinear(t1 in multivector(2), t2 in multivector(2), l1 in covector(2), l2 in covector(2), c in rational()) {
        let lhs = pair(&(&t1.scale(&c) + &t2), &l1).unwrap();
        prop_assert_eq!(lhs, c.clone() * pair(&t1, &l1).unwrap() + pair(&t2, &l1).unwrap());
        let rhs = pair(&t1, &(&l1 + &l2.scale(&c))).unwrap();
        prop_assert_eq!(rhs, pair(&t1, &l1).unwrap() + c * pair(&t1, &l2).unwrap());
    }

    #[test]
    fn pairing_matches_inner_product(t in multivector(3), v in multivector(3)) {
        prop_assert_eq!(pair(&t, &dual(&v)).unwrap(), t.inner(&v));
    }

    #[test]
    fn span_regenerates_simple(vs in simple(3)) {
        let tau = MultiVector::wedge_vectors(N, &vs);
        prop_assume!(!tau.is_zero());
        let span = span_if_simple(&tau).unwrap().expect("a wedge of vectors is simple");
        let back = MultiVector::wedge_vectors(N, span.basis());
        let (b0, c0) = tau.sorted_terms()[0];
        let ratio = back.coeff(b0) / c0;
        prop_assert_eq!(back, tau.scale(&ratio));
    }
}
