mod common;

use common::rational;
use proptest::prelude::*;
use ruminlab_core::multivec::{blades_of_grade, Blade};
use ruminlab_core::rumin::{basis_j, in_j, lefschetz, lefschetz_inv, project_j, syt_count, syt_enumerate};
use ruminlab_core::{CoVector, MultiVector};

fn horizontal_covector(n: usize, grade: usize) -> impl Strategy<Value = CoVector> {
    let blades: Vec<Blade> = blades_of_grade(2 * n, grade);
    prop::collection::vec(rational(), blades.len()).prop_map(move |cs| CoVector::from_terms(n, blades.iter().copied().zip(cs)))
}

fn multivector(n: usize, grade: usize, horizontal: bool) -> impl Strategy<Value = MultiVector> {
    let blades: Vec<Blade> = blades_of_grade(if horizontal { 2 * n } else { 2 * n + 1 }, grade);
    prop::collection::vec(rational(), blades.len()).prop_map(move |cs| MultiVector::from_terms(n, blades.iter().copied().zip(cs)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lefschetz_inverse_round_trip(mu in horizontal_covector(2, 3), nu in horizontal_covector(3, 4)) {
        prop_assert_eq!(lefschetz(&lefschetz_inv(&mu).unwrap()), mu);
        prop_assert_eq!(lefschetz(&lefschetz_inv(&nu).unwrap()), nu);
    }

    #[test]
    fn projection_is_linear(a in multivector(2, 3, false), b in multivector(2, 3, false), c in rational()) {
        let pa = project_j(&a).unwrap();
        let pb = project_j(&b).unwrap();
        let pab = project_j(&(&a.scale(&c) + &b)).unwrap();
        for i in 0..pab.pairings.len() {
            prop_assert_eq!(&pab.pairings[i], &(c.clone() * &pa.pairings[i] + &pb.pairings[i]));
        }
    }

    #[test]
    fn horizontal_multivectors_have_zero_class(a in multivector(2, 3, true), b in multivector(3, 4, true)) {
        prop_assert!(project_j(&a).unwrap().is_zero());
        prop_assert!(project_j(&b).unwrap().is_zero());
    }

    #[test]
    fn tableaux_are_standard_and_counted(m in 1usize..=7, l in 0usize..=7, shift in 0usize..4) {
        prop_assume!(2 * l >= m && l <= m);
        let elements: Vec<usize> = (1..=m).map(|i| 2 * i + shift).collect();
        let ts = syt_enumerate(&elements, l).unwrap();
        prop_assert_eq!(ts.len() as u64, syt_count(m, l));
        for t in &ts {
            prop_assert!(t.is_standard());
            prop_assert_eq!(t.row1.len(), l);
        }
    }

    #[test]
    fn combinations_of_basis_stay_in_j(n in 1usize..=3, seed in any::<u64>()) {
        let m = 2 * n;
        let basis = basis_j(n, m).unwrap();
        let mut acc = CoVector::zero(n);
        for (i, e) in basis.iter().enumerate() {
            acc = &acc + &e.covector.scale(&ruminlab_core::scalar::q(((seed >> (i % 60)) & 7) as i64 - 3));
        }
        prop_assert!(in_j(&acc));
    }
}
