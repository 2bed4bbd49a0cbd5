mod common;

use common::{rational, rng};
use proptest::prelude::*;
use ruminlab_core::forms::{random_form, random_polynomial};
use ruminlab_core::multivec::{blades_of_grade, Blade};
use ruminlab_core::parse::{parse_covector, parse_multivector, parse_polyform, parse_polynomials};
use ruminlab_core::{CoVector, MultiVector};

fn terms(n: usize, grade: usize) -> impl Strategy<Value = Vec<(Blade, ruminlab_core::Q)>> {
    let blades: Vec<Blade> = blades_of_grade(2 * n + 1, grade);
    prop::collection::vec(rational(), blades.len()).prop_map(move |cs| blades.iter().copied().zip(cs).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multivector_round_trip(t in terms(3, 3)) {
        let m = MultiVector::from_terms(3, t);
        prop_assume!(!m.is_zero());
        prop_assert_eq!(parse_multivector(&m.to_string(), Some(3)).unwrap(), m);
    }

    #[test]
    fn covector_round_trip(t in terms(2, 2)) {
        let c = CoVector::from_terms(2, t);
        prop_assume!(!c.is_zero());
        prop_assert_eq!(parse_covector(&c.to_string(), Some(2)).unwrap(), c);
    }

    #[test]
    fn polyform_round_trip(n in 1usize..=3, grade in 0usize..=3, seed in any::<u64>()) {
        let f = random_form(n, grade, 3, &mut rng(seed));
        prop_assume!(!f.is_zero());
        prop_assert_eq!(parse_polyform(&f.to_string(), Some(n)).unwrap(), f);
    }

    #[test]
    fn polynomial_round_trip(n in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps: Vec<_> = (0..3).map(|_| random_polynomial(n, 3, 4, &mut r)).collect();
        let text: Vec<String> = ps.iter().map(|p| p.display(n).to_string()).collect();
        prop_assert_eq!(parse_polynomials(&text.join("; "), n).unwrap(), ps);
    }
}
