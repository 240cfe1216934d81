mod common;

use common::{big_poly, naive_mul, poly};
use metacsp::ideal::{in_tail_span, split_tail};
use metacsp::laurent::parse_poly;
use metacsp::{LaurentPoly, QuotientPoly};
use num_bigint::BigInt;
use proptest::prelude::*;

const N: usize = 3;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(a in poly(N, 5), b in poly(N, 5), c in poly(N, 5)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_matches_schoolbook(a in poly(N, 8), b in poly(N, 8)) {
        prop_assert_eq!(&a * &b, naive_mul(&a, &b));
    }

    #[test]
    fn wide_coefficients_take_the_exact_path(a in big_poly(N), b in big_poly(N)) {
        prop_assert_eq!(&a * &b, naive_mul(&a, &b));
    }

    #[test]
    fn in_place_addition_agrees(a in poly(N, 6), b in poly(N, 6)) {
        let mut c = a.clone();
        c += &b;
        prop_assert_eq!(&c, &(&a + &b));
        c -= &b;
        prop_assert_eq!(c, a);
    }

    #[test]
    fn divide_by_sigma_round_trip(f in poly(N, 6), i in 1..=N) {
        let (q, r) = f.divide_by_sigma(i);
        prop_assert_eq!(&(&LaurentPoly::sigma(N, i) * &q) + &r, f);
        prop_assert!(!r.support_vars().contains(&i));
    }

    #[test]
    fn substitute_ones_is_a_homomorphism(a in poly(N, 5), b in poly(N, 5), s in prop::sample::subsequence(vec![1usize, 2, 3], 0..=3)) {
        prop_assert_eq!((&a + &b).substitute_ones(&s), &a.substitute_ones(&s) + &b.substitute_ones(&s));
        prop_assert_eq!((&a * &b).substitute_ones(&s), &a.substitute_ones(&s) * &b.substitute_ones(&s));
    }

    #[test]
    fn reduce_mod_is_a_homomorphism(a in poly(N, 5), b in poly(N, 5), m in 1u64..=4) {
        let (ra, rb) = (a.reduce_mod(m), b.reduce_mod(m));
        prop_assert_eq!((&a + &b).reduce_mod(m), ra.add(&rb));
        prop_assert_eq!((&a * &b).reduce_mod(m), ra.mul(&rb));
        prop_assert_eq!(QuotientPoly::from_laurent(&a, m), ra);
    }

    #[test]
    fn augmentation_is_evaluation_at_one(f in poly(N, 6)) {
        let sum: BigInt = f.terms().map(|(_, c)| c.clone()).sum();
        prop_assert_eq!(f.augmentation(), sum.clone());
        prop_assert_eq!(f.substitute_ones(&[1, 2, 3]), LaurentPoly::constant(N, sum));
    }

    #[test]
    fn display_parse_round_trip(f in poly(N, 6)) {
        prop_assert_eq!(parse_poly(N, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn split_tail_reassembles(f in poly(N, 6), u in 0..N) {
        let (a, b) = split_tail(&f, u);
        prop_assert_eq!(&a + &b, f);
        let tail: Vec<usize> = (u + 1..=N).collect();
        prop_assert!(in_tail_span(&a, &tail));
        prop_assert!(b.support_vars().iter().all(|&v| v <= u));
    }
}
