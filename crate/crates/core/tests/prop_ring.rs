use std::cmp::Ordering;

use blk_core::ring::rational::{format_rational, parse_rational};
use blk_core::ring::{LocalPoly, Monomial, MonomialOrder, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const N: usize = 3;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (proptest::collection::vec(0u32..6, N), 0u32..4).prop_map(|(e, s)| Monomial::new(&e, s))
}

fn local_poly() -> impl Strategy<Value = LocalPoly> {
    proptest::collection::vec((monomial(), rational()), 0..6).prop_map(|t| LocalPoly::from_terms(N, t))
}

fn order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::LocalDegreeX), Just(MonomialOrder::BlockSThenX)]
}

fn normalised(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn addition_is_commutative_and_associative(a in local_poly(), b in local_poly(), c in local_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_laws(a in local_poly(), b in local_poly(), c in local_poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LocalPoly::one(N), a.clone());
    }

    #[test]
    fn orderings_are_total_orders(o in order(), a in monomial(), b in monomial(), c in monomial()) {
        let ab = o.cmp_unchecked(&a, &b);
        prop_assert_eq!(ab, o.cmp_unchecked(&b, &a).reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab != Ordering::Greater && o.cmp_unchecked(&b, &c) != Ordering::Greater {
            prop_assert_ne!(o.cmp_unchecked(&a, &c), Ordering::Greater);
        }
    }

    #[test]
    fn orderings_are_multiplicative(o in order(), a in monomial(), b in monomial(), c in monomial()) {
        prop_assert_eq!(o.cmp_unchecked(&a, &b), o.cmp_unchecked(&a.mul(&c), &b.mul(&c)));
    }

    #[test]
    fn local_ordering_prefers_low_degree(a in monomial(), b in monomial()) {
        let (a, b) = (a.x_part(), b.x_part());
        if a.x_degree() < b.x_degree() {
            prop_assert_eq!(MonomialOrder::LocalDegreeX.cmp_unchecked(&a, &b), Ordering::Greater);
        }
    }

    #[test]
    fn rationals_stay_normalised(a in rational(), b in rational()) {
        for r in [&a + &b, &a - &b, &a * &b] {
            prop_assert!(normalised(&r));
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        if !b.numer().is_zero() {
            prop_assert!(normalised(&(&a / &b)));
        }
    }
}
