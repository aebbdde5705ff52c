mod common;

use blk_core::ring::{LocalPoly, Monomial, Rational};
use blk_core::stdbasis::{milnor_data, mora_nf, verify_transform, MilnorData};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{milnor_oracle, random_plane_poly};

fn isolated() -> impl Strategy<Value = MilnorData> {
    any::<u64>().prop_filter_map("not isolated", |seed| {
        let f = random_plane_poly(&mut ChaCha8Rng::seed_from_u64(seed));
        milnor_data(&f).ok()
    })
}

fn plane_poly() -> impl Strategy<Value = LocalPoly> {
    proptest::collection::vec((0u32..7, 0u32..7, -9i64..=9, 1i64..=3), 0..8).prop_map(|t| {
        LocalPoly::from_terms(
            2,
            t.into_iter().map(|(a, b, p, q)| (Monomial::x(&[a, b]), Rational::new(p.into(), q.into()))),
        )
    })
}

fn bound(md: &MilnorData) -> u32 {
    md.max_basis_degree() + 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nf_is_idempotent(md in isolated(), p in plane_poly()) {
        let g = &md.jacobian_std;
        let once = mora_nf(&p, g, bound(&md));
        prop_assert_eq!(mora_nf(&once, g, bound(&md)), once);
    }

    #[test]
    fn nf_is_linear(md in isolated(), p in plane_poly(), q in plane_poly(), a in -5i64..=5) {
        let g = &md.jacobian_std;
        let b = bound(&md);
        let a = Rational::from_integer(a.into());
        let lhs = mora_nf(&(&p + &q.scale(&a)), g, b);
        let rhs = &mora_nf(&p, g, b) + &mora_nf(&q, g, b).scale(&a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn standard_basis_spans_the_jacobian_ideal(md in isolated()) {
        // <G> ⊆ J by the recorded transform, J ⊆ <G> by normal forms
        prop_assert!(verify_transform(&md));
        let b = bound(&md);
        for i in 0..md.n_vars() {
            prop_assert!(mora_nf(&md.f.derivative(i), &md.jacobian_std, b).is_zero());
        }
    }

    #[test]
    fn normal_form_lands_in_basis_span(md in isolated(), p in plane_poly()) {
        let r = mora_nf(&p, &md.jacobian_std, bound(&md));
        for (m, _) in r.terms() {
            prop_assert!(md.basis_monomials.contains(m));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn milnor_number_matches_quotient_dimension(md in isolated()) {
        prop_assert_eq!(Some(md.mu), milnor_oracle(&md.f, 24));
    }
}

#[test]
fn brieskorn_pham_milnor_numbers() {
    for (a, b) in [(2, 2), (3, 3), (3, 4), (2, 5), (4, 4), (5, 6)] {
        let f = common::poly(&format!("x^{a}+y^{b}"));
        assert_eq!(milnor_data(&f).unwrap().mu, (a - 1) * (b - 1));
    }
    assert_eq!(milnor_data(&common::poly("x^3+y^3+z^3")).unwrap().mu, 8);
}
