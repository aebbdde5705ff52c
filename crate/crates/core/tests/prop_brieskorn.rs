mod common;

use blk_core::brieskorn::{nf_brieskorn, t_matrix_jet, BrieskornGens};
use blk_core::ring::{LocalPoly, Monomial, Rational};
use blk_core::stdbasis::{coordinates, milnor_data, mora_nf};
use num_traits::Zero;
use proptest::prelude::*;

const SAMPLES: [&str; 4] = ["x^3+y^3", "x^2*y^2+x^5+y^5", "x^3+x*y^3", "x^2*y+y^4"];

fn element() -> impl Strategy<Value = LocalPoly> {
    proptest::collection::vec((0u32..6, 0u32..6, 0u32..3, -9i64..=9), 0..6).prop_map(|t| {
        LocalPoly::from_terms(2, t.into_iter().map(|(a, b, s, c)| (Monomial::new(&[a, b], s), Rational::from_integer(c.into()))))
    })
}

fn gens(i: usize) -> BrieskornGens {
    BrieskornGens::new(milnor_data(&common::poly(SAMPLES[i])).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nf_is_linear(i in 0..SAMPLES.len(), p in element(), q in element(), a in -4i64..=4, b in -4i64..=4) {
        let mut g = gens(i);
        let (ra, rb) = (Rational::from_integer(a.into()), Rational::from_integer(b.into()));
        let lhs = nf_brieskorn(&(&p.scale(&ra) + &q.scale(&rb)), 3, &mut g).unwrap();
        let np = nf_brieskorn(&p, 3, &mut g).unwrap();
        let nq = nf_brieskorn(&q, 3, &mut g).unwrap();
        for k in 0..3 {
            for j in 0..lhs[k].len() {
                prop_assert_eq!(&lhs[k][j], &(&ra * &np[k][j] + &rb * &nq[k][j]));
            }
        }
    }

    #[test]
    fn nf_is_consistent_across_precisions(i in 0..SAMPLES.len(), p in element()) {
        let mut g = gens(i);
        let hi = nf_brieskorn(&p, 4, &mut g).unwrap();
        for k in 1..4 {
            prop_assert_eq!(&nf_brieskorn(&p, k, &mut g).unwrap()[..], &hi[..k]);
        }
    }

    #[test]
    fn nf_commutes_with_s(i in 0..SAMPLES.len(), p in element()) {
        let mut g = gens(i);
        let sp = &p * &LocalPoly::s(2);
        let lhs = nf_brieskorn(&sp, 4, &mut g).unwrap();
        let rhs = nf_brieskorn(&p, 3, &mut g).unwrap();
        prop_assert!(lhs[0].iter().all(Zero::is_zero));
        prop_assert_eq!(&lhs[1..], &rhs[..]);
    }

    #[test]
    fn nf_is_idempotent(i in 0..SAMPLES.len(), p in element()) {
        let mut g = gens(i);
        let basis = g.milnor.basis_monomials.clone();
        let table = nf_brieskorn(&p, 3, &mut g).unwrap();
        let mut terms = Vec::new();
        for (k, row) in table.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                terms.push((basis[j].mul(&Monomial::new(&[0, 0], k as u32)), c.clone()));
            }
        }
        let back = LocalPoly::from_terms(2, terms);
        prop_assert_eq!(nf_brieskorn(&back, 3, &mut g).unwrap(), table);
    }
}

#[test]
fn a0_is_multiplication_by_f() {
    for s in SAMPLES {
        let md = milnor_data(&common::poly(s)).unwrap();
        let a0 = &t_matrix_jet(&md, 0).unwrap()[0];
        let b = md.max_basis_degree() + md.f.max_x_degree().unwrap() + 1;
        for (j, m) in md.basis_monomials.iter().enumerate() {
            let r = mora_nf(&md.f.mul_monomial(m), &md.jacobian_std, b);
            let col = coordinates(&md, &r).unwrap();
            for (i, c) in col.iter().enumerate() {
                assert_eq!(&a0[(i, j)], c, "{s}: entry ({i}, {j})");
            }
        }
    }
}
