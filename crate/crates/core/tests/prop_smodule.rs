use blk_core::linalg::QMatrix;
use blk_core::ring::Rational;
use blk_core::smodule::{std_basis, Lattice, SVec};
use proptest::prelude::*;

const MU: usize = 3;
const C: usize = 4;

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// Columns with entries of degree < 3 in `s`.
fn gens() -> impl Strategy<Value = Vec<SVec>> {
    let col = proptest::collection::vec(proptest::collection::vec(-3i64..=3, MU), 3)
        .prop_map(|c| SVec { c: c.into_iter().map(|row| row.into_iter().map(q).collect()).collect() });
    proptest::collection::vec(col, 1..5)
}

fn nu_sorted(l: &Lattice) -> Vec<usize> {
    let mut v = l.nu.clone();
    v.sort();
    v
}

fn combine(cols: &[SVec], t: &QMatrix) -> Vec<SVec> {
    (0..t.cols())
        .map(|j| {
            let mut out = SVec::zero();
            for (i, v) in cols.iter().enumerate() {
                if !t[(i, j)].is_integer() || t[(i, j)] != q(0) {
                    out.sub_shifted(&-t[(i, j)].clone(), 0, v, usize::MAX);
                }
            }
            out
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn standard_basis_generates_the_same_module(g in gens()) {
        let lat = std_basis(&g, MU, C, true).unwrap();
        for v in &g {
            prop_assert!(lat.contains_vec(v));
        }
        // adding the basis back to the generators changes nothing
        let mut more = g.clone();
        more.extend(lat.cols.iter().cloned());
        let again = std_basis(&more, MU, C, true).unwrap();
        prop_assert_eq!(nu_sorted(&again), nu_sorted(&lat));
        prop_assert!(again.contains_lattice(&lat) && lat.contains_lattice(&again));
    }

    #[test]
    fn lead_exponents_survive_column_mixing(g in gens(), seed in proptest::collection::vec(-2i64..=2, 16)) {
        let k = g.len();
        let mut t = QMatrix::identity(k);
        let mut it = seed.into_iter();
        for i in 0..k {
            for j in i + 1..k {
                t[(i, j)] = q(it.next().unwrap_or(1));
            }
        }
        let mixed = combine(&g, &t.transpose().mul(&t));
        let a = std_basis(&g, MU, C, true).unwrap();
        let b = std_basis(&mixed, MU, C, true).unwrap();
        prop_assert_eq!(nu_sorted(&a), nu_sorted(&b));
    }

    #[test]
    fn reduction_is_linear_and_idempotent(g in gens(), v in gens(), a in -3i64..=3) {
        let lat = std_basis(&g, MU, C, true).unwrap().reduced();
        let (x, y) = (&v[0], v.last().unwrap());
        let (rx, _) = lat.reduce(x, C);
        let (ry, _) = lat.reduce(y, C);
        let mut sum = x.clone();
        sum.sub_shifted(&q(-a), 0, y, C);
        let (rs, _) = lat.reduce(&sum, C);
        let mut expect = rx.clone();
        expect.sub_shifted(&q(-a), 0, &ry, C);
        let mut diff = rs;
        diff.sub_shifted(&q(1), 0, &expect, C);
        prop_assert!(diff.is_zero_below(C));
        let (rr, _) = lat.reduce(&rx, C);
        let mut d2 = rr;
        d2.sub_shifted(&q(1), 0, &rx, C);
        prop_assert!(d2.is_zero_below(C));
    }

    #[test]
    fn solve_inverts_the_basis(g in gens()) {
        let lat = std_basis(&g, MU, C, true).unwrap();
        let y = blk_core::smodule::SeriesMatrix::from_columns(MU, &g, Some(C));
        let x = lat.solve(&y, C + lat.kappa()).unwrap();
        let p = x.prec().unwrap();
        prop_assert_eq!(lat.matrix().mul(&x).truncate(p), y.truncate(p));
    }
}
