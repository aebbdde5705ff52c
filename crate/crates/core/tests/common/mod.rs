#![allow(dead_code)]

use blk_core::linalg::matrix::span_rank;
use blk_core::linalg::QMatrix;
use blk_core::ring::{LocalPoly, Monomial, Rational};
use num_traits::Zero;
use rand::Rng;

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn poly(s: &str) -> LocalPoly {
    blk_core::parse::parse_poly(s).unwrap()
}

fn monomials_below(n: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..deg.saturating_sub(used) {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// `dim Q[x] / (J + m^N)` by linear algebra on polynomials of degree < N.
fn truncated_quotient_dim(f: &LocalPoly, big_n: u32) -> usize {
    let n = f.n_vars();
    let mons = monomials_below(n, big_n);
    let index = |e: &[u32]| mons.iter().position(|m| m.as_slice() == e);
    let mut vecs = Vec::new();
    for i in 0..n {
        let d = f.derivative(i);
        for m in &mons {
            let p = d.mul_monomial(&Monomial::x(m));
            let mut v = vec![Rational::zero(); mons.len()];
            for (t, c) in p.terms() {
                if let Some(k) = index(&t.exps) {
                    v[k] += c;
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                vecs.push(v);
            }
        }
    }
    mons.len() - span_rank(mons.len(), &vecs)
}

/// Milnor number from truncated quotients: `dim O/(J + m^N)` increases
/// with `N` until it stops, and then equals `dim O/J`. `None` if it has not
/// settled by `max_n`.
pub fn milnor_oracle(f: &LocalPoly, max_n: u32) -> Option<usize> {
    let mut prev = truncated_quotient_dim(f, 1);
    for big_n in 2..=max_n {
        let d = truncated_quotient_dim(f, big_n);
        if d == prev {
            return Some(d);
        }
        prev = d;
    }
    None
}

/// Spectrum of `sum x_i^{a_i}` from the weights `1/a_i` alone: the monomial
/// basis is `x^b` with `0 <= b_i <= a_i - 2`, and `alpha = sum (b_i+1)/a_i - 1`.
pub fn brieskorn_pham_spectrum(a: &[i64]) -> Vec<Rational> {
    let mut out = vec![r(-1, 1)];
    for &ai in a {
        let mut next = Vec::new();
        for x in &out {
            for b in 0..ai - 1 {
                next.push(x + r(b + 1, ai));
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// `c x^a + d y^b + random terms of degree 2..=5`, rational coefficients.
pub fn random_plane_poly(rng: &mut impl Rng) -> LocalPoly {
    let mut terms = Vec::new();
    let a = rng.gen_range(2..=5u32);
    let b = rng.gen_range(2..=5u32);
    let coef = |rng: &mut dyn rand::RngCore| {
        let p = rng.gen_range(1..=7i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        r(p, rng.gen_range(1..=4))
    };
    terms.push((Monomial::x(&[a, 0]), coef(rng)));
    terms.push((Monomial::x(&[0, b]), coef(rng)));
    for _ in 0..rng.gen_range(0..4) {
        let d = rng.gen_range(2..=5u32);
        let i = rng.gen_range(0..=d);
        terms.push((Monomial::x(&[i, d - i]), coef(rng)));
    }
    LocalPoly::from_terms(2, terms)
}

/// Checks the defining properties of a weight filtration centred at `c`:
/// `N W_l ⊆ W_{l-2}` and `N^l : gr_{c+l} -> gr_{c-l}` bijective.
pub fn check_weight_filtration(n: &QMatrix, w: &blk_core::hodge::WeightRep) -> Result<(), String> {
    let d = n.rows();
    let c = w.center;
    let sum_gr: usize = (c - d as i64..=c + d as i64).map(|l| w.gr_dim(l)).sum();
    if sum_gr != d {
        return Err(format!("graded dimensions sum to {sum_gr}, expected {d}"));
    }
    for l in c - d as i64 - 1..=c + d as i64 + 1 {
        let wl = w.w(l);
        let mut base = w.w(l - 2);
        let r0 = span_rank(d, &base);
        base.extend(wl.iter().map(|v| n.mul_vec(v)));
        if span_rank(d, &base) != r0 {
            return Err(format!("N W_{l} is not inside W_{}", l - 2));
        }
    }
    for l in 1..=d as i64 {
        let np = n.pow(l as usize);
        let (hi, lo) = (c + l, c - l);
        if w.gr_dim(hi) != w.gr_dim(lo) {
            return Err(format!("dim gr_{hi} != dim gr_{lo}"));
        }
        let below = w.w(lo - 1);
        let mut img = below.clone();
        img.extend(w.w(hi).iter().map(|v| np.mul_vec(v)));
        let expect = span_rank(d, &below) + w.gr_dim(hi);
        if span_rank(d, &img) != expect {
            return Err(format!("N^{l} does not map gr_{hi} onto gr_{lo}"));
        }
        let mut inside = w.w(lo);
        let r0 = span_rank(d, &inside);
        inside.extend(w.w(hi).iter().map(|v| np.mul_vec(v)));
        if span_rank(d, &inside) != r0 {
            return Err(format!("N^{l} W_{hi} is not inside W_{lo}"));
        }
    }
    Ok(())
}

/// Nilpotent matrix with Jordan blocks `sizes`, conjugated by a random
/// integer unipotent matrix.
pub fn random_nilpotent(sizes: &[usize], rng: &mut impl Rng) -> QMatrix {
    let d: usize = sizes.iter().sum();
    let mut j = QMatrix::zeros(d, d);
    let mut start = 0;
    for &s in sizes {
        for k in 0..s.saturating_sub(1) {
            j[(start + k, start + k + 1)] = r(1, 1);
        }
        start += s;
    }
    let mut u = QMatrix::identity(d);
    for a in 0..d {
        for b in a + 1..d {
            u[(a, b)] = r(rng.gen_range(-2..=2), 1);
        }
    }
    let mut p = QMatrix::identity(d);
    for a in 0..d {
        for b in 0..a {
            p[(a, b)] = r(rng.gen_range(-1..=1), 1);
        }
    }
    let t = p.mul(&u);
    let ti = t.inverse().expect("unipotent factors are invertible");
    t.mul(&j).mul(&ti)
}
