//! Dense univariate polynomials over the rationals, characteristic
//! polynomials and exact rational root isolation.

use num_bigint::BigInt;
use nalgebra::{DMatrix, Schur};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::QMatrix;
use crate::error::{Error, Result};
use crate::ring::rational::common_denominator;
use crate::ring::Rational;

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Rational::one()])
    }

    /// `x - r`
    pub fn linear(r: &Rational) -> Self {
        UPoly(vec![-r.clone(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        UPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut r = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        UPoly::new(r)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let lc = d.lc();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn square_free_part(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer multiple with coprime integer coefficients and positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = common_denominator(self.0.iter());
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        let sign = if self.lc().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|x| x / &g * &sign).collect()
    }
}

/// Characteristic polynomial `det(x E - A)` via reduction to upper
/// Hessenberg form by exact similarity transforms.
pub fn char_poly(a: &QMatrix) -> UPoly {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !h[(i, c)].is_zero()) else { continue };
        if p != c + 1 {
            h.swap_rows(p, c + 1);
            h.swap_cols(p, c + 1);
        }
        let piv = h[(c + 1, c)].clone();
        for i in c + 2..n {
            if h[(i, c)].is_zero() {
                continue;
            }
            let m = &h[(i, c)] / &piv;
            for j in 0..n {
                let v = &m * &h[(c + 1, j)];
                h[(i, j)] -= v;
            }
            for r in 0..n {
                let v = &m * &h[(r, i)];
                h[(r, c + 1)] += v;
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{ik} (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
    let mut ps: Vec<UPoly> = vec![UPoly::one()];
    for k in 0..n {
        let mut p = UPoly::linear(&h[(k, k)]).mul(&ps[k]);
        let mut prod = Rational::one();
        for i in (0..k).rev() {
            prod *= &h[(i + 1, i)];
            if prod.is_zero() {
                break;
            }
            let c = &h[(i, k)] * &prod;
            if !c.is_zero() {
                p = p.sub(&ps[i].scale(&c));
            }
        }
        ps.push(p);
    }
    ps.pop().unwrap()
}

fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Simplest rational (smallest denominator, then smallest absolute
/// numerator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let fl = lo.floor();
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Exact roots among the continued-fraction convergents of floating-point
/// approximations; `sq` must be square-free. Returns the roots found and
/// the deflated remainder.
fn convergent_roots(sq: &UPoly) -> (Vec<Rational>, UPoly) {
    let mut rest = sq.clone();
    let mut found = Vec::new();
    let d = match sq.degree() {
        Some(d) if d > 0 => d,
        _ => return (found, rest),
    };
    let m = sq.monic();
    let c: Option<Vec<f64>> = m.0.iter().map(|x| x.to_f64().filter(|v| v.is_finite())).collect();
    let Some(c) = c else { return (found, rest) };
    let comp = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -c[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let Some(schur) = Schur::try_new(comp, f64::EPSILON, 10_000) else { return (found, rest) };
    for z in schur.complex_eigenvalues().iter() {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            continue;
        }
        let tol = 1e-6 * (1.0 + z.re.abs());
        for cand in convergents(z.re, 1_000_000_000) {
            let close = cand.to_f64().is_some_and(|v| (v - z.re).abs() < tol);
            if !close || found.contains(&cand) {
                continue;
            }
            if rest.eval(&cand).is_zero() {
                rest = rest.div_rem(&UPoly::linear(&cand)).0;
                found.push(cand);
                break;
            }
        }
    }
    (found, rest)
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() || x.abs() > 1e15 {
        return out;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        out.push(Rational::new(p2.clone(), q2.clone()));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

/// Exact isolation of the roots of the square-free `sq` by Sturm
/// sequences.
fn sturm_roots(sq: &UPoly, deg: usize) -> Result<Vec<Rational>> {
    let mut distinct = Vec::new();
    if sq.degree().unwrap_or(0) == 0 {
        return Ok(distinct);
    }
    let ints = UPoly::new(sq.primitive_integer().into_iter().map(Rational::from_integer).collect());
    let lc = ints.lc();
    let eps = (&lc * &lc * Rational::from_integer(2.into())).recip();
    let bound = Rational::one() + sq.0.iter().map(|c| c.abs()).fold(Rational::zero(), |a, b| a.max(b));
    let seq = sturm_sequence(sq);

    // Stack of half-open intervals (a, b] with a, b not roots, plus count.
    let lo = -bound.clone();
    let hi = bound;
    let total = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
    let mut stack = vec![(lo, hi, total)];
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 && &b - &a < eps {
            let r = simplest_between(&a, &b);
            if !sq.eval(&r).is_zero() {
                return Err(Error::IrrationalEigenvalue { residual_degree: deg });
            }
            distinct.push(r);
            continue;
        }
        let mid = (&a + &b) / Rational::from_integer(2.into());
        let vm = sign_changes(&seq, &mid);
        let va = sign_changes(&seq, &a);
        let vb = sign_changes(&seq, &b);
        if sq.eval(&mid).is_zero() {
            distinct.push(mid.clone());
            stack.push((a, mid.clone(), va - vm - 1));
            stack.push((mid, b, vm - vb));
        } else {
            stack.push((a, mid.clone(), va - vm));
            stack.push((mid, b, vm - vb));
        }
    }
    Ok(distinct)
}

/// All roots of `p` with multiplicity, ascending. Fails unless every root
/// is rational.
pub fn rational_roots(p: &UPoly) -> Result<Vec<Rational>> {
    let deg = p.degree().expect("zero polynomial has no root multiset");
    if deg == 0 {
        return Ok(Vec::new());
    }
    let sq = p.square_free_part();
    let (mut distinct, rest) = convergent_roots(&sq);
    distinct.extend(sturm_roots(&rest, deg - distinct.len())?);
    distinct.sort();

    let mut rest = p.clone();
    let mut roots = Vec::new();
    for r in &distinct {
        let lin = UPoly::linear(r);
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            roots.push(r.clone());
            rest = q;
        }
    }
    if roots.len() != deg {
        return Err(Error::IrrationalEigenvalue { residual_degree: deg - roots.len() });
    }
    Ok(roots)
}

/// Eigenvalues of a rational matrix with multiplicity, ascending.
pub fn rational_eigen(a: &QMatrix) -> Result<Vec<Rational>> {
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    rational_roots(&char_poly(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::{int, rat};

    #[test]
    fn char_poly_of_companion() {
        // companion of x^2 - 3x + 2
        let a = QMatrix::from_rows(vec![vec![int(0), int(-2)], vec![int(1), int(3)]]);
        assert_eq!(char_poly(&a), UPoly::new(vec![int(2), int(-3), int(1)]));
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(7, 20)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-7, 10), &rat(-13, 20)), rat(-2, 3));
        assert_eq!(simplest_between(&rat(1, 2), &rat(5, 2)), int(1));
    }

    #[test]
    fn roots_with_multiplicity() {
        let p = UPoly::linear(&rat(7, 10)).mul(&UPoly::linear(&rat(7, 10))).mul(&UPoly::linear(&rat(1, 2)));
        assert_eq!(rational_roots(&p).unwrap(), vec![rat(1, 2), rat(7, 10), rat(7, 10)]);
    }

    #[test]
    fn nearby_roots_with_shared_convergents() {
        let rs = [int(1), rat(13, 14), rat(9, 14), rat(1, 2), rat(-5, 14), rat(2, 3)];
        let p = rs.iter().fold(UPoly::one(), |acc, r| acc.mul(&UPoly::linear(r)));
        let mut expect = rs.to_vec();
        expect.sort();
        assert_eq!(rational_roots(&p).unwrap(), expect);
        let (found, rest) = convergent_roots(&p);
        assert_eq!((found.len(), rest.degree()), (6, Some(0)));
    }

    #[test]
    fn sturm_fallback_alone() {
        let p = UPoly::linear(&rat(3, 7)).mul(&UPoly::linear(&rat(-1, 2)));
        let mut r = sturm_roots(&p, 2).unwrap();
        r.sort();
        assert_eq!(r, vec![rat(-1, 2), rat(3, 7)]);
    }

    #[test]
    fn irrational_roots_rejected() {
        let p = UPoly::new(vec![int(-2), int(0), int(1)]);
        assert!(matches!(rational_roots(&p), Err(Error::IrrationalEigenvalue { .. })));
    }

    #[test]
    fn nilpotent_eigen() {
        let a = QMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(0), int(0)]]);
        assert_eq!(rational_eigen(&a).unwrap(), vec![int(0), int(0)]);
    }
}
