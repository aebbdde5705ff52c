use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::{Monomial, MonomialOrder, WeightedDegree};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Sparse polynomial in `x_0..x_{n-1}` and `s` with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalPoly {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl LocalPoly {
    pub fn zero(n_vars: usize) -> Self {
        LocalPoly { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(n_vars), c)
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.n_vars());
        p.add_term(m, c);
        p
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        Self::term(Monomial::var(n_vars, i), Rational::one())
    }

    pub fn s(n_vars: usize) -> Self {
        Self::term(Monomial::new(&vec![0; n_vars], 1), Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(n_vars: usize, it: I) -> Self {
        let mut p = Self::zero(n_vars);
        for (m, c) in it {
            assert_eq!(m.n_vars(), n_vars);
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.n_vars(), self.n_vars);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get_mut();
                if v.denom().is_one() && c.denom().is_one() {
                    *v = Rational::from_integer(v.numer() + c.numer());
                } else {
                    *v += c;
                }
                if v.is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &LocalPoly) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::VariableMismatch { left: self.n_vars, right: other.n_vars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LocalPoly) -> Result<LocalPoly> {
        self.check(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &LocalPoly) -> Result<LocalPoly> {
        self.check(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn checked_mul(&self, other: &LocalPoly) -> Result<LocalPoly> {
        self.check(other)?;
        let mut r = LocalPoly::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = if ca.denom().is_one() && cb.denom().is_one() {
                    Rational::from_integer(ca.numer() * cb.numer())
                } else {
                    ca * cb
                };
                r.add_term(ma.mul(mb), c);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Rational) -> LocalPoly {
        if c.is_zero() {
            return LocalPoly::zero(self.n_vars);
        }
        LocalPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LocalPoly {
        LocalPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled_shifted(&mut self, c: &Rational, m: &Monomial, other: &LocalPoly) {
        for (a, b) in &other.terms {
            self.add_term(a.mul(m), c * b);
        }
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> LocalPoly {
        let mut r = LocalPoly::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e > 0 {
                let mut d = m.clone();
                d.exps[i] -= 1;
                r.add_term(d, c * Rational::from_integer(e.into()));
            }
        }
        r
    }

    /// Partial derivative with respect to `s`.
    pub fn s_derivative(&self) -> LocalPoly {
        let mut r = LocalPoly::zero(self.n_vars);
        for (m, c) in &self.terms {
            if m.s > 0 {
                let mut d = m.clone();
                d.s -= 1;
                r.add_term(d, c * Rational::from_integer(m.s.into()));
            }
        }
        r
    }

    pub fn lead(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp_unchecked(a.0, b.0))
    }

    /// Maximum of the weighted degrees of the terms.
    pub fn weighted_deg(&self, w: &WeightedDegree) -> Result<i64> {
        self.terms.keys().map(|m| w.of(m)).max().ok_or(Error::ZeroPolynomial)
    }

    /// Lowest total x-degree among the terms (the order of vanishing).
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::x_degree).min()
    }

    pub fn max_x_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::x_degree).max()
    }

    pub fn has_s(&self) -> bool {
        self.terms.keys().any(|m| m.s > 0)
    }

    /// Keeps only the terms of total x-degree at most `d`.
    pub fn truncate_x(&self, d: u32) -> LocalPoly {
        LocalPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.x_degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of total x-degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> LocalPoly {
        LocalPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.x_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms sorted from largest to smallest in `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp_unchecked(b.0, a.0));
        v
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(MonomialOrder::LocalDegreeX).into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(a.to_string());
            }
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            match m.s {
                0 => {}
                1 => factors.push("s".into()),
                e => factors.push(format!("s^{e}")),
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for LocalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_var_names(self.n_vars)))
    }
}

impl Add for &LocalPoly {
    type Output = LocalPoly;
    fn add(self, rhs: &LocalPoly) -> LocalPoly {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl Sub for &LocalPoly {
    type Output = LocalPoly;
    fn sub(self, rhs: &LocalPoly) -> LocalPoly {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}

impl Mul for &LocalPoly {
    type Output = LocalPoly;
    fn mul(self, rhs: &LocalPoly) -> LocalPoly {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl Neg for &LocalPoly {
    type Output = LocalPoly;
    fn neg(self) -> LocalPoly {
        self.scale(&-Rational::one())
    }
}
