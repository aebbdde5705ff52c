use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Exponents = SmallVec<[u32; 4]>;

/// `x^exps * s^s`. The derived `Ord` is only a storage order; use
/// [`MonomialOrder`] for anything mathematical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Exponents,
    pub s: u32,
}

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, n_vars), s: 0 }
    }

    pub fn x(exps: &[u32]) -> Self {
        Monomial { exps: SmallVec::from_slice(exps), s: 0 }
    }

    pub fn new(exps: &[u32], s: u32) -> Self {
        Monomial { exps: SmallVec::from_slice(exps), s }
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut m = Self::one(n_vars);
        m.exps[i] = 1;
        m
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn x_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.s == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// The x-part only (s exponent dropped).
    pub fn x_part(&self) -> Monomial {
        Monomial { exps: self.exps.clone(), s: 0 }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n_vars(), other.n_vars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            s: self.s + other.s,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.s <= other.s && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Whether the x-parts divide, ignoring s.
    pub fn x_divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| b - a).collect(),
            s: other.s - self.s,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
            s: self.s.max(other.s),
        }
    }
}

/// Local degree ordering on x-exponents: lower total degree is greater, so
/// units are maximal; equal degrees are compared reverse-lexicographically
/// (the larger monomial has the smaller exponent at the last differing
/// position).
pub fn cmp_local_x(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match db.cmp(&da) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Local ordering on powers of s: smaller exponent is greater.
pub fn cmp_local_s(a: u32, b: u32) -> Ordering {
    b.cmp(&a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Local degree ordering on x, then the local ordering on s.
    LocalDegreeX,
    /// Block ordering: local on s first, then local degree on x.
    BlockSThenX,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.n_vars() != b.n_vars() {
            return Err(Error::VariableMismatch { left: a.n_vars(), right: b.n_vars() });
        }
        Ok(self.cmp_unchecked(a, b))
    }

    pub fn cmp_unchecked(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::LocalDegreeX => {
                cmp_local_x(&a.exps, &b.exps).then_with(|| cmp_local_s(a.s, b.s))
            }
            MonomialOrder::BlockSThenX => {
                cmp_local_s(a.s, b.s).then_with(|| cmp_local_x(&a.exps, &b.exps))
            }
        }
    }
}

/// Weights for the adic filtration: every x-variable has degree -1 and s
/// has the (negative) degree `deg_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedDegree {
    pub deg_s: i64,
}

impl WeightedDegree {
    pub fn new(deg_s: i64) -> Self {
        assert!(deg_s < 0, "deg_s must be negative");
        WeightedDegree { deg_s }
    }

    pub fn of(&self, m: &Monomial) -> i64 {
        i64::from(m.s) * self.deg_s - i64::from(m.x_degree())
    }
}
