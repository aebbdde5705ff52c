//! Eigenvalues of `A_1`, the shift loop that squeezes the eigenvalues into
//! a window of length < 1, and the canonical V-splitting.

use std::ops::Range;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rational_eigen, QMatrix};
use crate::ring::Rational;
use crate::smodule::{std_basis, Lattice, SeriesMatrix};

/// `S^{-1} A_1 S = diag(alphas) + n_part`, with the generalized eigenspaces
/// in ascending order of eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenDecomposition {
    pub alphas: Vec<Rational>,
    pub s: QMatrix,
    pub s_inv: QMatrix,
    pub n_part: QMatrix,
    /// Distinct eigenvalues with their index ranges.
    pub blocks: Vec<(Rational, Range<usize>)>,
}

impl EigenDecomposition {
    pub fn spread(&self) -> Rational {
        match (self.alphas.first(), self.alphas.last()) {
            (Some(a), Some(b)) => b - a,
            _ => Rational::zero(),
        }
    }
}

pub fn jordan_chevalley(a1: &QMatrix) -> Result<EigenDecomposition> {
    let mu = a1.rows();
    let alphas = rational_eigen(a1)?;
    let mut blocks = Vec::new();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(mu);
    let mut i = 0;
    while i < alphas.len() {
        let a = alphas[i].clone();
        let m = alphas[i..].iter().take_while(|b| **b == a).count();
        let ker = a1.shift_diagonal(&a).pow(m).kernel();
        if ker.len() != m {
            return Err(Error::Invariant(format!(
                "generalized eigenspace of {a} has dimension {} instead of {m}",
                ker.len()
            )));
        }
        let start = cols.len();
        cols.extend(ker);
        blocks.push((a, start..start + m));
        i += m;
    }
    let s = QMatrix::from_columns(mu, &cols);
    let s_inv = s.inverse().ok_or_else(|| Error::Invariant("eigenvector matrix is singular".into()))?;
    let d = QMatrix::diagonal(&alphas);
    let n_part = s_inv.mul(a1).mul(&s).sub(&d);
    Ok(EigenDecomposition { alphas, s, s_inv, n_part, blocks })
}

/// Number of shifts the loop will need, simulated on the eigenvalues alone.
pub fn predicted_shifts(alphas: &[Rational]) -> usize {
    let mut v: Vec<Rational> = alphas.to_vec();
    let mut steps = 0;
    loop {
        let lo = v.iter().min().cloned().unwrap_or_else(Rational::zero);
        let hi = v.iter().max().cloned().unwrap_or_else(Rational::zero);
        if &hi - &lo < Rational::one() {
            return steps;
        }
        let cut = &lo + Rational::one();
        for x in v.iter_mut() {
            if *x < cut {
                *x += Rational::one();
            }
        }
        steps += 1;
    }
}

/// Basis data in the course of the V-stages: the t-matrix jet `a`, and a
/// lattice `h` with `<h> = s^sigma * H''` in the current basis.
#[derive(Clone, Debug)]
pub struct VState {
    pub a: SeriesMatrix,
    pub h: Lattice,
    pub sigma: usize,
    /// Basis changes in order; each maps the old basis to the new one by
    /// right multiplication.
    pub transforms: Vec<SeriesMatrix>,
    pub eigen: Option<EigenDecomposition>,
}

impl VState {
    pub fn new(a: SeriesMatrix, h: Lattice) -> Self {
        VState { a, h, sigma: 0, transforms: Vec::new(), eigen: None }
    }

    pub fn mu(&self) -> usize {
        self.h.mu
    }

    /// Constant basis change `new = old * s`.
    pub fn apply_constant(&mut self, s: &QMatrix, s_inv: &QMatrix) -> Result<()> {
        self.a = self.a.mul_const_left(s_inv).mul_const_right(s);
        let moved: Vec<_> = self.h.matrix().mul_const_left(s_inv).columns();
        self.h = std_basis(&moved, self.mu(), self.h.kappa(), true)?;
        self.transforms.push(SeriesMatrix::constant(s.clone()));
        Ok(())
    }

    /// Brings `A_1` into block-diagonal form, blocks ascending.
    pub fn normalise_eigen(&mut self) -> Result<()> {
        if self.a.prec().is_some_and(|p| p < 2) {
            return Err(Error::JetExhausted { requested: 1, available: 0 });
        }
        let dec = jordan_chevalley(&self.a.coeff(1))?;
        if !dec.s.is_identity() {
            let (s, si) = (dec.s.clone(), dec.s_inv.clone());
            self.apply_constant(&s, &si)?;
        }
        self.eigen = Some(EigenDecomposition {
            s: QMatrix::identity(self.mu()),
            s_inv: QMatrix::identity(self.mu()),
            ..dec
        });
        Ok(())
    }

    /// The basis change `diag(s E_low, E)`: eigenvalues of the first `low`
    /// basis vectors go up by one.
    pub fn shift_low_block(&mut self, low: usize) -> Result<()> {
        let mu = self.mu();
        let p = self.a.prec().unwrap_or(self.a.len() + 1);
        if p < 3 {
            return Err(Error::JetExhausted { requested: 2, available: p.saturating_sub(1) });
        }
        let a = &self.a;
        if !a.coeff(0).is_zero() {
            return Err(Error::Invariant("shift needs A_0 = 0".into()));
        }
        let a1 = a.coeff(1);
        for i in 0..low {
            for j in low..mu {
                if !a1[(i, j)].is_zero() || !a1[(j, i)].is_zero() {
                    return Err(Error::Invariant("A_1 is not block diagonal for the shift".into()));
                }
            }
        }
        let new_p = p - 1;
        let coeffs: Vec<QMatrix> = (0..new_p)
            .map(|k| {
                QMatrix::from_fn(mu, mu, |i, j| match (i < low, j < low) {
                    (true, true) => {
                        let v = a.entry(k, i, j);
                        if k == 1 && i == j {
                            v + Rational::one()
                        } else {
                            v
                        }
                    }
                    (true, false) => a.entry(k + 1, i, j),
                    (false, true) => {
                        if k == 0 {
                            Rational::zero()
                        } else {
                            a.entry(k - 1, i, j)
                        }
                    }
                    (false, false) => a.entry(k, i, j),
                })
            })
            .collect();
        self.a = SeriesMatrix::new(mu, mu, coeffs, Some(new_p));
        let mut e: Vec<usize> = vec![0; mu];
        for x in e.iter_mut().skip(low) {
            *x = 1;
        }
        let moved = self.h.matrix().scale_rows_by_powers(&e).columns();
        self.h = std_basis(&moved, mu, self.h.kappa() + 1, true)?;
        self.sigma += 1;
        let mut d: Vec<usize> = vec![1; mu];
        for x in d.iter_mut().skip(low) {
            *x = 0;
        }
        self.transforms.push(SeriesMatrix::identity(mu).scale_cols_by_powers(&d));
        Ok(())
    }

    /// Shifts until the eigenvalues of `A_1` span less than 1.
    pub fn shift_loop(&mut self, max_steps: usize) -> Result<()> {
        self.normalise_eigen()?;
        let mut steps = 0;
        loop {
            let dec = self.eigen.clone().expect("eigen data present");
            if dec.spread() < Rational::one() {
                return Ok(());
            }
            if steps == max_steps {
                return Err(Error::SpreadNotClosing { steps });
            }
            let cut = &dec.alphas[0] + Rational::one();
            let low = dec.alphas.iter().take_while(|a| **a < cut).count();
            self.shift_low_block(low)?;
            self.normalise_eigen()?;
            steps += 1;
        }
    }

    /// Replaces the basis by the canonical V-splitting, after which the
    /// t-matrix is exactly `A_1 s`.
    pub fn v_split(&mut self) -> Result<()> {
        let mu = self.mu();
        let dec = self.eigen.clone().ok_or_else(|| Error::Invariant("eigen data missing".into()))?;
        let p = self.a.prec().unwrap_or(self.a.len() + 1);
        let u = v_split_transform(&self.a, &dec, p.saturating_sub(1))?;
        let kap = self.h.kappa();
        if u.prec().is_some_and(|q| q < kap) {
            return Err(Error::JetExhausted { requested: kap, available: u.prec().unwrap() });
        }
        let ulat = Lattice { mu, cols: u.as_exact().truncate(kap.max(1)).columns(), nu: vec![0; mu], reduced: false };
        let rep = ulat.solve(&self.h.matrix(), kap.max(1))?;
        self.h = std_basis(&rep.columns(), mu, kap, true)?;
        self.transforms.push(u);
        self.a = SeriesMatrix::exact(vec![QMatrix::zeros(mu, mu), self.a.coeff(1)]);
        Ok(())
    }
}

/// Solves `X A_1 - A_1 X - k X = R` for `A_1` block diagonal with blocks
/// `alpha_b + N_b`.
pub fn solve_commutator(dec: &EigenDecomposition, k: usize, r: &QMatrix) -> Result<QMatrix> {
    let mu = r.rows();
    let n = &dec.n_part;
    let mut x = QMatrix::zeros(mu, mu);
    let kk = Rational::from_integer(k.into());
    for (bi, ri) in &dec.blocks {
        for (bj, rj) in &dec.blocks {
            let c = bj - bi - &kk;
            if c.is_zero() {
                return Err(Error::SingularCommutator { k });
            }
            let rows: Vec<usize> = ri.clone().collect();
            let cols: Vec<usize> = rj.clone().collect();
            let ni = n.submatrix(&rows, &rows);
            let nj = n.submatrix(&cols, &cols);
            // (c + L)^{-1} R with L(Y) = Y N_j - N_i Y nilpotent
            let mut term = r.submatrix(&rows, &cols).scale(&c.recip());
            let mut acc = term.clone();
            let neg_inv = -c.recip();
            for _ in 0..(rows.len() + cols.len()) {
                term = term.mul(&nj).sub(&ni.mul(&term)).scale(&neg_inv);
                if term.is_zero() {
                    break;
                }
                acc = acc.add(&term);
            }
            for (a, &i) in rows.iter().enumerate() {
                for (b, &j) in cols.iter().enumerate() {
                    x[(i, j)] = acc[(a, b)].clone();
                }
            }
        }
    }
    Ok(x)
}

/// `U` with `U_0 = E` and `U A_1 s = (A + s^2 d/ds) U`, known modulo
/// `s^terms` (needs `A` to degree `terms`).
pub fn v_split_transform(a: &SeriesMatrix, dec: &EigenDecomposition, terms: usize) -> Result<SeriesMatrix> {
    let mu = dec.alphas.len();
    if !a.coeff(0).is_zero() {
        return Err(Error::Invariant("V-splitting needs A_0 = 0".into()));
    }
    let mut u: Vec<QMatrix> = vec![QMatrix::identity(mu)];
    for k in 1..terms {
        let mut r = QMatrix::zeros(mu, mu);
        for (j, uj) in u.iter().enumerate() {
            let ak = a.coeff(k + 1 - j);
            if !ak.is_zero() {
                r.add_assign(&ak.mul(uj));
            }
        }
        u.push(solve_commutator(dec, k, &r)?);
    }
    Ok(SeriesMatrix::jet(u, terms.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::{int, rat};

    fn m(rows: &[&[Rational]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn jc_diagonal_input() {
        let a = QMatrix::diagonal(&[rat(1, 2), rat(3, 2)]);
        let d = jordan_chevalley(&a).unwrap();
        assert!(d.s.is_identity());
        assert_eq!(d.alphas, vec![rat(1, 2), rat(3, 2)]);
    }

    #[test]
    fn jc_distinct_eigenvalues_are_semisimple() {
        let a = m(&[&[int(1), int(1)], &[int(0), int(0)]]);
        let d = jordan_chevalley(&a).unwrap();
        assert_eq!(d.alphas, vec![int(0), int(1)]);
        assert!(d.n_part.is_zero());
    }

    #[test]
    fn jc_jordan_block() {
        let a = m(&[&[rat(1, 3), int(1)], &[int(0), rat(1, 3)]]);
        let d = jordan_chevalley(&a).unwrap();
        assert!(d.s.is_identity());
        assert_eq!(d.n_part, m(&[&[int(0), int(1)], &[int(0), int(0)]]));
    }

    #[test]
    fn shift_closes_unit_gap() {
        let a1 = QMatrix::diagonal(&[int(0), int(1)]);
        let a = SeriesMatrix::jet(vec![QMatrix::zeros(2, 2), a1], 5);
        let mut st = VState::new(a, Lattice::identity(2));
        st.shift_loop(1).unwrap();
        assert_eq!(st.sigma, 1);
        assert_eq!(st.a.coeff(1), QMatrix::identity(2));
    }

    #[test]
    fn spread_below_one_is_untouched() {
        let a1 = QMatrix::diagonal(&[rat(1, 2), rat(3, 4)]);
        let a = SeriesMatrix::jet(vec![QMatrix::zeros(2, 2), a1.clone()], 4);
        let mut st = VState::new(a, Lattice::identity(2));
        st.shift_loop(0).unwrap();
        assert_eq!(st.sigma, 0);
        assert_eq!(st.a.coeff(1), a1);
    }

    #[test]
    fn first_order_correction_is_entrywise() {
        let (a, b) = (rat(1, 5), rat(1, 2));
        let c = m(&[&[int(1), int(2)], &[int(3), int(4)]]);
        let series = SeriesMatrix::jet(vec![QMatrix::zeros(2, 2), QMatrix::diagonal(&[a.clone(), b.clone()]), c.clone()], 3);
        let dec = jordan_chevalley(&series.coeff(1)).unwrap();
        let u = v_split_transform(&series, &dec, 2).unwrap();
        let alpha = [a, b];
        for i in 0..2 {
            for j in 0..2 {
                let expect = &c[(i, j)] / (&alpha[j] - &alpha[i] - int(1));
                assert_eq!(u.coeff(1)[(i, j)], expect);
            }
        }
    }

    #[test]
    fn resonance_is_singular() {
        let a1 = QMatrix::diagonal(&[int(0), int(1)]);
        let series = SeriesMatrix::jet(vec![QMatrix::zeros(2, 2), a1.clone(), QMatrix::identity(2)], 3);
        let dec = jordan_chevalley(&a1).unwrap();
        assert!(matches!(v_split_transform(&series, &dec, 2), Err(Error::SingularCommutator { k: 1 })));
    }

    #[test]
    fn predicted_shift_count() {
        assert_eq!(predicted_shifts(&[int(0), int(1)]), 1);
        assert_eq!(predicted_shifts(&[rat(1, 2), rat(3, 4)]), 0);
        assert_eq!(predicted_shifts(&[int(0), int(1), int(2)]), 2);
    }
}
