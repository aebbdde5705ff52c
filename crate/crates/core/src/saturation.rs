//! Saturation of the Brieskorn lattice under `s^{-1} t`.

use crate::brieskorn::TMatrixSource;
use crate::error::{Error, Result};
use crate::ring::Rational;
use crate::smodule::{std_basis, Lattice, SeriesMatrix};

/// Environment variable overriding the iteration bound.
pub const MAX_STEPS_ENV: &str = "BLK_MAX_SATURATION_STEPS";

#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub kappa: usize,
    /// Minimal standard basis of `<H_kappa>` in the input basis.
    pub h_inf: Lattice,
    /// Representation of the original lattice in the basis
    /// `s^{-kappa} H_inf`, as a minimal standard basis.
    pub h_rep: Lattice,
}

/// `(A + s^2 d/ds) Q`
pub fn apply_t(a: &SeriesMatrix, q: &SeriesMatrix) -> SeriesMatrix {
    a.mul(q).add(&q.derivative().shift(2))
}

pub fn default_bound(mu: usize, n_vars: usize) -> usize {
    std::env::var(MAX_STEPS_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(mu * n_vars.max(1))
}

/// Runs `H_{k+1} = (s H_k | Q_k)`, `Q_k = (jet_k A + s^2 d/ds) Q_{k-1}`
/// until `<Q_k>` lies in `<s H_k>`, so that `s^{-k} <H_k>` no longer grows.
pub fn saturate(src: &mut dyn TMatrixSource, bound: usize) -> Result<SaturationResult> {
    let mu = src.mu();
    let mut h = Lattice::identity(mu);
    let mut q = SeriesMatrix::identity(mu);
    let mut k = 0;
    loop {
        if k > bound {
            return Err(Error::SaturationBound { bound });
        }
        let a = SeriesMatrix::jet(src.jet(k)?, k + 1);
        q = apply_t(&a, &q).truncate(k + 1).as_exact();
        let sh = h.shifted(1);
        if sh.contains(&q) {
            break;
        }
        let mut gens = sh.cols.clone();
        gens.extend(q.columns());
        h = std_basis(&gens, mu, k + 1, true)?;
        k += 1;
    }
    let h_rep = if k == 0 {
        Lattice::identity(mu)
    } else {
        let target = SeriesMatrix::identity(mu).shift(k);
        let rep = h.solve(&target, k + h.kappa())?;
        std_basis(&rep.columns(), mu, k, true)?
    };
    Ok(SaturationResult { kappa: k, h_inf: h, h_rep })
}

/// `H^{-1}((A - kappa s E) H + s^2 H')` modulo `s^(d+1)`, given `A` to
/// degree `d + max nu(H)`.
pub fn transport(a: &SeriesMatrix, h: &Lattice, kappa: usize, d: usize) -> Result<SeriesMatrix> {
    let hm = h.matrix();
    let mu = h.mu;
    let shift = SeriesMatrix::identity(mu).shift(1).scale(&Rational::from_integer(kappa.into()));
    let y = a.sub(&shift).mul(&hm).add(&hm.derivative().shift(2));
    let x = h.solve(&y, d + 1 + h.kappa())?;
    Ok(x.truncate(d + 1))
}

/// Jet of the saturated t-matrix to degree `d`.
pub fn saturated_matrix(src: &mut dyn TMatrixSource, sat: &SaturationResult, d: usize) -> Result<SeriesMatrix> {
    let need = d + sat.h_inf.kappa();
    let a = SeriesMatrix::jet(src.jet(need)?, need + 1);
    transport(&a, &sat.h_inf, sat.kappa, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brieskorn::{BrieskornTMatrix, FixedJet};
    use crate::linalg::QMatrix;
    use crate::ring::rational::{int, rat};
    use crate::ring::LocalPoly;
    use crate::stdbasis::milnor_data;

    fn pow(p: &LocalPoly, e: u32) -> LocalPoly {
        (0..e).fold(LocalPoly::one(p.n_vars()), |a, _| &a * p)
    }

    #[test]
    fn quasihomogeneous_is_already_saturated() {
        let a1 = QMatrix::diagonal(&[rat(2, 3), int(1), int(1), rat(4, 3)]);
        let mut src = FixedJet { coeffs: vec![QMatrix::zeros(4, 4), a1.clone()], exact: true };
        let sat = saturate(&mut src, 10).unwrap();
        assert_eq!(sat.kappa, 0);
        assert!(sat.h_rep.is_identity());
        let a = saturated_matrix(&mut src, &sat, 3).unwrap();
        assert_eq!(a.coeff(1), a1);
        assert!(a.coeff(0).is_zero() && a.coeff(2).is_zero());
    }

    #[test]
    fn t255_saturation() {
        let x = LocalPoly::var(2, 0);
        let y = LocalPoly::var(2, 1);
        let f = &(&(&pow(&x, 2) * &pow(&y, 2)) + &pow(&x, 5)) + &pow(&y, 5);
        let mut src = BrieskornTMatrix::new(milnor_data(&f).unwrap());
        let sat = saturate(&mut src, 40).unwrap();
        assert!(sat.kappa >= 1);
        let a = saturated_matrix(&mut src, &sat, 3).unwrap();
        assert!(a.coeff(0).is_zero());
        // the representation contains s^kappa E
        assert!(sat.h_rep.kappa() <= sat.kappa);
        // re-saturating is a no-op
        let mut again = FixedJet { coeffs: a.coeffs().to_vec(), exact: false };
        let sat2 = saturate(&mut again, 40).unwrap();
        assert_eq!(sat2.kappa, 0);
        assert!(sat2.h_rep.is_identity());
    }
}
