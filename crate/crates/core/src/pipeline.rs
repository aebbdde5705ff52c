//! The full computation from a polynomial to the normal form `A_0 + A_1 s`
//! and the spectral invariants, with an optional audit of the composed
//! basis change.

use crate::brieskorn::{BrieskornTMatrix, TMatrixSource};
use crate::error::{Error, Result};
use crate::hodge::{check_symmetries, saito_basis, spectral_data, BasisTag, SpectralData};
use crate::linalg::QMatrix;
use crate::ring::{LocalPoly, Rational};
use crate::saturation::{default_bound, saturate, saturated_matrix, SaturationResult};
use crate::smodule::SeriesMatrix;
use crate::stdbasis::{milnor_data, MilnorData};
use crate::vstructure::{jordan_chevalley, predicted_shifts, VState};

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Overrides the saturation bound (default `mu * n_vars`, or the
    /// environment variable).
    pub saturation_bound: Option<usize>,
    pub audit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Audit {
    /// `e` with `Q = s^e * (unit)`, `Q` the composed basis change.
    pub exponent: usize,
    /// Precision in `s` to which the conjugation identity was checked.
    pub checked_to: usize,
    pub valuation_ok: bool,
    pub leading_invertible: bool,
    pub conjugation_ok: bool,
    pub s2_coefficient_zero: bool,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.valuation_ok && self.leading_invertible && self.conjugation_ok && self.s2_coefficient_zero
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub mu: usize,
    pub n_vars: usize,
    pub kappa: usize,
    pub sigma: usize,
    /// Degree of the t-matrix jet the run used.
    pub jet_degree: usize,
    pub a0: QMatrix,
    pub a1: QMatrix,
    pub tags: Vec<BasisTag>,
    pub spectral: SpectralData,
    pub audit: Option<Audit>,
}

/// Data of the V-stages, kept for the audit.
struct VRun {
    state: VState,
    jet_degree: usize,
}

pub struct Session {
    pub src: BrieskornTMatrix,
    bound: usize,
}

impl Session {
    pub fn new(f: &LocalPoly, opts: &Options) -> Result<Self> {
        let md = milnor_data(f)?;
        let bound = opts.saturation_bound.unwrap_or_else(|| default_bound(md.mu, md.n_vars()));
        Ok(Session { src: BrieskornTMatrix::new(md), bound })
    }

    pub fn milnor(&self) -> &MilnorData {
        self.src.milnor()
    }

    pub fn saturate(&mut self) -> Result<SaturationResult> {
        saturate(&mut self.src, self.bound)
    }

    /// Saturated t-matrix modulo `s^(d+1)`.
    pub fn saturated_jet(&mut self, sat: &SaturationResult, d: usize) -> Result<SeriesMatrix> {
        let a = saturated_matrix(&mut self.src, sat, d)?;
        if !a.coeff(0).is_zero() {
            return Err(Error::Invariant("saturated t-matrix has A_0 != 0".into()));
        }
        Ok(a)
    }

    fn v_run(&mut self, sat: &SaturationResult) -> Result<VRun> {
        let mu = self.milnor().mu;
        let a1 = self.saturated_jet(sat, 1)?.coeff(1);
        let dec = jordan_chevalley(&a1)?;
        let shifts = predicted_shifts(&dec.alphas);
        let mut margin = 4;
        loop {
            let d = sat.kappa + 2 * shifts + margin;
            let a = self.saturated_jet(sat, d)?;
            let mut st = VState::new(a, sat.h_rep.clone());
            let attempt = st.shift_loop(mu.max(1) * (shifts + 1)).and_then(|_| st.v_split());
            match attempt {
                Ok(()) => return Ok(VRun { state: st, jet_degree: d }),
                Err(Error::JetExhausted { .. }) if margin < 64 => margin *= 2,
                Err(e) => return Err(e),
            }
        }
    }

    /// V-stages only: the state after the shift loop and the V-splitting.
    pub fn v_structure(&mut self, sat: &SaturationResult) -> Result<VState> {
        Ok(self.v_run(sat)?.state)
    }

    pub fn run(&mut self, opts: &Options) -> Result<Analysis> {
        let sat = self.saturate()?;
        let vr = self.v_run(&sat)?;
        let st = &vr.state;
        let n = self.milnor().n_vars() - 1;
        let dec = st.eigen.as_ref().ok_or_else(|| Error::Invariant("eigen data missing".into()))?;
        let sb = saito_basis(&st.a.coeff(1), dec, &st.h, st.sigma, n)?;
        let spectral = spectral_data(&sb, dec, n)?;
        check_symmetries(&spectral, n, self.milnor().mu)?;
        let audit = if opts.audit {
            let a = self.src.jet(vr.jet_degree)?;
            Some(audit(&a, &sat, st, &sb.u_f, &sb.h.matrix().select_columns(&sb.perm), &sb.a0, &sb.a1))
        } else {
            None
        };
        Ok(Analysis {
            mu: self.milnor().mu,
            n_vars: self.milnor().n_vars(),
            kappa: sat.kappa,
            sigma: st.sigma,
            jet_degree: vr.jet_degree,
            a0: sb.a0,
            a1: sb.a1,
            tags: sb.tags,
            spectral,
            audit,
        })
    }
}

/// Runs everything on `f`.
pub fn analyse(f: &LocalPoly, opts: &Options) -> Result<Analysis> {
    Session::new(f, opts)?.run(opts)
}

/// Composes every basis change and checks `A Q + s^2 Q' - e s Q = Q X` with
/// `X = A_0 + A_1 s`, where `Q = s^e * unit`.
fn audit(
    a_coeffs: &[QMatrix],
    sat: &SaturationResult,
    st: &VState,
    u_f: &QMatrix,
    h_fin: &SeriesMatrix,
    a0: &QMatrix,
    a1: &QMatrix,
) -> Audit {
    let mu = a0.rows();
    let mut q = sat.h_inf.matrix();
    for t in &st.transforms {
        q = q.mul(t);
    }
    q = q.mul_const_right(u_f).mul(h_fin);
    let e = sat.kappa + st.sigma;
    let da = a_coeffs.len();
    let p = q.prec().map_or(da, |qp| qp.min(da));
    let valuation_ok = p > e && (0..e).all(|k| q.coeff(k).is_zero());
    let leading_invertible = valuation_ok && q.coeff(e).rank() == mu;
    let a = SeriesMatrix::jet(a_coeffs.to_vec(), da);
    let x = SeriesMatrix::exact(vec![a0.clone(), a1.clone()]);
    let lhs = a
        .mul(&q)
        .add(&q.derivative().shift(2))
        .sub(&q.shift(1).scale(&Rational::from_integer(e.into())));
    let rhs = q.mul(&x);
    let diff = lhs.sub(&rhs).truncate(p);
    let conjugation_ok = (0..p).all(|k| diff.coeff(k).is_zero());
    Audit {
        exponent: e,
        checked_to: p,
        valuation_ok,
        leading_invertible,
        conjugation_ok,
        s2_coefficient_zero: x.len() <= 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::{int, rat};

    fn pow(p: &LocalPoly, e: u32) -> LocalPoly {
        (0..e).fold(LocalPoly::one(p.n_vars()), |a, _| &a * p)
    }

    #[test]
    fn cusp_a1_and_audit() {
        let x = LocalPoly::var(2, 0);
        let y = LocalPoly::var(2, 1);
        let f = &pow(&x, 3) + &pow(&y, 3);
        let r = analyse(&f, &Options { audit: true, ..Options::default() }).unwrap();
        assert!(r.a0.is_zero());
        assert_eq!(r.a1, QMatrix::diagonal(&[rat(2, 3), int(1), int(1), rat(4, 3)]));
        assert!(r.audit.unwrap().passed());
    }

    #[test]
    fn t255_golden() {
        let x = LocalPoly::var(2, 0);
        let y = LocalPoly::var(2, 1);
        let f = &(&(&pow(&x, 2) * &pow(&y, 2)) + &pow(&x, 5)) + &pow(&y, 5);
        let r = analyse(&f, &Options { audit: true, ..Options::default() }).unwrap();
        assert_eq!(r.mu, 11);
        let mut a0 = QMatrix::zeros(11, 11);
        a0[(10, 0)] = int(1);
        assert_eq!(r.a0, a0);
        let d = [(1, 2), (7, 10), (7, 10), (9, 10), (9, 10), (1, 1), (11, 10), (11, 10), (13, 10), (13, 10), (3, 2)];
        let d: Vec<Rational> = d.iter().map(|&(p, q)| rat(p, q)).collect();
        assert_eq!(r.a1, QMatrix::diagonal(&d));
        assert!(r.audit.unwrap().passed());
        let pairs: Vec<(Rational, i64, usize)> =
            r.spectral.pairs.iter().map(|p| (p.alpha.clone(), p.l, p.mult)).collect();
        let expect = vec![
            (rat(-1, 2), 2, 1),
            (rat(-3, 10), 1, 2),
            (rat(-1, 10), 1, 2),
            (int(0), 1, 1),
            (rat(1, 10), 1, 2),
            (rat(3, 10), 1, 2),
            (rat(1, 2), 0, 1),
        ];
        assert_eq!(pairs, expect);
    }
}
