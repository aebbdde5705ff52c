//! The formal Brieskorn lattice as a quotient of `Q[[s,x]]`, its normal
//! form and the matrix of `t` in the monomial basis.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::ring::{LocalPoly, Monomial, Rational, WeightedDegree};
use crate::stdbasis::MilnorData;

/// Sort key realising the block ordering (<_s, <_x) so that the first key
/// in a `BTreeMap` is the leading term: smaller s-power, then smaller
/// x-degree, then the local tie-break (smaller last exponent first).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    s: u32,
    deg: u32,
    rev: Vec<u32>,
}

impl Key {
    fn of(m: &Monomial) -> Key {
        Key { s: m.s, deg: m.x_degree(), rev: m.exps.iter().rev().copied().collect() }
    }

    fn monomial(&self) -> Monomial {
        let exps: Vec<u32> = self.rev.iter().rev().copied().collect();
        Monomial::new(&exps, self.s)
    }
}

/// The degree data attached to the basis `[m]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdicFiltration {
    pub weights: WeightedDegree,
}

impl AdicFiltration {
    pub fn new(md: &MilnorData) -> Self {
        let deg_s = -i64::from(md.max_basis_degree()) - 2;
        AdicFiltration { weights: WeightedDegree::new(deg_s) }
    }

    pub fn deg_s(&self) -> i64 {
        self.weights.deg_s
    }

    pub fn n_k(&self, k: usize) -> i64 {
        k as i64 * self.weights.deg_s + 2
    }

    /// Whether the term `s^a x^b` lies in `V_K`.
    pub fn in_v(&self, m: &Monomial, k: usize) -> bool {
        m.s as usize >= k || self.weights.of(m) < self.n_k(k)
    }
}

/// Lazily generated relation family
/// `h_{j,b} = g_j x^b - s * sum_i d_i(B_ij x^b)`.
#[derive(Clone, Debug)]
pub struct BrieskornGens {
    pub milnor: MilnorData,
    cache: HashMap<(usize, Monomial), Rc<LocalPoly>>,
}

impl BrieskornGens {
    pub fn new(milnor: MilnorData) -> Self {
        BrieskornGens { milnor, cache: HashMap::new() }
    }

    pub fn h(&mut self, j: usize, beta: &Monomial) -> Rc<LocalPoly> {
        let key = (j, beta.clone());
        if let Some(h) = self.cache.get(&key) {
            return h.clone();
        }
        let md = &self.milnor;
        let n = md.n_vars();
        let mut h = md.jacobian_std.gens[j].mul_monomial(beta);
        let mut div = LocalPoly::zero(n);
        for i in 0..n {
            div = &div + &md.transform[i][j].mul_monomial(beta).derivative(i);
        }
        let s = Monomial::new(&vec![0; n], 1);
        h.add_scaled_shifted(&-Rational::from_integer(1.into()), &s, &div);
        let h = Rc::new(h);
        self.cache.insert(key, h.clone());
        h
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }
}

/// Resumable reduction state of one element of `Q[[s,x]]`.
#[derive(Clone, Debug)]
pub struct NfState {
    done_k: usize,
    /// `coeffs[k][i]` is the coefficient of `s^k m_i`.
    coeffs: Vec<Vec<Rational>>,
    /// Terms dropped because they lay in `V_done_k`.
    pending: BTreeMap<Key, Rational>,
}

impl NfState {
    pub fn new(p: &LocalPoly) -> Self {
        NfState {
            done_k: 0,
            coeffs: Vec::new(),
            pending: p.terms().map(|(m, c)| (Key::of(m), c.clone())).collect(),
        }
    }

    pub fn done(&self) -> usize {
        self.done_k
    }

    /// Coefficient table `c[k][i]` for `k < K`.
    pub fn table(&self, k: usize) -> Vec<Vec<Rational>> {
        self.coeffs[..k].to_vec()
    }
}

/// Continues the reduction of `state` until its coefficients are exact
/// modulo `s^K H''`.
pub fn continue_nf(state: &mut NfState, k_target: usize, gens: &mut BrieskornGens) -> Result<()> {
    if k_target <= state.done_k {
        return Ok(());
    }
    let mu = gens.milnor.mu;
    let filt = AdicFiltration::new(&gens.milnor);
    while state.coeffs.len() < k_target {
        state.coeffs.push(vec![Rational::zero(); mu]);
    }
    let mut rest = std::mem::take(&mut state.pending);
    let mut pending = BTreeMap::new();
    while let Some((key, c)) = rest.pop_first() {
        let m = key.monomial();
        if filt.in_v(&m, k_target) {
            if m.s as usize >= k_target {
                pending.insert(key, c);
                pending.extend(std::mem::take(&mut rest));
                break;
            }
            pending.insert(key, c);
            continue;
        }
        let xm = m.x_part();
        match gens.milnor.jacobian_std.reducer_for(&xm) {
            Some(j) => {
                let beta = gens.milnor.jacobian_std.leads[j].quotient(&xm);
                let h = gens.h(j, &beta);
                let shift = Monomial::new(&vec![0; m.n_vars()], m.s);
                for (hm, hc) in h.terms() {
                    let t = hm.mul(&shift);
                    if t == m {
                        continue;
                    }
                    let v = -(&c * hc);
                    let k = Key::of(&t);
                    match rest.entry(k) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(v);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() += v;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                    }
                }
            }
            None => {
                let i = gens.milnor.index_of(&xm).ok_or_else(|| {
                    Error::Invariant(format!("irreducible monomial {xm:?} outside the basis"))
                })?;
                state.coeffs[m.s as usize][i] += c;
            }
        }
    }
    state.pending = pending;
    state.done_k = k_target;
    Ok(())
}

/// Coefficients `c[k][i]`, `k < K`, of `p` in the basis `s^k [m_i]`.
pub fn nf_brieskorn(p: &LocalPoly, k: usize, gens: &mut BrieskornGens) -> Result<Vec<Vec<Rational>>> {
    let mut st = NfState::new(p);
    continue_nf(&mut st, k, gens)?;
    Ok(st.table(k))
}

/// Anything that can hand out jets `A_0..A_D` of a t-matrix.
pub trait TMatrixSource {
    fn mu(&self) -> usize;
    /// Coefficients `A_0..=A_d`.
    fn jet(&mut self, d: usize) -> Result<Vec<QMatrix>>;
}

/// The matrix of `t` in the monomial basis, extended on demand.
#[derive(Clone, Debug)]
pub struct BrieskornTMatrix {
    gens: BrieskornGens,
    columns: Vec<NfState>,
    coeffs: Vec<QMatrix>,
}

impl BrieskornTMatrix {
    pub fn new(md: MilnorData) -> Self {
        let columns =
            md.basis_monomials.iter().map(|m| NfState::new(&md.f.mul_monomial(m))).collect();
        BrieskornTMatrix { gens: BrieskornGens::new(md), columns, coeffs: Vec::new() }
    }

    pub fn milnor(&self) -> &MilnorData {
        &self.gens.milnor
    }

    pub fn available(&self) -> usize {
        self.coeffs.len()
    }
}

impl TMatrixSource for BrieskornTMatrix {
    fn mu(&self) -> usize {
        self.gens.milnor.mu
    }

    fn jet(&mut self, d: usize) -> Result<Vec<QMatrix>> {
        if self.coeffs.len() <= d {
            let mu = self.mu();
            for col in self.columns.iter_mut() {
                continue_nf(col, d + 1, &mut self.gens)?;
            }
            self.coeffs = (0..=d)
                .map(|k| QMatrix::from_fn(mu, mu, |i, j| self.columns[j].coeffs[k][i].clone()))
                .collect();
        }
        Ok(self.coeffs[..=d].to_vec())
    }
}

/// A t-matrix given by finitely many coefficients. When `exact` is set the
/// series is a polynomial and all further coefficients are zero.
#[derive(Clone, Debug)]
pub struct FixedJet {
    pub coeffs: Vec<QMatrix>,
    pub exact: bool,
}

impl TMatrixSource for FixedJet {
    fn mu(&self) -> usize {
        self.coeffs[0].rows()
    }

    fn jet(&mut self, d: usize) -> Result<Vec<QMatrix>> {
        let mu = self.mu();
        if d < self.coeffs.len() {
            return Ok(self.coeffs[..=d].to_vec());
        }
        if !self.exact {
            return Err(Error::JetExhausted { requested: d, available: self.coeffs.len() - 1 });
        }
        let mut out = self.coeffs.clone();
        out.resize(d + 1, QMatrix::zeros(mu, mu));
        Ok(out)
    }
}

/// Convenience: `A_0..=A_d` in the monomial basis.
pub fn t_matrix_jet(md: &MilnorData, d: usize) -> Result<Vec<QMatrix>> {
    BrieskornTMatrix::new(md.clone()).jet(d)
}
