//! Standard bases for the local degree ordering (Mora's tangent cone
//! algorithm) and Milnor algebra data.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::poly::default_var_names;
use crate::ring::{LocalPoly, Monomial, MonomialOrder, Rational};

const ORDER: MonomialOrder = MonomialOrder::LocalDegreeX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StdBasis {
    pub gens: Vec<LocalPoly>,
    pub leads: Vec<Monomial>,
}

impl StdBasis {
    /// Index of the first generator whose lead divides `m` (x-part only).
    pub fn reducer_for(&self, m: &Monomial) -> Option<usize> {
        self.leads.iter().position(|l| l.x_divides(m))
    }

    pub fn n_vars(&self) -> usize {
        self.leads.first().map_or(0, Monomial::n_vars)
    }
}

#[derive(Clone, Debug)]
pub struct MilnorData {
    pub f: LocalPoly,
    pub mu: usize,
    pub basis_monomials: Vec<Monomial>,
    pub jacobian_std: StdBasis,
    /// `transform[i][j]` is `B_ij`, so that `g_j = sum_i d_i(f) B_ij`.
    pub transform: Vec<Vec<LocalPoly>>,
}

impl MilnorData {
    pub fn n_vars(&self) -> usize {
        self.f.n_vars()
    }

    /// Position of `m` in the monomial basis.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.basis_monomials.iter().position(|b| b == m)
    }

    pub fn max_basis_degree(&self) -> u32 {
        self.basis_monomials.iter().map(Monomial::x_degree).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
struct Elem {
    p: LocalPoly,
    lm: Monomial,
    lc: Rational,
    ecart: u32,
    coef: Vec<LocalPoly>,
}

impl Elem {
    fn new(p: LocalPoly, coef: Vec<LocalPoly>) -> Option<Elem> {
        let (lm, lc) = p.lead(ORDER).map(|(m, c)| (m.clone(), c.clone()))?;
        let ecart = p.max_x_degree().unwrap() - lm.x_degree();
        Some(Elem { p, lm, lc, ecart, coef })
    }

    /// `self - c * m * other`
    fn sub_multiple(&self, c: &Rational, m: &Monomial, other: &Elem) -> Option<Elem> {
        let mut p = self.p.clone();
        p.add_scaled_shifted(&-c.clone(), m, &other.p);
        let coef = self
            .coef
            .iter()
            .zip(&other.coef)
            .map(|(a, b)| {
                let mut a = a.clone();
                a.add_scaled_shifted(&-c.clone(), m, b);
                a
            })
            .collect();
        Elem::new(p, coef)
    }
}

/// Mora's weak normal form: reduces only the leading term, enlarging the
/// reducer set by intermediate remainders of smaller ecart.
fn nf_mora(h: Elem, s: &[Elem]) -> Option<Elem> {
    let mut t: Vec<Elem> = s.to_vec();
    let mut h = h;
    loop {
        let best = t
            .iter()
            .enumerate()
            .filter(|(_, g)| g.lm.x_divides(&h.lm))
            .min_by_key(|(i, g)| (g.ecart, *i))
            .map(|(i, _)| i);
        let Some(i) = best else { return Some(h) };
        let g = t[i].clone();
        if g.ecart > h.ecart {
            t.push(h.clone());
        }
        let m = g.lm.quotient(&h.lm);
        let c = &h.lc / &g.lc;
        h = h.sub_multiple(&c, &m, &g)?;
    }
}

fn spoly(a: &Elem, b: &Elem) -> Option<Elem> {
    let l = a.lm.lcm(&b.lm);
    let ma = a.lm.quotient(&l);
    let mb = b.lm.quotient(&l);
    let scaled = Elem {
        p: a.p.mul_monomial(&ma).scale(&b.lc),
        lm: l.clone(),
        lc: &a.lc * &b.lc,
        ecart: a.ecart,
        coef: a.coef.iter().map(|c| c.mul_monomial(&ma).scale(&b.lc)).collect(),
    };
    scaled.sub_multiple(&a.lc, &mb, b)
}

/// Minimal standard basis of the ideal generated by `gens` in the local
/// ring, with the matrix `B` such that `g_j = sum_i gens_i B_ij`. Leading
/// coefficients are normalised to 1.
pub fn std_with_transform(gens: &[LocalPoly]) -> Result<(StdBasis, Vec<Vec<LocalPoly>>)> {
    let r = gens.len();
    let Some(n) = gens.first().map(LocalPoly::n_vars) else {
        return Ok((StdBasis { gens: vec![], leads: vec![] }, vec![]));
    };
    for g in gens {
        if g.n_vars() != n {
            return Err(Error::VariableMismatch { left: n, right: g.n_vars() });
        }
        if g.has_s() {
            return Err(Error::Invariant("standard bases are taken over x only".into()));
        }
    }
    let unit = |i: usize| -> Vec<LocalPoly> {
        (0..r).map(|k| if k == i { LocalPoly::one(n) } else { LocalPoly::zero(n) }).collect()
    };
    let mut basis: Vec<Elem> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let Some(e) = Elem::new(g.clone(), unit(i)) else { continue };
        if let Some(h) = nf_mora(e, &basis) {
            basis.push(h);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // lowest lcm degree first; ties by position
        let (k, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(k, (i, j))| (basis[*i].lm.lcm(&basis[*j].lm).x_degree(), *k))
            .unwrap();
        let (i, j) = pairs.remove(k);
        let Some(sp) = spoly(&basis[i], &basis[j]) else { continue };
        if let Some(h) = nf_mora(sp, &basis) {
            let new = basis.len();
            basis.push(h);
            for i in 0..new {
                pairs.push((i, new));
            }
        }
    }

    // minimise: drop elements whose lead is divisible by an earlier kept
    // or a strictly smaller lead
    let mut keep: Vec<Elem> = Vec::new();
    for (i, e) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, o)| {
            j != i && o.lm.x_divides(&e.lm) && (o.lm != e.lm || j < i)
        });
        if !redundant {
            keep.push(e.clone());
        }
    }
    keep.sort_by(|a, b| ORDER.cmp_unchecked(&b.lm, &a.lm));

    let mut out_gens = Vec::new();
    let mut leads = Vec::new();
    let mut b = vec![Vec::new(); r];
    for e in keep {
        let inv = e.lc.recip();
        out_gens.push(e.p.scale(&inv));
        leads.push(e.lm.clone());
        for (i, c) in e.coef.iter().enumerate() {
            b[i].push(c.scale(&inv));
        }
    }
    Ok((StdBasis { gens: out_gens, leads }, b))
}

/// Normal form of `p` modulo `⟨G⟩ + m^(bound+1)`: every term of the result
/// has degree at most `bound` and none is divisible by a lead of `G`.
pub fn mora_nf(p: &LocalPoly, g: &StdBasis, bound: u32) -> LocalPoly {
    let n = p.n_vars();
    let mut rest = p.truncate_x(bound);
    let mut out = LocalPoly::zero(n);
    while let Some((m, c)) = rest.lead(ORDER).map(|(m, c)| (m.clone(), c.clone())) {
        match g.reducer_for(&m) {
            Some(j) => {
                let q = g.leads[j].quotient(&m);
                for (tm, tc) in g.gens[j].terms() {
                    let mm = tm.mul(&q);
                    if mm.x_degree() <= bound {
                        rest.add_term(mm, -(&c * tc));
                    }
                }
                debug_assert!(rest.coeff(&m).is_zero());
            }
            None => {
                rest.add_term(m.clone(), -c.clone());
                out.add_term(m, c);
            }
        }
    }
    out
}

/// Whether every variable has a pure power among the leads; returns the
/// exponent of the smallest such power per variable.
pub fn staircase_bounds(leads: &[Monomial], n: usize) -> std::result::Result<Vec<u32>, usize> {
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let pure = leads
            .iter()
            .filter(|m| m.exps.iter().enumerate().all(|(k, &e)| k == i || e == 0))
            .map(|m| m.exps[i])
            .min();
        match pure {
            Some(e) => bounds.push(e),
            None => return Err(i),
        }
    }
    Ok(bounds)
}

/// Monomials outside the monomial ideal generated by `leads`, ordered from
/// largest to smallest in the local degree ordering (so `1` comes first).
pub fn standard_monomials(leads: &[Monomial], bounds: &[u32]) -> Vec<Monomial> {
    let n = bounds.len();
    let mut out = Vec::new();
    let mut e = vec![0u32; n];
    loop {
        let m = Monomial::x(&e);
        if !leads.iter().any(|l| l.x_divides(&m)) {
            out.push(m);
        }
        let mut k = 0;
        loop {
            if k == n {
                out.sort_by(|a, b| ORDER.cmp_unchecked(b, a));
                return out;
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}

/// Rejects a constant term or a nonzero linear part.
pub fn check_singular(f: &LocalPoly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::NotSingular("the zero polynomial has no isolated singularity".into()));
    }
    match f.ord() {
        Some(0) => Err(Error::NotSingular("f(0) != 0".into())),
        Some(1) => Err(Error::NotSingular("f has a nonzero linear part (smooth point)".into())),
        _ => Ok(()),
    }
}

pub fn milnor_data(f: &LocalPoly) -> Result<MilnorData> {
    check_singular(f)?;
    if f.has_s() {
        return Err(Error::Invariant("f must not involve s".into()));
    }
    let n = f.n_vars();
    let jac: Vec<LocalPoly> = (0..n).map(|i| f.derivative(i)).collect();
    let (g, b) = std_with_transform(&jac)?;
    let bounds = staircase_bounds(&g.leads, n)
        .map_err(|i| Error::NonIsolatedSingularity { var: default_var_names(n)[i].clone() })?;
    let basis = standard_monomials(&g.leads, &bounds);
    Ok(MilnorData { f: f.clone(), mu: basis.len(), basis_monomials: basis, jacobian_std: g, transform: b })
}

/// Checks `g = d(f) B` by expansion.
pub fn verify_transform(md: &MilnorData) -> bool {
    let n = md.n_vars();
    md.jacobian_std.gens.iter().enumerate().all(|(j, g)| {
        let mut acc = LocalPoly::zero(n);
        for i in 0..n {
            acc = &acc + &(&md.f.derivative(i) * &md.transform[i][j]);
        }
        &acc == g
    })
}

/// Coordinates of a normal form in the monomial basis.
pub fn coordinates(md: &MilnorData, r: &LocalPoly) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); md.mu];
    for (m, c) in r.terms() {
        let i = md
            .index_of(m)
            .ok_or_else(|| Error::Invariant(format!("term {m:?} outside the monomial basis")))?;
        v[i] = c.clone();
    }
    Ok(v)
}
