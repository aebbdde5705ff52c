//! Hodge and weight filtrations on the graded pieces, a Hodge splitting,
//! the final basis with `A = A_0 + A_1 s`, and the spectral invariants.

use std::collections::BTreeMap;
use std::ops::Range;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::matrix::{greedy_independent, intersect, span_rank};
use crate::linalg::QMatrix;
use crate::ring::rational::class_mod_one;
use crate::ring::Rational;
use crate::smodule::{std_basis, Lattice, SeriesMatrix};
use crate::vstructure::EigenDecomposition;

/// Hodge filtration on one graded piece `C^beta`, in coordinates local to
/// the block: `F_k` is spanned by the vectors of level `<= k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFiltration {
    pub beta: Rational,
    pub range: Range<usize>,
    pub levels: Vec<(i64, Vec<Rational>)>,
}

impl BlockFiltration {
    pub fn dim(&self) -> usize {
        self.range.len()
    }

    pub fn f(&self, k: i64) -> Vec<Vec<Rational>> {
        self.levels.iter().filter(|(l, _)| *l <= k).map(|(_, v)| v.clone()).collect()
    }

    pub fn min_level(&self) -> i64 {
        self.levels.iter().map(|(l, _)| *l).min().unwrap_or(0)
    }

    pub fn max_level(&self) -> i64 {
        self.levels.iter().map(|(l, _)| *l).max().unwrap_or(0)
    }
}

/// The V-leading vectors of a minimal standard basis, sorted into the
/// graded pieces. Column `i` with lead `s^nu e_i` contributes its
/// degree-`nu` coefficients on the block of `i`, at level `nu - sigma`.
pub fn hodge_filtration(h: &Lattice, dec: &EigenDecomposition, sigma: usize) -> Vec<BlockFiltration> {
    dec.blocks
        .iter()
        .map(|(beta, r)| {
            let levels = r
                .clone()
                .map(|i| {
                    let nu = h.nu[i];
                    let v: Vec<Rational> = r.clone().map(|j| h.cols[i].get(nu, j)).collect();
                    (nu as i64 - sigma as i64, v)
                })
                .collect();
            BlockFiltration { beta: beta.clone(), range: r.clone(), levels }
        })
        .collect()
}

/// Weight filtration of a nilpotent endomorphism, centred at `center`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightRep {
    pub center: i64,
    pub dim: usize,
    /// Bases of `W_l` for `center - dim <= l <= center + dim`.
    pub pieces: BTreeMap<i64, Vec<Vec<Rational>>>,
}

impl WeightRep {
    pub fn w(&self, l: i64) -> Vec<Vec<Rational>> {
        let lo = self.center - self.dim as i64;
        let hi = self.center + self.dim as i64;
        if l < lo {
            Vec::new()
        } else if l > hi {
            self.pieces[&hi].clone()
        } else {
            self.pieces[&l].clone()
        }
    }

    pub fn gr_dim(&self, l: i64) -> usize {
        span_rank(self.dim, &self.w(l)) - span_rank(self.dim, &self.w(l - 1))
    }
}

fn image_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    crate::linalg::matrix::column_space(m)
}

/// `W_{c+l} = sum_{j>=0} ker N^{j+1} ∩ im N^{max(0, j-l)}`. Only
/// `j < m` matters, `m` the nilpotency order, and `W_{c+l}` is everything
/// for `l >= m - 1` and zero for `l <= -m`.
pub fn weight_filtration(n: &QMatrix, center: i64) -> Result<WeightRep> {
    let d = n.rows();
    if !n.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let mut pows = vec![QMatrix::identity(d)];
    while !pows.last().expect("nonempty").is_zero() {
        let next = pows.last().expect("nonempty").mul(n);
        pows.push(next);
    }
    let m = pows.len() - 1;
    let kers: Vec<Vec<Vec<Rational>>> = pows.iter().map(QMatrix::kernel).collect();
    let ims: Vec<Vec<Vec<Rational>>> = pows.iter().map(image_basis).collect();
    let all: Vec<Vec<Rational>> = (0..d).map(|i| (0..d).map(|j| Rational::from_integer(((i == j) as i64).into())).collect()).collect();
    let mut pieces = BTreeMap::new();
    for l in -(d as i64)..=(d as i64) {
        let piece = if l <= -(m as i64) {
            Vec::new()
        } else if l >= m as i64 - 1 {
            all.clone()
        } else {
            let mut span: Vec<Vec<Rational>> = Vec::new();
            for j in 0..m {
                let e = (j as i64 - l).max(0) as usize;
                if e >= m {
                    continue;
                }
                span.extend(intersect(d, &kers[j + 1], &ims[e]));
            }
            let idx = greedy_independent(d, &[], &span);
            idx.into_iter().map(|i| span[i].clone()).collect()
        };
        pieces.insert(center + l, piece);
    }
    Ok(WeightRep { center, dim: d, pieces })
}

/// A Hodge splitting `F_k = ⊕_{j<=k} C^j` with `N(C^k) ⊆ C^{k+1}`, as a
/// list of `(k, vector)` in ascending `k`.
pub fn hodge_splitting(f: &BlockFiltration, n: &QMatrix) -> Result<Vec<(i64, Vec<Rational>)>> {
    let d = f.dim();
    let kmin = f.min_level();
    let kmax = f.max_level();
    let ker_n = n.kernel();
    let mut out: Vec<(i64, Vec<Rational>)> = Vec::new();
    let mut prev: Vec<Vec<Rational>> = Vec::new();
    for k in kmin..=kmax + 1 {
        let fk = f.f(k);
        let fprev = f.f(k - 1);
        let rk = span_rank(d, &fk);
        let rprev = span_rank(d, &fprev);
        let images: Vec<Vec<Rational>> =
            prev.iter().map(|v| n.mul_vec(v)).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
        let pick = greedy_independent(d, &[], &images);
        let mut chosen: Vec<Vec<Rational>> = pick.into_iter().map(|i| images[i].clone()).collect();
        let mut with_prev = fprev.clone();
        with_prev.extend(chosen.iter().cloned());
        if span_rank(d, &with_prev) != rprev + chosen.len() {
            return Err(Error::StrictnessViolation(format!(
                "N-image of level {} meets F_{} on C^{}",
                k - 1,
                k - 1,
                f.beta
            )));
        }
        let mut with_k = fk.clone();
        with_k.extend(chosen.iter().cloned());
        if span_rank(d, &with_k) != rk {
            return Err(Error::StrictnessViolation(format!("N(F_{}) is not inside F_{} on C^{}", k - 1, k, f.beta)));
        }
        // K = F_k ∩ N^{-1}(F_k); its part in ker N is taken first, the
        // rest of C^k avoids K
        let stay: Vec<Vec<Rational>> = {
            let mut m: Vec<Vec<Rational>> = fk.iter().map(|v| n.mul_vec(v)).collect();
            m.extend(fk.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
            let fm = QMatrix::from_columns(d, &fk);
            QMatrix::from_columns(d, &m).kernel().iter().map(|c| fm.mul_vec(&c[..fk.len()])).collect()
        };
        let kn_fk = intersect(d, &ker_n, &fk);
        let mut base = fprev.clone();
        base.extend(chosen.iter().cloned());
        for i in greedy_independent(d, &base, &kn_fk) {
            base.push(kn_fk[i].clone());
            chosen.push(kn_fk[i].clone());
        }
        let mut guard = base.clone();
        guard.extend(stay.iter().cloned());
        for i in greedy_independent(d, &guard, &fk) {
            base.push(fk[i].clone());
            chosen.push(fk[i].clone());
        }
        if span_rank(d, &base) != rk {
            for i in greedy_independent(d, &base, &fk) {
                base.push(fk[i].clone());
                chosen.push(fk[i].clone());
            }
        }
        if span_rank(d, &base) != rk || chosen.len() != rk - rprev {
            return Err(Error::StrictnessViolation(format!("no adapted complement at level {k} on C^{}", f.beta)));
        }
        if k == kmax + 1 && !chosen.is_empty() {
            return Err(Error::StrictnessViolation(format!("N does not vanish on the top level of C^{}", f.beta)));
        }
        out.extend(chosen.iter().cloned().map(|v| (k, v)));
        prev = chosen;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTag {
    /// Spectral number (eigenvalue of `A_1` minus one).
    pub alpha: Rational,
    pub k: i64,
    pub l: i64,
}

#[derive(Clone, Debug)]
pub struct SaitoBasisResult {
    pub a0: QMatrix,
    pub a1: QMatrix,
    pub tags: Vec<BasisTag>,
    /// Constant change from the V-splitting basis to the Hodge splitting.
    pub u_f: QMatrix,
    /// Reduced minimal standard basis in the Hodge splitting coordinates,
    /// representing `s^sigma H''`.
    pub h: Lattice,
    /// Final column order: column `j` of the output is column `perm[j]`
    /// of `h`.
    pub perm: Vec<usize>,
    pub sigma: usize,
    pub filtration: Vec<BlockFiltration>,
    pub weights: Vec<WeightRep>,
}

/// Final stage. `a1` is `diag(beta) + N` with blocks as in `dec`, the
/// t-matrix is `a1 s` and `<h> = s^sigma H''`.
pub fn saito_basis(a1: &QMatrix, dec: &EigenDecomposition, h: &Lattice, sigma: usize, n: usize) -> Result<SaitoBasisResult> {
    let mu = a1.rows();
    let filtration = hodge_filtration(h, dec, sigma);
    let mut weights = Vec::new();
    let mut u_cols: Vec<Vec<Rational>> = Vec::with_capacity(mu);
    let mut levels: Vec<i64> = Vec::with_capacity(mu);
    let mut ls: Vec<i64> = Vec::with_capacity(mu);
    for bf in &filtration {
        let r: Vec<usize> = bf.range.clone().collect();
        let nb = dec.n_part.submatrix(&r, &r);
        let w = weight_filtration(&nb, n as i64)?;
        for (k, v) in hodge_splitting(bf, &nb)? {
            let mut full = vec![Rational::zero(); mu];
            for (a, &i) in r.iter().enumerate() {
                full[i] = v[a].clone();
            }
            let fk = bf.f(k);
            let mut extra_w: Vec<Vec<Rational>> = bf.f(k - 1);
            // weight of v in gr_F_k: smallest l with v in W_l ∩ F_k + F_{k-1}
            let l = {
                let d = bf.dim();
                let mut found = n as i64 + d as i64;
                for l in (n as i64 - d as i64)..=(n as i64 + d as i64) {
                    let mut base = intersect(d, &w.w(l), &fk);
                    base.append(&mut extra_w.clone());
                    let r0 = span_rank(d, &base);
                    base.push(v.clone());
                    if span_rank(d, &base) == r0 {
                        found = l;
                        break;
                    }
                }
                found
            };
            extra_w.clear();
            u_cols.push(full);
            levels.push(k);
            ls.push(l);
        }
        weights.push(w);
    }
    let u_f = QMatrix::from_columns(mu, &u_cols);
    let u_inv = u_f.inverse().ok_or_else(|| Error::Invariant("Hodge splitting is not a basis".into()))?;
    let a1f = u_inv.mul(a1).mul(&u_f);
    let moved = h.matrix().mul_const_left(&u_inv).columns();
    let hf = std_basis(&moved, mu, h.kappa(), true)?.reduced();

    // X = H^{-1}(A1f s H + s^2 H') - sigma s E, which must have degree one
    let hm = hf.matrix();
    let a_f = SeriesMatrix::constant(a1f.clone()).shift(1);
    let y = a_f.mul(&hm).add(&hm.derivative().shift(2));
    let x = hf.solve(&y, 3 + hf.kappa())?;
    let x_poly = x.truncate(2).as_exact();
    if hm.mul(&x_poly) != y {
        return Err(Error::DegreeNotOne);
    }
    let a0 = x_poly.coeff(0);
    let a1_out = x_poly.coeff(1).shift_diagonal(&Rational::from_integer(sigma.into()));

    for j in 0..mu {
        let expect = &dec.alphas[j] + Rational::from_integer((hf.nu[j] as i64 - sigma as i64).into());
        if a1_out[(j, j)] != expect || levels[j] != hf.nu[j] as i64 - sigma as i64 {
            return Err(Error::Invariant(format!("column {j}: lead level and eigenvalue disagree")));
        }
    }
    let mut perm: Vec<usize> = (0..mu).collect();
    perm.sort_by(|&i, &j| a1_out[(i, i)].cmp(&a1_out[(j, j)]).then(i.cmp(&j)));
    let a0p = QMatrix::from_fn(mu, mu, |i, j| a0[(perm[i], perm[j])].clone());
    let a1p = QMatrix::from_fn(mu, mu, |i, j| a1_out[(perm[i], perm[j])].clone());
    let tags = perm
        .iter()
        .map(|&j| BasisTag { alpha: &a1_out[(j, j)] - Rational::one(), k: levels[j], l: ls[j] })
        .collect();
    Ok(SaitoBasisResult { a0: a0p, a1: a1p, tags, u_f, h: hf, perm, sigma, filtration, weights })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpectralDatum {
    pub alpha: Rational,
    pub l: i64,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyBlock {
    /// `alpha mod 1` in `(-1, 0]`; the eigenvalue is `exp(-2 pi i alpha)`.
    pub alpha_class: Rational,
    pub jordan_blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    pub pairs: Vec<SpectralDatum>,
    pub numbers: Vec<(Rational, usize)>,
    /// `(alpha class, p, q) -> h`
    pub hodge_numbers: BTreeMap<(Rational, i64, i64), usize>,
    pub monodromy: Vec<MonodromyBlock>,
}

/// Jordan block sizes of a nilpotent matrix, descending.
pub fn jordan_sizes(n: &QMatrix) -> Vec<usize> {
    let d = n.rows();
    let ranks: Vec<usize> = (0..=d + 1).map(|j| n.pow(j).rank()).collect();
    let mut sizes = Vec::new();
    for s in (1..=d).rev() {
        // blocks of size >= s minus blocks of size >= s+1
        let ge = |t: usize| ranks[t - 1] - ranks[t];
        let count = ge(s) - ge(s + 1);
        sizes.extend(std::iter::repeat_n(s, count));
    }
    sizes
}

pub fn spectral_data(sb: &SaitoBasisResult, dec: &EigenDecomposition, n: usize) -> Result<SpectralData> {
    let n = n as i64;
    let mut pairs: BTreeMap<(Rational, i64), usize> = BTreeMap::new();
    let mut monodromy = Vec::new();
    for (bf, w) in sb.filtration.iter().zip(&sb.weights) {
        let d = bf.dim();
        for k in bf.min_level()..=bf.max_level() {
            let fk = bf.f(k);
            let fprev = bf.f(k - 1);
            let dim_at = |l: i64| {
                let mut b = intersect(d, &w.w(l), &fk);
                b.extend(fprev.iter().cloned());
                span_rank(d, &b)
            };
            for l in (n - d as i64)..=(n + d as i64) {
                let m = dim_at(l) - dim_at(l - 1);
                if m > 0 {
                    let alpha = &bf.beta + Rational::from_integer((k - 1).into());
                    *pairs.entry((alpha, l)).or_insert(0) += m;
                }
            }
        }
        let r: Vec<usize> = bf.range.clone().collect();
        let nb = dec.n_part.submatrix(&r, &r);
        monodromy.push(MonodromyBlock { alpha_class: class_mod_one(&bf.beta), jordan_blocks: jordan_sizes(&nb) });
    }
    monodromy.sort_by(|a, b| a.alpha_class.cmp(&b.alpha_class));
    let pairs: Vec<SpectralDatum> =
        pairs.into_iter().map(|((alpha, l), mult)| SpectralDatum { alpha, l, mult }).collect();
    let mut numbers: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut hodge_numbers = BTreeMap::new();
    for p in &pairs {
        *numbers.entry(p.alpha.clone()).or_insert(0) += p.mult;
        let class = class_mod_one(&p.alpha);
        let pp: i64 = (&p.alpha - &class).to_integer().try_into().expect("small integer");
        let key = if class.is_zero() {
            (class, n - pp, p.l + 1 - n + pp)
        } else {
            (class, n - pp, p.l - n + pp)
        };
        *hodge_numbers.entry(key).or_insert(0) += p.mult;
    }
    Ok(SpectralData { pairs, numbers: numbers.into_iter().collect(), hodge_numbers, monodromy })
}

/// The symmetries of spectral numbers and pairs, and the Monodromy
/// Theorem bounds.
pub fn check_symmetries(sd: &SpectralData, n: usize, mu: usize) -> Result<()> {
    let n = n as i64;
    let nq = Rational::from_integer(n.into());
    let d = |a: &Rational, l: i64| -> usize {
        sd.pairs.iter().find(|p| &p.alpha == a && p.l == l).map_or(0, |p| p.mult)
    };
    let num = |a: &Rational| -> usize { sd.numbers.iter().find(|(b, _)| b == a).map_or(0, |(_, m)| *m) };
    let total: usize = sd.pairs.iter().map(|p| p.mult).sum();
    if total != mu {
        return Err(Error::SymmetryViolation(format!("multiplicities sum to {total}, expected {mu}")));
    }
    let one = Rational::one();
    for p in &sd.pairs {
        let a = &p.alpha;
        let l = p.l;
        let lq = Rational::from_integer(l.into());
        if num(a) != num(&(&nq - &one - a)) {
            return Err(Error::SymmetryViolation(format!("d^{a} != d^(n-1-{a})")));
        }
        let checks = [
            (&nq * Rational::from_integer(2.into()) - &lq - &one - a, l),
            (a - &nq + &lq, 2 * n - l),
            (&nq - &one - a, 2 * n - l),
        ];
        for (b, m) in checks {
            if d(a, l) != d(&b, m) {
                return Err(Error::SymmetryViolation(format!("d^{a}_{l} != d^{b}_{m}")));
            }
        }
        if !(a > &-one.clone() && a < &nq) {
            return Err(Error::SymmetryViolation(format!("spectral number {a} outside (-1, n)")));
        }
    }
    let sum: Rational = sd.pairs.iter().map(|p| &p.alpha * Rational::from_integer(p.mult.into())).sum();
    let expect = Rational::from_integer(((mu as i64) * (n - 1)).into()) / Rational::from_integer(2.into());
    if sum != expect {
        return Err(Error::SymmetryViolation(format!("sum of spectral numbers {sum} != {expect}")));
    }
    for b in &sd.monodromy {
        let bound = if b.alpha_class.is_zero() { n } else { n + 1 };
        if b.jordan_blocks.iter().any(|&s| s as i64 > bound) {
            return Err(Error::SymmetryViolation(format!(
                "Jordan block larger than {bound} for class {}",
                b.alpha_class
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::int;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn weight_of_zero_operator() {
        let w = weight_filtration(&QMatrix::zeros(2, 2), 1).unwrap();
        assert_eq!(span_rank(2, &w.w(0)), 0);
        assert_eq!(span_rank(2, &w.w(1)), 2);
    }

    #[test]
    fn weight_of_single_block() {
        let w = weight_filtration(&m(&[&[0, 1], &[0, 0]]), 1).unwrap();
        assert_eq!(w.gr_dim(0), 1);
        assert_eq!(w.gr_dim(1), 0);
        assert_eq!(w.gr_dim(2), 1);
    }

    #[test]
    fn weight_of_blocks_two_and_one() {
        let n = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let w = weight_filtration(&n, 1).unwrap();
        assert_eq!((w.gr_dim(0), w.gr_dim(1), w.gr_dim(2)), (1, 1, 1));
    }

    #[test]
    fn not_nilpotent() {
        assert_eq!(weight_filtration(&QMatrix::identity(1), 0), Err(Error::NotNilpotent));
    }

    #[test]
    fn splitting_follows_n() {
        let n = m(&[&[0, 1], &[0, 0]]);
        let f = BlockFiltration {
            beta: int(1),
            range: 0..2,
            levels: vec![(0, vec![int(0), int(1)]), (1, vec![int(1), int(0)])],
        };
        let c = hodge_splitting(&f, &n).unwrap();
        assert_eq!(c, vec![(0, vec![int(0), int(1)]), (1, vec![int(1), int(0)])]);
    }

    #[test]
    fn trivial_splitting() {
        let f = BlockFiltration {
            beta: int(1),
            range: 0..2,
            levels: vec![(0, vec![int(1), int(0)]), (0, vec![int(0), int(1)])],
        };
        let c = hodge_splitting(&f, &QMatrix::zeros(2, 2)).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|(k, _)| *k == 0));
    }

    #[test]
    fn jordan_sizes_from_ranks() {
        let n = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(jordan_sizes(&n), vec![2, 1]);
        assert_eq!(jordan_sizes(&QMatrix::zeros(2, 2)), vec![1, 1]);
    }
}
