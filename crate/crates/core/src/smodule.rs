//! Matrices over `Q[[s]]` and submodules of `Q[[s]]^mu`: standard bases,
//! reduced minimal standard bases, normal forms and division.
//!
//! The module ordering compares the s-power first (smaller is greater) and
//! then prefers the smaller unit-vector index, so the lead of a vector is
//! `s^v e_i` with `v` its valuation and `i` the first nonzero index of its
//! degree-`v` coefficient.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::ring::Rational;

/// A `rows x cols` matrix series `sum_k coeffs[k] s^k`, known modulo
/// `s^prec`; `prec == None` marks an exact polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    coeffs: Vec<QMatrix>,
    prec: Option<usize>,
}

fn min_prec(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl SeriesMatrix {
    pub fn new(rows: usize, cols: usize, coeffs: Vec<QMatrix>, prec: Option<usize>) -> Self {
        for c in &coeffs {
            assert_eq!((c.rows(), c.cols()), (rows, cols), "coefficient shape");
        }
        let mut m = SeriesMatrix { rows, cols, coeffs, prec };
        m.normalise();
        m
    }

    pub fn exact(coeffs: Vec<QMatrix>) -> Self {
        let (r, c) = (coeffs[0].rows(), coeffs[0].cols());
        Self::new(r, c, coeffs, None)
    }

    /// Coefficients `0..p` known, everything from `s^p` on unknown.
    pub fn jet(coeffs: Vec<QMatrix>, p: usize) -> Self {
        let (r, c) = (coeffs[0].rows(), coeffs[0].cols());
        Self::new(r, c, coeffs, Some(p))
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SeriesMatrix { rows, cols, coeffs: Vec::new(), prec: None }
    }

    pub fn identity(n: usize) -> Self {
        Self::exact(vec![QMatrix::identity(n)])
    }

    pub fn constant(m: QMatrix) -> Self {
        Self::exact(vec![m])
    }

    fn normalise(&mut self) {
        if let Some(p) = self.prec {
            self.coeffs.truncate(p);
        }
        while self.coeffs.last().is_some_and(QMatrix::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> Option<usize> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Number of stored coefficients (one more than the degree).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[QMatrix] {
        &self.coeffs
    }

    /// Coefficient of `s^k`. Panics if it is not known.
    pub fn coeff(&self, k: usize) -> QMatrix {
        if let Some(p) = self.prec {
            assert!(k < p, "coefficient s^{k} requested beyond precision {p}");
        }
        self.coeffs.get(k).cloned().unwrap_or_else(|| QMatrix::zeros(self.rows, self.cols))
    }

    pub fn entry(&self, k: usize, i: usize, j: usize) -> Rational {
        self.coeffs.get(k).map_or_else(Rational::zero, |m| m[(i, j)].clone())
    }

    /// Lowest power of `s` with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|m| !m.is_zero())
    }

    /// Whether the known part vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn val_or(&self, default: usize) -> usize {
        self.valuation().unwrap_or(default)
    }

    pub fn truncate(&self, p: usize) -> Self {
        let mut m = self.clone();
        m.prec = min_prec(self.prec, Some(p));
        m.normalise();
        m
    }

    /// Forget that the series is only a jet: the stored polynomial is
    /// taken as exact.
    pub fn as_exact(&self) -> Self {
        SeriesMatrix { prec: None, ..self.clone() }
    }

    pub fn add(&self, o: &SeriesMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), o.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(self.rows, self.cols, coeffs, min_prec(self.prec, o.prec))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &SeriesMatrix) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.rows, self.cols, self.coeffs.iter().map(|m| m.scale(c)).collect(), self.prec)
    }

    pub fn mul(&self, o: &SeriesMatrix) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        // precision: (a + O(s^p)) (b + O(s^q)) = ab + O(s^min(p + v(b), q + v(a)))
        let big = usize::MAX / 4;
        let pa = self.prec.map(|p| p + o.val_or(big));
        let pb = o.prec.map(|q| q + self.val_or(big));
        let prec = min_prec(pa, pb).map(|p| p.min(big));
        let n = if self.coeffs.is_empty() || o.coeffs.is_empty() {
            0
        } else {
            self.coeffs.len() + o.coeffs.len() - 1
        };
        let n = prec.map_or(n, |p| n.min(p));
        let mut coeffs = vec![QMatrix::zeros(self.rows, o.cols); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j].add_assign(&a.mul(b));
                }
            }
        }
        Self::new(self.rows, o.cols, coeffs, prec)
    }

    pub fn mul_const_left(&self, m: &QMatrix) -> Self {
        Self::new(m.rows(), self.cols, self.coeffs.iter().map(|c| m.mul(c)).collect(), self.prec)
    }

    pub fn mul_const_right(&self, m: &QMatrix) -> Self {
        Self::new(self.rows, m.cols(), self.coeffs.iter().map(|c| c.mul(m)).collect(), self.prec)
    }

    /// Multiplication by `s^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![QMatrix::zeros(self.rows, self.cols); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.rows, self.cols, coeffs, self.prec.map(|p| p + k))
    }

    /// Division by `s^k`; the known coefficients below `s^k` must vanish.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().take(k).any(|m| !m.is_zero()) || self.prec.is_some_and(|p| p < k) {
            return Err(Error::Invariant(format!("series is not divisible by s^{k}")));
        }
        let coeffs = self.coeffs.iter().skip(k).cloned().collect();
        Ok(Self::new(self.rows, self.cols, coeffs, self.prec.map(|p| p - k)))
    }

    /// `d/ds`
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, m)| m.scale(&Rational::from_integer(k.into())))
            .collect();
        Self::new(self.rows, self.cols, coeffs, self.prec.map(|p| p.saturating_sub(1)))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::new(self.rows, cols.len(), self.coeffs.iter().map(|m| m.select_columns(cols)).collect(), self.prec)
    }

    pub fn column(&self, j: usize) -> SVec {
        SVec { c: self.coeffs.iter().map(|m| m.column(j)).collect() }
    }

    pub fn columns(&self) -> Vec<SVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn from_columns(rows: usize, cols: &[SVec], prec: Option<usize>) -> Self {
        let len = cols.iter().map(|v| v.c.len()).max().unwrap_or(0);
        let coeffs = (0..len)
            .map(|k| QMatrix::from_fn(rows, cols.len(), |i, j| cols[j].get(k, i)))
            .collect();
        Self::new(rows, cols.len(), coeffs, prec)
    }

    /// Block-diagonal scaling `diag(s^e_0, ..., s^e_{n-1}) * self`.
    pub fn scale_rows_by_powers(&self, e: &[usize]) -> Self {
        let top = e.iter().copied().max().unwrap_or(0);
        let mut coeffs = vec![QMatrix::zeros(self.rows, self.cols); self.coeffs.len() + top];
        for (k, m) in self.coeffs.iter().enumerate() {
            for (i, &ei) in e.iter().enumerate() {
                for j in 0..self.cols {
                    coeffs[k + ei][(i, j)] = m[(i, j)].clone();
                }
            }
        }
        let prec = self.prec.map(|p| p + e.iter().copied().min().unwrap_or(0));
        Self::new(self.rows, self.cols, coeffs, prec)
    }

    /// `self * diag(s^e_0, ..., s^e_{n-1})`.
    pub fn scale_cols_by_powers(&self, e: &[usize]) -> Self {
        let top = e.iter().copied().max().unwrap_or(0);
        let mut coeffs = vec![QMatrix::zeros(self.rows, self.cols); self.coeffs.len() + top];
        for (k, m) in self.coeffs.iter().enumerate() {
            for i in 0..self.rows {
                for (j, &ej) in e.iter().enumerate() {
                    coeffs[k + ej][(i, j)] = m[(i, j)].clone();
                }
            }
        }
        let prec = self.prec.map(|p| p + e.iter().copied().min().unwrap_or(0));
        Self::new(self.rows, self.cols, coeffs, prec)
    }
}

/// A vector in `Q[[s]]^mu`, degree-major: `c[k][i]` is the coefficient of
/// `s^k e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SVec {
    pub c: Vec<Vec<Rational>>,
}

impl SVec {
    pub fn zero() -> Self {
        SVec { c: Vec::new() }
    }

    pub fn unit(mu: usize, i: usize, k: usize) -> Self {
        let mut v = SVec { c: vec![vec![Rational::zero(); mu]; k + 1] };
        v.c[k][i] = Rational::one();
        v
    }

    pub fn get(&self, k: usize, i: usize) -> Rational {
        self.c.get(k).map_or_else(Rational::zero, |row| row[i].clone())
    }

    fn ensure(&mut self, mu: usize, len: usize) {
        while self.c.len() < len {
            self.c.push(vec![Rational::zero(); mu]);
        }
    }

    /// Lead `(k, i)` among degrees below `limit`.
    pub fn lead(&self, limit: usize) -> Option<(usize, usize)> {
        for (k, row) in self.c.iter().enumerate().take(limit) {
            if let Some(i) = row.iter().position(|x| !x.is_zero()) {
                return Some((k, i));
            }
        }
        None
    }

    pub fn truncate(&mut self, limit: usize) {
        self.c.truncate(limit);
        while self.c.last().is_some_and(|r| r.iter().all(Zero::is_zero)) {
            self.c.pop();
        }
    }

    pub fn is_zero_below(&self, limit: usize) -> bool {
        self.lead(limit).is_none()
    }

    /// `self -= c * s^e * w`, discarding degrees `>= limit`.
    pub fn sub_shifted(&mut self, c: &Rational, e: usize, w: &SVec, limit: usize) {
        let mu = w.c.first().map_or(0, Vec::len);
        if mu == 0 {
            return;
        }
        let top = (w.c.len() + e).min(limit);
        self.ensure(mu, top);
        for k in e..top {
            for (i, x) in w.c[k - e].iter().enumerate() {
                if !x.is_zero() {
                    self.c[k][i] -= c * x;
                }
            }
        }
    }

    pub fn scale(&mut self, c: &Rational) {
        for row in &mut self.c {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
    }

    /// Multiplication by `s^k`.
    pub fn shifted(&self, k: usize) -> SVec {
        if self.c.is_empty() {
            return self.clone();
        }
        let mu = self.c[0].len();
        let mut c = vec![vec![Rational::zero(); mu]; k];
        c.extend(self.c.iter().cloned());
        SVec { c }
    }
}

/// A minimal standard basis: column `i` has lead `s^nu[i] e_i` with
/// coefficient 1, so `<H>` contains `s^max(nu) E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub mu: usize,
    pub cols: Vec<SVec>,
    pub nu: Vec<usize>,
    pub reduced: bool,
}

impl Lattice {
    pub fn identity(mu: usize) -> Self {
        Lattice {
            mu,
            cols: (0..mu).map(|i| SVec::unit(mu, i, 0)).collect(),
            nu: vec![0; mu],
            reduced: true,
        }
    }

    /// Smallest `c` with `s^c E` inside the module.
    pub fn kappa(&self) -> usize {
        self.nu.iter().copied().max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Lattice::identity(self.mu) || {
            let mut l = self.clone();
            l.reduced = true;
            l == Lattice::identity(self.mu)
        }
    }

    pub fn matrix(&self) -> SeriesMatrix {
        SeriesMatrix::from_columns(self.mu, &self.cols, None)
    }

    /// The lattice `s^k <H>`.
    pub fn shifted(&self, k: usize) -> Lattice {
        Lattice {
            mu: self.mu,
            cols: self.cols.iter().map(|v| v.shifted(k)).collect(),
            nu: self.nu.iter().map(|v| v + k).collect(),
            reduced: self.reduced,
        }
    }

    /// Normal form of `v` below degree `limit`, with the quotients
    /// (`q[i]` is the series coefficient of column `i`). Terms that cannot
    /// be reduced are kept in the remainder.
    pub fn reduce(&self, v: &SVec, limit: usize) -> (SVec, Vec<SVec>) {
        let mu = self.mu;
        let mut r = v.clone();
        r.truncate(limit);
        let mut q = vec![SVec::zero(); mu];
        for k in 0..limit {
            if k >= r.c.len() {
                break;
            }
            for i in 0..mu {
                let c = r.c[k][i].clone();
                if c.is_zero() || self.nu[i] > k {
                    continue;
                }
                let e = k - self.nu[i];
                r.sub_shifted(&c, e, &self.cols[i], limit);
                q[i].ensure(1, e + 1);
                q[i].c[e][0] += &c;
            }
        }
        r.truncate(limit);
        for qi in &mut q {
            qi.truncate(limit);
        }
        (r, q)
    }

    pub fn contains_vec(&self, v: &SVec) -> bool {
        let lim = self.kappa();
        self.reduce(v, lim).0.is_zero_below(lim)
    }

    pub fn contains(&self, q: &SeriesMatrix) -> bool {
        q.columns().iter().all(|v| self.contains_vec(v))
    }

    pub fn contains_lattice(&self, o: &Lattice) -> bool {
        o.cols.iter().all(|v| self.contains_vec(v))
    }

    /// Solves `H X = Y` where `H` is this basis taken as an exact matrix.
    /// With `Y` known modulo `s^p` the result is known modulo
    /// `s^(p - max nu)`. Fails if a column of `Y` is not in the module.
    pub fn solve(&self, y: &SeriesMatrix, p: usize) -> Result<SeriesMatrix> {
        let p = y.prec().map_or(p, |q| q.min(p));
        let kap = self.kappa();
        if p < kap {
            return Err(Error::JetExhausted { requested: kap, available: p });
        }
        let out_prec = p - kap;
        let mut cols = Vec::with_capacity(y.cols());
        for v in y.columns() {
            let (r, q) = self.reduce(&v, p);
            if !r.is_zero_below(p) {
                return Err(Error::Invariant("column is not in the lattice".into()));
            }
            let mut x = SVec { c: vec![vec![Rational::zero(); self.mu]; out_prec] };
            for (i, qi) in q.iter().enumerate() {
                for (k, row) in qi.c.iter().enumerate().take(out_prec) {
                    x.c[k][i] = row[0].clone();
                }
            }
            cols.push(x);
        }
        Ok(SeriesMatrix::from_columns(self.mu, &cols, Some(out_prec)))
    }

    /// The reduced minimal standard basis of the same module: every
    /// non-lead term is irreducible by every lead. Exact, with all columns
    /// of degree at most `max nu`.
    pub fn reduced(&self) -> Lattice {
        let mu = self.mu;
        let top = self.kappa();
        let limit = top + 1;
        let mut cols = self.cols.clone();
        for c in &mut cols {
            c.truncate(usize::MAX);
        }
        for j in 0..mu {
            let mut w = cols[j].clone();
            for k in 0..limit {
                for i in 0..mu {
                    if k >= w.c.len() {
                        break;
                    }
                    let c = w.c[k][i].clone();
                    if c.is_zero() || self.nu[i] > k || (i == j && k == self.nu[j]) {
                        continue;
                    }
                    let e = k - self.nu[i];
                    if i == j {
                        // (1 - c s^e) w: a unit multiple of the column
                        let own = w.clone();
                        w.sub_shifted(&c, e, &own, limit);
                    } else {
                        let other = cols[i].clone();
                        w.sub_shifted(&c, e, &other, limit);
                    }
                }
            }
            w.truncate(limit);
            cols[j] = w;
        }
        Lattice { mu, cols, nu: self.nu.clone(), reduced: true }
    }
}

/// Minimal standard basis of `<gens> + s^c E` computed modulo `s^c`. When
/// `fill` is false a missing lead index is an error instead of being
/// supplied by `s^c e_i`.
pub fn std_basis(gens: &[SVec], mu: usize, c: usize, fill: bool) -> Result<Lattice> {
    let mut slots: Vec<Option<(usize, SVec)>> = vec![None; mu];
    let mut queue: Vec<SVec> = gens.iter().rev().cloned().collect();
    while let Some(mut v) = queue.pop() {
        v.truncate(c);
        while let Some((k, i)) = v.lead(c) {
            match &slots[i] {
                None => {
                    let inv = v.c[k][i].recip();
                    v.scale(&inv);
                    slots[i] = Some((k, v));
                    break;
                }
                Some((nu, w)) if *nu <= k => {
                    let coef = v.c[k][i].clone();
                    let w = w.clone();
                    v.sub_shifted(&coef, k - nu, &w, c);
                }
                Some(_) => {
                    let inv = v.c[k][i].recip();
                    v.scale(&inv);
                    let (_, old) = slots[i].replace((k, v)).unwrap();
                    queue.push(old);
                    break;
                }
            }
        }
    }
    let mut cols = Vec::with_capacity(mu);
    let mut nu = Vec::with_capacity(mu);
    for (i, s) in slots.into_iter().enumerate() {
        match s {
            Some((k, mut v)) => {
                v.truncate(c);
                cols.push(v);
                nu.push(k);
            }
            None if fill => {
                cols.push(SVec::unit(mu, i, c));
                nu.push(c);
            }
            None => return Err(Error::RankDeficient { mu, degree: c }),
        }
    }
    Ok(Lattice { mu, cols, nu, reduced: false })
}

/// Minimal standard basis of the column module of `h`, computed from its
/// coefficients below `s^d`. Fails with `RankDeficient` when the leads do
/// not cover every index below degree `d`.
pub fn std_s(h: &SeriesMatrix, d: usize) -> Result<Lattice> {
    std_basis(&h.columns(), h.rows(), d, false)
}

/// Reduced minimal standard basis of the column module of `h`.
pub fn reduced_min_std(h: &SeriesMatrix, d: usize) -> Result<Lattice> {
    Ok(std_s(h, d)?.reduced())
}

/// `s^d H^{-1}` to the requested number of coefficients, where `d` is the
/// largest lead exponent of `H`.
pub fn invert_jet(h: &Lattice, terms: usize) -> Result<SeriesMatrix> {
    let d = h.kappa();
    let target = SeriesMatrix::identity(h.mu).shift(d);
    h.solve(&target, terms + d)
}
