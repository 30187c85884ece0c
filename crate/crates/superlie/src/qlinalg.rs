//! Exact rational linear algebra: sparse matrices, reduced row echelon form,
//! kernels, and strict-inequality feasibility via an exact simplex.
//!
//! Everything here is over `Rat` (arbitrary-precision rationals, always in
//! lowest terms with positive denominator). No floating point anywhere.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;

pub type Rat = BigRational;

/// Rational from an integer.
pub fn qz(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d.
pub fn qq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p", "-p" or "p/q".
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad rational `{s}`"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad rational `{s}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(n, d))
}

/// Sparse rational vector of fixed dimension. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QVec {
    pub dim: usize,
    entries: BTreeMap<usize, Rat>,
}

impl QVec {
    pub fn zero(dim: usize) -> Self {
        QVec { dim, entries: BTreeMap::new() }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.set(i, Rat::one());
        v
    }

    pub fn from_dense(vals: &[Rat]) -> Self {
        let mut v = Self::zero(vals.len());
        for (i, x) in vals.iter().enumerate() {
            if !x.is_zero() {
                v.entries.insert(i, x.clone());
            }
        }
        v
    }

    pub fn to_dense(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (&i, x) in &self.entries {
            out[i] = x.clone();
        }
        out
    }

    pub fn get(&self, i: usize) -> Rat {
        self.entries.get(&i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, i: usize, x: Rat) {
        assert!(i < self.dim);
        if x.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn leading(&self) -> Option<(usize, &Rat)> {
        self.entries.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn scale(&self, c: &Rat) -> QVec {
        if c.is_zero() {
            return QVec::zero(self.dim);
        }
        let mut v = self.clone();
        for x in v.entries.values_mut() {
            *x *= c;
        }
        v
    }

    /// self += c * other
    pub fn add_scaled(&mut self, c: &Rat, other: &QVec) {
        assert_eq!(self.dim, other.dim);
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.entries {
            let y = self.get(i) + c * x;
            self.set(i, y);
        }
    }

    pub fn add(&self, other: &QVec) -> QVec {
        let mut v = self.clone();
        v.add_scaled(&Rat::one(), other);
        v
    }

    pub fn sub(&self, other: &QVec) -> QVec {
        let mut v = self.clone();
        v.add_scaled(&-Rat::one(), other);
        v
    }

    pub fn dot(&self, other: &QVec) -> Rat {
        assert_eq!(self.dim, other.dim);
        let mut acc = Rat::zero();
        for (&i, x) in &self.entries {
            if let Some(y) = other.entries.get(&i) {
                acc += x * y;
            }
        }
        acc
    }

    /// Scales by the positive rational that clears denominators and divides
    /// out the content. Signs are preserved.
    pub fn clear_denoms(&self) -> QVec {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for x in self.entries.values() {
            lcm = num::integer::lcm(lcm, x.denom().clone());
        }
        let mut gcd = BigInt::zero();
        for x in self.entries.values() {
            gcd = num::integer::gcd(gcd, (x.numer() * &lcm / x.denom()).abs());
        }
        self.scale(&Rat::new(lcm, gcd))
    }

    /// Canonical integral representative of the rational line through this
    /// vector: denominators cleared, content divided out, leading entry positive.
    pub fn primitive(&self) -> QVec {
        let v = self.clear_denoms();
        if let Some((_, lead)) = v.leading() {
            if lead.is_negative() {
                return v.scale(&-Rat::one());
            }
        }
        v
    }
}

/// Sparse rational matrix; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<QVec>, cols: usize) -> Self {
        let mut m = Self::zero(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.dim, cols);
            for (c, x) in v.iter() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn from_dense(data: &[&[i64]]) -> Self {
        let rows = data.len();
        let cols = if rows == 0 { 0 } else { data[0].len() };
        let mut m = Self::zero(rows, cols);
        for (r, row) in data.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, qz(x));
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rat) {
        assert!(r < self.rows && c < self.cols);
        if x.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), x);
        }
    }

    pub fn row(&self, r: usize) -> QVec {
        let mut v = QVec::zero(self.cols);
        for (&(rr, c), x) in self.entries.range((r, 0)..(r + 1, 0)) {
            debug_assert_eq!(rr, r);
            v.set(c, x.clone());
        }
        v
    }

    pub fn to_rows(&self) -> Vec<QVec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.cols, self.rows);
        for (&(r, c), x) in &self.entries {
            m.set(c, r, x.clone());
        }
        m
    }

    /// Matrix-vector product m * v.
    pub fn apply(&self, v: &QVec) -> QVec {
        assert_eq!(self.cols, v.dim);
        let mut out = QVec::zero(self.rows);
        for (&(r, c), x) in &self.entries {
            if let Some(y) = v.entries.get(&c) {
                let acc = out.get(r) + x * y;
                out.set(r, acc);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: SparseMatrix,
}

/// Unique reduced row echelon form over the rationals.
pub fn rref(m: &SparseMatrix) -> Rref {
    let rows = echelonize(&mut m.to_rows().into_iter().collect::<Vec<_>>());
    let pivots: Vec<usize> = rows.iter().filter_map(|v| v.leading().map(|(i, _)| i)).collect();
    let rank = pivots.len();
    let mut full = rows;
    while full.len() < m.rows {
        full.push(QVec::zero(m.cols));
    }
    Rref { rank, pivots, reduced: SparseMatrix::from_rows(full, m.cols) }
}

/// In-place Gauss-Jordan on a list of row vectors; returns the nonzero rows
/// of the reduced echelon form, sorted by pivot column.
pub fn echelonize(rows: &mut Vec<QVec>) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    for r in rows.drain(..) {
        let mut v = r;
        for b in &out {
            let (p, _) = b.leading().unwrap();
            let c = v.get(p);
            if !c.is_zero() {
                v.add_scaled(&-c, b);
            }
        }
        if let Some((_, lead)) = v.leading() {
            let inv = lead.recip();
            v = v.scale(&inv);
            let (p, _) = v.leading().unwrap();
            for b in out.iter_mut() {
                let c = b.get(p);
                if !c.is_zero() {
                    b.add_scaled(&-c, &v);
                }
            }
            out.push(v);
        }
    }
    out.sort_by_key(|v| v.leading().map(|(i, _)| i).unwrap_or(usize::MAX));
    out
}

/// Reduced echelon basis of the span of the given vectors.
pub fn echelon_basis(vecs: &[QVec]) -> Vec<QVec> {
    let mut rows: Vec<QVec> = vecs.to_vec();
    echelonize(&mut rows)
}

/// Residual of v after reduction against an echelon basis. Zero iff v is in the span.
pub fn reduce_mod(basis: &[QVec], v: &QVec) -> QVec {
    let mut v = v.clone();
    for b in basis {
        if let Some((p, _)) = b.leading() {
            let c = v.get(p);
            if !c.is_zero() {
                v.add_scaled(&-c, b);
            }
        }
    }
    v
}

pub fn in_span(basis: &[QVec], v: &QVec) -> bool {
    reduce_mod(basis, v).is_zero()
}

pub fn rank_of(vecs: &[QVec]) -> usize {
    echelon_basis(vecs).len()
}

/// Basis of the null space of m; cardinality = cols - rank.
pub fn kernel(m: &SparseMatrix) -> Vec<QVec> {
    let r = rref(m);
    let pivot_set: std::collections::BTreeSet<usize> = r.pivots.iter().copied().collect();
    let rows = r.reduced.to_rows();
    let mut out = Vec::new();
    for free in 0..m.cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = QVec::zero(m.cols);
        v.set(free, Rat::one());
        for (ri, &p) in r.pivots.iter().enumerate() {
            let c = rows[ri].get(free);
            if !c.is_zero() {
                v.set(p, -c);
            }
        }
        out.push(v);
    }
    out
}

/// One solution of m x = b, if any.
pub fn solve(m: &SparseMatrix, b: &QVec) -> Option<QVec> {
    assert_eq!(m.rows, b.dim);
    let mut rows: Vec<QVec> = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        let mut v = QVec::zero(m.cols + 1);
        for (c, x) in m.row(r).iter() {
            v.set(c, x.clone());
        }
        v.set(m.cols, b.get(r));
        rows.push(v);
    }
    let ech = echelonize(&mut rows);
    let mut x = QVec::zero(m.cols);
    for row in &ech {
        let (p, _) = row.leading().unwrap();
        if p == m.cols {
            return None; // inconsistent
        }
        x.set(p, row.get(m.cols));
    }
    Some(x)
}

/// Coordinates of v in the given (linearly independent) basis, if v lies in its span.
pub fn coords_in_basis(basis: &[QVec], v: &QVec) -> Option<QVec> {
    if basis.is_empty() {
        return if v.is_zero() { Some(QVec::zero(0)) } else { None };
    }
    let dim = basis[0].dim;
    let mut m = SparseMatrix::zero(dim, basis.len());
    for (j, b) in basis.iter().enumerate() {
        for (i, x) in b.iter() {
            m.set(i, j, x.clone());
        }
    }
    solve(&m, v)
}

/// Repeated coordinate solves against a fixed (independent) spanning set:
/// echelonizes once with expression tracking, then each solve is a reduction.
pub struct SpanSolver {
    dim: usize,
    ncols: usize,
    /// Echelon rows augmented with their expression in the original basis:
    /// row = [reduced vector | coefficients], pivots always in the first block.
    aug: Vec<QVec>,
}

impl SpanSolver {
    pub fn new(basis: &[QVec]) -> SpanSolver {
        let ncols = basis.len();
        let dim = basis.first().map(|v| v.dim).unwrap_or(0);
        let mut aug: Vec<QVec> = Vec::new();
        for (j, b) in basis.iter().enumerate() {
            let mut row = QVec::zero(dim + ncols);
            for (i, x) in b.iter() {
                row.set(i, x.clone());
            }
            row.set(dim + j, Rat::one());
            for e in &aug {
                let (p, _) = e.leading().unwrap();
                debug_assert!(p < dim);
                let c = row.get(p);
                if !c.is_zero() {
                    row.add_scaled(&-c, e);
                }
            }
            match row.leading() {
                Some((p, lead)) if p < dim => {
                    let inv = lead.clone().recip();
                    row = row.scale(&inv);
                    aug.push(row);
                }
                _ => panic!("SpanSolver requires linearly independent vectors"),
            }
        }
        SpanSolver { dim, ncols, aug }
    }

    /// Coordinates of v in the basis, or None if v is outside the span.
    pub fn coords(&self, v: &QVec) -> Option<QVec> {
        let mut row = QVec::zero(self.dim + self.ncols);
        for (i, x) in v.iter() {
            row.set(i, x.clone());
        }
        for e in &self.aug {
            let (p, _) = e.leading().unwrap();
            let c = row.get(p);
            if !c.is_zero() {
                row.add_scaled(&-c, e);
            }
        }
        let mut coords = QVec::zero(self.ncols);
        for (i, x) in row.iter() {
            if i < self.dim {
                return None;
            }
            coords.set(i - self.dim, -x.clone());
        }
        Some(coords)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn factor(self) -> Rat {
        match self {
            Sign::Pos => Rat::one(),
            Sign::Neg => -Rat::one(),
        }
    }
}

/// Strict-inequality feasibility: finds h with sign(f_i(h)) = signs_i strictly
/// for all i, or reports infeasibility.
///
/// Exact LP: maximize a slack e subject to s_i f_i(h) >= e and -1 <= h_j <= 1;
/// a strict witness exists iff the optimum is positive. Deterministic (Bland's
/// rule), exact, no perturbation. The returned witness is scaled to a
/// primitive integer vector.
pub fn solve_strict(functionals: &[QVec], signs: &[Sign]) -> Result<Option<QVec>, String> {
    assert_eq!(functionals.len(), signs.len());
    if functionals.is_empty() {
        return Ok(Some(QVec::zero(0)));
    }
    let n = functionals[0].dim;
    for f in functionals {
        if f.dim != n {
            return Err(format!("dimension mismatch: expected {n}, got {}", f.dim));
        }
    }
    // Variables: a_1..a_n, b_1..b_n (h = a - b), e.  All >= 0.
    // Rows: for each functional, -s_i f_i(a - b) + e <= 0; boxes a_j <= 1, b_j <= 1.
    let nv = 2 * n + 1;
    let mut lp_rows: Vec<Vec<Rat>> = Vec::new();
    let mut lp_rhs: Vec<Rat> = Vec::new();
    for (f, s) in functionals.iter().zip(signs) {
        // Clearing denominators keeps the tableau integral at the start.
        let f = f.clear_denoms();
        let sf = f.scale(&s.factor());
        let mut row = vec![Rat::zero(); nv];
        for (j, x) in sf.iter() {
            row[j] = -x.clone();
            row[n + j] = x.clone();
        }
        row[2 * n] = Rat::one();
        lp_rows.push(row);
        lp_rhs.push(Rat::zero());
    }
    for j in 0..2 * n {
        let mut row = vec![Rat::zero(); nv];
        row[j] = Rat::one();
        lp_rows.push(row);
        lp_rhs.push(Rat::one());
    }
    let mut obj = vec![Rat::zero(); nv];
    obj[2 * n] = Rat::one();

    let sol = simplex_max(&lp_rows, &lp_rhs, &obj);
    let e = sol[2 * n].clone();
    if !e.is_positive() {
        return Ok(None);
    }
    let mut h = QVec::zero(n);
    for j in 0..n {
        let x = sol[j].clone() - sol[n + j].clone();
        h.set(j, x);
    }
    let h = h.clear_denoms();
    for (f, s) in functionals.iter().zip(signs) {
        let val = f.dot(&h) * s.factor();
        assert!(val.is_positive(), "simplex witness failed strictness check");
    }
    Ok(Some(h))
}

/// Primal simplex, max c.x s.t. A x <= b, x >= 0, with all b >= 0 (slack basis start).
/// Bland's rule; returns the optimal x. The problems fed here are always bounded.
fn simplex_max(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> Vec<Rat> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    // tableau rows: [A | I | b]; objective row: [-c | 0 | 0]
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        debug_assert!(!b[i].is_negative());
        let mut row = Vec::with_capacity(width);
        row.extend(a[i].iter().cloned());
        for j in 0..m {
            row.push(if i == j { Rat::one() } else { Rat::zero() });
        }
        row.push(b[i].clone());
        t.push(row);
    }
    let mut zrow: Vec<Rat> = c.iter().map(|x| -x.clone()).collect();
    zrow.extend(std::iter::repeat(Rat::zero()).take(m + 1));
    t.push(zrow);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // entering: first column with negative reduced cost (Bland)
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        // leaving: min ratio, ties by smallest basis variable (Bland)
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = t[i][width - 1].clone() / t[i][enter].clone();
                let better = match &best {
                    None => true,
                    Some(r) => {
                        ratio < *r || (ratio == *r && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("unbounded LP in solve_strict (cannot happen: slack is boxed)");
        // pivot
        let piv = t[leave][enter].clone();
        for x in t[leave].iter_mut() {
            *x /= &piv;
        }
        for i in 0..=m {
            if i == leave {
                continue;
            }
            let f = t[i][enter].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..width {
                let delta = &f * &t[leave][j];
                t[i][j] -= delta;
            }
        }
        basis[leave] = enter;
    }

    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][width - 1].clone();
        }
    }
    x
}
