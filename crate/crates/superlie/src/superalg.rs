//! Basis-indexed Lie superalgebras with exact rational structure constants.
//!
//! An algebra is a finite labelled basis, a Z2 parity per basis element and a
//! bracket table. Construction verifies super skew-symmetry, parity
//! homogeneity and the super Jacobi identity exhaustively, so every value of
//! type [`LieSuperalgebra`] in the program is a genuine Lie superalgebra.

use crate::qlinalg::{
    coords_in_basis, echelon_basis, parse_rat, qz, reduce_mod, QVec, Rat, SparseMatrix,
};
use num::{One, Zero};
use serde_json::{json, Value};
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// (-1)^{p(a) p(b)}
    pub fn koszul(self, other: Parity) -> Rat {
        if self == Parity::Odd && other == Parity::Odd {
            -Rat::one()
        } else {
            Rat::one()
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: u8) -> Parity {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Error)]
pub enum AlgError {
    #[error("skew symmetry violated at basis pair ({i}, {j})")]
    SkewViolation { i: usize, j: usize, residual: QVec },
    #[error("super Jacobi identity violated at basis triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize, residual: QVec },
    #[error("bracket table entry ({i}, {j}) is not parity homogeneous")]
    ParityViolation { i: usize, j: usize },
    #[error("bracket table index out of bounds at ({i}, {j})")]
    IndexOutOfBounds { i: usize, j: usize },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("not an ideal: [x_{i}, v_{j}] escapes the subspace")]
    NotAnIdeal { i: usize, j: usize },
    #[error("subspace is not closed under the bracket")]
    NotClosed,
    #[error("subspace vector {0} is not parity homogeneous")]
    NotHomogeneous(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{0}")]
    Other(String),
}

/// How the Z-grading operator relates to the algebra, when one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    /// The grading operator is an element of the algebra (its coefficient vector).
    Internal(QVec),
    /// The grading operator acts on the algebra but lies outside it; its
    /// action is diagonal on the basis with eigenvalues `z_degree`.
    External,
    None,
}

/// Coarse classification used to pick the reductive part r and the
/// distinguished decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgClass {
    /// Basic classical, type I (g_1bar splits into two irreducibles).
    BasicTypeI,
    /// Basic classical, type II (g_1bar irreducible).
    BasicTypeII,
    /// sl(n,n) and its quotient A(n,n): handled like type I with a center caveat.
    SlEqual,
    /// Periplectic p(n).
    Periplectic,
    /// Cartan type W/S/S~/H: r = g_0 (the degree-zero part).
    Cartan,
    /// Purely even Lie algebra.
    Even,
    Other,
}

#[derive(Clone, Debug)]
pub struct Metadata {
    pub family: String,
    pub params: Vec<i64>,
    pub class: AlgClass,
    /// Canonical Cartan basis vectors, in the family's listed order.
    pub cartan: Vec<QVec>,
    /// Z-degree per basis element under the family grading, when defined.
    pub z_degree: Option<Vec<i64>>,
    /// Integer weight coordinates per basis element in the family's
    /// epsilon-basis, when defined (used for canonical root labels).
    pub eps: Option<Vec<Option<Vec<i64>>>>,
    pub eps_dim: usize,
    pub grading: Grading,
    /// Heights are a formal identification rather than the eigenvalues of an
    /// operator acting on g (S~(n) only): sign patterns still use them as an
    /// extra coordinate, but n+/- need not be bracket-closed and module
    /// construction is refused.
    pub formal_heights: bool,
}

impl Metadata {
    pub fn opaque() -> Metadata {
        Metadata {
            family: "custom".into(),
            params: vec![],
            class: AlgClass::Other,
            cartan: vec![],
            z_degree: None,
            eps: None,
            eps_dim: 0,
            grading: Grading::None,
            formal_heights: false,
        }
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct LieSuperalgebra {
    pub id: u64,
    pub labels: Vec<String>,
    pub parity: Vec<Parity>,
    /// Row-major dim x dim table; table[i*dim+j] = [x_i, x_j].
    table: Vec<QVec>,
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub alg_id: u64,
    pub coeffs: QVec,
}

/// Subspace in canonical (reduced echelon) form; equality of subspaces is
/// equality of canonical bases.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub alg_id: u64,
    pub basis: Vec<QVec>,
}

impl Subspace {
    pub fn span(g: &LieSuperalgebra, vecs: &[QVec]) -> Subspace {
        Subspace { alg_id: g.id, basis: echelon_basis(vecs) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &QVec) -> bool {
        reduce_mod(&self.basis, v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Subspace { alg_id: self.alg_id, basis: echelon_basis(&vecs) }
    }
}

/// Verifies the table and assembles the algebra.
///
/// Entries may be given for any ordered pair; a missing (j,i) is filled from
/// (i,j) by super skew-symmetry, while pairs present in both orders are
/// cross-checked. Skew, parity homogeneity and the super Jacobi identity are
/// then verified exhaustively over basis pairs and triples.
pub fn make_superalgebra(
    labels: Vec<String>,
    parity: Vec<Parity>,
    entries: Vec<(usize, usize, QVec)>,
    metadata: Metadata,
) -> Result<LieSuperalgebra, AlgError> {
    let dim = labels.len();
    assert_eq!(parity.len(), dim);
    let mut table: Vec<Option<QVec>> = vec![None; dim * dim];
    for (i, j, v) in entries {
        if i >= dim || j >= dim || v.dim != dim {
            return Err(AlgError::IndexOutOfBounds { i, j });
        }
        table[i * dim + j] = Some(v);
    }
    // fill missing mirror entries by skew
    for i in 0..dim {
        for j in 0..dim {
            if table[i * dim + j].is_none() {
                let mirror = table[j * dim + i].clone();
                table[i * dim + j] = Some(match mirror {
                    Some(v) => v.scale(&-parity[i].koszul(parity[j])),
                    None => QVec::zero(dim),
                });
            }
        }
    }
    let table: Vec<QVec> = table.into_iter().map(Option::unwrap).collect();

    let g = LieSuperalgebra { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), labels, parity, table, metadata };
    g.verify()?;
    Ok(g)
}

impl LieSuperalgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn table_entry(&self, i: usize, j: usize) -> &QVec {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element { alg_id: self.id, coeffs: QVec::unit(self.dim(), i) }
    }

    pub fn element(&self, coeffs: QVec) -> Element {
        assert_eq!(coeffs.dim, self.dim());
        Element { alg_id: self.id, coeffs }
    }

    pub fn zero(&self) -> Element {
        self.element(QVec::zero(self.dim()))
    }

    /// [x_i, v] for a coefficient vector v.
    pub fn bracket_basis_vec(&self, i: usize, v: &QVec) -> QVec {
        let mut out = QVec::zero(self.dim());
        for (j, c) in v.iter() {
            out.add_scaled(c, self.table_entry(i, j));
        }
        out
    }

    /// [a, b] on raw coefficient vectors.
    pub fn bracket_vec(&self, a: &QVec, b: &QVec) -> QVec {
        let mut out = QVec::zero(self.dim());
        for (i, c) in a.iter() {
            let part = self.bracket_basis_vec(i, b);
            out.add_scaled(c, &part);
        }
        out
    }

    pub fn even_subspace(&self) -> Subspace {
        let vecs: Vec<QVec> = (0..self.dim())
            .filter(|&i| self.parity[i] == Parity::Even)
            .map(|i| QVec::unit(self.dim(), i))
            .collect();
        Subspace::span(self, &vecs)
    }

    /// The reductive part r: the degree-zero part for Cartan type, the even
    /// part otherwise.
    pub fn reductive_part(&self) -> Subspace {
        match self.metadata.class {
            AlgClass::Cartan => {
                let degs = self
                    .metadata
                    .z_degree
                    .as_ref()
                    .expect("Cartan-type algebra must carry z-degrees");
                let vecs: Vec<QVec> = (0..self.dim())
                    .filter(|&i| degs[i] == 0)
                    .map(|i| QVec::unit(self.dim(), i))
                    .collect();
                Subspace::span(self, &vecs)
            }
            _ => self.even_subspace(),
        }
    }

    fn verify(&self) -> Result<(), AlgError> {
        let dim = self.dim();
        // parity homogeneity
        for i in 0..dim {
            for j in 0..dim {
                let expect = self.parity[i].add(self.parity[j]);
                for (k, c) in self.table_entry(i, j).iter() {
                    if !c.is_zero() && self.parity[k] != expect {
                        return Err(AlgError::ParityViolation { i, j });
                    }
                }
            }
        }
        // super skew-symmetry
        for i in 0..dim {
            for j in i..dim {
                let lhs = self.table_entry(i, j);
                let rhs = self.table_entry(j, i).scale(&-self.parity[i].koszul(self.parity[j]));
                let residual = lhs.sub(&rhs);
                if !residual.is_zero() {
                    return Err(AlgError::SkewViolation { i, j, residual });
                }
            }
        }
        // super Jacobi, graded-cyclic form, one representative per multiset
        for i in 0..dim {
            for j in i..dim {
                for k in j..dim {
                    let (pi, pj, pk) = (self.parity[i], self.parity[j], self.parity[k]);
                    let mut acc = QVec::zero(dim);
                    let t1 = self.bracket_basis_vec(i, self.table_entry(j, k));
                    acc.add_scaled(&pi.koszul(pk), &t1);
                    let t2 = self.bracket_basis_vec(j, self.table_entry(k, i));
                    acc.add_scaled(&pj.koszul(pi), &t2);
                    let t3 = self.bracket_basis_vec(k, self.table_entry(i, j));
                    acc.add_scaled(&pk.koszul(pj), &t3);
                    if !acc.is_zero() {
                        return Err(AlgError::JacobiViolation { i, j, k, residual: acc });
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn bracket(g: &LieSuperalgebra, a: &Element, b: &Element) -> Result<Element, AlgError> {
    if a.alg_id != g.id || b.alg_id != g.id {
        return Err(AlgError::AlgebraMismatch);
    }
    Ok(g.element(g.bracket_vec(&a.coeffs, &b.coeffs)))
}

/// Matrix of ad(a) in the algebra basis.
pub fn adjoint(g: &LieSuperalgebra, a: &Element) -> Result<SparseMatrix, AlgError> {
    if a.alg_id != g.id {
        return Err(AlgError::AlgebraMismatch);
    }
    let dim = g.dim();
    let mut m = SparseMatrix::zero(dim, dim);
    for j in 0..dim {
        let col = g.bracket_vec(&a.coeffs, &QVec::unit(dim, j));
        for (i, x) in col.iter() {
            m.set(i, j, x.clone());
        }
    }
    Ok(m)
}

/// Echelon basis of span{[x_i, x_j]}.
pub fn derived_subalgebra(g: &LieSuperalgebra) -> Subspace {
    let dim = g.dim();
    let mut vecs = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            let v = g.table_entry(i, j);
            if !v.is_zero() {
                vecs.push(v.clone());
            }
        }
    }
    Subspace::span(g, &vecs)
}

/// Quotient by a verified ideal. Returns the quotient together with the
/// projection matrix (old dim -> new dim) used to push elements down.
pub fn quotient_by_ideal(
    g: &LieSuperalgebra,
    ideal: &Subspace,
) -> Result<(LieSuperalgebra, SparseMatrix), AlgError> {
    if ideal.alg_id != g.id {
        return Err(AlgError::AlgebraMismatch);
    }
    let dim = g.dim();
    for (j, v) in ideal.basis.iter().enumerate() {
        let mut par: Option<Parity> = None;
        for (k, _) in v.iter() {
            match par {
                None => par = Some(g.parity[k]),
                Some(p) if p != g.parity[k] => return Err(AlgError::NotHomogeneous(j)),
                _ => {}
            }
        }
        for i in 0..dim {
            let w = g.bracket_basis_vec(i, v);
            if !ideal.contains(&w) {
                return Err(AlgError::NotAnIdeal { i, j });
            }
        }
    }
    let pivot_cols: Vec<usize> =
        ideal.basis.iter().map(|v| v.leading().unwrap().0).collect();
    let complement: Vec<usize> =
        (0..dim).filter(|i| !pivot_cols.contains(i)).collect();
    let new_dim = complement.len();
    // projection: reduce mod the ideal, then read coefficients at complement indices
    let mut proj = SparseMatrix::zero(new_dim, dim);
    for old in 0..dim {
        let red = reduce_mod(&ideal.basis, &QVec::unit(dim, old));
        for (k, x) in red.iter() {
            let pos = complement.iter().position(|&c| c == k).expect("residual off complement");
            proj.set(pos, old, x.clone());
        }
    }
    let labels: Vec<String> = complement.iter().map(|&i| g.labels[i].clone()).collect();
    let parity: Vec<Parity> = complement.iter().map(|&i| g.parity[i]).collect();
    let mut entries = Vec::new();
    for (a, &ia) in complement.iter().enumerate() {
        for (b, &ib) in complement.iter().enumerate() {
            let w = proj.apply(g.table_entry(ia, ib));
            if !w.is_zero() {
                entries.push((a, b, w));
            }
        }
    }
    let mut metadata = g.metadata.clone();
    metadata.cartan = g
        .metadata
        .cartan
        .iter()
        .map(|h| proj.apply(h))
        .filter(|v| !v.is_zero())
        .collect();
    metadata.cartan = echelon_basis(&metadata.cartan);
    metadata.z_degree = g
        .metadata
        .z_degree
        .as_ref()
        .map(|zs| complement.iter().map(|&i| zs[i]).collect());
    metadata.eps = g
        .metadata
        .eps
        .as_ref()
        .map(|es| complement.iter().map(|&i| es[i].clone()).collect());
    metadata.grading = match &g.metadata.grading {
        Grading::Internal(v) => {
            let w = proj.apply(v);
            if w.is_zero() {
                Grading::External
            } else {
                Grading::Internal(w)
            }
        }
        other => other.clone(),
    };
    let q = make_superalgebra(labels, parity, entries, metadata)?;
    Ok((q, proj))
}

/// Subalgebra on an explicit list of parity-homogeneous, linearly independent
/// vectors, verified closed under the bracket. Returns the algebra and the
/// embedding matrix (new dim columns -> old dim).
pub fn subalgebra(
    g: &LieSuperalgebra,
    vectors: &[QVec],
    labels: Vec<String>,
) -> Result<(LieSuperalgebra, Vec<QVec>), AlgError> {
    let n = vectors.len();
    assert_eq!(labels.len(), n);
    let mut parity = Vec::with_capacity(n);
    for (j, v) in vectors.iter().enumerate() {
        let mut par: Option<Parity> = None;
        for (k, _) in v.iter() {
            match par {
                None => par = Some(g.parity[k]),
                Some(p) if p != g.parity[k] => return Err(AlgError::NotHomogeneous(j)),
                _ => {}
            }
        }
        parity.push(par.unwrap_or(Parity::Even));
    }
    let mut entries = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let w = g.bracket_vec(&vectors[a], &vectors[b]);
            if w.is_zero() {
                continue;
            }
            let coords = coords_in_basis(vectors, &w).ok_or(AlgError::NotClosed)?;
            entries.push((a, b, coords));
        }
    }
    let mut metadata = Metadata::opaque();
    metadata.family = format!("sub({})", g.metadata.family);
    let sub = make_superalgebra(labels, parity, entries, metadata)?;
    Ok((sub, vectors.to_vec()))
}

fn rat_pair(x: &Rat) -> (String, String) {
    (x.numer().to_string(), x.denom().to_string())
}

fn qvec_json(v: &QVec) -> Value {
    let terms: Vec<Value> = v
        .iter()
        .map(|(k, x)| {
            let (n, d) = rat_pair(x);
            json!([k, n, d])
        })
        .collect();
    json!(terms)
}

fn qvec_from_json(dim: usize, val: &Value) -> Result<QVec, String> {
    let arr = val.as_array().ok_or("expected array of terms")?;
    let mut v = QVec::zero(dim);
    for t in arr {
        let t = t.as_array().ok_or("expected [k, num, den]")?;
        let k = t[0].as_u64().ok_or("bad index")? as usize;
        let n = t[1].as_str().ok_or("bad numerator")?;
        let d = t[2].as_str().ok_or("bad denominator")?;
        v.set(k, parse_rat(&format!("{n}/{d}"))?);
    }
    Ok(v)
}

/// Serializes the algebra as
/// `{labels, parities, bracket: [[i, j, [[k, num, den], ...]], ...], metadata}`.
/// Rationals are encoded as decimal strings so round-trips are bit-exact.
pub fn algebra_to_json(g: &LieSuperalgebra) -> Value {
    let dim = g.dim();
    let mut bracket = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let v = g.table_entry(i, j);
            if !v.is_zero() {
                bracket.push(json!([i, j, qvec_json(v)]));
            }
        }
    }
    let m = &g.metadata;
    let metadata = json!({
        "family": m.family,
        "params": m.params,
        "class": format!("{:?}", m.class),
        "cartan": m.cartan.iter().map(qvec_json).collect::<Vec<_>>(),
        "z_degree": m.z_degree,
        "eps": m.eps,
        "eps_dim": m.eps_dim,
        "formal_heights": m.formal_heights,
        "grading": match &m.grading {
            Grading::Internal(v) => json!({"kind": "internal", "element": qvec_json(v)}),
            Grading::External => json!({"kind": "external"}),
            Grading::None => json!({"kind": "none"}),
        },
    });
    json!({
        "labels": g.labels,
        "parities": g.parity.iter().map(|p| p.bit()).collect::<Vec<_>>(),
        "bracket": bracket,
        "metadata": metadata,
    })
}

pub fn algebra_from_json(val: &Value) -> Result<LieSuperalgebra, String> {
    let labels: Vec<String> = val["labels"]
        .as_array()
        .ok_or("missing labels")?
        .iter()
        .map(|x| x.as_str().unwrap_or_default().to_string())
        .collect();
    let dim = labels.len();
    let parity: Vec<Parity> = val["parities"]
        .as_array()
        .ok_or("missing parities")?
        .iter()
        .map(|x| Parity::from_bit(x.as_u64().unwrap_or(0) as u8))
        .collect();
    let mut entries = Vec::new();
    for e in val["bracket"].as_array().ok_or("missing bracket")? {
        let e = e.as_array().ok_or("bad bracket entry")?;
        let i = e[0].as_u64().ok_or("bad i")? as usize;
        let j = e[1].as_u64().ok_or("bad j")? as usize;
        entries.push((i, j, qvec_from_json(dim, &e[2])?));
    }
    let m = &val["metadata"];
    let class = match m["class"].as_str().unwrap_or("Other") {
        "BasicTypeI" => AlgClass::BasicTypeI,
        "BasicTypeII" => AlgClass::BasicTypeII,
        "SlEqual" => AlgClass::SlEqual,
        "Periplectic" => AlgClass::Periplectic,
        "Cartan" => AlgClass::Cartan,
        "Even" => AlgClass::Even,
        _ => AlgClass::Other,
    };
    let cartan = m["cartan"]
        .as_array()
        .map(|a| a.iter().map(|v| qvec_from_json(dim, v)).collect::<Result<Vec<_>, _>>())
        .transpose()?
        .unwrap_or_default();
    let z_degree: Option<Vec<i64>> = m["z_degree"]
        .as_array()
        .map(|a| a.iter().map(|x| x.as_i64().unwrap_or(0)).collect());
    let eps: Option<Vec<Option<Vec<i64>>>> = m["eps"].as_array().map(|a| {
        a.iter()
            .map(|x| {
                x.as_array()
                    .map(|inner| inner.iter().map(|y| y.as_i64().unwrap_or(0)).collect())
            })
            .collect()
    });
    let grading = match m["grading"]["kind"].as_str().unwrap_or("none") {
        "internal" => Grading::Internal(qvec_from_json(dim, &m["grading"]["element"])?),
        "external" => Grading::External,
        _ => Grading::None,
    };
    let metadata = Metadata {
        family: m["family"].as_str().unwrap_or("custom").to_string(),
        params: m["params"]
            .as_array()
            .map(|a| a.iter().map(|x| x.as_i64().unwrap_or(0)).collect())
            .unwrap_or_default(),
        class,
        cartan,
        z_degree,
        eps,
        eps_dim: m["eps_dim"].as_u64().unwrap_or(0) as usize,
        grading,
        formal_heights: m["formal_heights"].as_bool().unwrap_or(false),
    };
    make_superalgebra(labels, parity, entries, metadata).map_err(|e| e.to_string())
}

/// The Chevalley table of sl(2) on basis (x, h, y); used all over the tests.
pub fn sl2_chevalley() -> LieSuperalgebra {
    let labels = vec!["x".into(), "h".into(), "y".into()];
    let parity = vec![Parity::Even; 3];
    let e = |i| QVec::unit(3, i);
    let entries = vec![
        (1, 0, e(0).scale(&qz(2))),  // [h,x] = 2x
        (1, 2, e(2).scale(&qz(-2))), // [h,y] = -2y
        (0, 2, e(1)),                // [x,y] = h
    ];
    let mut md = Metadata::opaque();
    md.family = "sl2".into();
    md.class = AlgClass::Even;
    md.cartan = vec![e(1)];
    make_superalgebra(labels, parity, entries, md).expect("sl(2) table is valid")
}
