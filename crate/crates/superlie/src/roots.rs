//! Root space decompositions: Cartan subalgebras, grading elements, joint
//! eigenspace splitting of the adjoint action over the rationals, heights and
//! multiplicities, and extremal (lowest/highest) roots of a triangular
//! decomposition.

use crate::qlinalg::{echelon_basis, kernel, qz, QVec, Rat, SparseMatrix};
use crate::superalg::{AlgClass, Element, Grading, LieSuperalgebra, Parity, Subspace};
use crate::triangular::Decomposition;
use num::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RootError {
    #[error("algebra has no recorded Cartan subalgebra (unknown family)")]
    UnknownFamily,
    #[error("ad(h_{idx}) does not split over Q on a joint eigenspace (wrong Cartan choice?)")]
    NonDiagonalizable { idx: usize },
    #[error("zero-weight space strictly contains the Cartan subalgebra")]
    CartanNotSelfNormalizing,
    #[error("root space at {0:?} is not parity homogeneous")]
    MixedParity(Vec<String>),
    #[error("dimension count failed: roots + cartan != dim g")]
    Incomplete,
    #[error("extremal root is not unique: candidates {0:?}")]
    NotUnique(Vec<Vec<String>>),
    #[error("no extremal root found")]
    NoExtremal,
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Debug)]
pub struct Root {
    /// Evaluations against the Cartan basis, with the grading-operator
    /// eigenvalue appended as a last coordinate when the operator is external.
    pub functional: Vec<Rat>,
    pub parity: Parity,
    pub height: Option<i64>,
    /// Canonical integer coordinates in the family's epsilon basis, when known.
    pub eps: Option<Vec<i64>>,
    pub space: Vec<QVec>,
}

impl Root {
    pub fn mult(&self) -> usize {
        self.space.len()
    }

    pub fn eval(&self, witness: &QVec) -> Rat {
        let mut acc = Rat::zero();
        for (i, c) in witness.iter() {
            acc += c * &self.functional[i];
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub alg_id: u64,
    pub rank: usize,
    /// true when the functional carries an extra (external grading) coordinate
    pub extended: bool,
    pub cartan: Vec<QVec>,
    pub cartan_space: Subspace,
    pub roots: Vec<Root>,
}

impl RootDatum {
    /// Length of functional vectors (= witness dimension).
    pub fn coord_dim(&self) -> usize {
        self.rank + if self.extended { 1 } else { 0 }
    }

    pub fn root_index(&self, functional: &[Rat]) -> Option<usize> {
        self.roots.iter().position(|r| r.functional == functional)
    }

    pub fn functionals(&self) -> Vec<QVec> {
        self.roots.iter().map(|r| QVec::from_dense(&r.functional)).collect()
    }
}

/// The family's canonical Cartan subalgebra, spanned by the paper's listed basis.
pub fn cartan_subalgebra(g: &LieSuperalgebra) -> Result<Subspace, RootError> {
    if g.metadata.cartan.is_empty() {
        return Err(RootError::UnknownFamily);
    }
    Ok(Subspace { alg_id: g.id, basis: echelon_basis(&g.metadata.cartan) })
}

/// The grading element, when it lies in the algebra; External when the charge
/// operator acts from outside; None when the family has no distinguished charge.
#[derive(Clone, Debug, PartialEq)]
pub enum GradingElement {
    Internal(Element),
    External,
    None,
}

pub fn grading_element(g: &LieSuperalgebra) -> GradingElement {
    match &g.metadata.grading {
        Grading::Internal(v) => GradingElement::Internal(g.element(v.clone())),
        Grading::External => GradingElement::External,
        Grading::None => GradingElement::None,
    }
}

/// Eigenspace refinement of a block under one operator. Eigenvalues are
/// searched among the integers within the Gershgorin bound of the restricted
/// matrix; every in-scope family splits with integral eigenvalues (that is
/// what the canonical Cartan bases are for), so failing to exhaust the block
/// is reported as non-split.
fn split_block(
    block: &[QVec],
    apply: &dyn Fn(&QVec) -> QVec,
    idx: usize,
) -> Result<Vec<(Rat, Vec<QVec>)>, RootError> {
    let k = block.len();
    let solver = crate::qlinalg::SpanSolver::new(block);
    let mut m = SparseMatrix::zero(k, k);
    for (j, b) in block.iter().enumerate() {
        let image = apply(b);
        let coords = solver.coords(&image).ok_or(RootError::NonDiagonalizable { idx })?;
        for (i, x) in coords.iter() {
            m.set(i, j, x.clone());
        }
    }
    let mut bound = Rat::zero();
    for r in 0..k {
        let mut s = Rat::zero();
        for c in 0..k {
            s += m.get(r, c).abs();
        }
        if s > bound {
            bound = s.clone();
        }
    }
    let bmax: i64 = bound.ceil().to_integer().to_string().parse().unwrap_or(0);
    let mut found = 0usize;
    let mut out = Vec::new();
    for ev in -bmax..=bmax {
        let mut shifted = m.clone();
        for d in 0..k {
            let x = shifted.get(d, d) - qz(ev);
            shifted.set(d, d, x);
        }
        let ker = kernel(&shifted);
        if ker.is_empty() {
            continue;
        }
        let vecs: Vec<QVec> = ker
            .iter()
            .map(|coords| {
                let mut v = QVec::zero(block[0].dim);
                for (i, c) in coords.iter() {
                    v.add_scaled(c, &block[i]);
                }
                v
            })
            .collect();
        found += vecs.len();
        out.push((qz(ev), vecs));
    }
    if found != k {
        return Err(RootError::NonDiagonalizable { idx });
    }
    Ok(out)
}

/// Full root-space decomposition with respect to the canonical Cartan basis,
/// refined by the grading operator's eigenvalue when the operator is external.
pub fn root_datum(g: &LieSuperalgebra) -> Result<RootDatum, RootError> {
    let cartan_space = cartan_subalgebra(g)?;
    let cartan = g.metadata.cartan.clone();
    let rank = cartan.len();
    let extended =
        matches!(g.metadata.grading, Grading::External) && g.metadata.z_degree.is_some();
    let dim = g.dim();

    let mut blocks: Vec<(Vec<Rat>, Vec<QVec>)> =
        vec![(vec![], (0..dim).map(|i| QVec::unit(dim, i)).collect())];
    for (idx, h) in cartan.iter().enumerate() {
        let mut next = Vec::new();
        for (vals, block) in blocks {
            let parts = split_block(&block, &|v| g.bracket_vec(h, v), idx)?;
            for (ev, vecs) in parts {
                let mut nv = vals.clone();
                nv.push(ev);
                next.push((nv, vecs));
            }
        }
        blocks = next;
    }
    if extended {
        // the external charge acts diagonally on the realization basis
        let degs = g.metadata.z_degree.as_ref().unwrap();
        let apply = |v: &QVec| -> QVec {
            let mut out = QVec::zero(dim);
            for (i, c) in v.iter() {
                if degs[i] != 0 {
                    out.add_scaled(&(c * qz(degs[i])), &QVec::unit(dim, i));
                }
            }
            out
        };
        let mut next = Vec::new();
        for (vals, block) in blocks {
            let parts = split_block(&block, &apply, rank)?;
            for (ev, vecs) in parts {
                let mut nv = vals.clone();
                nv.push(ev);
                next.push((nv, vecs));
            }
        }
        blocks = next;
    }

    let eps_table = g.metadata.eps.as_ref();
    let degs = g.metadata.z_degree.as_ref();
    let mut roots: Vec<Root> = Vec::new();
    let mut zero_space: Vec<QVec> = Vec::new();
    let mut total = 0usize;
    for (vals, vecs) in blocks {
        if vals.iter().all(|x| x.is_zero()) {
            zero_space.extend(vecs);
            continue;
        }
        total += vecs.len();
        let mut parity: Option<Parity> = None;
        for v in &vecs {
            for (i, _) in v.iter() {
                match parity {
                    None => parity = Some(g.parity[i]),
                    Some(p) if p != g.parity[i] => {
                        return Err(RootError::MixedParity(
                            v.support().map(|i| g.labels[i].clone()).collect(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        // height: the appended coordinate when extended, else the common
        // z-degree of the supporting basis elements
        let height = if extended {
            Some(rat_to_i64(&vals[rank]))
        } else {
            degs.and_then(|zs| {
                let mut h: Option<i64> = None;
                for v in &vecs {
                    for (i, _) in v.iter() {
                        match h {
                            None => h = Some(zs[i]),
                            Some(x) if x != zs[i] => return None,
                            _ => {}
                        }
                    }
                }
                h
            })
        };
        let eps = eps_table.and_then(|tab| {
            let mut e: Option<Vec<i64>> = None;
            for v in &vecs {
                for (i, _) in v.iter() {
                    match (&e, &tab[i]) {
                        (None, Some(x)) => e = Some(x.clone()),
                        (Some(a), Some(b)) if a != b => return None,
                        (_, None) => return None,
                        _ => {}
                    }
                }
            }
            e
        });
        roots.push(Root {
            functional: vals,
            parity: parity.unwrap_or(Parity::Even),
            height,
            eps,
            space: echelon_basis(&vecs),
        });
    }
    let zero = Subspace { alg_id: g.id, basis: echelon_basis(&zero_space) };
    if zero != cartan_space {
        return Err(RootError::CartanNotSelfNormalizing);
    }
    if total + cartan_space.dim() != dim {
        return Err(RootError::Incomplete);
    }
    roots.sort_by(|a, b| a.functional.cmp(&b.functional));
    Ok(RootDatum { alg_id: g.id, rank, extended, cartan, cartan_space, roots })
}

fn rat_to_i64(x: &Rat) -> i64 {
    debug_assert!(num::One::is_one(x.denom()));
    x.numer().to_string().parse().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Lowest,
    Highest,
}

/// The unique root whose space is annihilated by ad(n-) (lowest) or ad(n+)
/// (highest); returns the root's index in the datum. For sl(n,n) the
/// annihilator test is relaxed to extremal candidates under the witness
/// pairing before uniqueness is enforced.
pub fn extremal_root(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    direction: Direction,
) -> Result<usize, RootError> {
    let nilp = match direction {
        Direction::Lowest => &dec.n_minus,
        Direction::Highest => &dec.n_plus,
    };
    let mut candidates = Vec::new();
    'roots: for (ri, root) in datum.roots.iter().enumerate() {
        for y in &nilp.basis {
            for v in &root.space {
                if !g.bracket_vec(y, v).is_zero() {
                    continue 'roots;
                }
            }
        }
        candidates.push(ri);
    }
    if candidates.is_empty() {
        if g.metadata.formal_heights {
            // formal S~ decompositions: n-/+ are not bracket-closed, so the
            // annihilator test can come up empty; the extremal root is then
            // the witness-pairing extremum, as in the S(n)-identification
            // argument
            let vals: Vec<Rat> =
                datum.roots.iter().map(|r| r.eval(&dec.witness)).collect();
            let best = match direction {
                Direction::Lowest => vals.iter().min().unwrap().clone(),
                Direction::Highest => vals.iter().max().unwrap().clone(),
            };
            candidates =
                (0..datum.roots.len()).filter(|&i| vals[i] == best).collect();
        } else {
            return Err(RootError::NoExtremal);
        }
    }
    if candidates.len() > 1 && g.metadata.class == AlgClass::SlEqual {
        let vals: Vec<Rat> =
            candidates.iter().map(|&ri| datum.roots[ri].eval(&dec.witness)).collect();
        let best = match direction {
            Direction::Lowest => vals.iter().min().unwrap().clone(),
            Direction::Highest => vals.iter().max().unwrap().clone(),
        };
        candidates = candidates
            .into_iter()
            .zip(vals)
            .filter(|(_, v)| *v == best)
            .map(|(c, _)| c)
            .collect();
    }
    if candidates.len() > 1 {
        let names = candidates
            .iter()
            .map(|&ri| {
                datum.roots[ri].functional.iter().map(|x| x.to_string()).collect::<Vec<_>>()
            })
            .collect();
        return Err(RootError::NotUnique(names));
    }
    Ok(candidates[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::build_family;

    #[test]
    fn sl2_root_datum() {
        let g = crate::superalg::sl2_chevalley();
        let d = root_datum(&g).unwrap();
        assert_eq!(d.rank, 1);
        assert_eq!(d.roots.len(), 2);
        assert_eq!(grading_element(&g), GradingElement::None);
    }

    #[test]
    fn w2_root_datum_counts() {
        let g = build_family("W:2").unwrap();
        let d = root_datum(&g).unwrap();
        assert_eq!(d.roots.len(), 6);
        assert!(d.roots.iter().all(|r| r.mult() == 1));
        let total: usize = d.roots.iter().map(|r| r.mult()).sum();
        assert_eq!(total + d.cartan_space.dim(), g.dim());
        assert!(matches!(grading_element(&g), GradingElement::Internal(_)));
    }

    #[test]
    fn h4_grading_external_and_h_restriction_multiplicity() {
        let g = build_family("H:4").unwrap();
        assert_eq!(grading_element(&g), GradingElement::External);
        let d = root_datum(&g).unwrap();
        assert!(d.extended);
        assert_eq!(d.roots.len(), 12);
        // roots with respect to h alone are the restrictions; these merge
        let mut restricted: Vec<Vec<Rat>> =
            d.roots.iter().map(|r| r.functional[..d.rank].to_vec()).collect();
        restricted.sort();
        let before = restricted.len();
        restricted.dedup();
        assert!(restricted.len() < before);
    }

    #[test]
    fn h5_has_multiplicity_two_root() {
        let g = build_family("H:5").unwrap();
        let d = root_datum(&g).unwrap();
        assert!(d.roots.iter().any(|r| r.mult() >= 2));
        let total: usize = d.roots.iter().map(|r| r.mult()).sum();
        assert_eq!(total + d.cartan_space.dim(), g.dim());
    }

    #[test]
    fn cartan_lists_match_the_conventions() {
        // W(3): {xi_k d_k}; S(3): adjacent differences; both in listed order
        let w3 = build_family("W:3").unwrap();
        assert_eq!(w3.metadata.cartan.len(), 3);
        for (k, h) in w3.metadata.cartan.iter().enumerate() {
            let idx = h.support().next().unwrap();
            assert_eq!(w3.labels[idx], format!("ξ{}∂{}", k + 1, k + 1));
        }
        let s3 = build_family("S:3").unwrap();
        assert_eq!(s3.metadata.cartan.len(), 2);
        for (k, h) in s3.metadata.cartan.iter().enumerate() {
            let idx = h.support().next().unwrap();
            assert_eq!(
                s3.labels[idx],
                format!("(ξ{}∂{}−ξ{}∂{})", k + 1, k + 1, k + 2, k + 2)
            );
        }
        // sl(2,1): traceless diagonals, rank 2
        let sl21 = build_family("sl:2,1").unwrap();
        assert_eq!(cartan_subalgebra(&sl21).unwrap().dim(), 2);
        // W(2): the grading element is the sum of the Cartan basis
        let w2 = build_family("W:2").unwrap();
        match grading_element(&w2) {
            GradingElement::Internal(e) => {
                let mut sum = QVec::zero(w2.dim());
                for h in &w2.metadata.cartan {
                    sum.add_scaled(&crate::qlinalg::qz(1), h);
                }
                assert_eq!(e.coeffs, sum);
            }
            other => panic!("expected internal grading, got {other:?}"),
        }
    }

    #[test]
    fn osp32_distinguished_lowest_root_is_even_height_minus2() {
        let g = build_family("osp:3,2").unwrap();
        let d = root_datum(&g).unwrap();
        let dec = crate::triangular::standard_decomposition(
            &g,
            &d,
            crate::triangular::StandardKind::Distinguished,
        )
        .unwrap();
        let lo = extremal_root(&g, &d, &dec, Direction::Lowest).unwrap();
        assert_eq!(d.roots[lo].parity, Parity::Even);
        assert_eq!(d.roots[lo].height, Some(-2));
    }

    #[test]
    fn p2_roots_include_2eps_not_minus() {
        let g = build_family("p:2").unwrap();
        let d = root_datum(&g).unwrap();
        let eps: Vec<Vec<i64>> = d.roots.iter().filter_map(|r| r.eps.clone()).collect();
        assert_eq!(eps.len(), d.roots.len());
        for i in 0..3 {
            let mut plus = vec![0i64; 3];
            plus[i] = 2;
            let minus: Vec<i64> = plus.iter().map(|x| -x).collect();
            assert!(eps.contains(&plus), "2 eps_{i} missing");
            assert!(!eps.contains(&minus), "-2 eps_{i} must be absent");
        }
    }
}
