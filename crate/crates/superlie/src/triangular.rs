//! Triangular decompositions from regular elements, simple systems, odd and
//! Serganova reflections, the C1/C2/parabolic condition checkers, and the
//! constructive search for decompositions satisfying both C1 and C2.

use crate::qlinalg::{solve_strict, QVec, Rat, Sign};
use crate::roots::{extremal_root, Direction, RootDatum};
use crate::superalg::{AlgClass, LieSuperalgebra, Parity, Subspace};
use num::{One, Signed, Zero};
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TriError {
    #[error("element is not regular: root {0:?} vanishes on it")]
    NotRegular(Vec<String>),
    #[error("root is not simple for this Borel (reflected set infeasible)")]
    NotSimpleForBorel,
    #[error("root is not an odd isotropic simple root")]
    NotIsotropic,
    #[error("root is not simple in the given system")]
    NotSimple,
    #[error("n+/- not closed under bracket (internal error)")]
    NotClosed,
    #[error("odd reflection set identity violated (internal error)")]
    SetIdentity,
    #[error("reflection search exhausted without finding a C2 decomposition")]
    SearchExhausted,
    #[error("decomposition does not apply to this algebra/datum")]
    Mismatch,
    #[error("root error: {0}")]
    Root(#[from] crate::roots::RootError),
    #[error("{0}")]
    Other(String),
}

/// A triangular decomposition g = n- + h + n+ with its regularity witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub alg_id: u64,
    /// positive\[i\] = true iff datum.roots\[i\] is a positive root
    pub positive: Vec<bool>,
    pub witness: QVec,
    pub n_plus: Subspace,
    pub n_minus: Subspace,
    /// n+ and n- are closed under the bracket. Always true except for the
    /// formal (identification-graded) decompositions of S~(n).
    pub closed: bool,
}

impl Decomposition {
    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.positive.len()).filter(|&i| self.positive[i]).collect()
    }

    pub fn borel(&self, datum: &RootDatum) -> Subspace {
        datum.cartan_space.sum(&self.n_plus)
    }
}

fn assemble(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    positive: Vec<bool>,
    witness: QVec,
) -> Result<Decomposition, TriError> {
    let mut plus: Vec<QVec> = Vec::new();
    let mut minus: Vec<QVec> = Vec::new();
    for (i, root) in datum.roots.iter().enumerate() {
        let side = if positive[i] { &mut plus } else { &mut minus };
        side.extend(root.space.iter().cloned());
    }
    let n_plus = Subspace::span(g, &plus);
    let n_minus = Subspace::span(g, &minus);
    let mut closed = true;
    'check: for side in [&n_plus, &n_minus] {
        for a in &side.basis {
            for b in &side.basis {
                let w = g.bracket_vec(a, b);
                if !w.is_zero() && !side.contains(&w) {
                    closed = false;
                    break 'check;
                }
            }
        }
    }
    if !closed && !g.metadata.formal_heights {
        return Err(TriError::NotClosed);
    }
    Ok(Decomposition { alg_id: g.id, positive, witness, n_plus, n_minus, closed })
}

/// Decomposition induced by a regular element (coordinates over the Cartan
/// basis, plus the external grading coordinate when the datum is extended).
pub fn positive_system(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    witness: &QVec,
) -> Result<Decomposition, TriError> {
    if witness.dim != datum.coord_dim() {
        return Err(TriError::Mismatch);
    }
    let mut positive = Vec::with_capacity(datum.roots.len());
    for root in &datum.roots {
        let v = root.eval(witness);
        if v.is_zero() {
            return Err(TriError::NotRegular(
                root.functional.iter().map(|x| x.to_string()).collect(),
            ));
        }
        positive.push(v.is_positive());
    }
    assemble(g, datum, positive, witness.clone())
}

/// Decomposition with a prescribed sign pattern, if a regular element
/// realizing it exists.
pub fn from_signs(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    positive: &[bool],
) -> Result<Option<Decomposition>, TriError> {
    let functionals = datum.functionals();
    let signs: Vec<Sign> =
        positive.iter().map(|&p| if p { Sign::Pos } else { Sign::Neg }).collect();
    let witness = solve_strict(&functionals, &signs).map_err(TriError::Other)?;
    match witness {
        None => Ok(None),
        Some(w) => Ok(Some(assemble(g, datum, positive.to_vec(), w)?)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    /// Positive = positive height, plus the standard even chamber at height 0.
    Distinguished,
    /// Cartan type: n+ contains all positive-degree pieces (same sign rule).
    BMax,
    /// Cartan type: n+ contains g_{-1} instead.
    BMin,
}

/// The family's distinguished (resp. maximal/minimal, for Cartan type)
/// decomposition, produced by an explicit regular witness.
pub fn standard_decomposition(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    kind: StandardKind,
) -> Result<Decomposition, TriError> {
    let positive: Vec<bool> = datum
        .roots
        .iter()
        .map(|r| {
            let h = r.height.unwrap_or(0);
            if h != 0 {
                match kind {
                    StandardKind::Distinguished | StandardKind::BMax => h > 0,
                    StandardKind::BMin => h < 0,
                }
            } else {
                // standard even chamber: first nonzero eps coordinate positive
                match &r.eps {
                    Some(e) => e.iter().find(|&&x| x != 0).map(|&x| x > 0).unwrap_or(false),
                    None => r
                        .functional
                        .iter()
                        .find(|x| !x.is_zero())
                        .map(|x| x.is_positive())
                        .unwrap_or(false),
                }
            }
        })
        .collect();
    from_signs(g, datum, &positive)?.ok_or(TriError::NotSimpleForBorel)
}

pub fn opposite(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
) -> Result<Decomposition, TriError> {
    let positive: Vec<bool> = dec.positive.iter().map(|&p| !p).collect();
    let witness = dec.witness.scale(&-Rat::one());
    assemble(g, datum, positive, witness)
}

/// An sl(2)-style generator triple attached to a simple root.
#[derive(Clone, Debug)]
pub struct Triple {
    pub x: QVec,
    pub y: QVec,
    pub h: QVec,
}

#[derive(Clone, Debug)]
pub struct SimpleSystem {
    /// Indices into datum.roots.
    pub simples: Vec<usize>,
    /// Generator triples, for families with mirror-symmetric root sets
    /// (basic classical and sl(n,n)); empty for Cartan type and p(n).
    pub triples: Vec<Triple>,
}

fn is_basic_like(class: AlgClass) -> bool {
    matches!(
        class,
        AlgClass::BasicTypeI | AlgClass::BasicTypeII | AlgClass::SlEqual | AlgClass::Even
    )
}

fn functional_neg(f: &[Rat]) -> Vec<Rat> {
    f.iter().map(|x| -x.clone()).collect()
}

fn functional_sum(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Generator triple for a root with mirror partner; even non-isotropic roots
/// are normalized so that [h_a, x_a] = 2 x_a.
fn make_triple(g: &LieSuperalgebra, datum: &RootDatum, ri: usize) -> Result<Triple, TriError> {
    let root = &datum.roots[ri];
    let neg = datum
        .root_index(&functional_neg(&root.functional))
        .ok_or(TriError::Other("root has no mirror partner".into()))?;
    let x = root.space[0].clone();
    let mut y = datum.roots[neg].space[0].clone();
    let mut h = g.bracket_vec(&x, &y);
    // alpha(h_alpha), computed against the Cartan basis coordinates
    let alpha_h = |h: &QVec| -> Rat {
        let coords = crate::qlinalg::coords_in_basis(&datum.cartan, h)
            .expect("[x_a, y_a] must lie in the Cartan subalgebra");
        let mut acc = Rat::zero();
        for (i, c) in coords.iter() {
            acc += c * &root.functional[i];
        }
        acc
    };
    let c = alpha_h(&h);
    if !c.is_zero() {
        let factor = Rat::new(num::BigInt::from(2), num::BigInt::from(1)) / c;
        y = y.scale(&factor);
        h = g.bracket_vec(&x, &y);
    }
    Ok(Triple { x, y, h })
}

/// Simple roots of a decomposition. Basic classical: indecomposable positive
/// roots with generator triples. Cartan type and p(n): positive roots whose
/// Serganova-reflected set is again feasible (certified by exact LP).
pub fn simple_system(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
) -> Result<SimpleSystem, TriError> {
    let pos = dec.positive_indices();
    if is_basic_like(g.metadata.class) {
        let mut simples = Vec::new();
        for &i in &pos {
            let fi = &datum.roots[i].functional;
            let decomposable = pos.iter().any(|&a| {
                pos.iter().any(|&b| {
                    functional_sum(&datum.roots[a].functional, &datum.roots[b].functional) == *fi
                })
            });
            if !decomposable {
                simples.push(i);
            }
        }
        let triples =
            simples.iter().map(|&ri| make_triple(g, datum, ri)).collect::<Result<_, _>>()?;
        Ok(SimpleSystem { simples, triples })
    } else {
        let mut simples = Vec::new();
        for &i in &pos {
            if reflected_signs(datum, dec, i).is_some_and(|s| signs_feasible(datum, &s)) {
                simples.push(i);
            }
        }
        Ok(SimpleSystem { simples, triples: vec![] })
    }
}

/// Simple roots of the reductive part r relative to the decomposition, with
/// normalized sl(2)-triples: the roots of r positive for dec that are not
/// sums of two positive r-roots.
pub fn reductive_simples(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
) -> Result<Vec<(usize, Triple)>, TriError> {
    let r = g.reductive_part();
    let r_pos: Vec<usize> = (0..datum.roots.len())
        .filter(|&i| dec.positive[i] && datum.roots[i].space.iter().all(|v| r.contains(v)))
        .collect();
    let mut out = Vec::new();
    for &i in &r_pos {
        let fi = &datum.roots[i].functional;
        let decomposable = r_pos.iter().any(|&a| {
            r_pos.iter().any(|&b| {
                functional_sum(&datum.roots[a].functional, &datum.roots[b].functional) == *fi
            })
        });
        if !decomposable {
            out.push((i, make_triple(g, datum, i)?));
        }
    }
    Ok(out)
}

/// All positive roots of r (not only the simple ones), with triples.
pub fn reductive_positive_roots(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
) -> Result<Vec<(usize, Triple)>, TriError> {
    let r = g.reductive_part();
    (0..datum.roots.len())
        .filter(|&i| dec.positive[i] && datum.roots[i].space.iter().all(|v| r.contains(v)))
        .map(|i| Ok((i, make_triple(g, datum, i)?)))
        .collect()
}

/// Sign pattern of r_alpha(R+) = (R+ \ {alpha}) u {-alpha} (the mirror term
/// only when -alpha is a root). None if alpha is not positive.
fn reflected_signs(datum: &RootDatum, dec: &Decomposition, ri: usize) -> Option<Vec<bool>> {
    if !dec.positive[ri] {
        return None;
    }
    let mut signs = dec.positive.clone();
    signs[ri] = false;
    // flipping ri to negative already puts -alpha positive when it exists,
    // because the mirror root's sign is untouched and stays negative... the
    // mirror must become positive:
    if let Some(neg) = datum.root_index(&functional_neg(&datum.roots[ri].functional)) {
        signs[neg] = true;
    }
    Some(signs)
}

fn signs_feasible(datum: &RootDatum, signs: &[bool]) -> bool {
    let functionals = datum.functionals();
    let s: Vec<Sign> = signs.iter().map(|&p| if p { Sign::Pos } else { Sign::Neg }).collect();
    matches!(solve_strict(&functionals, &s), Ok(Some(_)))
}

/// Serganova reflection of a decomposition at a simple root, with a fresh
/// regular witness from the exact LP.
pub fn serganova_reflection(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    ri: usize,
) -> Result<Decomposition, TriError> {
    let signs = reflected_signs(datum, dec, ri).ok_or(TriError::NotSimple)?;
    from_signs(g, datum, &signs)?.ok_or(TriError::NotSimpleForBorel)
}

/// Odd reflection of a simple system at an odd isotropic simple root, by the
/// three-case formula. Returns the new simple system together with the induced
/// decomposition, and verifies the set identity
/// R+(r_b(D)) \ {-b} = R+(D) \ {b} exactly.
pub fn odd_reflection(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    system: &SimpleSystem,
    beta: usize,
) -> Result<(SimpleSystem, Decomposition), TriError> {
    let pos_in_system = system.simples.iter().position(|&s| s == beta).ok_or(TriError::NotSimple)?;
    let beta_root = &datum.roots[beta];
    if beta_root.parity != Parity::Odd {
        return Err(TriError::NotIsotropic);
    }
    // isotropy: beta(h_beta) = 0
    let h_beta = &system.triples[pos_in_system].h;
    let eval_on = |f: &[Rat], h: &QVec| -> Rat {
        let coords = crate::qlinalg::coords_in_basis(&datum.cartan, h)
            .expect("triple h must lie in the Cartan");
        let mut acc = Rat::zero();
        for (i, c) in coords.iter() {
            acc += c * &f[i];
        }
        acc
    };
    if !eval_on(&beta_root.functional, h_beta).is_zero() {
        return Err(TriError::NotIsotropic);
    }
    // three-case formula on the simple set
    let mut new_simples: Vec<usize> = Vec::new();
    for (t, &si) in system.simples.iter().enumerate() {
        if si == beta {
            let neg = datum
                .root_index(&functional_neg(&beta_root.functional))
                .ok_or(TriError::Other("-beta is not a root".into()))?;
            new_simples.push(neg);
            continue;
        }
        let other = &datum.roots[si];
        let b_on_hother = eval_on(&beta_root.functional, &system.triples[t].h);
        let other_on_hbeta = eval_on(&other.functional, h_beta);
        if b_on_hother.is_zero() && other_on_hbeta.is_zero() {
            new_simples.push(si);
        } else {
            let sum = functional_sum(&beta_root.functional, &other.functional);
            let idx = datum
                .root_index(&sum)
                .ok_or(TriError::Other("beta + beta' is not a root".into()))?;
            new_simples.push(idx);
        }
    }
    // induced positive system: nonnegative integer combinations of the new simples
    let simple_funcs: Vec<QVec> = new_simples
        .iter()
        .map(|&i| QVec::from_dense(&datum.roots[i].functional))
        .collect();
    let mut positive = vec![false; datum.roots.len()];
    for (i, root) in datum.roots.iter().enumerate() {
        let target = QVec::from_dense(&root.functional);
        if let Some(coords) = crate::qlinalg::coords_in_basis(&simple_funcs, &target) {
            let natural = coords
                .iter()
                .all(|(_, c)| c.denom() == &num::BigInt::from(1) && c.is_positive());
            if natural && !coords.is_zero() {
                positive[i] = true;
            }
        }
    }
    // the defining set identity, checked exactly
    let neg_beta = datum.root_index(&functional_neg(&beta_root.functional)).unwrap();
    for (i, root) in datum.roots.iter().enumerate() {
        let _ = root;
        let lhs = positive[i] && i != neg_beta;
        let rhs = dec.positive[i] && i != beta;
        if lhs != rhs {
            return Err(TriError::SetIdentity);
        }
    }
    let new_dec = from_signs(g, datum, &positive)?.ok_or(TriError::NotSimpleForBorel)?;
    let new_system = simple_system(g, datum, &new_dec)?;
    Ok((new_system, new_dec))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub c1: bool,
    pub c2: bool,
    pub parabolic: bool,
    /// parabolic with an even part escaping r + n+ (drives the structural
    /// infinite-dimensionality certificate)
    pub even_complement: bool,
}

/// C1: n-_0bar inside r. C2: C1 and the lowest root is a root of r.
/// Parabolic: r + n+ is a proper subsuperalgebra.
pub fn check_conditions(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
) -> Result<Flags, TriError> {
    let r = g.reductive_part();
    // even part of n-: root spaces are parity homogeneous, so filter by root
    let mut even_minus: Vec<QVec> = Vec::new();
    for (i, root) in datum.roots.iter().enumerate() {
        if !dec.positive[i] && root.parity == Parity::Even {
            even_minus.extend(root.space.iter().cloned());
        }
    }
    let c1 = even_minus.iter().all(|v| r.contains(v));
    let lowest = extremal_root(g, datum, dec, Direction::Lowest)?;
    let theta_in_r = datum.roots[lowest].space.iter().all(|v| r.contains(v));
    let c2 = c1 && theta_in_r;
    let p = r.sum(&dec.n_plus);
    let mut closed = true;
    'outer: for a in &p.basis {
        for b in &p.basis {
            let w = g.bracket_vec(a, b);
            if !w.is_zero() && !p.contains(&w) {
                closed = false;
                break 'outer;
            }
        }
    }
    let parabolic = closed && p.dim() < g.dim();
    let even_complement = parabolic && !g.even_subspace().is_subspace_of(&p);
    Ok(Flags { c1, c2, parabolic, even_complement })
}

/// Looks up the root with the given eps vector and height.
pub fn root_by_eps(datum: &RootDatum, eps: &[i64], height: i64) -> Option<usize> {
    datum
        .roots
        .iter()
        .position(|r| r.eps.as_deref() == Some(eps) && r.height == Some(height))
}

/// All triangular decompositions of the algebra, enumerated as feasible sign
/// vectors on the root set. Practical for |R| up to ~20.
pub fn enumerate_chambers(
    g: &LieSuperalgebra,
    datum: &RootDatum,
) -> Result<Vec<Decomposition>, TriError> {
    let n = datum.roots.len();
    // pick one representative per {alpha, -alpha} pair; unpaired roots are free
    let mut rep: Vec<usize> = Vec::new();
    let mut mirror: Vec<Option<usize>> = vec![None; n];
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for i in 0..n {
        if seen.contains(&i) {
            continue;
        }
        seen.insert(i);
        let neg = datum.root_index(&functional_neg(&datum.roots[i].functional));
        if let Some(j) = neg {
            seen.insert(j);
            mirror[i] = Some(j);
        }
        rep.push(i);
    }
    let k = rep.len();
    assert!(k <= 24, "chamber enumeration limited to small root systems");
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << k) {
        let mut signs = vec![false; n];
        for (t, &i) in rep.iter().enumerate() {
            let s = bits & (1 << t) != 0;
            signs[i] = s;
            if let Some(j) = mirror[i] {
                signs[j] = !s;
            }
        }
        if let Some(dec) = from_signs(g, datum, &signs)? {
            out.push(dec);
        }
    }
    Ok(out)
}

/// Constructs a decomposition satisfying C1 and C2, using the family's
/// explicit reflection chain where one is known and a bounded breadth-first
/// reflection search otherwise. The result is re-verified.
pub fn find_c2_decomposition(
    g: &LieSuperalgebra,
    datum: &RootDatum,
) -> Result<Decomposition, TriError> {
    let by_chain = find_c2_by_chain(g, datum);
    let dec = match by_chain {
        Ok(Some(dec)) => dec,
        _ => bfs_c2(g, datum)?,
    };
    let flags = check_conditions(g, datum, &dec)?;
    if !(flags.c1 && flags.c2) {
        return bfs_c2(g, datum);
    }
    Ok(dec)
}

fn find_c2_by_chain(
    g: &LieSuperalgebra,
    datum: &RootDatum,
) -> Result<Option<Decomposition>, TriError> {
    match g.metadata.class {
        AlgClass::BasicTypeII => {
            Ok(Some(standard_decomposition(g, datum, StandardKind::Distinguished)?))
        }
        AlgClass::BasicTypeI | AlgClass::SlEqual => {
            let family = g.metadata.family.clone();
            let dis = standard_decomposition(g, datum, StandardKind::Distinguished)?;
            if family == "sl" || family == "A" || family == "gl" {
                // reflect eps_k - eps_{M+1} for k = M..1, M = size of the even block
                let m = match family.as_str() {
                    "A" => g.metadata.params[0] as usize + 1,
                    _ => g.metadata.params[0] as usize,
                };
                let eps_dim = g.metadata.eps_dim;
                let mut dec = dis;
                for k in (1..=m).rev() {
                    let mut eps = vec![0i64; eps_dim];
                    eps[k - 1] = 1;
                    eps[m] = -1;
                    let ri = root_by_eps(datum, &eps, if k == m { 1 } else { 0 })
                        .or_else(|| {
                            datum.roots.iter().position(|r| r.eps.as_deref() == Some(&eps[..]))
                        })
                        .ok_or(TriError::SearchExhausted)?;
                    dec = serganova_reflection(g, datum, &dec, ri)?;
                }
                Ok(Some(dec))
            } else if family == "osp" {
                // C(n+1): one odd reflection at the unique odd isotropic simple root
                let system = simple_system(g, datum, &dis)?;
                for (t, &si) in system.simples.iter().enumerate() {
                    if datum.roots[si].parity == Parity::Odd {
                        let h = &system.triples[t].h;
                        let coords = crate::qlinalg::coords_in_basis(&datum.cartan, h)
                            .ok_or(TriError::NotClosed)?;
                        let mut val = Rat::zero();
                        for (i, c) in coords.iter() {
                            val += c * &datum.roots[si].functional[i];
                        }
                        if val.is_zero() {
                            let (_, dec) = odd_reflection(g, datum, &dis, &system, si)?;
                            return Ok(Some(dec));
                        }
                    }
                }
                Ok(None)
            } else {
                Ok(None)
            }
        }
        AlgClass::Periplectic => {
            // Prop-style chain: reflect 2 eps_{n+1}, then eps_k + eps_{n+1}
            // for k = n..1; the opposite of the endpoint satisfies C2.
            let k = g.metadata.eps_dim; // n + 1
            let dis = standard_decomposition(g, datum, StandardKind::Distinguished)?;
            let mut dec = dis;
            let mut eps = vec![0i64; k];
            eps[k - 1] = 2;
            let ri = root_by_eps(datum, &eps, 1).ok_or(TriError::SearchExhausted)?;
            dec = serganova_reflection(g, datum, &dec, ri)?;
            for j in (1..k).rev() {
                let mut eps = vec![0i64; k];
                eps[j - 1] = 1;
                eps[k - 1] = 1;
                let ri = root_by_eps(datum, &eps, 1).ok_or(TriError::SearchExhausted)?;
                dec = serganova_reflection(g, datum, &dec, ri)?;
            }
            Ok(Some(opposite(g, datum, &dec)?))
        }
        AlgClass::Cartan => {
            let bmin = standard_decomposition(g, datum, StandardKind::BMin)?;
            let family = g.metadata.family.clone();
            let eps_dim = g.metadata.eps_dim;
            if family == "H" {
                // reflect -eps_1 - delta then -eps_2 - delta, then take the opposite
                let mut dec = bmin;
                for i in 0..2 {
                    let mut eps = vec![0i64; eps_dim];
                    eps[i] = -1;
                    let ri = root_by_eps(datum, &eps, -1).ok_or(TriError::SearchExhausted)?;
                    dec = serganova_reflection(g, datum, &dec, ri)?;
                }
                Ok(Some(opposite(g, datum, &dec)?))
            } else {
                // W, S, S~: reflect -eps_1, then take the opposite
                let mut eps = vec![0i64; eps_dim];
                eps[0] = -1;
                let ri = root_by_eps(datum, &eps, -1).ok_or(TriError::SearchExhausted)?;
                let reflected = serganova_reflection(g, datum, &bmin, ri)?;
                Ok(Some(opposite(g, datum, &reflected)?))
            }
        }
        _ => Ok(None),
    }
}

/// Breadth-first search over Serganova reflections, lexicographic on root
/// indices, depth capped at 2 |R+|.
fn bfs_c2(g: &LieSuperalgebra, datum: &RootDatum) -> Result<Decomposition, TriError> {
    let start = standard_decomposition(g, datum, StandardKind::Distinguished)
        .or_else(|_| standard_decomposition(g, datum, StandardKind::BMax))?;
    let cap = 2 * start.positive_indices().len();
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut queue: VecDeque<(Decomposition, usize)> = VecDeque::new();
    seen.insert(start.positive.clone());
    queue.push_back((start, 0));
    while let Some((dec, depth)) = queue.pop_front() {
        let flags = check_conditions(g, datum, &dec)?;
        if flags.c1 && flags.c2 {
            return Ok(dec);
        }
        if depth >= cap {
            continue;
        }
        for ri in dec.positive_indices() {
            if let Some(signs) = reflected_signs(datum, &dec, ri) {
                if seen.contains(&signs) {
                    continue;
                }
                if let Some(next) = from_signs(g, datum, &signs)? {
                    seen.insert(signs);
                    queue.push_back((next, depth + 1));
                }
            }
        }
    }
    Err(TriError::SearchExhausted)
}

/// Block data of a decomposition in the stable PBW order: lowering letters
/// (height ascending, odd before even at equal height), the Cartan basis, and
/// raising letters in the mirrored order.
pub struct DecBlocks {
    /// (root index, vector) pairs for n-, in PBW order
    pub lower: Vec<(usize, QVec)>,
    pub cartan: Vec<QVec>,
    pub upper: Vec<(usize, QVec)>,
}

pub fn dec_blocks(datum: &RootDatum, dec: &Decomposition) -> DecBlocks {
    let mut lower: Vec<(usize, QVec)> = Vec::new();
    let mut upper: Vec<(usize, QVec)> = Vec::new();
    let mut order: Vec<usize> = (0..datum.roots.len()).collect();
    order.sort_by_key(|&i| {
        let r = &datum.roots[i];
        (r.height.unwrap_or(0), r.parity == Parity::Even, r.functional.clone())
    });
    for &i in &order {
        let r = &datum.roots[i];
        let side = if dec.positive[i] { &mut upper } else { &mut lower };
        for v in &r.space {
            side.push((i, v.clone()));
        }
    }
    DecBlocks { lower, cartan: datum.cartan.clone(), upper }
}
