//! Map superalgebras g (x) A over finite-dimensional jet algebras, local Weyl
//! modules with finite/infinite evidence, the theta criterion, Garland
//! identities, annihilating ideals and tensor factorization checks.

use crate::hwengine::{
    build_engine_algebra, concrete_module, cyclic_module, pair_weight_with_coroot,
    power_exponents, prepare_engine, Block, Certificate, CyclicModule, Engine, EngineError,
    EnginePrep, MVec, PsiTable, TensorFactor,
};
use crate::qlinalg::{echelon_basis, kernel, reduce_mod, QVec, Rat, SparseMatrix};
use crate::roots::{extremal_root, Direction, RootDatum};
use crate::superalg::{make_superalgebra, AlgError, LieSuperalgebra, Metadata, Parity};
use crate::triangular::{
    check_conditions, reductive_positive_roots, reductive_simples, Decomposition, Triple,
};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeylError {
    #[error("invalid jet spec: {0}")]
    BadJetSpec(String),
    #[error("duplicate jet centers")]
    DuplicateCenters,
    #[error("jet supports overlap")]
    SupportOverlap,
    #[error("psi is not valid: {0}")]
    InvalidPsi(String),
    #[error("psi pattern does not factor through every truncation (degrees >= 1 present)")]
    PatternTooDeep,
    #[error("engine error: {0}")]
    Engine(#[from] EngineError),
    #[error("algebra error: {0}")]
    Alg(#[from] AlgError),
    #[error("{0}")]
    Other(String),
}

/// A = product of truncated polynomial rings k[t]/((t - c_i)^{N_i}) at
/// pairwise distinct rational centers. The basis is (t - c_i)^k per point,
/// k < N_i; cross-point products vanish and the unit is the sum of the
/// degree-zero idempotents.
#[derive(Clone, Debug)]
pub struct JetAlgebra {
    pub points: Vec<(Rat, usize)>,
    pub dim: usize,
    pub labels: Vec<String>,
    /// (point index, power) per basis slot
    pub slots: Vec<(usize, usize)>,
    pub mult: Vec<Vec<QVec>>,
    pub unit: QVec,
}

impl JetAlgebra {
    pub fn factor(&self) -> TensorFactor {
        TensorFactor {
            dim: self.dim,
            unit: self.unit.clone(),
            mult: self.mult.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn product(&self, a: &QVec, b: &QVec) -> QVec {
        let mut out = QVec::zero(self.dim);
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                for (k, c) in self.mult[i][j].iter() {
                    let acc = out.get(k) + x * y * c;
                    out.set(k, acc);
                }
            }
        }
        out
    }

    pub fn power(&self, a: &QVec, m: usize) -> QVec {
        let mut out = self.unit.clone();
        for _ in 0..m {
            out = self.product(&out, a);
        }
        out
    }
}

/// Parses "c^N(+c^N)*", also accepting the CLI's "jet:c^N(+jet:c^N)*" form.
pub fn jet_algebra(spec: &str) -> Result<JetAlgebra, WeylError> {
    let mut points: Vec<(Rat, usize)> = Vec::new();
    for part in spec.split('+') {
        let part = part.trim().trim_start_matches("jet:");
        let (c, n) =
            part.split_once('^').ok_or_else(|| WeylError::BadJetSpec(part.to_string()))?;
        let center =
            crate::qlinalg::parse_rat(c).map_err(|_| WeylError::BadJetSpec(part.to_string()))?;
        let order: usize =
            n.trim().parse().map_err(|_| WeylError::BadJetSpec(part.to_string()))?;
        if order < 1 {
            return Err(WeylError::BadJetSpec("order must be >= 1".into()));
        }
        points.push((center, order));
    }
    build_jets(points)
}

pub fn build_jets(points: Vec<(Rat, usize)>) -> Result<JetAlgebra, WeylError> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].0 == points[j].0 {
                return Err(WeylError::DuplicateCenters);
            }
        }
    }
    let mut labels = Vec::new();
    let mut slots = Vec::new();
    for (pi, (c, n)) in points.iter().enumerate() {
        for k in 0..*n {
            slots.push((pi, k));
            if c.is_zero() && points.len() == 1 {
                labels.push(if k == 0 { "1".into() } else { format!("t^{k}") });
            } else {
                labels.push(format!("(t-{c})^{k}@{pi}"));
            }
        }
    }
    let dim = slots.len();
    let mut mult = vec![vec![QVec::zero(dim); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let (pi, a) = slots[i];
            let (pj, b) = slots[j];
            if pi == pj && a + b < points[pi].1 {
                let k = slots.iter().position(|&s| s == (pi, a + b)).unwrap();
                mult[i][j] = QVec::unit(dim, k);
            }
        }
    }
    let mut unit = QVec::zero(dim);
    for (i, &(_, k)) in slots.iter().enumerate() {
        if k == 0 {
            unit.set(i, Rat::one());
        }
    }
    let jets = JetAlgebra { points, dim, labels, slots, mult, unit };
    // commutative, associative, unital: verified exhaustively
    for i in 0..dim {
        let ui = QVec::unit(dim, i);
        assert_eq!(jets.product(&jets.unit, &ui), ui);
        for j in 0..dim {
            assert_eq!(jets.mult[i][j], jets.mult[j][i]);
            for k in 0..dim {
                let ab_c = jets.product(&jets.mult[i][j], &QVec::unit(dim, k));
                let a_bc = jets.product(&QVec::unit(dim, i), &jets.mult[j][k]);
                assert_eq!(ab_c, a_bc);
            }
        }
    }
    Ok(jets)
}

/// The map superalgebra g (x) A with bracket [x (x) a, y (x) b] = [x,y] (x) ab,
/// built as an explicit algebra and re-validated.
pub fn map_superalgebra(
    g: &LieSuperalgebra,
    jets: &JetAlgebra,
) -> Result<LieSuperalgebra, AlgError> {
    let dg = g.dim();
    let da = jets.dim;
    let n = dg * da;
    let mut labels = Vec::with_capacity(n);
    let mut parity = Vec::with_capacity(n);
    for i in 0..dg {
        for a in 0..da {
            labels.push(format!("{}({})", g.labels[i], jets.labels[a]));
            parity.push(g.parity[i]);
        }
    }
    let mut entries = Vec::new();
    for i in 0..dg {
        for j in 0..dg {
            let base = g.table_entry(i, j);
            if base.is_zero() {
                continue;
            }
            for a in 0..da {
                for b in 0..da {
                    let prod = &jets.mult[a][b];
                    if prod.is_zero() {
                        continue;
                    }
                    let mut out = QVec::zero(n);
                    for (k, c) in base.iter() {
                        for (cc, x) in prod.iter() {
                            let acc = out.get(k * da + cc) + c * x;
                            out.set(k * da + cc, acc);
                        }
                    }
                    if !out.is_zero() {
                        entries.push((i * da + a, j * da + b, out));
                    }
                }
            }
        }
    }
    let mut md = Metadata::opaque();
    md.family = format!("map({})", g.metadata.family);
    make_superalgebra(labels, parity, entries, md)
}

/// Validates a psi table: in-range entries, lambda = psi(. (x) 1) dominant
/// integral for the simple r-roots.
fn validate_psi(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    jets: &JetAlgebra,
    psi: &PsiTable,
) -> Result<(Vec<Rat>, Vec<(usize, Triple)>, Vec<u32>), WeylError> {
    for (&(i, a), _) in psi.iter() {
        if i >= datum.cartan.len() || a >= jets.dim {
            return Err(WeylError::InvalidPsi(format!("entry ({i},{a}) out of range")));
        }
    }
    let lambda: Vec<Rat> = (0..datum.cartan.len())
        .map(|i| {
            let mut acc = Rat::zero();
            for (a, u) in jets.unit.iter() {
                if let Some(x) = psi.get(&(i, a)) {
                    acc += u * x;
                }
            }
            acc
        })
        .collect();
    let simples =
        reductive_simples(g, datum, dec).map_err(|e| WeylError::Other(e.to_string()))?;
    let exps = power_exponents(datum, &simples, &lambda)
        .map_err(|e| WeylError::InvalidPsi(e.to_string()))?;
    Ok((lambda, simples, exps))
}

pub struct LocalWeyl {
    pub module: CyclicModule,
    pub prep: EnginePrep,
    pub lambda: Vec<Rat>,
}

/// Local Weyl module W_A^loc(psi): quotient of U(g (x) A) by n+ (x) A,
/// h - psi(h) for h in h (x) A, and the r-integrability powers (x_a^- (x) 1).
pub fn local_weyl(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    jets: &JetAlgebra,
    psi: &PsiTable,
    cutoff: Option<i64>,
) -> Result<LocalWeyl, WeylError> {
    let (lambda, simples, exps) = validate_psi(g, datum, dec, jets, psi)?;
    let prep = prepare_engine(g, datum, dec, jets.factor(), psi, false);
    let flags =
        check_conditions(g, datum, dec).map_err(|e| WeylError::Other(e.to_string()))?;
    if flags.even_complement {
        return Ok(LocalWeyl {
            module: CyclicModule {
                engine: Engine::module_engine(
                    prepare_engine(g, datum, dec, jets.factor(), psi, false).alg,
                ),
                powers: vec![],
                certificate: Certificate::Infinite("parabolic_even_complement".into()),
                spaces: BTreeMap::new(),
                band_width: 0,
                explored_depth: 0,
            },
            prep,
            lambda,
        });
    }
    let powers: Vec<(QVec, u32)> = simples
        .iter()
        .zip(&exps)
        .map(|((_, t), &e)| (prep.element(&t.y, &jets.unit), e))
        .collect();
    let base = crate::hwengine::default_cutoff(g, datum, dec, &lambda);
    let mut depth = cutoff.unwrap_or(base);
    let mut tries = 0;
    loop {
        let p = prepare_engine(g, datum, dec, jets.factor(), psi, false);
        let m = cyclic_module(Engine::module_engine(p.alg), powers.clone(), depth);
        if matches!(m.certificate, Certificate::Finite(_)) || tries >= 3 || cutoff.is_some() {
            return Ok(LocalWeyl { module: m, prep, lambda });
        }
        tries += 1;
        depth *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanVerdict {
    /// strictly increasing truncation dimensions: each is a rigorous lower
    /// bound for the k[t] module, so the family is unbounded evidence
    UnboundedEvidence,
    /// constant from N0 on, and g (x) t^{N0} annihilates the module at N0+1
    Stabilized(usize),
    /// constant from N0 on, but the annihilation check failed
    StabilizedUncertified(usize),
    /// a truncation did not certify FINITE within its cutoff
    Inconclusive,
}

pub struct ScanReport {
    pub dims: Vec<Option<usize>>,
    pub verdict: ScanVerdict,
}

/// Dimension growth of W^loc over k[t]/(t^N), N = 1..n_max, for a psi pattern
/// supported in t-degree 0 (so it factors through every truncation).
pub fn truncation_scan(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    pattern: &PsiTable,
    n_max: usize,
    cutoff: Option<i64>,
) -> Result<ScanReport, WeylError> {
    if pattern.keys().any(|&(_, d)| d > 0) {
        return Err(WeylError::PatternTooDeep);
    }
    let mut dims: Vec<Option<usize>> = Vec::new();
    let mut last_module: Option<LocalWeyl> = None;
    let mut last_jets: Option<JetAlgebra> = None;
    for n in 1..=n_max {
        let jets = build_jets(vec![(Rat::zero(), n)])?;
        let lw = local_weyl(g, datum, dec, &jets, pattern, cutoff)?;
        dims.push(lw.module.total_dim());
        if n == n_max {
            last_module = Some(lw);
            last_jets = Some(jets);
        }
    }
    if dims.iter().any(|d| d.is_none()) {
        return Ok(ScanReport { dims, verdict: ScanVerdict::Inconclusive });
    }
    let vals: Vec<usize> = dims.iter().map(|d| d.unwrap()).collect();
    // truncation monotonicity: each truncation module surjects onto the previous
    for w in vals.windows(2) {
        if w[1] < w[0] {
            return Err(WeylError::Other(format!("truncation dimensions decreased: {vals:?}")));
        }
    }
    if vals.len() >= 2 && vals.windows(2).all(|w| w[1] > w[0]) {
        return Ok(ScanReport { dims, verdict: ScanVerdict::UnboundedEvidence });
    }
    // first N from which the dims are constant
    let mut n0 = vals.len();
    while n0 > 1 && vals[n0 - 2] == vals[vals.len() - 1] {
        n0 -= 1;
    }
    if n0 >= vals.len() {
        return Ok(ScanReport { dims, verdict: ScanVerdict::Inconclusive });
    }
    // annihilation check: g (x) t^{n0} kills the deepest computed module
    let lw = last_module.unwrap();
    let jets = last_jets.unwrap();
    let certified = match concrete_module(&lw.module) {
        Ok(cm) => {
            let mut killed = true;
            'letters: for base_idx in 0..lw.prep.base_vectors.len() {
                for a in 0..jets.dim {
                    let (_, deg) = jets.slots[a];
                    if deg < n0 {
                        continue;
                    }
                    let l = lw.prep.letter_of[base_idx][a];
                    if cm.action[l].iter().any(|entry| entry.is_some()) {
                        killed = false;
                        break 'letters;
                    }
                }
            }
            killed
        }
        Err(_) => false,
    };
    let verdict = if certified {
        ScanVerdict::Stabilized(n0)
    } else {
        ScanVerdict::StabilizedUncertified(n0)
    };
    Ok(ScanReport { dims, verdict })
}

/// True iff x_theta^- lies in the r-submodule of g generated by n+ (the
/// a-priori annihilator of the highest-weight vector), computed by linear
/// closure under ad(r).
pub fn theta_criterion(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
) -> Result<bool, WeylError> {
    let r = g.reductive_part();
    let mut span: Vec<QVec> = echelon_basis(&dec.n_plus.basis);
    loop {
        let mut new_vecs = Vec::new();
        for x in &r.basis {
            for v in &span {
                let w = g.bracket_vec(x, v);
                if !w.is_zero() && !reduce_mod(&span, &w).is_zero() {
                    new_vecs.push(w);
                }
            }
        }
        if new_vecs.is_empty() {
            break;
        }
        let mut all = span.clone();
        all.extend(new_vecs);
        span = echelon_basis(&all);
    }
    let lowest = extremal_root(g, datum, dec, Direction::Lowest)
        .map_err(|e| WeylError::Other(e.to_string()))?;
    Ok(datum.roots[lowest].space.iter().all(|v| reduce_mod(&span, v).is_zero()))
}

// ---------------------------------------------------------------------------
// Garland series and identity
// ---------------------------------------------------------------------------

/// Polynomial in the commuting symbols H_j = h_a (x) a^j: monomials are
/// sorted multisets of the indices j >= 1.
pub type GarlandPoly = BTreeMap<Vec<u32>, Rat>;

/// Coefficients p_0..p_N of exp(-sum_{i>=1} (H_i / i) u^i); p_0 = 1.
pub fn garland_coefficients(n: usize) -> Vec<GarlandPoly> {
    let mut coeffs: Vec<GarlandPoly> = Vec::with_capacity(n + 1);
    let mut p0 = GarlandPoly::new();
    p0.insert(vec![], Rat::one());
    coeffs.push(p0);
    for k in 1..=n {
        // k p_k = sum_{i=1}^{k} (-H_i) p_{k-i}
        let mut acc = GarlandPoly::new();
        for i in 1..=k {
            for (mono, c) in &coeffs[k - i] {
                let mut m = mono.clone();
                m.push(i as u32);
                m.sort();
                let x = acc.get(&m).cloned().unwrap_or_else(Rat::zero) - c;
                if x.is_zero() {
                    acc.remove(&m);
                } else {
                    acc.insert(m, x);
                }
            }
        }
        let inv = Rat::new(num::BigInt::from(1), num::BigInt::from(k as i64));
        for v in acc.values_mut() {
            *v *= &inv;
        }
        coeffs.push(acc);
    }
    coeffs
}

/// Free engine over sl_a (x) A for a normalized triple (y, h, x).
fn sl_alpha_engine(
    g: &LieSuperalgebra,
    triple: &Triple,
    factor: &TensorFactor,
) -> crate::hwengine::EngineAlgebra {
    let base = vec![
        (triple.y.clone(), Block::Lower, Parity::Even, vec![-Rat::one()], 1i64, "y".to_string()),
        (triple.h.clone(), Block::Cartan, Parity::Even, vec![Rat::zero()], 0, "h".to_string()),
        (triple.x.clone(), Block::Raise, Parity::Even, vec![Rat::one()], -1, "x".to_string()),
    ];
    build_engine_algebra(g, base, factor, &PsiTable::new(), 1)
}

/// Verifies the Garland identity at level m: straightens
/// (x_a (x) a)^m (x_a^-)^{m+1} - (-1)^m m!(m+1)! sum_i (x_a^- (x) a^{m-i}) p(a,a)_i
/// in U(sl_a (x) A) and checks that the residue modulo the left ideal
/// generated by x_a (x) A (the normal monomials with a raising factor) is
/// zero. The m!(m+1)! factor converts the divided powers of Garland's
/// original statement into plain powers.
pub fn garland_verify(
    g: &LieSuperalgebra,
    triple: &Triple,
    jets: &JetAlgebra,
    a: &QVec,
    m: usize,
) -> bool {
    let factor = jets.factor();
    let alg = sl_alpha_engine(g, triple, &factor);
    let engine = Engine::free_engine(alg);
    let da = jets.dim;
    let letter = |base: usize, jet: &QVec| -> QVec {
        let mut out = QVec::zero(3 * da);
        for (t, c) in jet.iter() {
            out.set(base * da + t, c.clone());
        }
        out
    };
    // E1 = (x (x) a)^m (y (x) 1)^{m+1}
    let mut e1 = engine.vacuum();
    let y1 = letter(0, &jets.unit);
    for _ in 0..=m {
        e1 = engine.act_elem(&y1, &e1);
    }
    let xa = letter(2, a);
    for _ in 0..m {
        e1 = engine.act_elem(&xa, &e1);
    }
    // E2 = (-1)^m m!(m+1)! sum_{i=0}^m (y (x) a^{m-i}) p_i
    let ps = garland_coefficients(m);
    let mut factorials = Rat::one();
    for k in 2..=m as i64 {
        factorials *= crate::qlinalg::qz(k);
    }
    for k in 2..=(m as i64 + 1) {
        factorials *= crate::qlinalg::qz(k);
    }
    let mut e2 = MVec::new();
    for (i, p) in ps.iter().enumerate().take(m + 1) {
        for (mono, c) in p {
            let mut v = engine.vacuum();
            for &j in mono {
                let aj = jets.power(a, j as usize);
                v = engine.act_elem(&letter(1, &aj), &v);
            }
            let am_i = jets.power(a, m - i);
            v = engine.act_elem(&letter(0, &am_i), &v);
            let sign = if m % 2 == 0 { c * &factorials } else { -c * &factorials };
            crate::hwengine::mvec_add(&mut e2, &sign, &v);
        }
    }
    let mut diff = e1;
    crate::hwengine::mvec_add(&mut diff, &-Rat::one(), &e2);
    for (mono, c) in &diff {
        let has_raise =
            mono.iter().any(|&(l, _)| engine.alg.block[l as usize] == Block::Raise);
        if !has_raise && !c.is_zero() {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// annihilating ideals and tensor factorization
// ---------------------------------------------------------------------------

pub struct Ideals {
    pub i_psi: Vec<QVec>,
    pub j_psi: Vec<QVec>,
    pub supp_i: Vec<usize>,
    pub supp_j: Vec<usize>,
}

/// I_psi: the largest ideal I with (n_0^- (x) I) w = 0; J_psi: the largest
/// ideal annihilating the whole module; supports over the jet points.
pub fn annihilating_ideals(
    g: &LieSuperalgebra,
    jets: &JetAlgebra,
    lw: &LocalWeyl,
) -> Result<Ideals, WeylError> {
    let cm = concrete_module(&lw.module)?;
    let zero_off = vec![Rat::zero(); cm.coord_dim];
    let w0 = cm
        .weight_index(&zero_off)
        .ok_or_else(|| WeylError::Other("highest weight space is empty".into()))?;
    let da = jets.dim;
    let r = g.reductive_part();
    let n0_minus: Vec<usize> = (0..lw.prep.base_vectors.len())
        .filter(|&i| {
            lw.prep.alg.block[lw.prep.letter_of[i][0]] == Block::Lower
                && r.contains(&lw.prep.base_vectors[i])
        })
        .collect();
    let kernel_of = |letters: &[usize], vectors: &[(usize, QVec)]| -> Vec<QVec> {
        let mut rows: Vec<QVec> = Vec::new();
        for &base_idx in letters {
            for (wi, v) in vectors {
                let mut images: Vec<Option<(usize, QVec)>> = Vec::with_capacity(da);
                for aa in 0..da {
                    let l = lw.prep.letter_of[base_idx][aa];
                    images.push(cm.apply(l, *wi, v));
                }
                let mut per_coord: BTreeMap<(usize, usize), QVec> = BTreeMap::new();
                for (aa, img) in images.iter().enumerate() {
                    if let Some((ti, vec)) = img {
                        for (coord, x) in vec.iter() {
                            let row =
                                per_coord.entry((*ti, coord)).or_insert_with(|| QVec::zero(da));
                            row.set(aa, x.clone());
                        }
                    }
                }
                rows.extend(per_coord.into_values());
            }
        }
        let m = SparseMatrix::from_rows(rows, da);
        kernel(&m)
    };
    let w_vec = vec![(w0, QVec::unit(cm.weights[w0].2, 0))];
    let v_space = echelon_basis(&kernel_of(&n0_minus, &w_vec));
    let i_psi = largest_ideal_inside(jets, &v_space);
    let all_letters: Vec<usize> = (0..lw.prep.base_vectors.len()).collect();
    let mut all_vectors = Vec::new();
    for (wi, (_, _, dim)) in cm.weights.iter().enumerate() {
        for c in 0..*dim {
            all_vectors.push((wi, QVec::unit(*dim, c)));
        }
    }
    let vj = echelon_basis(&kernel_of(&all_letters, &all_vectors));
    let j_psi = largest_ideal_inside(jets, &vj);
    let supp_i = support_of(jets, &i_psi);
    let supp_j = support_of(jets, &j_psi);
    Ok(Ideals { i_psi, j_psi, supp_i, supp_j })
}

/// Largest ideal contained in a subspace V: { a : a A inside V }.
pub fn largest_ideal_inside(jets: &JetAlgebra, v_ech: &[QVec]) -> Vec<QVec> {
    let da = jets.dim;
    let mut rows: Vec<QVec> = Vec::new();
    for s in 0..da {
        for coord in 0..da {
            let mut row = QVec::zero(da);
            for b in 0..da {
                let red = reduce_mod(v_ech, &jets.mult[b][s]);
                let x = red.get(coord);
                if !x.is_zero() {
                    row.set(b, x);
                }
            }
            if !row.is_zero() {
                rows.push(row);
            }
        }
    }
    let m = SparseMatrix::from_rows(rows, da);
    echelon_basis(&kernel(&m))
}

/// Points p with I contained in the maximal ideal at p (every element of I
/// has vanishing constant coefficient at p).
pub fn support_of(jets: &JetAlgebra, ideal: &[QVec]) -> Vec<usize> {
    (0..jets.points.len())
        .filter(|&p| {
            let slot = jets.slots.iter().position(|&s| s == (p, 0)).unwrap();
            ideal.iter().all(|v| v.get(slot).is_zero())
        })
        .collect()
}

pub struct TensorReport {
    pub dim_sum: Option<usize>,
    pub dim_a: Option<usize>,
    pub dim_b: Option<usize>,
    pub total_product_ok: bool,
    pub weightwise_ok: bool,
}

/// Tensor factorization check: W(psi + phi) over A + B against
/// W(psi) (x) W(phi), weightwise and in total dimension.
pub fn tensor_check(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    jets_a: &JetAlgebra,
    psi_a: &PsiTable,
    jets_b: &JetAlgebra,
    psi_b: &PsiTable,
    cutoff: Option<i64>,
) -> Result<TensorReport, WeylError> {
    for (c, _) in &jets_a.points {
        if jets_b.points.iter().any(|(d, _)| d == c) {
            return Err(WeylError::SupportOverlap);
        }
    }
    let mut points = jets_a.points.clone();
    points.extend(jets_b.points.iter().cloned());
    let jets_ab = build_jets(points)?;
    let mut psi_ab = PsiTable::new();
    for (&(i, a), x) in psi_a {
        psi_ab.insert((i, a), x.clone());
    }
    for (&(i, a), x) in psi_b {
        psi_ab.insert((i, jets_a.dim + a), x.clone());
    }
    let wa = local_weyl(g, datum, dec, jets_a, psi_a, cutoff)?;
    let wb = local_weyl(g, datum, dec, jets_b, psi_b, cutoff)?;
    let wab = local_weyl(g, datum, dec, &jets_ab, &psi_ab, cutoff)?;
    let (da, db, dab) = (wa.module.total_dim(), wb.module.total_dim(), wab.module.total_dim());
    let mut report =
        TensorReport { dim_sum: dab, dim_a: da, dim_b: db, total_product_ok: false, weightwise_ok: false };
    let (Some(da), Some(db), Some(dab)) = (da, db, dab) else {
        return Ok(report);
    };
    report.total_product_ok = dab == da * db;
    let mut expected: BTreeMap<Vec<Rat>, usize> = BTreeMap::new();
    for (oa, _, na) in wa.module.dims() {
        for (ob, _, nb) in wb.module.dims() {
            let key: Vec<Rat> = oa.iter().zip(&ob).map(|(x, y)| x + y).collect();
            *expected.entry(key).or_insert(0) += na * nb;
        }
    }
    let mut actual: BTreeMap<Vec<Rat>, usize> = BTreeMap::new();
    for (o, _, n) in wab.module.dims() {
        *actual.entry(o).or_insert(0) += n;
    }
    report.weightwise_ok = expected == actual;
    Ok(report)
}

/// In a FINITE local Weyl module, (x_a^- (x) 1)^{psi(h_a)+1} w = 0 for every
/// positive r-root a, not only the simple ones.
pub fn power_relations_hold_for_all_positive(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    jets: &JetAlgebra,
    lw: &LocalWeyl,
) -> Result<bool, WeylError> {
    let positives =
        reductive_positive_roots(g, datum, dec).map_err(|e| WeylError::Other(e.to_string()))?;
    for (_, t) in &positives {
        let lam_h = pair_weight_with_coroot(datum, &lw.lambda, t);
        if !lam_h.denom().is_one() || lam_h.is_negative() {
            return Ok(false);
        }
        let e: usize = lam_h.numer().to_string().parse::<usize>().unwrap_or(0) + 1;
        let elem = lw.prep.element(&t.y, &jets.unit);
        let mut v = lw.module.engine.vacuum();
        for _ in 0..e {
            v = lw.module.engine.act_elem(&elem, &v);
        }
        if v.is_empty() {
            continue;
        }
        let off = {
            let m = v.keys().next().unwrap();
            lw.module.engine.mono_weight(m)
        };
        if !lw.module.reduce_at(&off, &v).is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}
