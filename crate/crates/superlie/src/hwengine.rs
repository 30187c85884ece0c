//! PBW straightening and weight-graded cyclic quotients.
//!
//! Universal enveloping elements are normal-ordered against a fixed total
//! order on a basis split into lowering, Cartan and raising blocks. Cyclic
//! highest-weight quotients (generalized Kac modules, their analogues over a
//! reductive subalgebra, and local Weyl modules over map superalgebras) are
//! computed weight space by weight space:
//!
//!  * the Verma space is the span of PBW monomials in the lowering letters;
//!  * the power relations are closed under the Cartan and raising blocks
//!    (weight-nondecreasing, bounded above by the highest weight, so this
//!    terminates);
//!  * the submodule they generate is then spanned downwards weight by weight,
//!    using N_mu = sum_y y . N_{mu - wt(y)} + S_mu;
//!  * quotient dimensions are exact within the explored region, and a full
//!    band of empty weight spaces of width the maximal letter depth certifies
//!    finiteness (every deeper monomial factors through a vector inside the
//!    empty band).
//!
//! Monomials whose tail already lies in the submodule are pruned: they cancel
//! in both the Verma count and the submodule rank, so dimensions are
//! unaffected while enumeration stays proportional to the surviving module.

use crate::qlinalg::{QVec, Rat, SpanSolver};
use crate::roots::RootDatum;
use crate::superalg::{LieSuperalgebra, Parity};
use crate::triangular::{dec_blocks, Decomposition, Triple};
use num::{One, Signed, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("lambda is not r-dominant integral: lambda(h_a) = {0} for a simple r-root")]
    InvalidLambda(String),
    #[error("module certificate is not FINITE")]
    NotFinite,
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Lower,
    Cartan,
    Raise,
}

/// Basis-indexed algebra data prepared for the engine: letters carry a block,
/// a PBW position, a weight offset, an integral depth and (for Cartan
/// letters) the highest-weight eigenvalue.
pub struct EngineAlgebra {
    pub n: usize,
    pub parity: Vec<Parity>,
    pub block: Vec<Block>,
    pub position: Vec<usize>,
    pub weight: Vec<Vec<Rat>>,
    pub depth: Vec<i64>,
    pub psi: Vec<Rat>,
    pub labels: Vec<String>,
    pub coord_dim: usize,
    table: Vec<QVec>,
}

impl EngineAlgebra {
    pub fn bracket(&self, i: usize, j: usize) -> &QVec {
        &self.table[i * self.n + j]
    }

    pub fn lower_letters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.block[i] == Block::Lower)
    }

    pub fn raise_letters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.block[i] == Block::Raise)
    }

    pub fn cartan_letters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.block[i] == Block::Cartan)
    }

    pub fn max_lower_depth(&self) -> i64 {
        self.lower_letters().map(|i| self.depth[i]).max().unwrap_or(1)
    }
}

/// Commutative tensor factor (the jet algebra A) for map constructions; the
/// trivial factor recovers modules over g itself.
#[derive(Clone, Debug)]
pub struct TensorFactor {
    pub dim: usize,
    pub unit: QVec,
    /// mult\[a\]\[b\] = e_a e_b in the basis
    pub mult: Vec<Vec<QVec>>,
    pub labels: Vec<String>,
}

impl TensorFactor {
    pub fn trivial() -> TensorFactor {
        TensorFactor {
            dim: 1,
            unit: QVec::unit(1, 0),
            mult: vec![vec![QVec::unit(1, 0)]],
            labels: vec!["1".into()],
        }
    }
}

/// Sparse table psi(h_i (x) e_a) over the Cartan block.
pub type PsiTable = BTreeMap<(usize, usize), Rat>;

/// Prepared engine data for g (x) A relative to a triangular decomposition of
/// g. With `restrict_to_r` only the reductive part's root spaces enter the
/// lowering/raising blocks (used for highest-weight r-modules).
pub struct EnginePrep {
    pub alg: EngineAlgebra,
    pub base_vectors: Vec<QVec>,
    pub base_solver: SpanSolver,
    pub factor: TensorFactor,
    /// engine letter index of base letter i tensored with jet basis a
    pub letter_of: Vec<Vec<usize>>,
}

pub fn prepare_engine(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    factor: TensorFactor,
    psi: &PsiTable,
    restrict_to_r: bool,
) -> EnginePrep {
    assert!(
        dec.closed,
        "module construction requires bracket-closed n+/- (not available for formal S~ decompositions)"
    );
    let blocks = dec_blocks(datum, dec);
    let r_space = g.reductive_part();
    let keep = |ri: usize| -> bool {
        !restrict_to_r || datum.roots[ri].space.iter().all(|v| r_space.contains(v))
    };
    // witness values are integral: integral witness against integral functionals
    let val = |ri: usize| -> i64 {
        let v = datum.roots[ri].eval(&dec.witness);
        debug_assert!(v.denom().is_one());
        v.numer().to_string().parse::<i64>().expect("witness pairing overflow")
    };
    let mut base: Vec<(QVec, Block, Parity, Vec<Rat>, i64, String)> = Vec::new();
    for (ri, v) in &blocks.lower {
        if keep(*ri) {
            let root = &datum.roots[*ri];
            base.push((
                v.clone(),
                Block::Lower,
                root.parity,
                root.functional.clone(),
                -val(*ri),
                format!("f{}", base.len()),
            ));
        }
    }
    for (ci, h) in blocks.cartan.iter().enumerate() {
        base.push((
            h.clone(),
            Block::Cartan,
            Parity::Even,
            vec![Rat::zero(); datum.coord_dim()],
            0,
            format!("h{}", ci),
        ));
    }
    for (ri, v) in &blocks.upper {
        if keep(*ri) {
            let root = &datum.roots[*ri];
            base.push((
                v.clone(),
                Block::Raise,
                root.parity,
                root.functional.clone(),
                -val(*ri),
                format!("e{}", base.len()),
            ));
        }
    }
    let base_vectors: Vec<QVec> = base.iter().map(|b| b.0.clone()).collect();
    let base_solver = SpanSolver::new(&base_vectors);
    let alg = build_engine_algebra(g, base, &factor, psi, datum.coord_dim());
    let da = factor.dim;
    let letter_of: Vec<Vec<usize>> =
        (0..base_vectors.len()).map(|i| (0..da).map(|a| i * da + a).collect()).collect();
    EnginePrep { alg, base_vectors, base_solver, factor, letter_of }
}

/// Assembles an engine algebra for span(base) (x) factor; base entries are
/// (vector over g, block, parity, weight, depth, label) and must span a
/// subalgebra of g.
pub fn build_engine_algebra(
    g: &LieSuperalgebra,
    base: Vec<(QVec, Block, Parity, Vec<Rat>, i64, String)>,
    factor: &TensorFactor,
    psi: &PsiTable,
    coord_dim: usize,
) -> EngineAlgebra {
    let base_vectors: Vec<QVec> = base.iter().map(|b| b.0.clone()).collect();
    let base_solver = SpanSolver::new(&base_vectors);
    let nb = base.len();
    let mut base_table: Vec<QVec> = Vec::with_capacity(nb * nb);
    for i in 0..nb {
        for j in 0..nb {
            let w = g.bracket_vec(&base[i].0, &base[j].0);
            if w.is_zero() {
                base_table.push(QVec::zero(nb));
            } else {
                base_table.push(
                    base_solver
                        .coords(&w)
                        .expect("bracket escapes the engine span (subalgebra not closed?)"),
                );
            }
        }
    }
    let da = factor.dim;
    let n = nb * da;
    let mut parity = Vec::with_capacity(n);
    let mut block = Vec::with_capacity(n);
    let mut weight = Vec::with_capacity(n);
    let mut depth = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut psiv = vec![Rat::zero(); n];
    let mut cartan_seen = 0usize;
    for (i, b) in base.iter().enumerate() {
        for a in 0..da {
            let li = i * da + a;
            let _ = li;
            parity.push(b.2);
            block.push(b.1);
            weight.push(b.3.clone());
            depth.push(b.4);
            labels.push(format!("{}({})", b.5, factor.labels[a]));
            if b.1 == Block::Cartan {
                if let Some(x) = psi.get(&(cartan_seen, a)) {
                    psiv[i * da + a] = x.clone();
                }
            }
        }
        if b.1 == Block::Cartan {
            cartan_seen += 1;
        }
    }
    let mut table = vec![QVec::zero(n); n * n];
    for i in 0..nb {
        for j in 0..nb {
            let gamma = &base_table[i * nb + j];
            if gamma.is_zero() {
                continue;
            }
            for a in 0..da {
                for b2 in 0..da {
                    let prod = &factor.mult[a][b2];
                    if prod.is_zero() {
                        continue;
                    }
                    let mut out = QVec::zero(n);
                    for (k, c) in gamma.iter() {
                        for (cc, x) in prod.iter() {
                            let idx = k * da + cc;
                            let acc = out.get(idx) + c * x;
                            out.set(idx, acc);
                        }
                    }
                    table[(i * da + a) * n + (j * da + b2)] = out;
                }
            }
        }
    }
    let position = (0..n).collect();
    EngineAlgebra {
        n,
        parity,
        block,
        position,
        weight,
        depth,
        psi: psiv,
        labels,
        coord_dim,
        table,
    }
}

impl EnginePrep {
    /// Engine-letter expansion of x (x) a, for x over the g basis and a over
    /// the jet basis.
    pub fn element(&self, x: &QVec, jet: &QVec) -> QVec {
        let coords = self.base_solver.coords(x).expect("element outside the engine span");
        let mut out = QVec::zero(self.alg.n);
        for (i, c) in coords.iter() {
            for (a, y) in jet.iter() {
                let acc = out.get(self.letter_of[i][a]) + c * y;
                out.set(self.letter_of[i][a], acc);
            }
        }
        out
    }
}

/// PBW monomial: ascending (letter, exponent) pairs; odd exponents are 1.
pub type Mono = Vec<(u32, u32)>;

/// Vector over PBW monomials (enveloping algebra in free mode, Verma space in
/// module mode).
pub type MVec = BTreeMap<Mono, Rat>;

pub fn mvec_add(acc: &mut MVec, c: &Rat, v: &MVec) {
    if c.is_zero() {
        return;
    }
    for (m, x) in v {
        let y = acc.get(m).cloned().unwrap_or_else(Rat::zero) + c * x;
        if y.is_zero() {
            acc.remove(m);
        } else {
            acc.insert(m.clone(), y);
        }
    }
}

pub struct Engine {
    pub alg: EngineAlgebra,
    free: bool,
    memo: RefCell<HashMap<(u32, Mono), Rc<MVec>>>,
}

impl Engine {
    pub fn module_engine(alg: EngineAlgebra) -> Engine {
        Engine { alg, free: false, memo: RefCell::new(HashMap::new()) }
    }

    pub fn free_engine(alg: EngineAlgebra) -> Engine {
        Engine { alg, free: true, memo: RefCell::new(HashMap::new()) }
    }

    fn vacuum_action(&self, i: usize) -> MVec {
        let mut out = MVec::new();
        if self.free || self.alg.block[i] == Block::Lower {
            out.insert(vec![(i as u32, 1)], Rat::one());
        } else if self.alg.block[i] == Block::Cartan {
            if !self.alg.psi[i].is_zero() {
                out.insert(vec![], self.alg.psi[i].clone());
            }
        }
        out
    }

    /// Left multiplication of a single letter on a normal monomial.
    pub fn act_letter(&self, i: usize, mono: &Mono) -> Rc<MVec> {
        let key = (i as u32, mono.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let result = self.act_letter_inner(i, mono);
        let rc = Rc::new(result);
        self.memo.borrow_mut().insert(key, rc.clone());
        rc
    }

    fn act_letter_inner(&self, i: usize, mono: &Mono) -> MVec {
        if mono.is_empty() {
            return self.vacuum_action(i);
        }
        let (jh, eh) = mono[0];
        let j = jh as usize;
        let insertable = self.free || self.alg.block[i] == Block::Lower;
        if insertable && self.alg.position[i] < self.alg.position[j] {
            let mut m = Vec::with_capacity(mono.len() + 1);
            m.push((i as u32, 1));
            m.extend_from_slice(mono);
            let mut out = MVec::new();
            out.insert(m, Rat::one());
            return out;
        }
        if insertable && i == j {
            if self.alg.parity[i] == Parity::Even {
                let mut m = mono.clone();
                m[0].1 = eh + 1;
                let mut out = MVec::new();
                out.insert(m, Rat::one());
                return out;
            }
            // odd square: i.i = [i,i]/2 as operators
            let rest: Mono = mono[1..].to_vec();
            let br = self.alg.bracket(i, i).clone();
            let mut out = MVec::new();
            let half = Rat::new(num::BigInt::from(1), num::BigInt::from(2));
            let acted = self.act_elem_mono(&br, &rest);
            mvec_add(&mut out, &half, &acted);
            return out;
        }
        // swap past one copy of the head letter:
        // i . j = (-1)^{p(i)p(j)} j . i + [i, j]
        let rest: Mono = if eh > 1 {
            let mut m = mono.clone();
            m[0].1 = eh - 1;
            m
        } else {
            mono[1..].to_vec()
        };
        let sign = self.alg.parity[i].koszul(self.alg.parity[j]);
        let mut out = MVec::new();
        let t1 = self.act_letter(i, &rest);
        for (m, c) in t1.iter() {
            let jm = self.act_letter(j, m);
            mvec_add(&mut out, &(c * &sign), &jm);
        }
        let br = self.alg.bracket(i, j).clone();
        let t2 = self.act_elem_mono(&br, &rest);
        mvec_add(&mut out, &Rat::one(), &t2);
        out
    }

    fn act_elem_mono(&self, elem: &QVec, mono: &Mono) -> MVec {
        let mut out = MVec::new();
        for (k, c) in elem.iter() {
            let r = self.act_letter(k, mono);
            mvec_add(&mut out, c, &r);
        }
        out
    }

    pub fn act_letter_vec(&self, i: usize, v: &MVec) -> MVec {
        let mut out = MVec::new();
        for (m, c) in v {
            let r = self.act_letter(i, m);
            mvec_add(&mut out, c, &r);
        }
        out
    }

    pub fn act_elem(&self, elem: &QVec, v: &MVec) -> MVec {
        let mut out = MVec::new();
        for (k, c) in elem.iter() {
            let r = self.act_letter_vec(k, v);
            mvec_add(&mut out, c, &r);
        }
        out
    }

    pub fn vacuum(&self) -> MVec {
        let mut v = MVec::new();
        v.insert(vec![], Rat::one());
        v
    }

    pub fn mono_weight(&self, m: &Mono) -> Vec<Rat> {
        let mut w = vec![Rat::zero(); self.alg.coord_dim];
        for &(l, e) in m {
            for (t, x) in self.alg.weight[l as usize].iter().enumerate() {
                w[t] += x * crate::qlinalg::qz(e as i64);
            }
        }
        w
    }

    pub fn mono_depth(&self, m: &Mono) -> i64 {
        m.iter().map(|&(l, e)| self.alg.depth[l as usize] * e as i64).sum()
    }
}

/// Normal form of a word of letters in the enveloping algebra (free mode).
pub fn pbw_straighten(engine: &Engine, word: &[usize]) -> MVec {
    let mut acc = engine.vacuum();
    for &l in word.iter().rev() {
        acc = engine.act_letter_vec(l, &acc);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Finite(usize),
    Truncated { cutoff_depth: i64 },
    Infinite(String),
}

pub struct WeightSpace {
    pub offset: Vec<Rat>,
    pub depth: i64,
    /// monomials surviving the pruning, in enumeration order
    pub alive: Vec<Mono>,
    pub index: HashMap<Mono, usize>,
    /// echelon of the submodule over alive coordinates
    pub nech: Vec<QVec>,
    /// alive indices whose classes form the quotient basis
    pub reps: Vec<usize>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }
}

pub struct CyclicModule {
    pub engine: Engine,
    pub powers: Vec<(QVec, u32)>,
    pub certificate: Certificate,
    /// weight spaces keyed by offset from the highest weight
    pub spaces: BTreeMap<Vec<Rat>, WeightSpace>,
    pub band_width: i64,
    pub explored_depth: i64,
}

impl CyclicModule {
    pub fn dims(&self) -> Vec<(Vec<Rat>, i64, usize)> {
        let mut out: Vec<(Vec<Rat>, i64, usize)> = self
            .spaces
            .values()
            .filter(|ws| ws.dim() > 0)
            .map(|ws| (ws.offset.clone(), ws.depth, ws.dim()))
            .collect();
        out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        out
    }

    pub fn total_dim(&self) -> Option<usize> {
        match self.certificate {
            Certificate::Finite(d) => Some(d),
            _ => None,
        }
    }

    /// Quotient coordinates of an MVec at a given offset.
    pub fn reduce_at(&self, offset: &[Rat], v: &MVec) -> Vec<(usize, Rat)> {
        let Some(ws) = self.spaces.get(offset) else {
            return vec![];
        };
        let mut coords = QVec::zero(ws.alive.len().max(1));
        let mut any = false;
        for (m, c) in v {
            if let Some(&idx) = ws.index.get(m) {
                let acc = coords.get(idx) + c;
                coords.set(idx, acc);
                any = true;
            }
        }
        if !any {
            return vec![];
        }
        let red = crate::qlinalg::reduce_mod(&ws.nech, &coords);
        ws.reps
            .iter()
            .enumerate()
            .filter_map(|(t, &ri)| {
                let x = red.get(ri);
                if x.is_zero() {
                    None
                } else {
                    Some((t, x))
                }
            })
            .collect()
    }
}

fn add_offsets(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Cartan/raising closure of the relation vectors, grouped by weight offset.
fn raise_closure(engine: &Engine, seeds: Vec<MVec>) -> BTreeMap<Vec<Rat>, Vec<MVec>> {
    struct Bucket {
        monos: Vec<Mono>,
        index: HashMap<Mono, usize>,
        ech: Vec<QVec>,
        vecs: Vec<MVec>,
    }
    fn push(
        engine: &Engine,
        buckets: &mut BTreeMap<Vec<Rat>, Bucket>,
        queue: &mut Vec<MVec>,
        v: MVec,
    ) {
        if v.is_empty() {
            return;
        }
        let key = {
            let m = v.keys().next().unwrap();
            engine.mono_weight(m)
        };
        let b = buckets.entry(key).or_insert_with(|| Bucket {
            monos: vec![],
            index: HashMap::new(),
            ech: vec![],
            vecs: vec![],
        });
        for m in v.keys() {
            if !b.index.contains_key(m) {
                b.index.insert(m.clone(), b.monos.len());
                b.monos.push(m.clone());
            }
        }
        let dim = b.monos.len();
        let mut coords = QVec::zero(dim);
        for (m, c) in &v {
            coords.set(b.index[m], c.clone());
        }
        let mut grown: Vec<QVec> = Vec::with_capacity(b.ech.len());
        for e in &b.ech {
            let mut g = QVec::zero(dim);
            for (i, x) in e.iter() {
                g.set(i, x.clone());
            }
            grown.push(g);
        }
        b.ech = grown;
        let red = crate::qlinalg::reduce_mod(&b.ech, &coords);
        if let Some((_, lead)) = red.leading() {
            let inv = lead.clone().recip();
            let nr = red.scale(&inv);
            for e in b.ech.iter_mut() {
                let p = nr.leading().unwrap().0;
                let c = e.get(p);
                if !c.is_zero() {
                    e.add_scaled(&-c, &nr);
                }
            }
            b.ech.push(nr);
            b.ech.sort_by_key(|e| e.leading().map(|(i, _)| i).unwrap_or(usize::MAX));
            b.vecs.push(v.clone());
            queue.push(v);
        }
    }
    let mut buckets: BTreeMap<Vec<Rat>, Bucket> = BTreeMap::new();
    let mut queue: Vec<MVec> = Vec::new();
    for s in seeds {
        push(engine, &mut buckets, &mut queue, s);
    }
    while let Some(v) = queue.pop() {
        for l in engine.alg.cartan_letters().chain(engine.alg.raise_letters()) {
            let w = engine.act_letter_vec(l, &v);
            push(engine, &mut buckets, &mut queue, w);
        }
    }
    buckets.into_iter().map(|(k, b)| (k, b.vecs)).collect()
}

/// Builds the cyclic quotient defined by the engine's psi values and the given
/// power relations, exploring weights down to `cutoff_depth` (in normalized
/// witness units) or until finiteness is certified by an empty band.
pub fn cyclic_module(engine: Engine, powers: Vec<(QVec, u32)>, cutoff_depth: i64) -> CyclicModule {
    let mut seeds: Vec<MVec> = Vec::new();
    for (elem, exp) in &powers {
        let mut v = engine.vacuum();
        for _ in 0..*exp {
            v = engine.act_elem(elem, &v);
        }
        if !v.is_empty() {
            seeds.push(v);
        }
    }
    let closure = raise_closure(&engine, seeds);
    let band = engine.alg.max_lower_depth();

    let mut spaces: BTreeMap<Vec<Rat>, WeightSpace> = BTreeMap::new();
    let mut live: BTreeMap<Vec<Rat>, Vec<Mono>> = BTreeMap::new();
    let zero_off = vec![Rat::zero(); engine.alg.coord_dim];
    live.insert(zero_off.clone(), vec![vec![]]);

    // depth 0: the generator line; a relation at offset zero would kill it
    {
        let mut index = HashMap::new();
        index.insert(vec![], 0usize);
        let nech = match closure.get(&zero_off) {
            Some(vecs) if !vecs.is_empty() => vec![QVec::unit(1, 0)],
            _ => vec![],
        };
        let reps = if nech.is_empty() { vec![0] } else { vec![] };
        if reps.is_empty() {
            live.remove(&zero_off);
        }
        spaces.insert(
            zero_off.clone(),
            WeightSpace {
                offset: zero_off.clone(),
                depth: 0,
                alive: vec![vec![]],
                index,
                nech,
                reps,
            },
        );
    }
    let lower: Vec<usize> = engine.alg.lower_letters().collect();
    let mut d_last: i64 = 0;
    let mut depth = 0i64;
    let mut finite = false;
    while depth < cutoff_depth {
        depth += 1;
        // enumerate candidate monomials of this depth by prepending letters to live tails
        let mut alive_at: BTreeMap<Vec<Rat>, Vec<Mono>> = BTreeMap::new();
        for (off, monos) in &live {
            for t in monos {
                let head_pos = t.first().map(|&(l, _)| engine.alg.position[l as usize]);
                let t_depth = engine.mono_depth(t);
                for &l in &lower {
                    if t_depth + engine.alg.depth[l] != depth {
                        continue;
                    }
                    let lp = engine.alg.position[l];
                    let ok = match head_pos {
                        None => true,
                        Some(hp) => {
                            lp < hp || (lp == hp && engine.alg.parity[l] == Parity::Even)
                        }
                    };
                    if !ok {
                        continue;
                    }
                    let mut m: Mono;
                    if Some(lp) == head_pos {
                        m = t.clone();
                        m[0].1 += 1;
                    } else {
                        m = Vec::with_capacity(t.len() + 1);
                        m.push((l as u32, 1));
                        m.extend_from_slice(t);
                    }
                    let woff = add_offsets(off, &engine.alg.weight[l]);
                    alive_at.entry(woff).or_default().push(m);
                }
            }
        }
        let mut new_live: Vec<(Vec<Rat>, Vec<Mono>)> = Vec::new();
        for (off, mut monos) in alive_at {
            monos.sort();
            monos.dedup();
            let mut index = HashMap::new();
            for (i, m) in monos.iter().enumerate() {
                index.insert(m.clone(), i);
            }
            let dim = monos.len();
            let mut gens: Vec<QVec> = Vec::new();
            let add_gen = |v: &MVec, gens: &mut Vec<QVec>, index: &HashMap<Mono, usize>| {
                let mut coords = QVec::zero(dim.max(1));
                let mut any = false;
                for (m, c) in v {
                    if let Some(&i) = index.get(m) {
                        let acc = coords.get(i) + c;
                        coords.set(i, acc);
                        any = true;
                    }
                }
                if any && !coords.is_zero() {
                    gens.push(coords);
                }
            };
            for &l in &lower {
                let src_off: Vec<Rat> =
                    off.iter().zip(&engine.alg.weight[l]).map(|(a, b)| a - b).collect();
                let Some(src) = spaces.get(&src_off) else { continue };
                for e in &src.nech {
                    let mut v = MVec::new();
                    for (i, c) in e.iter() {
                        v.insert(src.alive[i].clone(), c.clone());
                    }
                    let w = engine.act_letter_vec(l, &v);
                    add_gen(&w, &mut gens, &index);
                }
            }
            if let Some(vecs) = closure.get(&off) {
                for v in vecs {
                    add_gen(v, &mut gens, &index);
                }
            }
            let nech = crate::qlinalg::echelon_basis(&gens);
            let pivots: std::collections::BTreeSet<usize> =
                nech.iter().filter_map(|e| e.leading().map(|(i, _)| i)).collect();
            let reps: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
            if !reps.is_empty() {
                d_last = depth;
            }
            let mut live_here = Vec::new();
            for (i, m) in monos.iter().enumerate() {
                let red = crate::qlinalg::reduce_mod(&nech, &QVec::unit(dim, i));
                if !red.is_zero() {
                    live_here.push(m.clone());
                }
            }
            if !live_here.is_empty() {
                new_live.push((off.clone(), live_here));
            }
            spaces
                .insert(off.clone(), WeightSpace { offset: off, depth, alive: monos, index, nech, reps });
        }
        // live tails accumulate across depths (offsets determine their depth)
        for (off, monos) in new_live {
            live.insert(off, monos);
        }
        if depth >= d_last + band {
            finite = true;
            break;
        }
    }
    let total: usize = spaces.values().map(|ws| ws.dim()).sum();
    let certificate = if finite {
        Certificate::Finite(total)
    } else {
        Certificate::Truncated { cutoff_depth }
    };
    CyclicModule { engine, powers, certificate, spaces, band_width: band, explored_depth: depth }
}

/// A finite module made concrete: weight list, dimensions and dense action
/// matrices per engine letter.
pub struct ConcreteModule {
    pub coord_dim: usize,
    pub letters: usize,
    pub letter_parity: Vec<Parity>,
    pub letter_block: Vec<Block>,
    pub letter_weight: Vec<Vec<Rat>>,
    /// (offset, depth, dim), sorted by (depth, offset)
    pub weights: Vec<(Vec<Rat>, i64, usize)>,
    /// action\[l\]\[wi\] = (target weight index, matrix rows x cols = target_dim x source_dim)
    pub action: Vec<Vec<Option<(usize, Vec<Vec<Rat>>)>>>,
}

impl ConcreteModule {
    pub fn total_dim(&self) -> usize {
        self.weights.iter().map(|w| w.2).sum()
    }

    pub fn weight_index(&self, offset: &[Rat]) -> Option<usize> {
        self.weights.iter().position(|(o, _, _)| o == offset)
    }

    pub fn dims(&self) -> Vec<(Vec<Rat>, i64, usize)> {
        self.weights.clone()
    }

    /// Applies letter l to the basis vector (wi, col); sparse result.
    pub fn apply(&self, l: usize, wi: usize, v: &QVec) -> Option<(usize, QVec)> {
        let (ti, mat) = self.action[l][wi].as_ref()?;
        let mut out = QVec::zero(self.weights[*ti].2);
        for (col, c) in v.iter() {
            for (row, rowvec) in mat.iter().enumerate() {
                if !rowvec[col].is_zero() {
                    let acc = out.get(row) + c * &rowvec[col];
                    out.set(row, acc);
                }
            }
        }
        if out.is_zero() {
            None
        } else {
            Some((*ti, out))
        }
    }
}

/// Materializes a FINITE cyclic module into dense action data.
pub fn concrete_module(m: &CyclicModule) -> Result<ConcreteModule, EngineError> {
    if !matches!(m.certificate, Certificate::Finite(_)) {
        return Err(EngineError::NotFinite);
    }
    let mut weights: Vec<(Vec<Rat>, i64, usize)> = m
        .spaces
        .values()
        .filter(|ws| ws.dim() > 0)
        .map(|ws| (ws.offset.clone(), ws.depth, ws.dim()))
        .collect();
    weights.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    let widx: HashMap<Vec<Rat>, usize> =
        weights.iter().enumerate().map(|(i, w)| (w.0.clone(), i)).collect();
    let letters = m.engine.alg.n;
    let mut action: Vec<Vec<Option<(usize, Vec<Vec<Rat>>)>>> =
        vec![vec![None; weights.len()]; letters];
    for (wi, (off, _, dim)) in weights.iter().enumerate() {
        let ws = &m.spaces[off];
        for l in 0..letters {
            let target_off = add_offsets(off, &m.engine.alg.weight[l]);
            let Some(&ti) = widx.get(&target_off) else { continue };
            let tdim = weights[ti].2;
            let mut mat = vec![vec![Rat::zero(); *dim]; tdim];
            let mut nonzero = false;
            for (col, &ri) in ws.reps.iter().enumerate() {
                let mono = &ws.alive[ri];
                let out = m.engine.act_letter(l, mono);
                for (row, x) in m.reduce_at(&target_off, &out) {
                    mat[row][col] = x;
                    nonzero = true;
                }
            }
            if nonzero {
                action[l][wi] = Some((ti, mat));
            }
        }
    }
    Ok(ConcreteModule {
        coord_dim: m.engine.alg.coord_dim,
        letters,
        letter_parity: m.engine.alg.parity.clone(),
        letter_block: m.engine.alg.block.clone(),
        letter_weight: m.engine.alg.weight.clone(),
        weights,
        action,
    })
}

/// Vectors of nonzero offset annihilated by every raising letter.
pub fn singular_vectors(cm: &ConcreteModule) -> Vec<(usize, QVec)> {
    let mut out = Vec::new();
    for (wi, (off, _, dim)) in cm.weights.iter().enumerate() {
        if off.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut rows: Vec<QVec> = Vec::new();
        for l in 0..cm.letters {
            if cm.letter_block[l] != Block::Raise {
                continue;
            }
            if let Some((_, mat)) = &cm.action[l][wi] {
                for r in mat {
                    rows.push(QVec::from_dense(r));
                }
            }
        }
        let matrix = crate::qlinalg::SparseMatrix::from_rows(rows, *dim);
        for k in crate::qlinalg::kernel(&matrix) {
            out.push((wi, k));
        }
    }
    out
}

/// Quotient of a concrete module by the submodule generated by the given
/// weight-homogeneous vectors.
pub fn quotient_by_submodule(cm: &ConcreteModule, generators: &[(usize, QVec)]) -> ConcreteModule {
    fn add(
        span: &mut [Vec<QVec>],
        queue: &mut Vec<(usize, QVec)>,
        wi: usize,
        v: &QVec,
    ) {
        let red = crate::qlinalg::reduce_mod(&span[wi], v);
        if let Some((_, lead)) = red.leading() {
            let nr = red.scale(&lead.clone().recip());
            for e in span[wi].iter_mut() {
                let p = nr.leading().unwrap().0;
                let c = e.get(p);
                if !c.is_zero() {
                    e.add_scaled(&-c, &nr);
                }
            }
            span[wi].push(nr.clone());
            span[wi].sort_by_key(|e| e.leading().map(|(i, _)| i).unwrap_or(usize::MAX));
            queue.push((wi, nr));
        }
    }
    let mut span: Vec<Vec<QVec>> = cm.weights.iter().map(|_| Vec::new()).collect();
    let mut queue: Vec<(usize, QVec)> = Vec::new();
    for (wi, v) in generators {
        add(&mut span, &mut queue, *wi, v);
    }
    while let Some((wi, v)) = queue.pop() {
        for l in 0..cm.letters {
            if let Some((ti, out)) = cm.apply(l, wi, &v) {
                add(&mut span, &mut queue, ti, &out);
            }
        }
    }
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for (wi, (_, _, dim)) in cm.weights.iter().enumerate() {
        let pivots: std::collections::BTreeSet<usize> =
            span[wi].iter().filter_map(|e| e.leading().map(|(i, _)| i)).collect();
        reps.push((0..*dim).filter(|i| !pivots.contains(i)).collect());
    }
    let keep: Vec<usize> = (0..cm.weights.len()).filter(|&wi| !reps[wi].is_empty()).collect();
    let remap: HashMap<usize, usize> =
        keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let weights: Vec<(Vec<Rat>, i64, usize)> = keep
        .iter()
        .map(|&wi| (cm.weights[wi].0.clone(), cm.weights[wi].1, reps[wi].len()))
        .collect();
    let reduce = |wi: usize, v: &QVec| -> QVec {
        let red = crate::qlinalg::reduce_mod(&span[wi], v);
        let mut out = QVec::zero(reps[wi].len().max(1));
        for (t, &ri) in reps[wi].iter().enumerate() {
            let x = red.get(ri);
            if !x.is_zero() {
                out.set(t, x);
            }
        }
        out
    };
    let mut action: Vec<Vec<Option<(usize, Vec<Vec<Rat>>)>>> =
        vec![vec![None; weights.len()]; cm.letters];
    for (new_wi, &wi) in keep.iter().enumerate() {
        for l in 0..cm.letters {
            let Some((ti, mat)) = &cm.action[l][wi] else { continue };
            let Some(&new_ti) = remap.get(ti) else { continue };
            let tdim = reps[*ti].len();
            let mut nm = vec![vec![Rat::zero(); reps[wi].len()]; tdim];
            let mut nonzero = false;
            for (col, &ri) in reps[wi].iter().enumerate() {
                let mut img = QVec::zero(cm.weights[*ti].2);
                for (row, rowvec) in mat.iter().enumerate() {
                    if !rowvec[ri].is_zero() {
                        img.set(row, rowvec[ri].clone());
                    }
                }
                let red = reduce(*ti, &img);
                for (row, x) in red.iter() {
                    nm[row][col] = x.clone();
                    nonzero = true;
                }
            }
            if nonzero {
                action[l][new_wi] = Some((new_ti, nm));
            }
        }
    }
    ConcreteModule {
        coord_dim: cm.coord_dim,
        letters: cm.letters,
        letter_parity: cm.letter_parity.clone(),
        letter_block: cm.letter_block.clone(),
        letter_weight: cm.letter_weight.clone(),
        weights,
        action,
    }
}

/// Iteratively quotients by submodules generated by singular vectors until
/// none remain.
pub fn irreducible_quotient(cm: &ConcreteModule) -> ConcreteModule {
    let mut cur = quotient_by_submodule(cm, &[]);
    loop {
        let sing = singular_vectors(&cur);
        if sing.is_empty() {
            return cur;
        }
        cur = quotient_by_submodule(&cur, &sing);
    }
}

/// lambda(h_a) for a triple, with lambda given on the Cartan coordinates.
pub fn pair_weight_with_coroot(datum: &RootDatum, lambda: &[Rat], triple: &Triple) -> Rat {
    let coords = crate::qlinalg::coords_in_basis(&datum.cartan, &triple.h)
        .expect("coroot outside the Cartan");
    let mut acc = Rat::zero();
    for (i, c) in coords.iter() {
        acc += c * &lambda[i];
    }
    acc
}

fn rat_floor_i64(x: &Rat) -> i64 {
    x.floor().to_integer().to_string().parse().unwrap_or(0)
}

/// The integrality exponents lambda(h_a) + 1 over the simple r-roots, or an
/// error when lambda is not r-dominant integral.
pub fn power_exponents(
    datum: &RootDatum,
    simples: &[(usize, Triple)],
    lambda: &[Rat],
) -> Result<Vec<u32>, EngineError> {
    let mut out = Vec::with_capacity(simples.len());
    for (_, t) in simples {
        let v = pair_weight_with_coroot(datum, lambda, t);
        if !v.denom().is_one() || v.is_negative() {
            return Err(EngineError::InvalidLambda(v.to_string()));
        }
        out.push(rat_floor_i64(&v) as u32 + 1);
    }
    Ok(out)
}

/// Default exploration depth: 4 lambda(sum of positive r-coroots) plus the
/// number of odd lowering letters plus the maximal root height, scaled by the
/// band width; doubled on retry up to three times.
pub fn default_cutoff(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    lambda: &[Rat],
) -> i64 {
    let positive = crate::triangular::reductive_positive_roots(g, datum, dec)
        .unwrap_or_default();
    let mut lam_sum = Rat::zero();
    for (_, t) in &positive {
        lam_sum += pair_weight_with_coroot(datum, lambda, t);
    }
    let odd_lower: i64 = datum
        .roots
        .iter()
        .enumerate()
        .filter(|(i, r)| !dec.positive[*i] && r.parity == Parity::Odd)
        .map(|(_, r)| r.mult() as i64)
        .sum();
    let max_height =
        datum.roots.iter().filter_map(|r| r.height).map(|h| h.abs()).max().unwrap_or(1);
    let degree = 4 * rat_floor_i64(&lam_sum) + odd_lower + max_height + 2;
    // convert the degree bound to witness-depth units
    let w = datum
        .roots
        .iter()
        .enumerate()
        .filter(|(i, _)| !dec.positive[*i])
        .map(|(_, r)| -r.eval(&dec.witness))
        .max()
        .map(|x| rat_floor_i64(&x))
        .unwrap_or(1)
        .max(1);
    degree * w
}

/// Generalized Kac module K(lambda): the cyclic quotient by n+, h - lambda(h)
/// and the r-integrability powers. Parabolic decompositions with an even
/// complement are reported INFINITE structurally, without running the engine.
pub fn kac_module(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    lambda: &[Rat],
    cutoff: Option<i64>,
) -> Result<CyclicModule, EngineError> {
    let simples = crate::triangular::reductive_simples(g, datum, dec)
        .map_err(|e| EngineError::Other(e.to_string()))?;
    let exps = power_exponents(datum, &simples, lambda)?;
    let mut psi = PsiTable::new();
    for (i, v) in lambda.iter().enumerate() {
        if !v.is_zero() {
            psi.insert((i, 0), v.clone());
        }
    }
    let prep = prepare_engine(g, datum, dec, TensorFactor::trivial(), &psi, false);
    let flags = crate::triangular::check_conditions(g, datum, dec)
        .map_err(|e| EngineError::Other(e.to_string()))?;
    if flags.even_complement {
        return Ok(CyclicModule {
            engine: Engine::module_engine(prep.alg),
            powers: vec![],
            certificate: Certificate::Infinite("parabolic_even_complement".into()),
            spaces: BTreeMap::new(),
            band_width: 0,
            explored_depth: 0,
        });
    }
    let powers: Vec<(QVec, u32)> = simples
        .iter()
        .zip(&exps)
        .map(|((_, t), &e)| (prep.element(&t.y, &QVec::unit(1, 0)), e))
        .collect();
    let mut depth = cutoff.unwrap_or_else(|| default_cutoff(g, datum, dec, lambda));
    let mut tries = 0;
    loop {
        let engine = Engine::module_engine(reprep(g, datum, dec, &psi));
        let m = cyclic_module(engine, powers.clone(), depth);
        if matches!(m.certificate, Certificate::Finite(_)) || tries >= 3 || cutoff.is_some() {
            return Ok(m);
        }
        tries += 1;
        depth *= 2;
    }
}

fn reprep(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    psi: &PsiTable,
) -> EngineAlgebra {
    prepare_engine(g, datum, dec, TensorFactor::trivial(), psi, false).alg
}

/// The finite-dimensional irreducible r-module of highest weight lambda:
/// the analogous presentation over the reductive part, then the irreducible
/// quotient (for semisimple r' the quotient map is the identity).
pub fn r_highest_weight_module(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    lambda: &[Rat],
    cutoff: Option<i64>,
) -> Result<ConcreteModule, EngineError> {
    let simples = crate::triangular::reductive_simples(g, datum, dec)
        .map_err(|e| EngineError::Other(e.to_string()))?;
    let exps = power_exponents(datum, &simples, lambda)?;
    let mut psi = PsiTable::new();
    for (i, v) in lambda.iter().enumerate() {
        if !v.is_zero() {
            psi.insert((i, 0), v.clone());
        }
    }
    let prep = prepare_engine(g, datum, dec, TensorFactor::trivial(), &psi, true);
    let powers: Vec<(QVec, u32)> = simples
        .iter()
        .zip(&exps)
        .map(|((_, t), &e)| (prep.element(&t.y, &QVec::unit(1, 0)), e))
        .collect();
    let depth = cutoff.unwrap_or_else(|| default_cutoff(g, datum, dec, lambda));
    let m = cyclic_module(Engine::module_engine(prep.alg), powers, depth);
    let cm = concrete_module(&m)?;
    Ok(irreducible_quotient(&cm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{qq, qz};
    use crate::roots::root_datum;
    use crate::superalg::sl2_chevalley;
    use crate::triangular::{positive_system, reductive_simples, standard_decomposition, StandardKind};

    fn sl2_engine(lambda: i64) -> (Engine, Vec<(QVec, u32)>) {
        let g = sl2_chevalley();
        let datum = root_datum(&g).unwrap();
        let dec = positive_system(&g, &datum, &QVec::from_dense(&[qz(1)])).unwrap();
        let mut psi = PsiTable::new();
        psi.insert((0, 0), qz(lambda));
        let prep = prepare_engine(&g, &datum, &dec, TensorFactor::trivial(), &psi, false);
        let simples = reductive_simples(&g, &datum, &dec).unwrap();
        let powers: Vec<(QVec, u32)> = simples
            .iter()
            .map(|(_, t)| (prep.element(&t.y, &QVec::unit(1, 0)), lambda as u32 + 1))
            .collect();
        (Engine::module_engine(prep.alg), powers)
    }

    #[test]
    fn straighten_sl2_xy() {
        let g = sl2_chevalley();
        let datum = root_datum(&g).unwrap();
        let dec = positive_system(&g, &datum, &QVec::from_dense(&[qz(1)])).unwrap();
        let prep =
            prepare_engine(&g, &datum, &dec, TensorFactor::trivial(), &PsiTable::new(), false);
        let engine = Engine::free_engine(prep.alg);
        // letters: 0 = y (lower), 1 = h, 2 = x
        let nf = pbw_straighten(&engine, &[2, 0]); // x . y = y x + h
        let mut expect = MVec::new();
        expect.insert(vec![(0, 1), (2, 1)], qz(1));
        expect.insert(vec![(1, 1)], qz(1));
        assert_eq!(nf, expect);
        // an already ordered word is unchanged
        let nf2 = pbw_straighten(&engine, &[0, 2]);
        let mut expect2 = MVec::new();
        expect2.insert(vec![(0, 1), (2, 1)], qz(1));
        assert_eq!(nf2, expect2);
    }

    #[test]
    fn odd_square_is_half_bracket() {
        // osp(1|2): for the odd lowering letter, psi . psi = [psi, psi] / 2
        let g = crate::realize::build_family("osp:1,2").unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let prep =
            prepare_engine(&g, &datum, &dec, TensorFactor::trivial(), &PsiTable::new(), false);
        let engine = Engine::free_engine(prep.alg);
        let odd_lower = engine
            .alg
            .lower_letters()
            .find(|&l| engine.alg.parity[l] == Parity::Odd)
            .unwrap();
        let nf = pbw_straighten(&engine, &[odd_lower, odd_lower]);
        let mut expect = MVec::new();
        let br = engine.alg.bracket(odd_lower, odd_lower).clone();
        for (k, c) in br.iter() {
            expect.insert(vec![(k as u32, 1)], c * qq(1, 2));
        }
        assert_eq!(nf, expect);
    }

    #[test]
    fn sl2_weyl_modules() {
        for (lam, dim) in [(1i64, 2usize), (3, 4), (0, 1), (6, 7)] {
            let (engine, powers) = sl2_engine(lam);
            let m = cyclic_module(engine, powers, 200);
            assert_eq!(m.certificate, Certificate::Finite(dim), "lambda = {lam}");
            let dims = m.dims();
            assert_eq!(dims.len(), dim);
            assert!(dims.iter().all(|d| d.2 == 1));
        }
    }

    #[test]
    fn truncated_certificate_on_small_cutoff() {
        let (engine, powers) = sl2_engine(6);
        let m = cyclic_module(engine, powers, 3);
        assert!(matches!(m.certificate, Certificate::Truncated { .. }));
    }

    #[test]
    fn r_module_classical_dimensions() {
        // r = gl(2) inside sl(2,1): lambda with lambda(h_alpha) = 2 gives the
        // 3-dimensional module for any central value
        let g = crate::realize::build_family("sl:2,1").unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        for c in [0i64, 1, 5] {
            let l = crate::hwengine::r_highest_weight_module(
                &g,
                &datum,
                &dec,
                &[qz(2), qz(c)],
                None,
            )
            .unwrap();
            assert_eq!(l.total_dim(), 3, "central value {c}");
        }
        // r' = A1 + A1 inside sl(2,2): lambda(h_a) = (1,1) gives 2 x 2 = 4
        let g = crate::realize::build_family("sl:2,2").unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let simples = reductive_simples(&g, &datum, &dec).unwrap();
        assert_eq!(simples.len(), 2);
        // solve a lambda with value 1 on both simple coroots
        let rows: Vec<QVec> = simples
            .iter()
            .map(|(_, t)| crate::qlinalg::coords_in_basis(&datum.cartan, &t.h).unwrap())
            .collect();
        let m = crate::qlinalg::SparseMatrix::from_rows(rows, datum.cartan.len());
        let lam = crate::qlinalg::solve(&m, &QVec::from_dense(&[qz(1), qz(1)]))
            .unwrap()
            .to_dense();
        let l =
            crate::hwengine::r_highest_weight_module(&g, &datum, &dec, &lam, None).unwrap();
        assert_eq!(l.total_dim(), 4);
    }

    #[test]
    fn weight_compatibility_and_universal_surrogate() {
        // Cartan letters act by lambda + offset on every computed weight
        // space, and the irreducible quotient is weightwise dominated
        let g = crate::realize::build_family("sl:2,1").unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let lam = vec![qz(1), qz(0)];
        let m = crate::hwengine::kac_module(&g, &datum, &dec, &lam, None).unwrap();
        let cm = concrete_module(&m).unwrap();
        for (wi, (off, _, dim)) in cm.weights.iter().enumerate() {
            for l in 0..cm.letters {
                if cm.letter_block[l] != Block::Cartan {
                    continue;
                }
                // expected scalar: lambda(h) + offset(h) for this Cartan letter
                let expect = &m.engine.alg.psi[l]
                    + off
                        .iter()
                        .zip(crate::qlinalg::coords_in_basis(
                            &datum.cartan,
                            &m.engine.alg
                                .weight
                                .get(l)
                                .map(|_| datum.cartan[m.engine.alg.cartan_letters().position(|x| x == l).unwrap()].clone())
                                .unwrap(),
                        )
                        .unwrap()
                        .to_dense())
                        .map(|(o, c)| o * c)
                        .sum::<Rat>();
                match &cm.action[l][wi] {
                    None => assert!(num::Zero::is_zero(&expect) || *dim == 0),
                    Some((ti, mat)) => {
                        assert_eq!(ti, &wi, "Cartan letters preserve the weight");
                        for (r, row) in mat.iter().enumerate() {
                            for (c, x) in row.iter().enumerate() {
                                let want = if r == c { expect.clone() } else { qz(0) };
                                assert_eq!(*x, want, "h-action must be the scalar");
                            }
                        }
                    }
                }
            }
        }
        let irr = irreducible_quotient(&cm);
        for (off, _, d) in irr.dims() {
            let kd = cm.weight_index(&off).map(|wi| cm.weights[wi].2).unwrap_or(0);
            assert!(d <= kd, "irreducible quotient dominated weightwise");
        }
    }

    #[test]
    fn sl2_lambda3_already_irreducible() {
        let (engine, powers) = sl2_engine(3);
        let m = cyclic_module(engine, powers, 200);
        let cm = concrete_module(&m).unwrap();
        let irr = irreducible_quotient(&cm);
        assert_eq!(irr.total_dim(), 4);
    }

    #[test]
    fn osp12_presentation_gives_the_irreducible() {
        // K(lambda) for osp(1|2) at lambda(h_a) = 2 is irreducible of
        // dimension 2 lambda + 1 = 5, one line per weight step of a/2
        let g = crate::realize::build_family("osp:1,2").unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let simples = reductive_simples(&g, &datum, &dec).unwrap();
        assert_eq!(simples.len(), 1);
        let lambda: Vec<Rat> = vec![qz(2)];
        let lam_h = pair_weight_with_coroot(&datum, &lambda, &simples[0].1);
        assert_eq!(lam_h, qz(2));
        let mut psi = PsiTable::new();
        psi.insert((0, 0), lambda[0].clone());
        let prep = prepare_engine(&g, &datum, &dec, TensorFactor::trivial(), &psi, false);
        let powers = vec![(prep.element(&simples[0].1.y, &QVec::unit(1, 0)), 3u32)];
        let m = cyclic_module(Engine::module_engine(prep.alg), powers, 400);
        assert_eq!(m.certificate, Certificate::Finite(5));
        let dims = m.dims();
        assert_eq!(dims.len(), 5);
        assert!(dims.iter().all(|d| d.2 == 1));
        let cm = concrete_module(&m).unwrap();
        assert_eq!(irreducible_quotient(&cm).total_dim(), 5);
    }
}
