//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Everything here is exact rational arithmetic; expected values come from
//! independent combinatorial enumeration, closed-form classical module
//! dimensions, or second implementations (induced-module construction,
//! series expansion), never from the code paths under test.

use num::Zero;
use std::collections::BTreeMap;

use superlie::hwengine::{
    concrete_module, irreducible_quotient, kac_module, pair_weight_with_coroot,
    r_highest_weight_module, Certificate, PsiTable,
};
use superlie::qlinalg::{qz, QVec, Rat};
use superlie::realize::build_family;
use superlie::roots::{extremal_root, root_datum, Direction, RootDatum};
use superlie::superalg::{AlgClass, Parity};
use superlie::triangular::{
    check_conditions, enumerate_chambers, find_c2_decomposition, odd_reflection, opposite,
    reductive_simples, root_by_eps, serganova_reflection, simple_system, standard_decomposition,
    Decomposition, StandardKind, TriError,
};
use superlie::weyl::{
    garland_coefficients, garland_verify, jet_algebra, tensor_check, theta_criterion,
    truncation_scan, ScanVerdict,
};

/// The acceptance grid.
fn grid() -> Vec<&'static str> {
    vec![
        "sl:1,2", "sl:2,1", "sl:1,3", "sl:3,1", "sl:2,2", "sl:1,4", "sl:4,1", "sl:2,3",
        "sl:3,2", "A:1,1", "osp:1,2", "osp:3,2", "osp:2,2", "osp:4,2", "p:2", "p:3", "W:2",
        "W:3", "W:4", "S:3", "S:4", "S~:4", "H:4", "H:5",
    ]
}

fn basic_classical_grid() -> Vec<&'static str> {
    vec![
        "sl:1,2", "sl:2,1", "sl:1,3", "sl:3,1", "sl:1,4", "sl:4,1", "sl:2,3", "sl:3,2",
        "A:1,1", "osp:1,2", "osp:3,2", "osp:2,2", "osp:4,2",
    ]
}

#[test]
fn criterion_01_structural_validity() {
    // make_superalgebra runs the exhaustive super-skew and super-Jacobi checks
    // at build time, so a successful build is the certificate
    for spec in grid() {
        let g = build_family(spec).unwrap_or_else(|e| panic!("{spec} failed validation: {e}"));
        assert!(g.dim() > 0);
    }
    println!("[PASS] criterion 1: structural validity across the grid");
}

#[test]
fn criterion_02_dimension_oracles() {
    // closed forms, evaluated independently of the constructions
    let pow2 = |n: u32| 2usize.pow(n);
    for (spec, expect) in [
        ("W:2", 2 * pow2(2)),
        ("W:3", 3 * pow2(3)),
        ("W:4", 4 * pow2(4)),
        ("S:3", 2 * pow2(3) + 1),
        ("S:4", 3 * pow2(4) + 1),
        ("S~:4", 3 * pow2(4) + 1),
        ("H:4", pow2(4) - 2),
        ("H:5", pow2(5) - 2),
        ("p:2", 2 * 9 - 1),
        ("p:3", 2 * 16 - 1),
        ("A:1,1", 15 - 1),
    ] {
        assert_eq!(build_family(spec).unwrap().dim(), expect, "{spec}");
    }
    for (m, n) in [(1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (1, 4), (4, 1), (2, 3), (3, 2)] {
        let g = build_family(&format!("sl:{m},{n}")).unwrap();
        assert_eq!(g.dim(), (m + n) * (m + n) - 1, "sl({m},{n})");
    }
    // osp dimensions: so(M) + sp(2n) + M.2n
    for (mo, nn) in [(1usize, 2usize), (3, 2), (2, 2), (4, 2)] {
        let g = build_family(&format!("osp:{mo},{nn}")).unwrap();
        let n = nn / 2;
        assert_eq!(g.dim(), mo * (mo - 1) / 2 + n * (2 * n + 1) + mo * nn, "osp({mo}|{nn})");
    }
    println!("[PASS] criterion 2: dimension oracles across the grid");
}

/// Root tuple for snapshot comparison: (eps, height, parity bit, multiplicity).
type RootKey = (Vec<i64>, i64, u8, usize);

fn datum_root_keys(datum: &RootDatum) -> Vec<RootKey> {
    let mut out: Vec<RootKey> = datum
        .roots
        .iter()
        .map(|r| {
            (
                r.eps.clone().expect("grid roots carry eps labels"),
                r.height.expect("grid roots carry heights"),
                r.parity.bit(),
                r.mult(),
            )
        })
        .collect();
    out.sort();
    out
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Independent root list of W(n) from the superderivation combinatorics.
fn w_root_oracle(n: usize) -> Vec<RootKey> {
    let mut out = Vec::new();
    for set in subsets(n) {
        // xi_I d_j with j not in I: root e_I - e_j
        for j in 0..n {
            if set.contains(&j) {
                continue;
            }
            let mut eps = vec![0i64; n];
            for &i in &set {
                eps[i] = 1;
            }
            eps[j] -= 1;
            if eps.iter().all(|&x| x == 0) {
                continue;
            }
            let ht = set.len() as i64 - 1;
            out.push((eps, ht, ((set.len() + 1) % 2) as u8, 1));
        }
        // epsilon-sum roots e_I, multiplicity n - |I|
        if !set.is_empty() && set.len() <= n - 1 {
            let mut eps = vec![0i64; n];
            for &i in &set {
                eps[i] = 1;
            }
            out.push((eps, set.len() as i64, (set.len() % 2) as u8, n - set.len()));
        }
    }
    out.sort();
    out
}

/// Independent root list of S(n): the xi_I d_j roots plus epsilon-sums with
/// multiplicity dropped by one (and the top layer removed).
fn s_root_oracle(n: usize) -> Vec<RootKey> {
    let mut out = Vec::new();
    for set in subsets(n) {
        for j in 0..n {
            if set.contains(&j) {
                continue;
            }
            let mut eps = vec![0i64; n];
            for &i in &set {
                eps[i] = 1;
            }
            eps[j] -= 1;
            if eps.iter().all(|&x| x == 0) {
                continue;
            }
            let ht = set.len() as i64 - 1;
            out.push((eps, ht, ((set.len() + 1) % 2) as u8, 1));
        }
        if !set.is_empty() && set.len() <= n - 2 {
            let mut eps = vec![0i64; n];
            for &i in &set {
                eps[i] = 1;
            }
            out.push((eps, set.len() as i64, (set.len() % 2) as u8, n - set.len() - 1));
        }
    }
    out.sort();
    out
}

/// Independent root list of p(n) from the block description.
fn p_root_oracle(n: usize) -> Vec<RootKey> {
    let k = n + 1;
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut eps = vec![0i64; k];
                eps[i] = 1;
                eps[j] -= 1;
                out.push((eps, 0, 0, 1));
            }
        }
    }
    for i in 0..k {
        for j in i..k {
            let mut eps = vec![0i64; k];
            eps[i] += 1;
            eps[j] += 1;
            let neg: Vec<i64> = eps.iter().map(|x| -x).collect();
            out.push((eps, 1, 1, 1));
            if i != j {
                out.push((neg, -1, 1, 1));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn criterion_03_root_list_snapshots() {
    for (spec, oracle) in [
        ("W:2", w_root_oracle(2)),
        ("W:3", w_root_oracle(3)),
        ("S:3", s_root_oracle(3)),
        ("p:2", p_root_oracle(2)),
        ("p:3", p_root_oracle(3)),
    ] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        assert_eq!(datum_root_keys(&datum), oracle, "{spec} root snapshot");
    }
    // presence of 2 eps_i and absence of -2 eps_i is part of the p(n) oracle;
    // assert it once more explicitly
    for spec in ["p:2", "p:3"] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        let k = g.metadata.eps_dim;
        for i in 0..k {
            let mut two = vec![0i64; k];
            two[i] = 2;
            assert!(root_by_eps(&datum, &two, 1).is_some());
            let neg: Vec<i64> = two.iter().map(|x| -x).collect();
            assert!(datum.roots.iter().all(|r| r.eps.as_deref() != Some(&neg[..])));
        }
    }
    println!("[PASS] criterion 3: root-list snapshots for W(2), W(3), S(3), p(2), p(3)");
}

#[test]
fn criterion_04_reflections() {
    // (a) odd reflection set identity on distinguished systems of the basic
    // classical grid: R+(r_b(D)) \ {-b} = R+(D) \ {b}, verified inside
    // odd_reflection, which errors on violation
    for spec in basic_classical_grid() {
        if spec == "A:1,1" {
            // the distinguished simples of A(1,1) are linearly dependent on
            // the quotient Cartan; the machinery runs on sl(2,2) instead
            continue;
        }
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        let dis = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let system = simple_system(&g, &datum, &dis).unwrap();
        for (t, &si) in system.simples.iter().enumerate() {
            if datum.roots[si].parity != Parity::Odd {
                continue;
            }
            // isotropy test: beta(h_beta) = 0
            let triple = &system.triples[t];
            let val = pair_weight_with_coroot(
                &datum,
                &datum.roots[si].functional[..datum.rank].to_vec(),
                triple,
            );
            if !num::Zero::is_zero(&val) {
                continue;
            }
            let (_, refl) = odd_reflection(&g, &datum, &dis, &system, si)
                .unwrap_or_else(|e| panic!("{spec}: odd reflection failed: {e}"));
            // explicit set identity check
            let neg: Vec<Rat> =
                datum.roots[si].functional.iter().map(|x| -x.clone()).collect();
            let neg_idx = datum.root_index(&neg).unwrap();
            for i in 0..datum.roots.len() {
                let lhs = refl.positive[i] && i != neg_idx;
                let rhs = dis.positive[i] && i != si;
                assert_eq!(lhs, rhs, "{spec}: set identity at root {i}");
            }
        }
    }
    // also on sl(2,2), the rank-full stand-in for A(1,1)
    {
        let g = build_family("sl:2,2").unwrap();
        let datum = root_datum(&g).unwrap();
        let dis = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let system = simple_system(&g, &datum, &dis).unwrap();
        let beta = *system
            .simples
            .iter()
            .find(|&&i| datum.roots[i].parity == Parity::Odd)
            .unwrap();
        odd_reflection(&g, &datum, &dis, &system, beta).unwrap();
    }

    // (b) the Prop 3.4 chain for W(2): b1 = opposite(r_{-eps1}(b_min)), with
    // R-(b1) = {eps1-eps2, -eps2, eps1} (the displayed set with the even part
    // flipped; see the decisions ledger) and C2 at the endpoint
    {
        let g = build_family("W:2").unwrap();
        let datum = root_datum(&g).unwrap();
        let bmin = standard_decomposition(&g, &datum, StandardKind::BMin).unwrap();
        let ri = root_by_eps(&datum, &[-1, 0], -1).unwrap();
        let refl = serganova_reflection(&g, &datum, &bmin, ri).unwrap();
        let b1 = opposite(&g, &datum, &refl).unwrap();
        let mut neg_eps: Vec<Vec<i64>> = (0..datum.roots.len())
            .filter(|&i| !b1.positive[i])
            .map(|i| datum.roots[i].eps.clone().unwrap())
            .collect();
        neg_eps.sort();
        assert_eq!(neg_eps, vec![vec![0i64, -1], vec![1, -1], vec![1, 0]]);
        let flags = check_conditions(&g, &datum, &b1).unwrap();
        assert!(flags.c1 && flags.c2);
    }
    // for W(3) and S(3) the same chain step has no regular witness; this is
    // a genuine obstruction (the reflected set is not additively closed),
    // recorded honestly here
    for spec in ["W:3", "S:3"] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        let bmin = standard_decomposition(&g, &datum, StandardKind::BMin).unwrap();
        let eps_dim = g.metadata.eps_dim;
        let mut eps = vec![0i64; eps_dim];
        eps[0] = -1;
        let ri = root_by_eps(&datum, &eps, -1).unwrap();
        assert!(matches!(
            serganova_reflection(&g, &datum, &bmin, ri),
            Err(TriError::NotSimpleForBorel)
        ));
    }

    // (c) the H(2k) chain: two reflections at -eps1-delta, -eps2-delta from
    // b_min, then the opposite; endpoint satisfies C2. For odd n the extra
    // roots +-eps1 +-eps2 + delta make the same step infeasible (ledger), and
    // the C2 decomposition is found by search instead.
    {
        let g = build_family("H:4").unwrap();
        let datum = root_datum(&g).unwrap();
        let bmin = standard_decomposition(&g, &datum, StandardKind::BMin).unwrap();
        let eps_dim = g.metadata.eps_dim;
        let mut dec = bmin;
        for i in 0..2 {
            let mut eps = vec![0i64; eps_dim];
            eps[i] = -1;
            let ri = root_by_eps(&datum, &eps, -1).unwrap();
            dec = serganova_reflection(&g, &datum, &dec, ri)
                .unwrap_or_else(|e| panic!("H:4 chain step {i}: {e}"));
        }
        let b2 = opposite(&g, &datum, &dec).unwrap();
        let flags = check_conditions(&g, &datum, &b2).unwrap();
        assert!(flags.c1 && flags.c2, "H:4 endpoint");
    }
    {
        let g = build_family("H:5").unwrap();
        let datum = root_datum(&g).unwrap();
        let bmin = standard_decomposition(&g, &datum, StandardKind::BMin).unwrap();
        let mut eps = vec![0i64; g.metadata.eps_dim];
        eps[0] = -1;
        let ri = root_by_eps(&datum, &eps, -1).unwrap();
        assert!(matches!(
            serganova_reflection(&g, &datum, &bmin, ri),
            Err(TriError::NotSimpleForBorel)
        ));
    }

    // (d) the p(n) chain: r_{2eps_{n+1}} then r_{eps_k + eps_{n+1}} for
    // k = n..1; the first reflection shrinks R+ by one (no mirror root), the
    // endpoint's highest root is eps_1 - eps_{n+1}, and the opposite
    // decomposition satisfies C2
    for (spec, n) in [("p:2", 2usize), ("p:3", 3usize)] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        let dis = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let k = n + 1;
        let mut eps = vec![0i64; k];
        eps[k - 1] = 2;
        let ri = root_by_eps(&datum, &eps, 1).unwrap();
        let mut dec = serganova_reflection(&g, &datum, &dis, ri).unwrap();
        assert_eq!(dec.positive_indices().len() + 1, dis.positive_indices().len());
        for j in (1..k).rev() {
            let mut eps = vec![0i64; k];
            eps[j - 1] = 1;
            eps[k - 1] = 1;
            let ri = root_by_eps(&datum, &eps, 1).unwrap();
            dec = serganova_reflection(&g, &datum, &dec, ri)
                .unwrap_or_else(|e| panic!("{spec} chain at k={j}: {e}"));
        }
        let hi = extremal_root(&g, &datum, &dec, Direction::Highest).unwrap();
        let mut expect = vec![0i64; k];
        expect[0] = 1;
        expect[k - 1] = -1;
        assert_eq!(datum.roots[hi].eps.as_deref(), Some(&expect[..]), "{spec} highest root");
        let opp = opposite(&g, &datum, &dec).unwrap();
        let flags = check_conditions(&g, &datum, &opp).unwrap();
        assert!(flags.c1 && flags.c2, "{spec} endpoint C2");
    }
    println!("[PASS] criterion 4: odd-reflection identity and the explicit reflection chains");
}

#[test]
fn criterion_05_find_c2_everywhere() {
    for spec in grid() {
        let start = std::time::Instant::now();
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = find_c2_decomposition(&g, &datum)
            .unwrap_or_else(|e| panic!("{spec}: find_c2 failed: {e}"));
        let flags = check_conditions(&g, &datum, &dec).unwrap();
        assert!(flags.c1 && flags.c2, "{spec}: C1 & C2 re-verification");
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs() < 60, "{spec}: find_c2 took {elapsed:?}");
    }
    println!("[PASS] criterion 5: find_c2 succeeds with C1 & C2 on the whole grid");
}

// ---------------------------------------------------------------------------
// criterion 6: Kac module dichotomy
// ---------------------------------------------------------------------------

/// Independent induced-module oracle for type-I distinguished decompositions:
/// the wedge algebra on g_{-1} tensored with the closed-form irreducible
/// r-module, with the action derived directly from the bracket table.
struct InducedOracle {
    /// basis of g_{-1} as coefficient vectors
    yv: Vec<QVec>,
    /// sl(2)-weight parameter m and the highest weight on the Cartan basis
    m: usize,
    lambda: Vec<Rat>,
    /// weights of the g_{-1} basis vectors and of the r-lowering step
    y_weights: Vec<Vec<Rat>>,
    alpha: Vec<Rat>,
}

impl InducedOracle {
    /// Weight-indexed dimensions of Lambda(g_{-1}) (x) L0(lambda).
    fn dims(&self) -> BTreeMap<Vec<Rat>, usize> {
        let mut out = BTreeMap::new();
        let n = self.yv.len();
        for mask in 0u32..(1 << n) {
            for k in 0..=self.m {
                let mut w: Vec<Rat> = vec![Rat::from_integer(0.into()); self.lambda.len()];
                for (i, x) in self.alpha.iter().enumerate() {
                    w[i] = -x * qz(k as i64);
                }
                for j in 0..n {
                    if mask & (1 << j) != 0 {
                        for (i, x) in self.y_weights[j].iter().enumerate() {
                            w[i] += x;
                        }
                    }
                }
                *out.entry(w).or_insert(0) += 1;
            }
        }
        out
    }
}

fn induced_oracle_sl21(lambda1: i64, lambda2: i64) -> InducedOracle {
    let g = build_family("sl:2,1").unwrap();
    let datum = root_datum(&g).unwrap();
    let degs = g.metadata.z_degree.as_ref().unwrap();
    let dim = g.dim();
    let yv: Vec<QVec> = (0..dim)
        .filter(|&i| degs[i] == -1)
        .map(|i| QVec::unit(dim, i))
        .collect();
    assert_eq!(yv.len(), 2);
    // weights of the g_{-1} vectors against the Cartan basis
    let y_weights: Vec<Vec<Rat>> = yv
        .iter()
        .map(|y| {
            datum
                .cartan
                .iter()
                .map(|h| {
                    let br = g.bracket_vec(h, y);
                    // eigenvector: br = c y
                    let (i, c) = br.leading().map(|(i, c)| (i, c.clone())).unwrap_or((0, qz(0)));
                    let denom = y.get(i);
                    if denom.is_zero() {
                        qz(0)
                    } else {
                        c / denom
                    }
                })
                .collect()
        })
        .collect();
    // the even simple root alpha = eps1 - eps2 has evaluations (2, ...) on the
    // coroot basis; read it off the root datum instead of hardcoding signs
    let dis = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
    let simples = reductive_simples(&g, &datum, &dis).unwrap();
    assert_eq!(simples.len(), 1);
    let alpha = datum.roots[simples[0].0].functional.clone();
    InducedOracle {
        yv,
        m: lambda1 as usize,
        lambda: vec![qz(lambda1), qz(lambda2)],
        y_weights,
        alpha,
    }
}

#[test]
fn criterion_06_kac_dichotomy() {
    // (a) FINITE with the 2^{dim n-_1bar} dim L0 bound, for C1 decompositions
    // of W(2) and sl(2,1) with lambda(h_alpha) <= 2. Each decomposition has
    // its own simple r-system, so lambda is produced from target values of
    // lambda(h_alpha) by an exact linear solve.
    let dominant_lambda = |datum: &RootDatum,
                           simples: &[(usize, superlie::triangular::Triple)],
                           targets: &[i64]|
     -> Vec<Rat> {
        let rank = datum.cartan.len();
        let mut rows = Vec::new();
        for (_, t) in simples {
            rows.push(
                superlie::qlinalg::coords_in_basis(&datum.cartan, &t.h)
                    .expect("coroot in Cartan"),
            );
        }
        let m = superlie::qlinalg::SparseMatrix::from_rows(rows, rank);
        let b = QVec::from_dense(&targets.iter().map(|&x| qz(x)).collect::<Vec<_>>());
        superlie::qlinalg::solve(&m, &b).expect("dominant lambda exists").to_dense()
    };
    let bound_cases: Vec<(&str, Vec<Decomposition>)> = {
        let mut cases = Vec::new();
        {
            let g = build_family("W:2").unwrap();
            let datum = root_datum(&g).unwrap();
            let bmax = standard_decomposition(&g, &datum, StandardKind::BMax).unwrap();
            let b1 = find_c2_decomposition(&g, &datum).unwrap();
            cases.push(("W:2", vec![bmax, b1]));
        }
        {
            let g = build_family("sl:2,1").unwrap();
            let datum = root_datum(&g).unwrap();
            let dis = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
            let c2 = find_c2_decomposition(&g, &datum).unwrap();
            cases.push(("sl:2,1", vec![dis, c2]));
        }
        cases
    };
    for (spec, decs) in bound_cases {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        for dec in &decs {
            let flags = check_conditions(&g, &datum, dec).unwrap();
            assert!(flags.c1, "{spec}: test decomposition must satisfy C1");
            let simples = reductive_simples(&g, &datum, dec).unwrap();
            let lams: Vec<Vec<Rat>> = [0i64, 1, 2]
                .iter()
                .map(|&t| dominant_lambda(&datum, &simples, &vec![t; simples.len()]))
                .collect();
            let odd_lower: u32 = datum
                .roots
                .iter()
                .enumerate()
                .filter(|(i, r)| !dec.positive[*i] && r.parity == Parity::Odd)
                .map(|(_, r)| r.mult() as u32)
                .sum();
            for lam in &lams {
                let m = kac_module(&g, &datum, dec, lam, None)
                    .unwrap_or_else(|e| panic!("{spec} lambda {lam:?}: {e}"));
                let total = match m.certificate {
                    Certificate::Finite(d) => d,
                    ref c => panic!("{spec} lambda {lam:?}: expected FINITE, got {c:?}"),
                };
                let l0 = r_highest_weight_module(&g, &datum, dec, lam, None).unwrap();
                assert!(
                    total <= 2usize.pow(odd_lower) * l0.total_dim(),
                    "{spec} lambda {lam:?}: dim {total} exceeds the bound"
                );
            }
        }
    }

    // (b) sl(2,1) distinguished Kac modules match the induced-module oracle
    // weight by weight for lambda(h_alpha) <= 2
    {
        let g = build_family("sl:2,1").unwrap();
        let datum = root_datum(&g).unwrap();
        let dis = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        for (l1, l2) in [(0i64, 0i64), (1, 0), (2, 0), (2, 1)] {
            let lam = vec![qz(l1), qz(l2)];
            let m = kac_module(&g, &datum, &dis, &lam, None).unwrap();
            let mut engine_dims: BTreeMap<Vec<Rat>, usize> = BTreeMap::new();
            for (off, _, d) in m.dims() {
                engine_dims.insert(off, d);
            }
            let oracle = induced_oracle_sl21(l1, l2).dims();
            assert_eq!(engine_dims, oracle, "sl(2,1) lambda=({l1},{l2}) induced oracle");
        }
    }

    // (c) the structural INFINITE certificate: fires for W(3) + b_min (the
    // parabolic-with-even-complement configuration); W(2) + b_min has a
    // purely odd complement, stays C1 and is honestly FINITE (see ledger)
    {
        let g = build_family("W:3").unwrap();
        let datum = root_datum(&g).unwrap();
        let bmin = standard_decomposition(&g, &datum, StandardKind::BMin).unwrap();
        let flags = check_conditions(&g, &datum, &bmin).unwrap();
        assert!(!flags.c1 && flags.parabolic && flags.even_complement);
        let lam = vec![qz(0); datum.cartan.len()];
        let m = kac_module(&g, &datum, &bmin, &lam, None).unwrap();
        assert_eq!(
            m.certificate,
            Certificate::Infinite("parabolic_even_complement".into())
        );
    }
    {
        let g = build_family("W:2").unwrap();
        let datum = root_datum(&g).unwrap();
        let bmin = standard_decomposition(&g, &datum, StandardKind::BMin).unwrap();
        let flags = check_conditions(&g, &datum, &bmin).unwrap();
        assert!(flags.c1 && flags.parabolic && !flags.even_complement);
        let m = kac_module(&g, &datum, &bmin, &[qz(0), qz(0)], None).unwrap();
        assert!(matches!(m.certificate, Certificate::Finite(_)));
    }
    println!("[PASS] criterion 6: Kac module dichotomy (bound, induced oracle, INFINITE certificate)");
}

#[test]
fn criterion_07_weyl_scans_and_theta() {
    // osp(1|2): both chambers STABILIZED
    {
        let g = build_family("osp:1,2").unwrap();
        let datum = root_datum(&g).unwrap();
        let chambers = enumerate_chambers(&g, &datum).unwrap();
        assert_eq!(chambers.len(), 2);
        for dec in &chambers {
            let simples = reductive_simples(&g, &datum, dec).unwrap();
            // a dominant nonzero weight for this chamber
            let lam_h = pair_weight_with_coroot(&datum, &[qz(1)], &simples[0].1);
            let lam = if num::Signed::is_negative(&lam_h) { qz(-2) } else { qz(2) };
            let mut pattern = PsiTable::new();
            pattern.insert((0, 0), lam);
            let report = truncation_scan(&g, &datum, dec, &pattern, 4, None).unwrap();
            assert!(
                matches!(report.verdict, ScanVerdict::Stabilized(_)),
                "osp(1|2) chamber verdict {:?} dims {:?}",
                report.verdict,
                report.dims
            );
        }
    }
    // sl(2,1) distinguished: unbounded evidence with the 2^{k dim n-_1bar} dims
    {
        let g = build_family("sl:2,1").unwrap();
        let datum = root_datum(&g).unwrap();
        let dis = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let report = truncation_scan(&g, &datum, &dis, &PsiTable::new(), 4, None).unwrap();
        assert_eq!(report.verdict, ScanVerdict::UnboundedEvidence);
        let dims: Vec<usize> = report.dims.iter().map(|d| d.unwrap()).collect();
        assert_eq!(dims, vec![4, 16, 64, 256]);
        // non-parabolic (one odd reflection away): stabilizes
        let system = simple_system(&g, &datum, &dis).unwrap();
        let beta = *system
            .simples
            .iter()
            .find(|&&i| datum.roots[i].parity == Parity::Odd)
            .unwrap();
        let (_, refl) = odd_reflection(&g, &datum, &dis, &system, beta).unwrap();
        let flags = check_conditions(&g, &datum, &refl).unwrap();
        assert!(!flags.parabolic);
        let report = truncation_scan(&g, &datum, &refl, &PsiTable::new(), 4, None).unwrap();
        assert!(matches!(report.verdict, ScanVerdict::Stabilized(_)));
    }
    // theta criterion agrees with the classification on every enumerated
    // chamber of every basic classical grid member
    for spec in basic_classical_grid() {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        let chambers = enumerate_chambers(&g, &datum).unwrap();
        assert!(!chambers.is_empty(), "{spec}: no chambers found");
        for dec in &chambers {
            let theta = theta_criterion(&g, &datum, dec).unwrap();
            match g.metadata.class {
                AlgClass::BasicTypeII => {
                    assert!(theta, "{spec}: type II chamber must satisfy the theta criterion")
                }
                AlgClass::BasicTypeI => {
                    let flags = check_conditions(&g, &datum, dec).unwrap();
                    assert_eq!(
                        theta, !flags.parabolic,
                        "{spec}: type I theta must equal non-parabolicity"
                    );
                }
                _ => {}
            }
        }
    }
    println!("[PASS] criterion 7: truncation scans and theta criterion match the classification");
}

#[test]
fn criterion_08_garland() {
    // expansion oracle: exp(-sum H_i/i u^i) computed by brute-force series
    // multiplication, independently of the recursion in garland_coefficients
    let oracle = {
        // polynomial in symbols H_1..H_3 with rational coefficients, as a
        // map multiset -> coefficient; series in u truncated at degree 3
        type Poly = BTreeMap<Vec<u32>, Rat>;
        let nmax = 3usize;
        let mut series: Vec<Poly> = vec![BTreeMap::new(); nmax + 1];
        series[0].insert(vec![], qz(1));
        // S = -sum_{i=1..3} (H_i / i) u^i; exp(S) = sum S^k / k!
        let s: Vec<Poly> = (0..=nmax)
            .map(|d| {
                let mut p = Poly::new();
                if d >= 1 {
                    p.insert(vec![d as u32], -Rat::new(1.into(), (d as i64).into()));
                }
                p
            })
            .collect();
        let mul = |a: &Vec<Poly>, b: &Vec<Poly>| -> Vec<Poly> {
            let mut out: Vec<Poly> = vec![BTreeMap::new(); nmax + 1];
            for da in 0..=nmax {
                for db in 0..=(nmax - da) {
                    for (ma, ca) in &a[da] {
                        for (mb, cb) in &b[db] {
                            let mut m = ma.clone();
                            m.extend(mb.iter().copied());
                            m.sort();
                            let e = out[da + db].entry(m).or_insert_with(|| qz(0));
                            *e += ca * cb;
                        }
                    }
                }
            }
            out
        };
        let mut acc: Vec<Poly> = vec![BTreeMap::new(); nmax + 1];
        acc[0].insert(vec![], qz(1));
        let mut spow: Vec<Poly> = acc.clone();
        let mut fact = qz(1);
        for k in 1..=nmax {
            spow = mul(&spow, &s);
            fact *= qz(k as i64);
            for d in 0..=nmax {
                for (m, c) in &spow[d] {
                    let e = acc[d].entry(m.clone()).or_insert_with(|| qz(0));
                    *e += c / &fact;
                }
            }
        }
        for p in acc.iter_mut() {
            p.retain(|_, c| !num::Zero::is_zero(c));
        }
        acc
    };
    let ps = garland_coefficients(3);
    for d in 0..=3usize {
        let expect: Vec<(Vec<u32>, Rat)> =
            oracle[d].iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let got: Vec<(Vec<u32>, Rat)> = ps[d].iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        assert_eq!(got, expect, "p_{d} against the expansion oracle");
    }

    // the identity itself, for the sl(2) inside sl(2) and inside sl(2,1)
    let jets = jet_algebra("0^4").unwrap();
    let t = QVec::unit(4, 1);
    let mut one_plus_t = QVec::unit(4, 0);
    one_plus_t.set(1, qz(1));
    let start = std::time::Instant::now();
    for spec in ["sl:2", "sl:2,1"] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let simples = reductive_simples(&g, &datum, &dec).unwrap();
        for (_, triple) in &simples {
            for m in 0..=3usize {
                for a in [&t, &one_plus_t] {
                    assert!(garland_verify(&g, triple, &jets, a, m), "{spec}: m={m}");
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 60);
    println!("[PASS] criterion 8: Garland identity for m <= 3 over k[t]/(t^4), a in {{t, 1+t}}");
}

#[test]
fn criterion_09_tensor_products() {
    for spec in ["sl:2", "osp:1,2"] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
        let ja = jet_algebra("0^1").unwrap();
        let jb = jet_algebra("1^1").unwrap();
        for (l, m) in [(0i64, 1i64), (1, 1), (1, 2), (2, 1), (3, 0)] {
            let mut pa = PsiTable::new();
            pa.insert((0, 0), qz(l));
            let mut pb = PsiTable::new();
            pb.insert((0, 0), qz(m));
            let rep = tensor_check(&g, &datum, &dec, &ja, &pa, &jb, &pb, None)
                .unwrap_or_else(|e| panic!("{spec} ({l},{m}): {e}"));
            assert!(rep.total_product_ok, "{spec} ({l},{m}): total product");
            assert!(rep.weightwise_ok, "{spec} ({l},{m}): weightwise product");
        }
    }
    println!("[PASS] criterion 9: tensor factorization at two distinct points");
}

#[test]
fn criterion_10_determinism_and_roundtrip() {
    // serialization round-trips bit-exactly
    for spec in ["W:3", "p:2", "osp:3,2"] {
        let g = build_family(spec).unwrap();
        let v1 = superlie::superalg::algebra_to_json(&g);
        let g2 = superlie::superalg::algebra_from_json(&v1).unwrap();
        let v2 = superlie::superalg::algebra_to_json(&g2);
        assert_eq!(
            serde_json::to_string(&v1).unwrap(),
            serde_json::to_string(&v2).unwrap(),
            "{spec} round-trip"
        );
    }
    // report construction is deterministic across repeated computation
    let make_report = || {
        let g = build_family("p:2").unwrap();
        let datum = root_datum(&g).unwrap();
        let dec = find_c2_decomposition(&g, &datum).unwrap();
        let flags = check_conditions(&g, &datum, &dec).unwrap();
        let rep = superlie::report::decomposition_report(&g, &datum, &dec, &flags);
        serde_json::to_string_pretty(&rep).unwrap()
    };
    assert_eq!(make_report(), make_report());
    let roots_rep = |spec: &str| {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        serde_json::to_string(&superlie::report::roots_report(&g, &datum)).unwrap()
    };
    assert_eq!(roots_rep("H:4"), roots_rep("H:4"));
    println!("[PASS] criterion 10: determinism and bit-exact round-trips");
}

// ---------------------------------------------------------------------------
// cross-cutting invariants backing the criteria
// ---------------------------------------------------------------------------

#[test]
fn invariant_bracket_grading() {
    // [g_a, g_b] lands in g_{a+b}, in the Cartan, or vanishes; exhaustive on
    // representative members (S~ is excluded: its formal heights wrap mod n)
    for spec in ["W:2", "W:3", "S:3", "H:4", "p:2", "sl:2,1", "osp:3,2"] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        for a in &datum.roots {
            for b in &datum.roots {
                let target: Vec<Rat> =
                    a.functional.iter().zip(&b.functional).map(|(x, y)| x + y).collect();
                for va in &a.space {
                    for vb in &b.space {
                        let w = g.bracket_vec(va, vb);
                        if w.is_zero() {
                            continue;
                        }
                        if target.iter().all(|x| num::Zero::is_zero(x)) {
                            assert!(
                                datum.cartan_space.contains(&w),
                                "{spec}: [a,b] with a+b=0 must be in the Cartan"
                            );
                        } else {
                            let ti = datum
                                .root_index(&target)
                                .unwrap_or_else(|| panic!("{spec}: a+b not a root but bracket != 0"));
                            let sp = superlie::superalg::Subspace {
                                alg_id: g.id,
                                basis: datum.roots[ti].space.clone(),
                            };
                            assert!(sp.contains(&w), "{spec}: bracket escapes g_(a+b)");
                        }
                    }
                }
            }
        }
    }
    println!("[PASS] invariant: bracket grading [g_a, g_b] in g_(a+b)");
}

#[test]
fn invariant_even_odd_heights_cartan_type() {
    // R_0bar = union of even-height layers, R_1bar = odd-height layers
    for spec in ["W:2", "W:3", "W:4", "S:3", "S:4", "H:4", "H:5"] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        for r in &datum.roots {
            let h = r.height.unwrap();
            let expect = if h.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
            assert_eq!(r.parity, expect, "{spec}: height/parity compatibility");
        }
    }
    println!("[PASS] invariant: even/odd root layers match height parity for Cartan type");
}

#[test]
fn invariant_type_ii_has_no_parabolic() {
    // every chamber of osp(1|2) and osp(3|2) is non-parabolic
    for spec in ["osp:1,2", "osp:3,2"] {
        let g = build_family(spec).unwrap();
        let datum = root_datum(&g).unwrap();
        for dec in enumerate_chambers(&g, &datum).unwrap() {
            let flags = check_conditions(&g, &datum, &dec).unwrap();
            assert!(!flags.parabolic, "{spec}: type II admits no parabolic decomposition");
        }
    }
    println!("[PASS] invariant: type II members admit no parabolic decomposition");
}

#[test]
fn invariant_irreducible_quotient_examples() {
    // the sl(2,1) Kac module at lambda = 0 is 4-dimensional with a
    // 1-dimensional irreducible quotient (two singular-vector passes)
    let g = build_family("sl:2,1").unwrap();
    let datum = root_datum(&g).unwrap();
    let dis = standard_decomposition(&g, &datum, StandardKind::Distinguished).unwrap();
    let m = kac_module(&g, &datum, &dis, &[qz(0), qz(0)], None).unwrap();
    assert_eq!(m.certificate, Certificate::Finite(4));
    let cm = concrete_module(&m).unwrap();
    let irr = irreducible_quotient(&cm);
    assert_eq!(irr.total_dim(), 1);
    // classical r-module dimensions
    let sl3 = build_family("sl:3").unwrap();
    let d3 = root_datum(&sl3).unwrap();
    let dec3 = standard_decomposition(&sl3, &d3, StandardKind::Distinguished).unwrap();
    let l = r_highest_weight_module(&sl3, &d3, &dec3, &[qz(1), qz(0)], None).unwrap();
    assert_eq!(l.total_dim(), 3); // omega_1 of sl(3)
    println!("[PASS] invariant: irreducible quotient matches classical values");
}
