//! Stable JSON reports for every subsystem. All arrays are explicitly sorted
//! so identical inputs serialize to identical bytes; rationals are encoded as
//! strings ("p" or "p/q").

use crate::hwengine::{Certificate, ConcreteModule, CyclicModule};
use crate::qlinalg::{QVec, Rat};
use crate::roots::{extremal_root, Direction, RootDatum};
use crate::superalg::LieSuperalgebra;
use crate::triangular::{Decomposition, Flags};
use crate::weyl::{Ideals, JetAlgebra, ScanReport, ScanVerdict};
use num::One;
use serde_json::{json, Value};

pub fn rat_str(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rats(xs: &[Rat]) -> Vec<String> {
    xs.iter().map(rat_str).collect()
}

pub fn qvec_dense(v: &QVec) -> Vec<String> {
    rats(&v.to_dense())
}

/// Root report: one entry per root, in the datum's canonical order.
pub fn roots_report(g: &LieSuperalgebra, datum: &RootDatum) -> Value {
    let entries: Vec<Value> = datum
        .roots
        .iter()
        .map(|r| {
            let labels: Vec<String> = r
                .space
                .iter()
                .map(|v| {
                    let mut parts: Vec<String> = Vec::new();
                    for (i, c) in v.iter() {
                        if c.is_one() {
                            parts.push(g.labels[i].clone());
                        } else {
                            parts.push(format!("{}*{}", rat_str(c), g.labels[i]));
                        }
                    }
                    parts.join("+")
                })
                .collect();
            json!({
                "functional": rats(&r.functional),
                "parity": r.parity.bit(),
                "height": r.height,
                "multiplicity": r.mult(),
                "eps": r.eps,
                "space_basis_labels": labels,
            })
        })
        .collect();
    json!({
        "rank": datum.rank,
        "extended": datum.extended,
        "dim": g.dim(),
        "roots": entries,
    })
}

/// Decomposition report: witness, positive roots, condition flags, theta.
pub fn decomposition_report(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    dec: &Decomposition,
    flags: &Flags,
) -> Value {
    let positive: Vec<Vec<String>> = dec
        .positive_indices()
        .iter()
        .map(|&i| rats(&datum.roots[i].functional))
        .collect();
    let theta = extremal_root(g, datum, dec, Direction::Lowest).ok().map(|i| {
        // the lowest root is -theta
        let neg: Vec<Rat> = datum.roots[i].functional.iter().map(|x| -x.clone()).collect();
        rats(&neg)
    });
    json!({
        "witness": qvec_dense(&dec.witness),
        "positive_roots": positive,
        "flags": {
            "C1": flags.c1,
            "C2": flags.c2,
            "parabolic": flags.parabolic,
            "even_complement": flags.even_complement,
        },
        "theta": theta,
    })
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Finite(d) => json!({"kind": "FINITE", "dim": d}),
        Certificate::Truncated { cutoff_depth } => {
            json!({"kind": "TRUNCATED", "cutoff_depth": cutoff_depth})
        }
        Certificate::Infinite(reason) => json!({"kind": "INFINITE", "reason": reason}),
    }
}

/// Module report: lambda, certificate, weight dimensions sorted by
/// (depth, coordinates), total dimension when finite.
pub fn module_report(lambda: &[Rat], m: &CyclicModule) -> Value {
    let dims: Vec<Value> = m
        .dims()
        .iter()
        .map(|(off, depth, dim)| json!({"weight_offset": rats(off), "depth": depth, "dim": dim}))
        .collect();
    json!({
        "lambda": rats(lambda),
        "certificate": certificate_json(&m.certificate),
        "dims": dims,
        "total_dim": m.total_dim(),
    })
}

pub fn concrete_report(lambda: &[Rat], m: &ConcreteModule) -> Value {
    let dims: Vec<Value> = m
        .dims()
        .iter()
        .map(|(off, depth, dim)| json!({"weight_offset": rats(off), "depth": depth, "dim": dim}))
        .collect();
    json!({
        "lambda": rats(lambda),
        "dims": dims,
        "total_dim": m.total_dim(),
    })
}

pub fn scan_report(r: &ScanReport, theta: bool, flags: &Flags) -> Value {
    let verdict = match &r.verdict {
        ScanVerdict::UnboundedEvidence => json!({"kind": "UNBOUNDED_EVIDENCE"}),
        ScanVerdict::Stabilized(n0) => json!({"kind": "STABILIZED", "from": n0}),
        ScanVerdict::StabilizedUncertified(n0) => {
            json!({"kind": "STABILIZED_UNCERTIFIED", "from": n0})
        }
        ScanVerdict::Inconclusive => json!({"kind": "INCONCLUSIVE"}),
    };
    json!({
        "verdict": verdict,
        "dims_by_N": r.dims,
        "theta_criterion": theta,
        "flags": {
            "C1": flags.c1,
            "C2": flags.c2,
            "parabolic": flags.parabolic,
        },
    })
}

pub fn ideals_report(jets: &JetAlgebra, ideals: &Ideals) -> Value {
    let basis = |vs: &[QVec]| -> Vec<Vec<String>> { vs.iter().map(qvec_dense).collect() };
    let pts: Vec<String> =
        jets.points.iter().map(|(c, n)| format!("{}^{}", rat_str(c), n)).collect();
    json!({
        "jet_points": pts,
        "I_psi_basis": basis(&ideals.i_psi),
        "J_psi_basis": basis(&ideals.j_psi),
        "supports": {
            "I_psi": ideals.supp_i,
            "J_psi": ideals.supp_j,
        },
    })
}
