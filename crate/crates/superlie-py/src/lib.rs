//! Python bindings: a thin layer over the core crate exposing the main
//! constructions. Structured results come back as JSON strings with the same
//! schemas the CLI writes.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use superlie::hwengine::{self, PsiTable};
use superlie::qlinalg::{parse_rat, QVec};
use superlie::realize::build_family;
use superlie::report;
use superlie::roots::root_datum;
use superlie::superalg::{algebra_from_json, algebra_to_json, LieSuperalgebra};
use superlie::triangular::{
    check_conditions, find_c2_decomposition, positive_system, standard_decomposition,
    Decomposition, StandardKind,
};
use superlie::weyl;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn load(alg: &str) -> PyResult<LieSuperalgebra> {
    if alg.trim_start().starts_with('{') {
        let val: serde_json::Value = serde_json::from_str(alg).map_err(err)?;
        algebra_from_json(&val).map_err(err)
    } else {
        build_family(alg).map_err(err)
    }
}

fn borel(
    g: &LieSuperalgebra,
    datum: &superlie::roots::RootDatum,
    spec: &str,
) -> PyResult<Decomposition> {
    match spec {
        "distinguished" => {
            standard_decomposition(g, datum, StandardKind::Distinguished).map_err(err)
        }
        "bmax" => standard_decomposition(g, datum, StandardKind::BMax).map_err(err),
        "bmin" => standard_decomposition(g, datum, StandardKind::BMin).map_err(err),
        "find-c2" => find_c2_decomposition(g, datum).map_err(err),
        other => {
            let rest = other
                .strip_prefix("witness:")
                .ok_or_else(|| err("borel must be distinguished|bmax|bmin|find-c2|witness:..."))?;
            let coords: Result<Vec<_>, _> = rest.split(',').map(parse_rat).collect();
            let w = QVec::from_dense(&coords.map_err(err)?);
            positive_system(g, datum, &w).map_err(err)
        }
    }
}

fn psi_from_pairs(pairs: Vec<(usize, usize, String)>) -> PyResult<PsiTable> {
    let mut table = PsiTable::new();
    for (i, a, v) in pairs {
        table.insert((i, a), parse_rat(&v).map_err(err)?);
    }
    Ok(table)
}

/// Builds a family (e.g. "W:2", "sl:2,1", "osp:3,2") and returns the algebra
/// document as JSON; skew and Jacobi are verified during the build.
#[pyfunction]
fn build(family: &str) -> PyResult<String> {
    let g = build_family(family).map_err(err)?;
    Ok(algebra_to_json(&g).to_string())
}

/// Dimension of a family or algebra document.
#[pyfunction]
fn dimension(alg: &str) -> PyResult<usize> {
    Ok(load(alg)?.dim())
}

/// Root report JSON (functionals, parities, heights, multiplicities).
#[pyfunction]
fn roots(alg: &str) -> PyResult<String> {
    let g = load(alg)?;
    let datum = root_datum(&g).map_err(err)?;
    Ok(report::roots_report(&g, &datum).to_string())
}

/// Decomposition report JSON for a named Borel (see `borel` argument forms).
#[pyfunction]
fn borel_check(alg: &str, borel_spec: &str) -> PyResult<String> {
    let g = load(alg)?;
    let datum = root_datum(&g).map_err(err)?;
    let dec = borel(&g, &datum, borel_spec)?;
    let flags = check_conditions(&g, &datum, &dec).map_err(err)?;
    Ok(report::decomposition_report(&g, &datum, &dec, &flags).to_string())
}

/// Generalized Kac module report for lambda given on the Cartan basis.
#[pyfunction]
#[pyo3(signature = (alg, borel_spec, lambda, cutoff=None))]
fn kac(alg: &str, borel_spec: &str, lambda: Vec<String>, cutoff: Option<i64>) -> PyResult<String> {
    let g = load(alg)?;
    let datum = root_datum(&g).map_err(err)?;
    let dec = borel(&g, &datum, borel_spec)?;
    let lam: Result<Vec<_>, _> = lambda.iter().map(|s| parse_rat(s)).collect();
    let lam = lam.map_err(err)?;
    let m = hwengine::kac_module(&g, &datum, &dec, &lam, cutoff).map_err(err)?;
    Ok(report::module_report(&lam, &m).to_string())
}

/// Local Weyl module report over a jet algebra; psi entries are
/// (cartan_index, jet_index, "p/q") triples.
#[pyfunction]
#[pyo3(signature = (alg, borel_spec, jet, psi, cutoff=None))]
fn local_weyl(
    alg: &str,
    borel_spec: &str,
    jet: &str,
    psi: Vec<(usize, usize, String)>,
    cutoff: Option<i64>,
) -> PyResult<String> {
    let g = load(alg)?;
    let datum = root_datum(&g).map_err(err)?;
    let dec = borel(&g, &datum, borel_spec)?;
    let jets = weyl::jet_algebra(jet).map_err(err)?;
    let table = psi_from_pairs(psi)?;
    let lw = weyl::local_weyl(&g, &datum, &dec, &jets, &table, cutoff).map_err(err)?;
    Ok(report::module_report(&lw.lambda, &lw.module).to_string())
}

/// Truncation scan over k[t]/(t^N); returns the scan report JSON.
#[pyfunction]
#[pyo3(signature = (alg, borel_spec, psi, nmax, cutoff=None))]
fn weyl_scan(
    alg: &str,
    borel_spec: &str,
    psi: Vec<(usize, usize, String)>,
    nmax: usize,
    cutoff: Option<i64>,
) -> PyResult<String> {
    let g = load(alg)?;
    let datum = root_datum(&g).map_err(err)?;
    let dec = borel(&g, &datum, borel_spec)?;
    let table = psi_from_pairs(psi)?;
    let scan = weyl::truncation_scan(&g, &datum, &dec, &table, nmax, cutoff).map_err(err)?;
    let theta = weyl::theta_criterion(&g, &datum, &dec).map_err(err)?;
    let flags = check_conditions(&g, &datum, &dec).map_err(err)?;
    Ok(report::scan_report(&scan, theta, &flags).to_string())
}

/// Garland identity check for every simple r-root, for 0 <= m <= mmax.
#[pyfunction]
fn garland(alg: &str, borel_spec: &str, jet: &str, coeffs: Vec<String>, mmax: usize) -> PyResult<bool> {
    let g = load(alg)?;
    let datum = root_datum(&g).map_err(err)?;
    let dec = borel(&g, &datum, borel_spec)?;
    let jets = weyl::jet_algebra(jet).map_err(err)?;
    let a: Result<Vec<_>, _> = coeffs.iter().map(|s| parse_rat(s)).collect();
    let a = QVec::from_dense(&a.map_err(err)?);
    let simples =
        superlie::triangular::reductive_simples(&g, &datum, &dec).map_err(err)?;
    for m in 0..=mmax {
        for (_, t) in &simples {
            if !weyl::garland_verify(&g, t, &jets, &a, m) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[pymodule]
fn superlie_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(dimension, m)?)?;
    m.add_function(wrap_pyfunction!(roots, m)?)?;
    m.add_function(wrap_pyfunction!(borel_check, m)?)?;
    m.add_function(wrap_pyfunction!(kac, m)?)?;
    m.add_function(wrap_pyfunction!(local_weyl, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_scan, m)?)?;
    m.add_function(wrap_pyfunction!(garland, m)?)?;
    Ok(())
}
