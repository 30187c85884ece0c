//! Command-line front end: builds algebras, computes root data, constructs
//! and classifies triangular decompositions, and runs the module engines,
//! writing deterministic JSON reports.
//!
//! Exit codes: 0 success, 2 domain error (invalid input, infeasible request),
//! 1 internal failure.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

use superlie::hwengine::{self, PsiTable};
use superlie::qlinalg::{parse_rat, QVec, Rat};
use superlie::realize::build_family;
use superlie::report;
use superlie::roots::{root_datum, RootDatum};
use superlie::superalg::{algebra_from_json, algebra_to_json, LieSuperalgebra};
use superlie::triangular::{
    check_conditions, enumerate_chambers, find_c2_decomposition, positive_system,
    serganova_reflection, standard_decomposition, Decomposition, StandardKind,
};
use superlie::weyl;

#[derive(Parser)]
#[command(name = "superlie", version, about = "exact Lie superalgebra toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build and validate algebras
    Alg {
        #[command(subcommand)]
        cmd: AlgCmd,
    },
    /// Root space decompositions
    Roots {
        #[command(subcommand)]
        cmd: RootsCmd,
    },
    /// Triangular decompositions and condition checks
    Borel {
        #[command(subcommand)]
        cmd: BorelCmd,
    },
    /// Highest-weight modules over g
    Module {
        #[command(subcommand)]
        cmd: ModuleCmd,
    },
    /// Map superalgebras and local Weyl modules
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
}

#[derive(Args)]
struct AlgArg {
    /// family spec (e.g. W:2, S~:4, p:2, sl:2,1, osp:3,2, A:1,1) or a path to
    /// an algebra JSON file
    #[arg(long)]
    alg: String,
}

#[derive(Args)]
struct BorelArg {
    /// distinguished | bmax | bmin | find-c2 | witness:c1,c2,... | path to a
    /// decomposition JSON file
    #[arg(long)]
    borel: String,
}

#[derive(Args)]
struct OutArg {
    /// output path for the JSON report (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AlgCmd {
    /// Build a family from its spec and write the algebra document
    Build {
        /// family spec, e.g. W:2 or sl:2,1
        #[arg(long)]
        family: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Re-validate an algebra document (skew + Jacobi are re-checked on load)
    Validate {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum RootsCmd {
    /// Compute the root space decomposition
    Compute {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum BorelCmd {
    /// The distinguished decomposition (positive heights plus the standard
    /// even chamber)
    Distinguished {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decomposition induced by an explicit regular element
    FromWitness {
        #[command(flatten)]
        alg: AlgArg,
        /// comma-separated rational coordinates over the Cartan basis
        /// (plus the grading coordinate when the datum is extended)
        #[arg(long)]
        witness: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Serganova reflection at a simple root given by its functional
    Reflect {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        /// comma-separated functional of the root to reflect at
        #[arg(long)]
        at: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Search for a decomposition satisfying C1 and C2
    FindC2 {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Report C1/C2/parabolic flags of a decomposition
    Check {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Enumerate all triangular decompositions (small root systems)
    Enumerate {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// Generalized Kac module K(lambda)
    Kac {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        /// comma-separated rational values of lambda on the Cartan basis
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        cutoff: Option<i64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Irreducible quotient of a FINITE Kac module
    Irreducible {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        cutoff: Option<i64>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Local Weyl module over a jet algebra
    Local {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        /// jet spec, e.g. 0^3 or 0^2+1^2 (jet: prefixes accepted)
        #[arg(long)]
        jet: String,
        /// psi file: {"entries": [[cartan_index, jet_index, "p/q"], ...]}
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        cutoff: Option<i64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Truncation scan over k[t]/(t^N), N = 1..nmax
    Scan {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        /// psi pattern file (entries must have jet degree 0)
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        cutoff: Option<i64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Garland identity check over a jet algebra
    Garland {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        #[arg(long)]
        jet: String,
        /// comma-separated coordinates of a over the jet basis
        #[arg(long)]
        coeffs: String,
        #[arg(long, default_value_t = 3)]
        mmax: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Annihilating ideals I_psi and J_psi of a finite local Weyl module
    Ideals {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        #[arg(long)]
        jet: String,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        cutoff: Option<i64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Tensor factorization check over two jet algebras
    TensorCheck {
        #[command(flatten)]
        alg: AlgArg,
        #[command(flatten)]
        borel: BorelArg,
        #[arg(long)]
        jet_a: String,
        #[arg(long)]
        psi_a: PathBuf,
        #[arg(long)]
        jet_b: String,
        #[arg(long)]
        psi_b: PathBuf,
        #[arg(long)]
        cutoff: Option<i64>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug)]
enum CliError {
    Domain(String),
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(s) => write!(f, "{s}"),
            CliError::Internal(s) => write!(f, "internal error: {s}"),
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn load_algebra(spec: &str) -> Result<LieSuperalgebra, CliError> {
    if spec.contains(':') && !std::path::Path::new(spec).exists() {
        return build_family(spec).map_err(domain);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| CliError::Domain(format!("cannot read {spec}: {e}")))?;
    let val: Value = serde_json::from_str(&text).map_err(domain)?;
    let doc = if val.get("report").is_some() {
        &val["report"]["algebra"]
    } else if val.get("algebra").is_some() {
        &val["algebra"]
    } else {
        &val
    };
    algebra_from_json(doc).map_err(CliError::Domain)
}

fn parse_rat_list(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',').map(|t| parse_rat(t).map_err(CliError::Domain)).collect()
}

fn load_decomposition(
    g: &LieSuperalgebra,
    datum: &RootDatum,
    spec: &str,
) -> Result<Decomposition, CliError> {
    match spec {
        "distinguished" => {
            standard_decomposition(g, datum, StandardKind::Distinguished).map_err(domain)
        }
        "bmax" => standard_decomposition(g, datum, StandardKind::BMax).map_err(domain),
        "bmin" => standard_decomposition(g, datum, StandardKind::BMin).map_err(domain),
        "find-c2" => find_c2_decomposition(g, datum).map_err(domain),
        _ => {
            let witness = if let Some(rest) = spec.strip_prefix("witness:") {
                QVec::from_dense(&parse_rat_list(rest)?)
            } else {
                let text = std::fs::read_to_string(spec)
                    .map_err(|e| CliError::Domain(format!("cannot read {spec}: {e}")))?;
                let val: Value = serde_json::from_str(&text).map_err(domain)?;
                let arr = val["report"]["witness"]
                    .as_array()
                    .or_else(|| val["witness"].as_array())
                    .ok_or_else(|| CliError::Domain("no witness in decomposition file".into()))?;
                let coords: Result<Vec<Rat>, CliError> = arr
                    .iter()
                    .map(|x| parse_rat(x.as_str().unwrap_or_default()).map_err(CliError::Domain))
                    .collect();
                QVec::from_dense(&coords?)
            };
            positive_system(g, datum, &witness).map_err(domain)
        }
    }
}

fn load_psi(path: &PathBuf) -> Result<PsiTable, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("cannot read psi file: {e}")))?;
    let val: Value = serde_json::from_str(&text).map_err(domain)?;
    let mut table = PsiTable::new();
    for e in val["entries"].as_array().ok_or_else(|| {
        CliError::Domain("psi file must be {\"entries\": [[i, a, \"p/q\"], ...]}".into())
    })? {
        let arr = e.as_array().ok_or_else(|| CliError::Domain("bad psi entry".into()))?;
        let i =
            arr[0].as_u64().ok_or_else(|| CliError::Domain("bad psi index".into()))? as usize;
        let a =
            arr[1].as_u64().ok_or_else(|| CliError::Domain("bad psi index".into()))? as usize;
        let x = parse_rat(arr[2].as_str().unwrap_or_default()).map_err(CliError::Domain)?;
        table.insert((i, a), x);
    }
    Ok(table)
}

fn emit(out: &OutArg, config: Value, report: Value) -> Result<(), CliError> {
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "report": report,
    });
    let text =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
    match &out.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Internal(format!("cannot write output: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn datum_of(g: &LieSuperalgebra) -> Result<RootDatum, CliError> {
    root_datum(g).map_err(domain)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Alg { cmd } => match cmd {
            AlgCmd::Build { family, out } => {
                let g = build_family(&family).map_err(domain)?;
                let config = json!({"command": "alg build", "family": family});
                let report = json!({
                    "dimension": g.dim(),
                    "even_dimension": g.parity.iter().filter(|p| p.bit() == 0).count(),
                    "algebra": algebra_to_json(&g),
                });
                emit(&out, config, report)
            }
            AlgCmd::Validate { alg, out } => {
                let g = load_algebra(&alg.alg)?;
                let config = json!({"command": "alg validate", "alg": alg.alg});
                emit(&out, config, json!({"valid": true, "dimension": g.dim()}))
            }
        },
        Cmd::Roots { cmd } => match cmd {
            RootsCmd::Compute { alg, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let config = json!({"command": "roots compute", "alg": alg.alg});
                emit(&out, config, report::roots_report(&g, &datum))
            }
        },
        Cmd::Borel { cmd } => match cmd {
            BorelCmd::Distinguished { alg, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = standard_decomposition(&g, &datum, StandardKind::Distinguished)
                    .map_err(domain)?;
                let flags = check_conditions(&g, &datum, &dec).map_err(domain)?;
                let config = json!({"command": "borel distinguished", "alg": alg.alg});
                emit(&out, config, report::decomposition_report(&g, &datum, &dec, &flags))
            }
            BorelCmd::FromWitness { alg, witness, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let w = QVec::from_dense(&parse_rat_list(&witness)?);
                let dec = positive_system(&g, &datum, &w).map_err(domain)?;
                let flags = check_conditions(&g, &datum, &dec).map_err(domain)?;
                let config =
                    json!({"command": "borel from-witness", "alg": alg.alg, "witness": witness});
                emit(&out, config, report::decomposition_report(&g, &datum, &dec, &flags))
            }
            BorelCmd::Reflect { alg, borel, at, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let f = parse_rat_list(&at)?;
                let ri = datum
                    .root_index(&f)
                    .ok_or_else(|| CliError::Domain(format!("no root with functional {at}")))?;
                let refl = serganova_reflection(&g, &datum, &dec, ri).map_err(domain)?;
                let flags = check_conditions(&g, &datum, &refl).map_err(domain)?;
                let config = json!({
                    "command": "borel reflect", "alg": alg.alg, "borel": borel.borel, "at": at,
                });
                emit(&out, config, report::decomposition_report(&g, &datum, &refl, &flags))
            }
            BorelCmd::FindC2 { alg, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = find_c2_decomposition(&g, &datum).map_err(domain)?;
                let flags = check_conditions(&g, &datum, &dec).map_err(domain)?;
                let config = json!({"command": "borel find-c2", "alg": alg.alg});
                emit(&out, config, report::decomposition_report(&g, &datum, &dec, &flags))
            }
            BorelCmd::Check { alg, borel, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let flags = check_conditions(&g, &datum, &dec).map_err(domain)?;
                let config =
                    json!({"command": "borel check", "alg": alg.alg, "borel": borel.borel});
                emit(&out, config, report::decomposition_report(&g, &datum, &dec, &flags))
            }
            BorelCmd::Enumerate { alg, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let chambers = enumerate_chambers(&g, &datum).map_err(domain)?;
                let mut entries = Vec::new();
                for dec in &chambers {
                    let flags = check_conditions(&g, &datum, dec).map_err(domain)?;
                    entries.push(report::decomposition_report(&g, &datum, dec, &flags));
                }
                let config = json!({"command": "borel enumerate", "alg": alg.alg});
                emit(&out, config, json!({"count": chambers.len(), "chambers": entries}))
            }
        },
        Cmd::Module { cmd } => match cmd {
            ModuleCmd::Kac { alg, borel, lambda, cutoff, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let lam = parse_rat_list(&lambda)?;
                if lam.len() != datum.cartan.len() {
                    return Err(CliError::Domain(format!(
                        "lambda needs {} coordinates",
                        datum.cartan.len()
                    )));
                }
                let m = hwengine::kac_module(&g, &datum, &dec, &lam, cutoff).map_err(domain)?;
                let config = json!({
                    "command": "module kac", "alg": alg.alg, "borel": borel.borel,
                    "lambda": lambda, "cutoff": cutoff,
                });
                emit(&out, config, report::module_report(&lam, &m))
            }
            ModuleCmd::Irreducible { alg, borel, lambda, cutoff, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let lam = parse_rat_list(&lambda)?;
                let m = hwengine::kac_module(&g, &datum, &dec, &lam, cutoff).map_err(domain)?;
                let cm = hwengine::concrete_module(&m).map_err(domain)?;
                let irr = hwengine::irreducible_quotient(&cm);
                let config = json!({
                    "command": "module irreducible", "alg": alg.alg, "borel": borel.borel,
                    "lambda": lambda, "cutoff": cutoff,
                });
                emit(&out, config, report::concrete_report(&lam, &irr))
            }
        },
        Cmd::Weyl { cmd } => match cmd {
            WeylCmd::Local { alg, borel, jet, psi, cutoff, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let jets = weyl::jet_algebra(&jet).map_err(domain)?;
                let table = load_psi(&psi)?;
                let lw =
                    weyl::local_weyl(&g, &datum, &dec, &jets, &table, cutoff).map_err(domain)?;
                let config = json!({
                    "command": "weyl local", "alg": alg.alg, "borel": borel.borel,
                    "jet": jet, "psi": psi.display().to_string(), "cutoff": cutoff,
                });
                emit(&out, config, report::module_report(&lw.lambda, &lw.module))
            }
            WeylCmd::Scan { alg, borel, psi, nmax, cutoff, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let table = load_psi(&psi)?;
                let scan = weyl::truncation_scan(&g, &datum, &dec, &table, nmax, cutoff)
                    .map_err(domain)?;
                let theta = weyl::theta_criterion(&g, &datum, &dec).map_err(domain)?;
                let flags = check_conditions(&g, &datum, &dec).map_err(domain)?;
                let config = json!({
                    "command": "weyl scan", "alg": alg.alg, "borel": borel.borel,
                    "psi": psi.display().to_string(), "nmax": nmax, "cutoff": cutoff,
                });
                emit(&out, config, report::scan_report(&scan, theta, &flags))
            }
            WeylCmd::Garland { alg, borel, jet, coeffs, mmax, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let jets = weyl::jet_algebra(&jet).map_err(domain)?;
                let a = QVec::from_dense(&parse_rat_list(&coeffs)?);
                if a.dim != jets.dim {
                    return Err(CliError::Domain(format!(
                        "coeffs needs {} coordinates",
                        jets.dim
                    )));
                }
                let simples =
                    superlie::triangular::reductive_simples(&g, &datum, &dec).map_err(domain)?;
                let mut results = Vec::new();
                for m in 0..=mmax {
                    let ok =
                        simples.iter().all(|(_, t)| weyl::garland_verify(&g, t, &jets, &a, m));
                    results.push(json!({"m": m, "holds": ok}));
                }
                let config = json!({
                    "command": "weyl garland", "alg": alg.alg, "borel": borel.borel,
                    "jet": jet, "coeffs": coeffs, "mmax": mmax,
                });
                emit(&out, config, json!({"results": results}))
            }
            WeylCmd::Ideals { alg, borel, jet, psi, cutoff, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let jets = weyl::jet_algebra(&jet).map_err(domain)?;
                let table = load_psi(&psi)?;
                let lw =
                    weyl::local_weyl(&g, &datum, &dec, &jets, &table, cutoff).map_err(domain)?;
                let ideals = weyl::annihilating_ideals(&g, &jets, &lw).map_err(domain)?;
                let config = json!({
                    "command": "weyl ideals", "alg": alg.alg, "borel": borel.borel,
                    "jet": jet, "psi": psi.display().to_string(), "cutoff": cutoff,
                });
                emit(&out, config, report::ideals_report(&jets, &ideals))
            }
            WeylCmd::TensorCheck { alg, borel, jet_a, psi_a, jet_b, psi_b, cutoff, out } => {
                let g = load_algebra(&alg.alg)?;
                let datum = datum_of(&g)?;
                let dec = load_decomposition(&g, &datum, &borel.borel)?;
                let ja = weyl::jet_algebra(&jet_a).map_err(domain)?;
                let jb = weyl::jet_algebra(&jet_b).map_err(domain)?;
                let pa = load_psi(&psi_a)?;
                let pb = load_psi(&psi_b)?;
                let rep = weyl::tensor_check(&g, &datum, &dec, &ja, &pa, &jb, &pb, cutoff)
                    .map_err(domain)?;
                let config = json!({
                    "command": "weyl tensor-check", "alg": alg.alg, "borel": borel.borel,
                    "jet_a": jet_a, "psi_a": psi_a.display().to_string(),
                    "jet_b": jet_b, "psi_b": psi_b.display().to_string(), "cutoff": cutoff,
                });
                emit(
                    &out,
                    config,
                    json!({
                        "dim_sum": rep.dim_sum,
                        "dim_a": rep.dim_a,
                        "dim_b": rep.dim_b,
                        "total_product_ok": rep.total_product_ok,
                        "weightwise_ok": rep.weightwise_ok,
                    }),
                )
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
