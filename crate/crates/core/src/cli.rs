//! The `kmnil` command line.
//!
//! Exit status 0 means every check passed, 1 means a residual or comparison
//! failed (reports are still written, with `"pass": false`), 2 means the
//! invocation or an input file was unusable.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cartan::{CartanMatrix, MultiDegree};
use crate::cohomology::{self, HARMONIC_TOL};
use crate::construct::{build, serre_check, BuildOptions};
use crate::error::{Error, Result};
use crate::grading::{degree_order, Bound, DEFAULT_MAX_DEGREES};
use crate::liealg::{AlgebraDump, DegreeComplex, GradedAlgebra};
use crate::oracles;
use crate::par;
use crate::spectrum::{self, CLUSTER_TOL};

/// Environment variable capping chain-space dimensions.
pub const BUDGET_VAR: &str = "KMNIL_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "kmnil", version, about = "Canonical metrics on nilpotent Kac–Moody subalgebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_gram: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_jacobi: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_scalarity: f64,
    #[arg(long, global = true, default_value_t = CLUSTER_TOL)]
    pub tol_cluster: f64,
    #[arg(long, global = true, default_value_t = 50_000)]
    pub max_chain_dim: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREES)]
    pub max_degrees: usize,
    /// Accepted for compatibility; the pipeline uses no randomness.
    #[arg(long, global = true)]
    pub seedless: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct MatrixArg {
    /// JSON file `{"matrix": [[...]]}`, or one of a2, b2, g2, a22, cyclic2,
    /// cyclic3, typeA<n>.
    #[arg(long)]
    pub matrix: String,
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    #[arg(long)]
    pub total_bound: Option<u32>,
    /// Comma-separated, e.g. `3,5`.
    #[arg(long)]
    pub componentwise_bound: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    L1,
    Tplus,
    Nn,
    G2,
    A22,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a Cartan matrix and print its symmetrizer.
    Validate {
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Evaluate `E(k)`.
    Energy {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Comma-separated degree.
        #[arg(long)]
        k: String,
    },
    /// Construct `N(A)` inside a bound and dump it.
    Build {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        bound: BoundArgs,
    },
    /// Check `Δ_q = E(k)·Id` for every degree and `q`.
    Verify {
        #[command(flatten)]
        bound: BoundArgs,
        #[arg(long, conflicts_with = "algebra")]
        matrix: Option<String>,
        /// A previously written dump (must carry its Cartan matrix).
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Compare predicted and numeric spectra of `L₁(1)`.
    SpectrumL1 {
        #[arg(long, default_value_t = 18, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
        #[arg(long, default_value_t = 5000)]
        max_matrix: usize,
    },
    /// Scalarity of `Δ` on `T⁺(n)` and dimension match with the cyclic build.
    TplusCheck {
        #[arg(long, default_value_t = 3, value_parser = at_least::<2>)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        total_bound: u32,
    },
    /// Harmonic classes and cup products of a built `N(A)`.
    Cohomology {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Total-degree bound.
        #[arg(long)]
        bound: u32,
        /// Also sample all products landing inside the bound.
        #[arg(long)]
        products: bool,
    },
    /// Weyl orbit of 0 with interval decompositions and the product rule.
    WeylOrbit {
        #[arg(long, value_parser = at_least::<1>)]
        n: usize,
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Dump a reference algebra.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        #[arg(long, default_value_t = 3, value_parser = at_least::<2>)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        total_bound: u32,
    },
    /// Dimension-by-degree diff of two dumps.
    Compare { left: PathBuf, right: PathBuf },
}

fn at_least<const MIN: usize>(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= MIN => Ok(n),
        Ok(_) => Err(format!("must be at least {MIN}")),
        Err(e) => Err(e.to_string()),
    }
}

/// Outcome of a subcommand: the report and whether every check passed.
pub struct Outcome {
    pub report: String,
    pub pass: bool,
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::NotGcm(_)
            | Error::NotSymmetrizable(_)
            | Error::DimensionMismatch { .. }
            | Error::Format(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::IndexOutOfRange { .. }
            | Error::InvalidTuple(_)
            | Error::BoundTooLarge { .. }
    )
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.global, &out.report) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}

fn emit(global: &Global, report: &str) -> Result<()> {
    match &global.out {
        Some(p) => std::fs::write(p, report)?,
        None => std::io::stdout().write_all(report.as_bytes())?,
    }
    Ok(())
}

/// Resolves a preset name or reads a matrix file.
pub fn load_matrix(name: &str) -> Result<CartanMatrix> {
    let path = Path::new(name);
    if path.exists() {
        return CartanMatrix::from_json(&std::fs::read_to_string(path)?);
    }
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "a2" => Ok(CartanMatrix::a2()),
        "b2" => Ok(CartanMatrix::b2()),
        "g2" => Ok(CartanMatrix::g2()),
        "a22" => Ok(CartanMatrix::a22()),
        s if s.starts_with("cyclic") => {
            match s[6..].parse::<usize>() {
                Ok(n) if n >= 2 => Ok(CartanMatrix::cyclic(n)),
                _ => Err(Error::Format(format!("bad preset {name}"))),
            }
        }
        s if s.starts_with("typea") => {
            match s[5..].parse::<usize>() {
                Ok(n) if n >= 1 => Ok(CartanMatrix::type_a(n)),
                _ => Err(Error::Format(format!("bad preset {name}"))),
            }
        }
        _ => Err(Error::Format(format!("{name}: no such file or preset"))),
    }
}

fn parse_bound(b: &BoundArgs, rank: usize) -> Result<Bound> {
    let componentwise = b.componentwise_bound.as_deref().map(MultiDegree::parse).transpose()?;
    if let Some(c) = &componentwise {
        if c.rank() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: c.rank(),
            });
        }
    }
    if b.total_bound.is_none() && componentwise.is_none() {
        return Err(Error::Format("give --total-bound or --componentwise-bound".into()));
    }
    Ok(Bound {
        total: b.total_bound,
        componentwise,
    })
}

fn build_options(g: &Global) -> BuildOptions {
    let budget = std::env::var(BUDGET_VAR).ok().and_then(|v| v.parse::<usize>().ok());
    BuildOptions {
        gram_tol: g.tol_gram,
        max_chain_dim: budget.map_or(g.max_chain_dim, |b| b.min(g.max_chain_dim)),
        max_degrees: g.max_degrees,
        ..BuildOptions::default()
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct ScalarityRow {
    k: MultiDegree,
    #[serde(rename = "E")]
    energy: i64,
    dims: Vec<usize>,
    residual: f64,
    pass: bool,
}

/// `max_q |Δ_q − E·Id|` for every degree in `degrees`.
fn scalarity_rows(
    alg: &GradedAlgebra,
    degrees: &[MultiDegree],
    energy: impl Fn(&MultiDegree) -> Result<i64> + Sync + Send,
    tol: f64,
    cap: usize,
) -> Result<Vec<ScalarityRow>> {
    par::try_map(degrees, |k| {
        let e = energy(k)?;
        let cx = DegreeComplex::with_cap(alg, k, cap)?;
        let mut residual: f64 = 0.0;
        let mut dims = Vec::new();
        for q in 0..=cx.qmax() {
            dims.push(cx.dim(q));
            residual = residual.max(crate::liealg::scalar_residual(&cx.laplacian(q), e as f64));
        }
        Ok(ScalarityRow {
            k: k.clone(),
            energy: e,
            dims,
            residual,
            pass: residual < tol * (e as f64).max(1.0),
        })
    })
}

fn scalarity_csv(rows: &[ScalarityRow]) -> String {
    let mut s = String::from("k,E,dims,residual,pass\n");
    for r in rows {
        let dims: Vec<String> = r.dims.iter().map(ToString::to_string).collect();
        s.push_str(&format!("\"{}\",{},{},{:e},{}\n", r.k, r.energy, dims.join(" "), r.residual, r.pass));
    }
    s
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let csv = g.format == Format::Csv;
    if csv && !matches!(cli.command, Command::Verify { .. } | Command::SpectrumL1 { .. } | Command::TplusCheck { .. }) {
        return Err(Error::Format("csv output is only available for verify, spectrum-l1 and tplus-check".into()));
    }
    match &cli.command {
        Command::Validate { matrix } => {
            let cm = load_matrix(&matrix.matrix)?;
            let report = to_json(&json!({
                "matrix": cm.entries(),
                "d": cm.symmetrizer(),
                "irreducible": cm.is_irreducible(),
                "pass": true,
            }))?;
            Ok(Outcome { report, pass: true })
        }
        Command::Energy { matrix, k } => {
            let cm = load_matrix(&matrix.matrix)?;
            let k = MultiDegree::parse(k)?;
            let e = cm.energy(&k)?;
            Ok(Outcome {
                report: to_json(&json!({ "k": k, "E": e }))?,
                pass: true,
            })
        }
        Command::Build { matrix, bound } => {
            let cm = load_matrix(&matrix.matrix)?;
            let bound = parse_bound(bound, cm.rank())?;
            let mut c = build(&cm, &bound, &build_options(g))?;
            c.close_if_exhausted();
            let pass = c.records.iter().all(|r| {
                let scale = (r.energy as f64).max(1.0);
                r.gram_residual < g.tol_gram * scale && r.jacobi_residual < g.tol_jacobi && r.leak < 1e-9
            });
            Ok(Outcome {
                report: c.dump().to_json()?,
                pass,
            })
        }
        Command::Verify {
            bound,
            matrix,
            algebra,
        } => {
            let (alg, cm, b) = match (matrix, algebra) {
                (Some(m), None) => {
                    let cm = load_matrix(m)?;
                    let b = parse_bound(bound, cm.rank())?;
                    let c = build(&cm, &b, &build_options(g))?;
                    (c.algebra, cm, b)
                }
                (None, Some(p)) => {
                    let dump = AlgebraDump::from_json(&std::fs::read_to_string(p)?)?;
                    let cm = dump
                        .cartan_matrix()?
                        .ok_or_else(|| Error::Format("dump has no Cartan matrix".into()))?;
                    let alg = dump.to_algebra()?;
                    let b = if bound.total_bound.is_some() || bound.componentwise_bound.is_some() {
                        parse_bound(bound, cm.rank())?
                    } else {
                        let t = alg.components().map(|(k, _)| k.total()).max().unwrap_or(0);
                        Bound::total(t)
                    };
                    (alg, cm, b)
                }
                _ => return Err(Error::Format("give exactly one of --matrix or --algebra".into())),
            };
            let degrees = degree_order(cm.rank(), &b, g.max_degrees)?.degrees;
            let rows = scalarity_rows(&alg, &degrees, |k| cm.energy(k), g.tol_scalarity, g.max_chain_dim)?;
            let serre = serre_check(&alg, &cm).ok();
            let pass = rows.iter().all(|r| r.pass) && serre.as_ref().is_none_or(|s| s.iter().all(|e| e.pass));
            let report = if csv {
                scalarity_csv(&rows)
            } else {
                to_json(&json!({ "rows": rows, "serre": serre, "pass": pass }))?
            };
            Ok(Outcome { report, pass })
        }
        Command::SpectrumL1 {
            max_degree,
            max_matrix,
        } => {
            let r = spectrum::l1_report(*max_degree, *max_matrix, g.tol_cluster)?;
            let report = match g.format {
                Format::Json => to_json(&r)?,
                Format::Csv => {
                    let mut s = String::from("degree,source,eigenvalue,multiplicity\n");
                    for row in &r.rows {
                        for (src, t) in [("predicted", &row.predicted), ("numeric", &row.numeric)] {
                            for (v, m) in t {
                                s.push_str(&format!("{},{src},{v:.9},{m}\n", row.degree));
                            }
                        }
                    }
                    s
                }
            };
            Ok(Outcome {
                report,
                pass: r.all_match,
            })
        }
        Command::TplusCheck { n, total_bound } => {
            let bound = Bound::total(*total_bound);
            let alg = oracles::tplus_algebra(*n, *total_bound);
            let degrees = degree_order(*n, &bound, g.max_degrees)?.degrees;
            let rows = scalarity_rows(
                &alg,
                &degrees,
                |k| Ok(oracles::tplus_energy(k)),
                g.tol_scalarity,
                g.max_chain_dim,
            )?;
            let built = build(&CartanMatrix::cyclic(*n), &bound, &build_options(g))?;
            let mut dims = Vec::new();
            for k in &degrees {
                let a = alg.dim(k).unwrap_or(0);
                let b = built.algebra.dim(k).unwrap_or(0);
                if a != b || a > 0 {
                    dims.push(json!({ "k": k, "tplus": a, "cyclic_build": b, "match": a == b }));
                }
            }
            let dims_ok = dims.iter().all(|d| d["match"] == true);
            let pass = dims_ok && rows.iter().all(|r| r.pass);
            let report = if csv {
                scalarity_csv(&rows)
            } else {
                to_json(&json!({ "n": n, "scalarity": rows, "dimensions": dims, "pass": pass }))?
            };
            Ok(Outcome { report, pass })
        }
        Command::Cohomology {
            matrix,
            bound,
            products,
        } => {
            let cm = load_matrix(&matrix.matrix)?;
            let b = Bound::total(*bound);
            let c = build(&cm, &b, &build_options(g))?;
            let degrees = cohomology::harmonic_degrees(&cm, &b)?;
            let mut classes = Vec::new();
            let mut by_q: BTreeMap<usize, usize> = BTreeMap::new();
            by_q.insert(0, 1);
            for k in &degrees {
                for q in 1..=k.total() as usize {
                    for h in cohomology::harmonic_basis(&c.algebra, k, q, HARMONIC_TOL)? {
                        *by_q.entry(q).or_default() += 1;
                        let terms: Vec<(Vec<u32>, f64)> =
                            h.representative.terms.iter().map(|(m, x)| (m.0.clone(), *x)).collect();
                        classes.push(json!({ "k": h.k, "q": q, "representative": terms }));
                    }
                }
            }
            let probe = if *products {
                Some(cohomology::probe_products(&c.algebra, &cm, &b, HARMONIC_TOL)?)
            } else {
                None
            };
            let total: usize = by_q.values().sum();
            Ok(Outcome {
                report: to_json(&json!({
                    "classes": classes,
                    "dims_by_q": by_q,
                    "total_dim": total,
                    "products": probe,
                    "pass": true,
                }))?,
                pass: true,
            })
        }
        Command::WeylOrbit { n, max_length } => {
            let orbit = cohomology::weyl_orbit(*n, max_length.unwrap_or(usize::MAX))?;
            let cm = CartanMatrix::type_a(*n);
            let mut pass = true;
            for p in &orbit {
                pass &= cm.energy_of(&p.x)? == 0 && p.decomposition.len() == p.length;
            }
            let table = if max_length.is_none() {
                Some(cohomology::product_table(*n)?)
            } else {
                None
            };
            Ok(Outcome {
                report: to_json(&json!({ "n": n, "size": orbit.len(), "points": orbit, "products": table, "pass": pass }))?,
                pass,
            })
        }
        Command::Oracle { kind, n, total_bound } => {
            let (alg, cm) = match kind {
                OracleKind::L1 => (oracles::l1_algebra(*total_bound), None),
                OracleKind::Tplus => (oracles::tplus_algebra(*n, *total_bound), Some(CartanMatrix::cyclic(*n))),
                OracleKind::Nn => (oracles::upper_triangular(*n), Some(CartanMatrix::type_a(n - 1))),
                OracleKind::G2 => (oracles::g2_canonical().to_algebra()?, Some(CartanMatrix::g2())),
                OracleKind::A22 => (oracles::a22_algebra(*total_bound), Some(CartanMatrix::a22())),
            };
            Ok(Outcome {
                report: AlgebraDump::from_algebra(&alg, cm.as_ref()).to_json()?,
                pass: true,
            })
        }
        Command::Compare { left, right } => {
            let a = AlgebraDump::from_json(&std::fs::read_to_string(left)?)?.to_algebra()?;
            let b = AlgebraDump::from_json(&std::fs::read_to_string(right)?)?.to_algebra()?;
            let mut degrees: Vec<MultiDegree> = a.components().map(|(k, _)| k.clone()).collect();
            degrees.extend(b.components().map(|(k, _)| k.clone()));
            degrees.sort();
            degrees.dedup();
            let mut diffs = Vec::new();
            for k in degrees {
                let x = a.dim(&k);
                let y = b.dim(&k);
                if x.unwrap_or(0) != y.unwrap_or(0) {
                    diffs.push(json!({ "k": k, "left": x, "right": y }));
                }
            }
            let pass = diffs.is_empty();
            Ok(Outcome {
                report: to_json(&json!({ "differences": diffs, "pass": pass }))?,
                pass,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let mut full = vec!["kmnil"];
        full.extend_from_slice(args);
        run(&Cli::try_parse_from(full).expect("parses"))
    }

    #[test]
    fn presets() {
        assert_eq!(load_matrix("g2").unwrap(), CartanMatrix::g2());
        assert_eq!(load_matrix("cyclic3").unwrap(), CartanMatrix::cyclic(3));
        assert_eq!(load_matrix("typeA3").unwrap(), CartanMatrix::type_a(3));
        assert!(load_matrix("nonsense").is_err());
    }

    #[test]
    fn energy_length_mismatch_is_usage() {
        let e = run_args(&["energy", "--matrix", "g2", "--k", "1,2,3"]).err().unwrap();
        assert!(is_usage(&e));
    }

    #[test]
    fn build_reports() {
        let out = run_args(&["build", "--matrix", "g2", "--total-bound", "5"]).unwrap();
        assert!(out.pass);
        let dump = AlgebraDump::from_json(&out.report).unwrap();
        assert_eq!(dump.to_algebra().unwrap().total_dim(), 6);
        assert!(out.report.contains("\"gram_residual\""));
    }

    #[test]
    fn verify_and_compare() {
        let out = run_args(&["verify", "--matrix", "a22", "--total-bound", "6"]).unwrap();
        assert!(out.pass);
        let out = run_args(&["tplus-check", "--n", "2", "--total-bound", "5"]).unwrap();
        assert!(out.pass);
    }

    #[test]
    fn weyl_orbit_command() {
        let out = run_args(&["weyl-orbit", "--n", "2"]).unwrap();
        assert!(out.pass);
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["size"], 6);
    }
}
