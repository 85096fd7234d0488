//! Command-line front end: validate complex files, report torsion
//! invariants for one cover, sweep girth-growing families, and run the
//! torsion-coset diagnostics.
//!
//! Exit codes: 0 ok, 1 usage/parse, 2 validation, 3 cross-check failure,
//! 4 convergence regression.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use covtor::complex::FreeComplex;
use covtor::coset::{
    alpha_dimension_check, alpha_subspace, alpha_volume_sq, kernel_decomposition_check,
    restricted_kernel_volume_sq, NormalizedCoset,
};
use covtor::error::Error;
use covtor::io::{
    format_f64, format_rational, load_complex, parse_coset, parse_sublattice, report_to_json,
};
use covtor::spectral::DEFAULT_EPS;
use covtor::sweep::{csv_header, parse_family, run_sweep, sweep_row, Monitor, SweepConfig};

#[derive(Parser)]
#[command(
    name = "covtor",
    version,
    about = "Torsion and regulators of finite abelian covers of Z[Z^n]-complexes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a complex file and verify shapes and the chain condition.
    Validate {
        /// Path to the complex JSON file.
        #[arg(long)]
        complex: PathBuf,
    },
    /// One torsion report for a single sublattice.
    Report {
        #[arg(long)]
        complex: PathBuf,
        /// Sublattice spec: diag:N1,...,Nn or mat:a11,...;...
        #[arg(long)]
        gamma: String,
        /// Comma-separated levels to report (default: all).
        #[arg(long)]
        levels: Option<String>,
        /// Relative rank tolerance for singular values.
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        /// Output path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Emit one tab-separated line per character block on stderr:
        /// point, rank, log det'.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Sweep a family of sublattices and check the girth trend.
    Converge {
        #[arg(long)]
        complex: PathBuf,
        /// Family spec: diag:LO..HI[:STEP], list:SPEC|SPEC|..., or
        /// random:g=G,cap=C,count=K.
        #[arg(long)]
        family: String,
        #[arg(long)]
        levels: Option<String>,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        /// Worker threads; output is byte-identical for any value.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Seed for random families.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monitored column: gap or lnr<k>.
        #[arg(long, default_value = "gap")]
        monitor: String,
        /// The largest-girth row must stay below this absolute value.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Torsion-coset diagnostics for the Laplacian at one level.
    Coset {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        gamma: String,
        /// Coset spec u=q1,...,qn;L=mat:... (repeatable).
        #[arg(long = "coset", required = true)]
        cosets: Vec<String>,
        /// Chain level whose Laplacian is analyzed.
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) | Error::DimensionMismatch { .. } => 1,
        Error::ChainCondition { .. }
        | Error::BoundaryShape { .. }
        | Error::ShapeMismatch(_)
        | Error::NonSquare { .. }
        | Error::ZeroCoordinate { .. }
        | Error::NotFullRank { .. }
        | Error::NotPrimitive { .. }
        | Error::TrivialLattice
        | Error::NotDualPoint
        | Error::EmptyIntersection
        | Error::DependentColumns
        | Error::SamplingExhausted { .. } => 2,
        Error::RankCrosscheck { .. }
        | Error::SvdFailed
        | Error::NormBound { .. }
        | Error::CoverageMismatch { .. }
        | Error::AlphaDimension { .. } => 3,
        Error::ConvergenceRegression(_) => 4,
    }
}

fn run(cli: Cli) -> covtor::Result<u8> {
    match cli.cmd {
        Cmd::Validate { complex } => {
            let cplx = load_complex(&complex)?;
            cplx.validate()?;
            println!(
                "ok: ranks {:?} over Z[Z^{}]",
                cplx.ranks(),
                cplx.dim()
            );
            Ok(0)
        }
        Cmd::Report {
            complex,
            gamma,
            levels,
            eps,
            out,
            format,
            diagnostics,
        } => {
            let cplx = load_and_validate(&complex)?;
            let gamma_lat = parse_sublattice(&gamma, cplx.dim())?;
            let levels = parse_levels(levels.as_deref(), cplx.top_level())?;
            warn_non_acyclic(&cplx, &levels)?;
            if diagnostics {
                for k in 1..=cplx.top_level() {
                    let blocks = covtor::spectral::block_evaluations(
                        cplx.boundary(k).unwrap(),
                        &gamma_lat,
                        eps,
                    )?;
                    for b in &blocks {
                        eprintln!("d_{k}\t{}", covtor::io::block_diagnostics_line(b));
                    }
                }
            }
            let name = complex.display().to_string();
            let row = sweep_row(
                &cplx,
                &name,
                &gamma,
                &gamma_lat,
                &levels,
                eps,
                Monitor::GapPerIndex,
            )?;
            let text = match format.as_str() {
                "csv" => {
                    let mut s = covtor::io::csv_line(&csv_header(&levels));
                    s.push('\n');
                    s.push_str(&covtor::io::csv_line(&row.cells));
                    s.push('\n');
                    s
                }
                "json" => {
                    let mut v = report_to_json(&row.report);
                    v["complex"] = serde_json::Value::String(name);
                    v["gamma"] = serde_json::Value::String(gamma.clone());
                    format!("{}\n", serde_json::to_string_pretty(&v)?)
                }
                other => return Err(Error::Parse(format!("unknown format {other:?}"))),
            };
            write_output(out.as_deref(), &text)?;
            Ok(0)
        }
        Cmd::Converge {
            complex,
            family,
            levels,
            eps,
            jobs,
            seed,
            monitor,
            threshold,
            out,
            format,
        } => {
            let cplx = load_and_validate(&complex)?;
            let levels = parse_levels(levels.as_deref(), cplx.top_level())?;
            let config = SweepConfig {
                complex_name: complex.display().to_string(),
                family: parse_family(&family, cplx.dim(), seed)?,
                levels: Some(levels),
                eps,
                jobs,
                monitor: Monitor::parse(&monitor)?,
                threshold,
                complex: cplx,
            };
            let output = run_sweep(&config)?;
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            let text = match format.as_str() {
                "csv" => output.to_csv(),
                other => return Err(Error::Parse(format!("unknown format {other:?}"))),
            };
            write_output(out.as_deref(), &text)?;
            let verdict = output.verdict.as_ref().ok_or_else(|| {
                Error::Parse("family too small for a trend verdict (need >= 3 members)".into())
            })?;
            eprintln!(
                "verdict: low-third max {}, high-third max {}, final {}{}",
                format_f64(verdict.low_third_max),
                format_f64(verdict.high_third_max),
                format_f64(verdict.final_value),
                verdict
                    .threshold
                    .map(|t| format!(", threshold {}", format_f64(t)))
                    .unwrap_or_default()
            );
            if !verdict.ok() {
                return Err(Error::ConvergenceRegression(format!(
                    "low-third max {}, high-third max {}{}",
                    format_f64(verdict.low_third_max),
                    format_f64(verdict.high_third_max),
                    if verdict.threshold_ok {
                        String::new()
                    } else {
                        format!(
                            ", final value {} is not below the threshold",
                            format_f64(verdict.final_value)
                        )
                    }
                )));
            }
            Ok(0)
        }
        Cmd::Coset {
            complex,
            gamma,
            cosets,
            level,
            out,
            format,
        } => {
            let cplx = load_and_validate(&complex)?;
            let gamma_lat = parse_sublattice(&gamma, cplx.dim())?;
            if level > cplx.top_level() {
                return Err(Error::Parse(format!(
                    "level {level} out of range (top level is {})",
                    cplx.top_level()
                )));
            }
            let laplacian = cplx.laplacian_at(level)?;
            let normalized: Vec<(String, NormalizedCoset)> = cosets
                .iter()
                .map(|spec| Ok((spec.clone(), parse_coset(spec, cplx.dim())?.normalize()?)))
                .collect::<covtor::Result<_>>()?;

            let mut rows = Vec::new();
            for (spec, norm) in &normalized {
                let alpha = alpha_subspace(&gamma_lat, norm)?;
                let empty = alpha.members.is_empty();
                let (dim_expected, vol) = if empty {
                    ("0".to_string(), None)
                } else {
                    let chk = alpha_dimension_check(&gamma_lat, norm)?;
                    (
                        chk.expected.to_string(),
                        Some(alpha_volume_sq(&gamma_lat, norm)?),
                    )
                };
                let ker_vol = restricted_kernel_volume_sq(&laplacian, &gamma_lat, norm)?;
                rows.push(CosetRow {
                    spec: spec.clone(),
                    members: alpha.members.len(),
                    conjugates: alpha.conjugate_count,
                    b_order: alpha.b_order.to_string(),
                    dim_expected,
                    alpha_vol_sq: vol
                        .as_ref()
                        .map_or_else(|| "1/1".to_string(), |v| format_rational(&v.volume_sq)),
                    alpha_bound_ok: vol.as_ref().is_none_or(|v| v.bound_holds),
                    restricted_ker_vol_sq: format_rational(&ker_vol),
                });
            }

            let only_cosets: Vec<NormalizedCoset> =
                normalized.iter().map(|(_, n)| n.clone()).collect();
            let decomp = kernel_decomposition_check(&laplacian, &gamma_lat, &only_cosets)?;

            let text = match format.as_str() {
                "csv" => {
                    let mut s = String::from(
                        "coset,members,conjugates,b_order,dim_expected,alpha_vol_sq,alpha_bound_ok,restricted_ker_vol_sq\n",
                    );
                    for r in &rows {
                        s.push_str(&covtor::io::csv_line(&[
                            r.spec.clone(),
                            r.members.to_string(),
                            r.conjugates.to_string(),
                            r.b_order.clone(),
                            r.dim_expected.clone(),
                            r.alpha_vol_sq.clone(),
                            u8::from(r.alpha_bound_ok).to_string(),
                            r.restricted_ker_vol_sq.clone(),
                        ]));
                        s.push('\n');
                    }
                    s
                }
                "json" => {
                    let v = serde_json::json!({
                        "level": level,
                        "cosets": rows.iter().map(|r| serde_json::json!({
                            "coset": r.spec,
                            "members": r.members,
                            "conjugates": r.conjugates,
                            "b_order": r.b_order,
                            "dim_expected": r.dim_expected,
                            "alpha_vol_sq": r.alpha_vol_sq,
                            "alpha_bound_ok": r.alpha_bound_ok,
                            "restricted_ker_vol_sq": r.restricted_ker_vol_sq,
                        })).collect::<Vec<_>>(),
                        "kernel_decomposition": {
                            "dim_full": decomp.dim_full,
                            "dim_covered": decomp.dim_covered,
                            "vol_sq_full": format_rational(&decomp.volume_sq_full),
                            "vol_sq_product": format_rational(&decomp.volume_sq_product),
                            "volume_bound_holds": decomp.volume_bound_holds,
                        },
                    });
                    format!("{}\n", serde_json::to_string_pretty(&v)?)
                }
                other => return Err(Error::Parse(format!("unknown format {other:?}"))),
            };
            write_output(out.as_deref(), &text)?;
            eprintln!(
                "kernel decomposition: dim {} covered {} volume bound {}",
                decomp.dim_full,
                decomp.dim_covered,
                if decomp.volume_bound_holds {
                    "ok"
                } else {
                    "VIOLATED"
                }
            );
            Ok(0)
        }
    }
}

struct CosetRow {
    spec: String,
    members: usize,
    conjugates: usize,
    b_order: String,
    dim_expected: String,
    alpha_vol_sq: String,
    alpha_bound_ok: bool,
    restricted_ker_vol_sq: String,
}

fn load_and_validate(path: &std::path::Path) -> covtor::Result<FreeComplex> {
    let cplx = load_complex(path)?;
    cplx.validate()?;
    Ok(cplx)
}

fn parse_levels(spec: Option<&str>, top: usize) -> covtor::Result<Vec<usize>> {
    let levels: Vec<usize> = match spec {
        None => (0..=top).collect(),
        Some(s) => s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad level {tok:?}: {e}")))
            })
            .collect::<covtor::Result<_>>()?,
    };
    if let Some(&bad) = levels.iter().find(|&&k| k > top) {
        return Err(Error::Parse(format!(
            "level {bad} out of range (top level is {top})"
        )));
    }
    Ok(levels)
}

/// Theorem-side hypotheses are advisory: a non-acyclic level is reported,
/// the exact columns are still well-defined.
fn warn_non_acyclic(cplx: &FreeComplex, levels: &[usize]) -> covtor::Result<()> {
    for &k in levels {
        if !covtor::spectral::acyclicity_check(cplx, k)? {
            eprintln!(
                "warning: level {k} is not L2-acyclic (det of the Laplacian vanishes identically)"
            );
        }
    }
    Ok(())
}

fn write_output(path: Option<&std::path::Path>, text: &str) -> covtor::Result<()> {
    match path {
        None => {
            print!("{text}");
            std::io::stdout().flush()?;
        }
        Some(p) => std::fs::write(p, text)?,
    }
    Ok(())
}
