//! Sweep harness: generate sublattice families, run the torsion pipeline
//! over them in parallel, emit deterministic CSV, and apply the
//! convergence trend verdict.
//!
//! Output is byte-identical for a fixed seed regardless of the number of
//! worker threads: every row is computed independently and rows are
//! ordered by (girth, index, family position) before serialization.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::io::{format_f64, format_rational, parse_sublattice};
use crate::lattice::Sublattice;
use crate::spectral::{bv_identity_check, TorsionReport};

/// Frozen regression threshold for the bundled two-variable example
/// `1 + t1 + t2` on the diagonal family N = 2..16, monitoring
/// `|ln R_0| / N^2`.
///
/// Pilot run data (exact squared regulators, so these never drift):
/// the column is 0 for N coprime to 3 and otherwise
/// `ln(vol^2) / (2 N^2)` with vol^2 = 27, 432, 2187, 6912, 16875 at
/// N = 3, 6, 9, 12, 15; the largest value over N in 12..=16 is
/// 0.03069796... at N = 12, against 0.18310... at N = 3. The threshold
/// guards the N = 16 endpoint and the high-girth third.
pub const PILOT_LN_R0_PER_INDEX_THRESHOLD: f64 = 3.2e-2;

/// Monitored column of the convergence verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monitor {
    /// `(ln tau^H - ln tau^RS) / index`.
    GapPerIndex,
    /// `ln R_k / index` at a fixed level.
    LnRegPerIndex(usize),
}

impl Monitor {
    pub fn parse(s: &str) -> Result<Monitor> {
        if s == "gap" {
            return Ok(Monitor::GapPerIndex);
        }
        if let Some(k) = s.strip_prefix("lnr") {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad monitor {s:?}")))?;
            return Ok(Monitor::LnRegPerIndex(k));
        }
        Err(Error::Parse(format!(
            "monitor must be gap or lnr<k>, got {s:?}"
        )))
    }
}

/// Everything a sweep needs. The family carries the textual spec of each
/// member so reports echo the exact input.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub complex: FreeComplex,
    pub complex_name: String,
    pub family: Vec<(String, Sublattice)>,
    /// Levels to report; `None` means all.
    pub levels: Option<Vec<usize>>,
    pub eps: f64,
    pub jobs: usize,
    pub monitor: Monitor,
    /// Optional absolute threshold the largest-girth row must stay below.
    pub threshold: Option<f64>,
}

/// One computed row, kept both as typed values and as frozen CSV cells.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub gamma_spec: String,
    pub girth: u64,
    pub index: BigInt,
    pub report: TorsionReport,
    pub monitored_abs: f64,
    pub cells: Vec<String>,
}

/// Verdict of the girth trend: the largest-girth third of the family must
/// have a strictly smaller maximum |monitored value| than the
/// smallest-girth third.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub low_third_max: f64,
    pub high_third_max: f64,
    pub trend_ok: bool,
    pub threshold: Option<f64>,
    pub final_value: f64,
    pub threshold_ok: bool,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.trend_ok && self.threshold_ok
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub header: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub verdict: Option<Verdict>,
    pub warnings: Vec<String>,
}

impl SweepOutput {
    /// Deterministic CSV: frozen column order, floats with 12 significant
    /// digits, exact rationals as `p/q`, spec fields quoted when needed.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&crate::io::csv_line(&self.header));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&crate::io::csv_line(&row.cells));
            out.push('\n');
        }
        out
    }
}

/// Frozen column order: identity and global columns, then one block of
/// per-level columns per requested level.
pub fn csv_header(levels: &[usize]) -> Vec<String> {
    let mut h = vec![
        "complex".to_string(),
        "gamma".to_string(),
        "index".to_string(),
        "girth".to_string(),
        "tau_h".to_string(),
        "ln_tau_h".to_string(),
        "ln_tau_rs".to_string(),
        "bv_residual".to_string(),
        "gap_per_index".to_string(),
        "ln_tau_h_per_index".to_string(),
        "ln_tau_rs_per_index".to_string(),
    ];
    for k in levels {
        h.push(format!("free_rank_{k}"));
        h.push(format!("torsion_{k}"));
        h.push(format!("reg_sq_{k}"));
        h.push(format!("ln_reg_{k}"));
        h.push(format!("ln_reg_per_index_{k}"));
        h.push(format!("ln_detp_{k}"));
        h.push(format!("rank_per_index_{k}"));
        h.push(format!("acyclic_{k}"));
    }
    h
}

fn monitored_value(report: &TorsionReport, monitor: Monitor) -> f64 {
    let index = report.index.to_f64().unwrap_or(f64::INFINITY);
    match monitor {
        Monitor::GapPerIndex => (report.ln_tau_h - report.ln_tau_rs) / index,
        Monitor::LnRegPerIndex(k) => report
            .levels
            .iter()
            .find(|l| l.level == k)
            .map_or(0.0, |l| l.ln_regulator / index),
    }
}

/// Builds one report row.
pub fn sweep_row(
    complex: &FreeComplex,
    complex_name: &str,
    gamma_spec: &str,
    gamma: &Sublattice,
    levels: &[usize],
    eps: f64,
    monitor: Monitor,
) -> Result<SweepRow> {
    let report = bv_identity_check(complex, gamma, eps)?;
    let index_f = report.index.to_f64().unwrap_or(f64::INFINITY);
    let gap = report.ln_tau_h - report.ln_tau_rs;

    let mut cells = vec![
        complex_name.to_string(),
        gamma_spec.to_string(),
        report.index.to_string(),
        report.girth.to_string(),
        format_rational(&report.tau_h),
        format_f64(report.ln_tau_h),
        format_f64(report.ln_tau_rs),
        format_f64(report.bv_residual),
        format_f64(gap / index_f),
        format_f64(report.ln_tau_h / index_f),
        format_f64(report.ln_tau_rs / index_f),
    ];
    for &k in levels {
        let l = report
            .levels
            .iter()
            .find(|l| l.level == k)
            .ok_or_else(|| Error::Parse(format!("level {k} out of range")))?;
        cells.push(l.free_rank.to_string());
        cells.push(l.torsion_order.to_string());
        cells.push(format_rational(&l.regulator_sq));
        cells.push(format_f64(l.ln_regulator));
        cells.push(format_f64(l.ln_regulator / index_f));
        cells.push(format_f64(l.ln_det_prime));
        cells.push(format_f64(l.free_rank as f64 / index_f));
        cells.push(if l.acyclic { "1".into() } else { "0".into() });
    }

    Ok(SweepRow {
        gamma_spec: gamma_spec.to_string(),
        girth: report.girth,
        index: report.index.clone(),
        monitored_abs: monitored_value(&report, monitor).abs(),
        report,
        cells,
    })
}

/// Runs the sweep: rows in (girth, index) order, optional trend verdict.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    if config.family.is_empty() {
        return Err(Error::Parse("family is empty".into()));
    }
    let levels: Vec<usize> = match &config.levels {
        Some(ls) => ls.clone(),
        None => (0..=config.complex.top_level()).collect(),
    };
    if let Some(&bad) = levels.iter().find(|&&k| k > config.complex.top_level()) {
        return Err(Error::Parse(format!(
            "level {bad} out of range (top level is {})",
            config.complex.top_level()
        )));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .expect("thread pool");
    let rows: Result<Vec<SweepRow>> = pool.install(|| {
        use rayon::prelude::*;
        config
            .family
            .par_iter()
            .map(|(spec, gamma)| {
                sweep_row(
                    &config.complex,
                    &config.complex_name,
                    spec,
                    gamma,
                    &levels,
                    config.eps,
                    config.monitor,
                )
            })
            .collect()
    });
    let mut rows = rows?;
    rows.sort_by(|a, b| (a.girth, &a.index).cmp(&(b.girth, &b.index)));

    let mut warnings = Vec::new();
    for row in &rows {
        for l in &row.report.levels {
            if levels.contains(&l.level) && !l.acyclic {
                warnings.push(format!(
                    "gamma {}: level {} is not L2-acyclic (det of the Laplacian vanishes); \
                     torsion columns are still exact, the spectral gap statement does not apply",
                    row.gamma_spec, l.level
                ));
            }
        }
        if row.report.flagged {
            warnings.push(format!(
                "gamma {}: torsion identity residual {} above tolerance {}",
                row.gamma_spec, row.report.bv_residual, row.report.residual_tolerance
            ));
        }
    }

    let verdict = if rows.len() >= 3 {
        let third = rows.len() / 3;
        let low_third_max = rows[..third]
            .iter()
            .map(|r| r.monitored_abs)
            .fold(0.0, f64::max);
        let high_third_max = rows[rows.len() - third..]
            .iter()
            .map(|r| r.monitored_abs)
            .fold(0.0, f64::max);
        let final_value = rows.last().expect("nonempty").monitored_abs;
        let threshold_ok = config.threshold.is_none_or(|t| final_value < t);
        Some(Verdict {
            low_third_max,
            high_third_max,
            trend_ok: high_third_max < low_third_max,
            threshold: config.threshold,
            final_value,
            threshold_ok,
        })
    } else {
        None
    };

    Ok(SweepOutput {
        header: csv_header(&levels),
        rows,
        verdict,
        warnings,
    })
}

/// Family specification grammar:
/// `diag:LO..HI[:STEP]` (diagonal N Z^n), `list:SPEC|SPEC|…`, or
/// `random:g=G,cap=C,count=K` (seeded rejection sampling).
pub fn parse_family(spec: &str, n: usize, seed: u64) -> Result<Vec<(String, Sublattice)>> {
    if let Some(body) = spec.strip_prefix("diag:") {
        let (range, step) = match body.rsplit_once(':') {
            Some((range, step)) => (
                range,
                step.parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad step {step:?}: {e}")))?,
            ),
            None => (body, 1),
        };
        if step < 1 {
            return Err(Error::Parse("family step must be >= 1".into()));
        }
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("diag family needs LO..HI, got {body:?}")))?;
        let lo: i64 = lo
            .parse()
            .map_err(|e| Error::Parse(format!("bad bound {lo:?}: {e}")))?;
        let hi: i64 = hi
            .parse()
            .map_err(|e| Error::Parse(format!("bad bound {hi:?}: {e}")))?;
        if lo < 1 || hi < lo {
            return Err(Error::Parse(format!("bad family range {lo}..{hi}")));
        }
        Ok((lo..=hi)
            .step_by(step as usize)
            .map(|v| {
                let spec = format!("diag:{}", vec![v.to_string(); n].join(","));
                (spec, Sublattice::scaled_standard(n, v))
            })
            .collect())
    } else if let Some(body) = spec.strip_prefix("list:") {
        body.split('|')
            .map(|s| Ok((s.to_string(), parse_sublattice(s, n)?)))
            .collect()
    } else if let Some(body) = spec.strip_prefix("random:") {
        let mut girth = None;
        let mut cap = None;
        let mut count = None;
        for part in body.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad random family part {part:?}")))?;
            let value: u64 = value
                .parse()
                .map_err(|e| Error::Parse(format!("bad value {value:?}: {e}")))?;
            match key {
                "g" => girth = Some(value),
                "cap" => cap = Some(value),
                "count" => count = Some(value as usize),
                _ => return Err(Error::Parse(format!("unknown random family key {key:?}"))),
            }
        }
        let girth = girth.ok_or_else(|| Error::Parse("random family needs g=".into()))?;
        let cap = cap.ok_or_else(|| Error::Parse("random family needs cap=".into()))?;
        let count = count.ok_or_else(|| Error::Parse("random family needs count=".into()))?;
        let lattices = random_family(n, girth, cap, count, seed)?;
        Ok(lattices
            .into_iter()
            .map(|g| (crate::io::format_sublattice(&g), g))
            .collect())
    } else {
        Err(Error::Parse(format!(
            "family spec must start with diag:, list: or random:, got {spec:?}"
        )))
    }
}

/// Rejection-samples `count` distinct upper-triangular full-rank lattices
/// with `|det| <= cap` and girth at least `min_girth`. Deterministic for a
/// fixed seed; families produced this way are deliberately non-nested.
pub fn random_family(
    n: usize,
    min_girth: u64,
    cap: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<Sublattice>> {
    assert!(min_girth >= 1, "girth bound must be positive");
    assert!(cap >= 1, "index cap must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Sublattice> = Vec::with_capacity(count);
    let mut seen = std::collections::BTreeSet::new();
    let max_attempts = 20_000 * count.max(1);
    for attempt in 0..max_attempts {
        if out.len() == count {
            return Ok(out);
        }
        let mut rows = vec![vec![0i64; n]; n];
        let mut det = 1u64;
        let mut ok = true;
        for i in 0..n {
            let d = rng.gen_range(1..=cap.min(cap / det.max(1)).max(1)) as i64;
            det = det.saturating_mul(d as u64);
            if det > cap {
                ok = false;
                break;
            }
            rows[i][i] = d;
            for j in i + 1..n {
                rows[i][j] = rng.gen_range(0..rows[i][i].max(1));
            }
        }
        if !ok || det > cap {
            continue;
        }
        let key: Vec<i64> = rows.iter().flatten().copied().collect();
        if !seen.insert(key) {
            continue;
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let gamma = Sublattice::new(crate::intmat::IntMat::from_rows_i64(&refs));
        if gamma.girth()? >= min_girth {
            out.push(gamma);
        }
        let _ = attempt;
    }
    if out.len() == count {
        Ok(out)
    } else {
        Err(Error::SamplingExhausted {
            attempts: max_attempts,
        })
    }
}
