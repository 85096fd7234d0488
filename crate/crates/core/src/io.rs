//! File formats and textual forms.
//!
//! Complexes travel as JSON: `{"n":…, "ranks":[b_0,…,b_m], "boundaries":
//! [{"rows":b_k,"cols":b_{k-1},"entries":[{"row":i,"col":j,"terms":
//! [{"exp":[…],"coef":c},…]},…]},…]}` with zero-based indices and
//! boundaries listed for k = 1…m. Coefficients may be JSON integers or
//! decimal strings (for values beyond i64). Sublattices are `diag:…` or
//! `mat:…` (columns are generators, rows separated by `;`), torsion
//! points are comma-separated reduced fractions, cosets are
//! `u=q1,…,qn;L=mat:…`.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::FreeComplex;
use crate::coset::TorsionCoset;
use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::lattice::{Sublattice, TorsionPoint};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::spectral::TorsionReport;

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    n: usize,
    ranks: Vec<usize>,
    boundaries: Vec<BoundaryFile>,
}

#[derive(Serialize, Deserialize)]
struct BoundaryFile {
    rows: usize,
    cols: usize,
    entries: Vec<EntryFile>,
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    row: usize,
    col: usize,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    exp: Vec<i64>,
    coef: CoefRepr,
}

/// A big-integer coefficient: a JSON number when it fits i64, a decimal
/// string otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoefRepr {
    Small(i64),
    Big(String),
}

impl CoefRepr {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            CoefRepr::Small(v) => Ok(BigInt::from(*v)),
            CoefRepr::Big(s) => {
                BigInt::from_str(s).map_err(|e| Error::Parse(format!("bad coefficient {s:?}: {e}")))
            }
        }
    }

    fn from_bigint(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(small) => CoefRepr::Small(small),
            None => CoefRepr::Big(v.to_string()),
        }
    }
}

/// Parses a complex from its JSON text.
pub fn parse_complex_json(text: &str) -> Result<FreeComplex> {
    let file: ComplexFile = serde_json::from_str(text)?;
    let mut boundaries = Vec::with_capacity(file.boundaries.len());
    for b in &file.boundaries {
        let mut m = LaurentMatrix::zero(file.n, b.rows, b.cols);
        for e in &b.entries {
            if e.row >= b.rows || e.col >= b.cols {
                return Err(Error::Parse(format!(
                    "entry ({},{}) outside a {}x{} boundary",
                    e.row, e.col, b.rows, b.cols
                )));
            }
            let mut terms = Vec::with_capacity(e.terms.len());
            for t in &e.terms {
                if t.exp.len() != file.n {
                    return Err(Error::Parse(format!(
                        "exponent vector {:?} has length {}, expected {}",
                        t.exp,
                        t.exp.len(),
                        file.n
                    )));
                }
                terms.push((t.exp.clone(), t.coef.to_bigint()?));
            }
            m.set(e.row, e.col, LaurentPoly::from_terms(file.n, terms));
        }
        boundaries.push(m);
    }
    FreeComplex::new(file.n, file.ranks, boundaries)
}

/// Loads a complex from a JSON file.
pub fn load_complex(path: impl AsRef<Path>) -> Result<FreeComplex> {
    let text = std::fs::read_to_string(path)?;
    parse_complex_json(&text)
}

/// Canonical JSON form of a complex: entries in row-major order, terms in
/// lexicographic exponent order.
pub fn complex_to_json(complex: &FreeComplex) -> String {
    let boundaries = (1..=complex.top_level())
        .map(|k| {
            let m = complex.boundary(k).unwrap();
            let mut entries = Vec::new();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let p = m.get(i, j);
                    if p.is_zero() {
                        continue;
                    }
                    entries.push(EntryFile {
                        row: i,
                        col: j,
                        terms: p
                            .terms()
                            .map(|(e, c)| TermFile {
                                exp: e.to_vec(),
                                coef: CoefRepr::from_bigint(c),
                            })
                            .collect(),
                    });
                }
            }
            BoundaryFile {
                rows: m.rows(),
                cols: m.cols(),
                entries,
            }
        })
        .collect();
    serde_json::to_string_pretty(&ComplexFile {
        n: complex.dim(),
        ranks: complex.ranks().to_vec(),
        boundaries,
    })
    .expect("serialization cannot fail")
}

/// Parses `diag:N1,…,Nn` or `mat:a11,…,a1n;…` (columns generate; the
/// matrix is written row by row).
pub fn parse_sublattice(spec: &str, n: usize) -> Result<Sublattice> {
    if let Some(body) = spec.strip_prefix("diag:") {
        let diag: Vec<i64> = parse_i64_list(body)?;
        if diag.len() != n {
            return Err(Error::Parse(format!(
                "diag spec has {} entries, ambient dimension is {n}",
                diag.len()
            )));
        }
        Ok(Sublattice::diagonal(&diag))
    } else if let Some(body) = spec.strip_prefix("mat:") {
        let rows: Vec<Vec<i64>> = body
            .split(';')
            .map(parse_i64_list)
            .collect::<Result<_>>()?;
        if rows.len() != n {
            return Err(Error::Parse(format!(
                "mat spec has {} rows, ambient dimension is {n}",
                rows.len()
            )));
        }
        let cols = rows[0].len();
        if cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged or empty mat spec".into()));
        }
        Ok(Sublattice::new(IntMat::from_fn(n, cols, |i, j| {
            BigInt::from(rows[i][j])
        })))
    } else {
        Err(Error::Parse(format!(
            "lattice spec must start with diag: or mat:, got {spec:?}"
        )))
    }
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("bad integer {tok:?}: {e}")))
        })
        .collect()
}

/// Canonical textual form `mat:…` of a sublattice.
pub fn format_sublattice(lattice: &Sublattice) -> String {
    let g = lattice.gens();
    let rows: Vec<String> = (0..g.rows())
        .map(|i| {
            (0..g.cols())
                .map(|j| g.get(i, j).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("mat:{}", rows.join(";"))
}

/// Parses a comma-separated list of reduced fractions (`1/2,0,3/4`).
pub fn parse_torsion_point(spec: &str, n: usize) -> Result<TorsionPoint> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != n {
        return Err(Error::Parse(format!(
            "torsion point has {} coordinates, expected {n}",
            parts.len()
        )));
    }
    let q = parts
        .iter()
        .map(|tok| parse_fraction(tok.trim()))
        .collect::<Result<Vec<_>>>()?;
    Ok(TorsionPoint::new(q))
}

fn parse_fraction(tok: &str) -> Result<BigRational> {
    let mut it = tok.splitn(2, '/');
    let numer = it
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::Parse(format!("empty fraction in {tok:?}")))?;
    let numer = BigInt::from_str(numer)
        .map_err(|e| Error::Parse(format!("bad fraction numerator {tok:?}: {e}")))?;
    let denom = match it.next() {
        None => BigInt::one(),
        Some(d) => {
            let d = BigInt::from_str(d)
                .map_err(|e| Error::Parse(format!("bad fraction denominator {tok:?}: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {tok:?}")));
            }
            d
        }
    };
    Ok(BigRational::new(numer, denom))
}

/// Formats a torsion point as comma-separated reduced fractions.
pub fn format_torsion_point(z: &TorsionPoint) -> String {
    z.phases()
        .iter()
        .map(|q| {
            if q.denom().is_one() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses `u=q1,…,qn;L=mat:…` into a torsion coset.
pub fn parse_coset(spec: &str, n: usize) -> Result<TorsionCoset> {
    let u_body = spec
        .strip_prefix("u=")
        .ok_or_else(|| Error::Parse(format!("coset spec must start with u=, got {spec:?}")))?;
    let split = u_body
        .find(";L=")
        .ok_or_else(|| Error::Parse("coset spec needs a ;L= lattice part".into()))?;
    let point = parse_torsion_point(&u_body[..split], n)?;
    let lattice = parse_sublattice(&u_body[split + 3..], n)?;
    TorsionCoset::new(point, lattice)
}

/// Exact rational as `p/q` (always with the slash, `q >= 1`).
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// One CSV line with RFC-4180 quoting: fields containing commas, quotes
/// or newlines are wrapped in double quotes (lattice and coset specs
/// contain commas).
pub fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| {
            if c.contains(',') || c.contains('"') || c.contains('\n') {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect();
    quoted.join(",")
}

/// Floats with 12 significant digits, scientific notation, negative zero
/// normalized away.
pub fn format_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// JSON form of a torsion report, exact values as strings.
pub fn report_to_json(report: &TorsionReport) -> serde_json::Value {
    serde_json::json!({
        "index": report.index.to_string(),
        "girth": report.girth,
        "tau_h": format_rational(&report.tau_h),
        "ln_tau_h": report.ln_tau_h,
        "ln_tau_rs": report.ln_tau_rs,
        "bv_residual": report.bv_residual,
        "residual_tolerance": report.residual_tolerance,
        "flagged": report.flagged,
        "levels": report.levels.iter().map(|l| serde_json::json!({
            "level": l.level,
            "free_rank": l.free_rank,
            "torsion_order": l.torsion_order.to_string(),
            "ln_torsion": l.ln_torsion,
            "regulator_sq": format_rational(&l.regulator_sq),
            "ln_regulator": l.ln_regulator,
            "ln_det_prime": l.ln_det_prime,
            "acyclic": l.acyclic,
        })).collect::<Vec<_>>(),
    })
}

/// Diagnostics line per character block: phases, rank, log det'.
pub fn block_diagnostics_line(block: &crate::spectral::BlockEvaluation) -> String {
    format!(
        "{}\t{}\t{}",
        format_torsion_point(&block.z),
        block.numerical_rank,
        format_f64(block.log_det_prime)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_json_roundtrip() {
        let text = r#"{
            "n": 2,
            "ranks": [1, 2, 1],
            "boundaries": [
                {"rows": 2, "cols": 1, "entries": [
                    {"row": 0, "col": 0, "terms": [{"exp": [0, 1], "coef": 1}, {"exp": [0, 0], "coef": -1}]},
                    {"row": 1, "col": 0, "terms": [{"exp": [1, 0], "coef": 1}, {"exp": [0, 0], "coef": -1}]}
                ]},
                {"rows": 1, "cols": 2, "entries": [
                    {"row": 0, "col": 0, "terms": [{"exp": [1, 0], "coef": 1}, {"exp": [0, 0], "coef": -1}]},
                    {"row": 0, "col": 1, "terms": [{"exp": [0, 1], "coef": -1}, {"exp": [0, 0], "coef": 1}]}
                ]}
            ]
        }"#;
        let cplx = parse_complex_json(text).unwrap();
        assert_eq!(cplx.dim(), 2);
        assert_eq!(cplx.ranks(), &[1, 2, 1]);
        cplx.validate().unwrap();
        let again = parse_complex_json(&complex_to_json(&cplx)).unwrap();
        assert_eq!(complex_to_json(&again), complex_to_json(&cplx));
    }

    #[test]
    fn big_coefficients_roundtrip_as_strings() {
        let text = r#"{
            "n": 1,
            "ranks": [1, 1],
            "boundaries": [
                {"rows": 1, "cols": 1, "entries": [
                    {"row": 0, "col": 0, "terms": [{"exp": [0], "coef": "123456789012345678901234567890"}]}
                ]}
            ]
        }"#;
        let cplx = parse_complex_json(text).unwrap();
        let p = cplx.boundary(1).unwrap().get(0, 0);
        assert_eq!(
            p.coeff(&[0]),
            BigInt::from_str("123456789012345678901234567890").unwrap()
        );
        let json = complex_to_json(&cplx);
        assert!(json.contains("\"123456789012345678901234567890\""));
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(
            parse_complex_json("{ not json"),
            Err(Error::Json(_))
        ));
        // Wrong exponent length is caught too.
        let text = r#"{"n": 2, "ranks": [1, 1], "boundaries": [
            {"rows": 1, "cols": 1, "entries": [
                {"row": 0, "col": 0, "terms": [{"exp": [1], "coef": 1}]}
            ]}
        ]}"#;
        assert!(matches!(parse_complex_json(text), Err(Error::Parse(_))));
    }

    #[test]
    fn sublattice_specs() {
        let g = parse_sublattice("diag:3,3", 2).unwrap();
        assert_eq!(g.index().unwrap(), BigInt::from(9));
        let g = parse_sublattice("mat:2,1;0,2", 2).unwrap();
        assert_eq!(g.index().unwrap(), BigInt::from(4));
        // Columns are generators: first generator is (2, 0).
        assert_eq!(*g.gens().get(0, 0), BigInt::from(2));
        assert_eq!(*g.gens().get(1, 0), BigInt::from(0));
        // Rectangular lattices parse too.
        let l = parse_sublattice("mat:0;1", 2).unwrap();
        assert_eq!(l.rank(), 1);
        assert!(parse_sublattice("diag:2", 2).is_err());
        assert!(parse_sublattice("nope:1", 1).is_err());
        let round = parse_sublattice(&format_sublattice(&g), 2).unwrap();
        assert_eq!(round.gens(), g.gens());
    }

    #[test]
    fn torsion_point_and_coset_specs() {
        let z = parse_torsion_point("1/2,0", 2).unwrap();
        assert_eq!(format_torsion_point(&z), "1/2,0");
        // Phases normalize into [0, 1).
        let z = parse_torsion_point("-1/3,5/4", 2).unwrap();
        assert_eq!(format_torsion_point(&z), "2/3,1/4");
        assert!(parse_torsion_point("1/0", 1).is_err());

        let coset = parse_coset("u=1/2,1/3;L=mat:1;0", 2).unwrap();
        assert_eq!(format_torsion_point(coset.point()), "1/2,1/3");
        assert_eq!(coset.lattice().rank(), 1);
        assert!(parse_coset("u=1/2", 1).is_err());
    }

    #[test]
    fn float_and_rational_formatting() {
        assert_eq!(format_f64(0.0), "0.00000000000e0");
        assert_eq!(format_f64(-0.0), "0.00000000000e0");
        assert_eq!(format_f64(1.0), "1.00000000000e0");
        assert_eq!(format_f64(-(2.0f64.ln())), "-6.93147180560e-1");
        assert_eq!(
            format_rational(&BigRational::new(BigInt::from(-3), BigInt::from(6))),
            "-1/2"
        );
        assert_eq!(format_rational(&BigRational::one()), "1/1");
    }
}
