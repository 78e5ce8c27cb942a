//! File formats: CSV and JSON report writers plus the matching readers used
//! for round-trip verification.
//!
//! Conventions everywhere: '.' decimal point, ',' separator, LF line
//! endings, no locale dependence. Full-precision artifacts print floats with
//! 17 significant digits (exact f64 round-trip); the table files print the
//! 6-decimal companion values meant for eyeball/diff comparison.
//!
//! Formats:
//! - `spectrum.csv`: header `n,energy,parity,block_size,asymptotic,rel_err_percent`,
//!   one row per level, 17-significant-digit floats.
//! - `spectrum.json`: the same report as a document that also embeds the tool
//!   version and the quadrature settings.
//! - `eigfun_<level>.csv`, `apply_*.csv`: header `x,value`.
//! - block files: first line `parity,n,rel_tol`, then the lower triangle
//!   row-major, one matrix row per line.
//! - `disprove_<candidate>.csv`: two metadata lines (`candidate,...` and
//!   `best_fit_E,...`), a `x,residual` profile, and a trailing summary line
//!   `max_residual,<v>,at_x,<x>`.

use std::fmt::Write as _;
use std::path::Path;

use cauchy_well_core::galerkin::{GalerkinBlock, QuadratureSpec};
use cauchy_well_core::operator::Parity;
use cauchy_well_core::spectrum::{SampledFunction, SpectrumReport};
use serde::{Deserialize, Serialize};

use crate::config::CliError;

/// 17 significant digits: enough to reproduce any f64 bit pattern exactly.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

pub fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", path.display())))
}

// ---------------------------------------------------------------- spectrum

pub const SPECTRUM_HEADER: &str = "n,energy,parity,block_size,asymptotic,rel_err_percent";

/// One parsed `spectrum.csv` row, kept in the printed convention
/// (`rel_err_percent` is the percent figure, not the fraction).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub n: usize,
    pub energy: f64,
    pub parity: Parity,
    pub block_size: usize,
    pub asymptotic: f64,
    pub rel_err_percent: f64,
}

pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut out = String::new();
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for (level, asym) in report.levels.iter().zip(report.asymptotic.iter()) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            level.n,
            fmt17(level.energy),
            level.parity,
            level.source_block_size,
            fmt17(asym.estimate),
            fmt17(100.0 * asym.relative_error),
        );
    }
    out
}

pub fn parse_spectrum_csv(text: &str) -> Result<Vec<SpectrumRow>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SPECTRUM_HEADER => {}
        other => {
            return Err(CliError::Io(format!(
                "spectrum csv header mismatch: {other:?}"
            )))
        }
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(CliError::Io(format!("bad spectrum row: {line}")));
            }
            Ok(SpectrumRow {
                n: parse(f[0])?,
                energy: parse(f[1])?,
                parity: parse_parity(f[2])?,
                block_size: parse(f[3])?,
                asymptotic: parse(f[4])?,
                rel_err_percent: parse(f[5])?,
            })
        })
        .collect()
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T, CliError> {
    s.parse()
        .map_err(|_| CliError::Io(format!("unparsable field: {s}")))
}

fn parse_parity(s: &str) -> Result<Parity, CliError> {
    match s {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        _ => Err(CliError::Io(format!("unknown parity: {s}"))),
    }
}

// -------------------------------------------------------------------- json

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JsonDocument {
    pub tool: String,
    pub version: String,
    pub quad: QuadSettings,
    pub levels: Vec<JsonLevel>,
    pub asymptotic: Vec<JsonAsymptotic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub references: Option<Vec<JsonReference>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JsonLevel {
    pub n: usize,
    pub energy: f64,
    pub parity: String,
    pub block_size: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JsonAsymptotic {
    pub n: usize,
    pub estimate: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JsonReference {
    pub n: usize,
    pub value: f64,
    pub source: String,
}

pub fn spectrum_json(report: &SpectrumReport, quad: &QuadratureSpec) -> String {
    let doc = JsonDocument {
        tool: "cauchy-well".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        quad: QuadSettings {
            rel_tol: quad.rel_tol,
            abs_tol: quad.abs_tol,
            max_subdivisions: quad.max_subdivisions,
            endpoint_margin: quad.endpoint_margin,
        },
        levels: report
            .levels
            .iter()
            .map(|l| JsonLevel {
                n: l.n,
                energy: l.energy,
                parity: l.parity.to_string(),
                block_size: l.source_block_size,
                converged: l.is_converged(),
            })
            .collect(),
        asymptotic: report
            .asymptotic
            .iter()
            .map(|a| JsonAsymptotic {
                n: a.n,
                estimate: a.estimate,
                relative_error: a.relative_error,
            })
            .collect(),
        references: report.references.as_ref().map(|refs| {
            refs.iter()
                .map(|r| JsonReference {
                    n: r.n,
                    value: r.value,
                    source: r.source.clone(),
                })
                .collect()
        }),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serialization is infallible");
    text.push('\n');
    text
}

pub fn parse_spectrum_json(text: &str) -> Result<JsonDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Io(format!("bad spectrum json: {e}")))
}

// ----------------------------------------------------------------- samples

/// Two-column `x,value` file for eigenfunction and operator-image samples.
pub fn samples_csv(f: &SampledFunction) -> String {
    let mut out = String::from("x,value\n");
    for (x, v) in f.grid.iter().zip(f.values.iter()) {
        let _ = writeln!(out, "{},{}", fmt17(*x), fmt17(*v));
    }
    out
}

pub fn parse_samples_csv(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some("x,value") => {}
        other => return Err(CliError::Io(format!("samples header mismatch: {other:?}"))),
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let (x, v) = line
                .split_once(',')
                .ok_or_else(|| CliError::Io(format!("bad sample row: {line}")))?;
            Ok((parse(x)?, parse(v)?))
        })
        .collect()
}

// ------------------------------------------------------------------ blocks

/// Serialize a Galerkin block: metadata line, then the lower triangle
/// row-major with one matrix row per line.
pub fn block_csv(block: &GalerkinBlock) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{},{},{}",
        block.parity(),
        block.n(),
        fmt17(block.quad().rel_tol)
    );
    let lower = block.lower_triangle();
    let mut pos = 0usize;
    for row in 0..block.n() {
        let entries: Vec<String> = lower[pos..pos + row + 1]
            .iter()
            .map(|v| fmt17(*v))
            .collect();
        let _ = writeln!(out, "{}", entries.join(","));
        pos += row + 1;
    }
    out
}

/// Rebuild a block from [`block_csv`] text. Only parity, dimension, `rel_tol`
/// and the entries survive the round trip; the other quadrature settings are
/// restored to defaults and the diagonal provenance flag is conservatively
/// cleared.
pub fn parse_block_csv(text: &str) -> Result<GalerkinBlock, CliError> {
    let mut lines = text.lines();
    let head = lines
        .next()
        .ok_or_else(|| CliError::Io("empty block file".into()))?;
    let fields: Vec<&str> = head.split(',').collect();
    if fields.len() != 3 {
        return Err(CliError::Io(format!("bad block header: {head}")));
    }
    let parity = parse_parity(fields[0])?;
    let n: usize = parse(fields[1])?;
    let rel_tol: f64 = parse(fields[2])?;
    let mut lower = Vec::with_capacity(n * (n + 1) / 2);
    for line in lines.filter(|l| !l.is_empty()) {
        for tok in line.split(',') {
            lower.push(parse::<f64>(tok)?);
        }
    }
    let quad = QuadratureSpec {
        rel_tol,
        ..QuadratureSpec::default()
    };
    GalerkinBlock::from_lower_triangle(parity, n, lower, quad, false)
        .map_err(|e| CliError::Io(format!("inconsistent block file: {e}")))
}

// ---------------------------------------------------------------- disprove

pub fn disprove_csv(
    candidate: &str,
    best_fit_energy: f64,
    grid: &[f64],
    residuals: &[f64],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "candidate,{candidate}");
    let _ = writeln!(out, "best_fit_E,{}", fmt17(best_fit_energy));
    out.push_str("x,residual\n");
    let mut max_r = f64::NEG_INFINITY;
    let mut max_x = f64::NAN;
    for (x, r) in grid.iter().zip(residuals.iter()) {
        let _ = writeln!(out, "{},{}", fmt17(*x), fmt17(*r));
        if *r > max_r {
            max_r = *r;
            max_x = *x;
        }
    }
    let _ = writeln!(out, "max_residual,{},at_x,{}", fmt17(max_r), fmt17(max_x));
    out
}

// ------------------------------------------------------------------ tables

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

/// Comparison table: analytic diagonal, computed spectra at the given sizes,
/// and the external reference rows.
pub fn table_i_csv(
    diagonal: &[f64],
    computed: &[(usize, Vec<f64>)],
    references: &[&crate::references::ReferenceSet],
    levels: usize,
) -> String {
    let mut out = String::from("row");
    for n in 1..=levels {
        let _ = write!(out, ",E_{n}");
    }
    out.push('\n');

    let fill = |out: &mut String, values: &[f64]| {
        for i in 0..levels {
            match values.get(i) {
                Some(v) => {
                    let _ = write!(out, ",{}", fmt6(*v));
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    };

    out.push_str("diagonal");
    fill(&mut out, diagonal);
    for (size, values) in computed {
        let _ = write!(out, "computed_{size}x{size}");
        fill(&mut out, values);
    }
    for set in references {
        out.push_str(set.tag);
        for n in 1..=levels {
            match set.values.iter().find(|(m, _)| *m == n) {
                Some((_, v)) => {
                    let _ = write!(out, ",{}", fmt6(*v));
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Size-evolution table: one column per block size, one row per level.
pub fn table_ii_csv(sizes: &[usize], columns: &[Vec<f64>], levels: usize) -> String {
    let mut out = String::from("level");
    for s in sizes {
        let _ = write!(out, ",{s}");
    }
    out.push('\n');
    for i in 0..levels {
        let _ = write!(out, "E_{}", i + 1);
        for col in columns {
            match col.get(i) {
                Some(v) => {
                    let _ = write!(out, ",{}", fmt6(*v));
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Asymptotic-law table: computed level, `nπ/2 − π/8`, relative error in
/// percent, and the external reference where available.
pub fn table_iii_csv(report: &SpectrumReport) -> String {
    let mut out = String::from("n,energy,asymptotic,rel_err_percent,reference_kkms\n");
    for (level, asym) in report.levels.iter().zip(report.asymptotic.iter()) {
        let reference = crate::references::KKMS
            .values
            .iter()
            .find(|(m, _)| *m == level.n)
            .map(|(_, v)| fmt6(*v))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            level.n,
            fmt6(level.energy),
            fmt6(asym.estimate),
            fmt6(100.0 * asym.relative_error),
            reference,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cauchy_well_core::eigensolver::EigenPair;
    use cauchy_well_core::spectrum::{merge, synthesize, uniform_grid};

    fn sample_report() -> SpectrumReport {
        let even = vec![
            EigenPair {
                value: 1.1704897,
                vector: vec![0.0; 3],
                parity: Parity::Even,
                residual: 0.0,
            },
            EigenPair {
                value: 4.35648331,
                vector: vec![0.0; 3],
                parity: Parity::Even,
                residual: 0.0,
            },
        ];
        let odd = vec![EigenPair {
            value: 2.780209,
            vector: vec![0.0; 3],
            parity: Parity::Odd,
            residual: 0.0,
        }];
        merge(&even, &odd, 3).unwrap()
    }

    #[test]
    fn fmt17_round_trips_bitwise() {
        for &x in &[
            0.0,
            1.0,
            -1.0,
            core::f64::consts::PI,
            1.1577738,
            f64::MIN_POSITIVE,
            1.0 / 3.0,
            -9.099426e3,
        ] {
            let s = fmt17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn spectrum_csv_round_trip_is_exact() {
        let report = sample_report();
        let text = spectrum_csv(&report);
        let rows = parse_spectrum_csv(&text).unwrap();
        assert_eq!(rows.len(), 3);
        for (row, level) in rows.iter().zip(report.levels.iter()) {
            assert_eq!(row.n, level.n);
            assert_eq!(row.energy.to_bits(), level.energy.to_bits());
            assert_eq!(row.parity, level.parity);
        }
        for (row, asym) in rows.iter().zip(report.asymptotic.iter()) {
            assert_eq!(row.asymptotic.to_bits(), asym.estimate.to_bits());
            assert_eq!(
                row.rel_err_percent.to_bits(),
                (100.0 * asym.relative_error).to_bits()
            );
        }
        // Re-serializing the parsed rows reproduces the bytes.
        let mut again = String::from(SPECTRUM_HEADER);
        again.push('\n');
        for row in &rows {
            again.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.n,
                fmt17(row.energy),
                row.parity,
                row.block_size,
                fmt17(row.asymptotic),
                fmt17(row.rel_err_percent)
            ));
        }
        assert_eq!(text, again);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut report = sample_report();
        report.references = Some(crate::references::kkms_references(3));
        let quad = QuadratureSpec::default();
        let text = spectrum_json(&report, &quad);
        let doc = parse_spectrum_json(&text).unwrap();
        assert_eq!(doc.tool, "cauchy-well");
        assert_eq!(doc.levels.len(), 3);
        assert_eq!(doc.levels[0].energy.to_bits(), 1.1704897f64.to_bits());
        assert_eq!(doc.quad.rel_tol.to_bits(), quad.rel_tol.to_bits());
        assert!(doc.references.as_ref().unwrap().len() == 3);
        // Serialization of the parsed document is byte-identical.
        let mut again = serde_json::to_string_pretty(&doc).unwrap();
        again.push('\n');
        assert_eq!(text, again);
    }

    #[test]
    fn samples_csv_round_trip() {
        let pair = EigenPair {
            value: 1.0,
            vector: vec![1.0],
            parity: Parity::Even,
            residual: 0.0,
        };
        let f = synthesize(&pair, &uniform_grid(11)).unwrap();
        let text = samples_csv(&f);
        let rows = parse_samples_csv(&text).unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0], (-1.0, 0.0));
        for (i, (x, v)) in rows.iter().enumerate() {
            assert_eq!(x.to_bits(), f.grid[i].to_bits());
            assert_eq!(v.to_bits(), f.values[i].to_bits());
        }
    }

    #[test]
    fn block_csv_round_trip() {
        let block = GalerkinBlock::from_lower_triangle(
            Parity::Odd,
            3,
            vec![2.0, -0.25, 3.0, 0.125, -0.5, 4.0],
            QuadratureSpec::default(),
            true,
        )
        .unwrap();
        let text = block_csv(&block);
        assert!(text.starts_with("odd,3,"));
        let back = parse_block_csv(&text).unwrap();
        assert_eq!(back.parity(), Parity::Odd);
        assert_eq!(back.n(), 3);
        assert_eq!(back.lower_triangle(), block.lower_triangle());
        assert_eq!(back.quad().rel_tol, block.quad().rel_tol);
    }

    #[test]
    fn disprove_format_carries_summary() {
        let text = disprove_csv("cos_half", 1.25, &[-0.5, 0.0, 0.5], &[0.3, 0.1, 0.3]);
        assert!(text.starts_with("candidate,cos_half\nbest_fit_E,1.25"));
        let last = text.lines().last().unwrap();
        let fields: Vec<&str> = last.split(',').collect();
        assert_eq!(fields[0], "max_residual");
        assert_eq!(
            fields[1].parse::<f64>().unwrap().to_bits(),
            0.3f64.to_bits()
        );
        assert_eq!(fields[2], "at_x");
        // Ties go to the first grid point scanned.
        assert_eq!(fields[3].parse::<f64>().unwrap(), -0.5);
    }

    #[test]
    fn table_formats() {
        let t1 = table_i_csv(
            &[1.21531728, 2.83630315],
            &[(2, vec![1.191256, 2.81019])],
            &crate::references::ALL,
            2,
        );
        assert!(t1.starts_with("row,E_1,E_2\n"));
        assert!(t1.contains("diagonal,1.215317,2.836303\n"));
        assert!(t1.contains("computed_2x2,1.191256,2.810190\n"));
        assert!(t1.contains("KKMS,1.157774,2.754755\n"));

        let t2 = table_ii_csv(&[30, 50], &[vec![1.160505], vec![1.159428]], 1);
        assert!(t2.contains("level,30,50\nE_1,1.160505,1.159428\n"));

        let t3 = table_iii_csv(&sample_report());
        assert!(t3.starts_with("n,energy,asymptotic,rel_err_percent,reference_kkms\n"));
        assert!(t3.contains("1,1.170490,1.178097,0.649"));
        assert!(t3.contains(",1.157774\n"));
    }
}
