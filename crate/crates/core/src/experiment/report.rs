use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::runner::{Algorithm, Denominator, ResultRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "md" | "markdown" => Ok(Self::Markdown),
            other => Err(format!("unknown format {other:?}, expected csv or md")),
        }
    }
}

/// One CSV line. Timing is left out so output is byte-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRecord {
    #[serde(rename = "R")]
    pub ratio: usize,
    pub n: usize,
    pub algorithm: Algorithm,
    #[serde(rename = "ratio")]
    pub ratio_mean: Option<f64>,
    pub denominator: Denominator,
    pub trials: usize,
}

impl From<&ResultRow> for CsvRecord {
    fn from(r: &ResultRow) -> Self {
        Self {
            ratio: r.ratio,
            n: r.stations,
            algorithm: r.algorithm,
            ratio_mean: r.mean_ratio,
            denominator: r.denominator,
            trials: r.trials,
        }
    }
}

fn sorted(rows: &[ResultRow]) -> Vec<&ResultRow> {
    let mut v: Vec<&ResultRow> = rows.iter().collect();
    v.sort_by_key(|r| (r.ratio, r.stations, r.algorithm));
    v
}

fn csv_bytes(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in sorted(rows) {
        w.serialize(CsvRecord::from(r))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// One table per `R`, algorithms as rows and station counts as columns.
/// A `*` marks columns whose ratios are against the exact optimum.
fn markdown(rows: &[ResultRow]) -> String {
    let rows = sorted(rows);
    let ratios: BTreeSet<usize> = rows.iter().map(|r| r.ratio).collect();
    let mut out = String::new();
    for ratio in ratios {
        let block: Vec<&&ResultRow> = rows.iter().filter(|r| r.ratio == ratio).collect();
        let stations: BTreeSet<usize> = block.iter().map(|r| r.stations).collect();
        let algorithms: BTreeSet<Algorithm> = block.iter().map(|r| r.algorithm).collect();

        if !out.is_empty() {
            out.push('\n');
        }
        let _ = write!(out, "| R={ratio} |");
        for &n in &stations {
            let exact = block
                .iter()
                .filter(|r| r.stations == n)
                .all(|r| r.denominator == Denominator::Exact);
            let _ = write!(out, " {n}{} |", if exact { "*" } else { "" });
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(stations.len()));
        out.push('\n');
        for alg in algorithms {
            let _ = write!(out, "| {alg} |");
            for &n in &stations {
                let cell = block
                    .iter()
                    .find(|r| r.stations == n && r.algorithm == alg)
                    .and_then(|r| r.mean_ratio)
                    .map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"));
                let _ = write!(out, " {cell} |");
            }
            out.push('\n');
        }
    }
    out
}

pub fn emit_results(rows: &[ResultRow], format: OutputFormat) -> Result<Vec<u8>> {
    if rows.is_empty() {
        return Err(Error::Precondition("no result rows to emit".into()));
    }
    match format {
        OutputFormat::Csv => csv_bytes(rows),
        OutputFormat::Markdown => Ok(markdown(rows).into_bytes()),
    }
}

pub fn parse_csv(bytes: &[u8]) -> Result<Vec<CsvRecord>> {
    csv::Reader::from_reader(bytes)
        .deserialize()
        .map(|rec| rec.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(ratio: usize, stations: usize, algorithm: Algorithm, mean: Option<f64>) -> ResultRow {
        ResultRow {
            ratio,
            stations,
            algorithm,
            mean_ratio: mean,
            denominator: if stations == 1 {
                Denominator::Exact
            } else {
                Denominator::LpBound
            },
            trials: 10,
            failures: 0,
            mean_ms: 1.5,
            max_ms: 2.0,
        }
    }

    #[test]
    fn one_row_csv() {
        let bytes = emit_results(
            &[row(1, 1, Algorithm::Greedy, Some(0.875))],
            OutputFormat::Csv,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "R,n,algorithm,ratio,denominator,trials\n1,1,G,0.875,exact,10\n"
        );
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            row(2, 5, Algorithm::BoostedRandomizedRounding, Some(0.1 + 0.2)),
            row(1, 1, Algorithm::RandomizedRounding, Some(1.0)),
            row(1, 5, Algorithm::Greedy, None),
        ];
        let parsed = parse_csv(&emit_results(&rows, OutputFormat::Csv).unwrap()).unwrap();
        let expected: Vec<CsvRecord> = sorted(&rows).into_iter().map(CsvRecord::from).collect();
        assert_eq!(parsed, expected);
    }

    #[test]
    fn markdown_groups_by_ratio() {
        let rows = vec![
            row(1, 1, Algorithm::Greedy, Some(0.8884)),
            row(1, 5, Algorithm::Greedy, Some(0.9)),
            row(2, 1, Algorithm::Greedy, Some(0.93)),
        ];
        let md = String::from_utf8(emit_results(&rows, OutputFormat::Markdown).unwrap()).unwrap();
        assert_eq!(md.matches("| R=").count(), 2);
        assert!(md.contains("| R=1 | 1* | 5 |"));
        assert!(md.contains("| G | 0.888 | 0.900 |"));
    }

    #[test]
    fn empty_rows_are_rejected() {
        assert!(emit_results(&[], OutputFormat::Csv).is_err());
    }
}
