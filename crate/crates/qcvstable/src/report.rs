//! CSV and JSON serialization of experiment outputs and run manifests.

use std::path::{Path, PathBuf};

use qcvstable_core::evaluation::{robustness_diff, BiasGrid, RmseReport};
use serde::Serialize;

use crate::cache::write_atomic;
use crate::error::{Error, Result};

/// One output row; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub method: String,
    pub metric: String,
    pub value: f64,
    pub failures: usize,
}

pub fn rmse_rows(report: &RmseReport) -> Vec<ReportRow> {
    report
        .rows
        .iter()
        .map(|r| ReportRow {
            alpha: r.alpha,
            beta: r.beta,
            n: r.n,
            method: r.method.name().to_owned(),
            metric: "rmse".to_owned(),
            value: r.rmse,
            failures: r.failures,
        })
        .collect()
}

/// Mean rows followed by `abs_diff` rows against the `β = 0` column.
pub fn robustness_rows(grid: &BiasGrid) -> Result<Vec<ReportRow>> {
    let mut rows: Vec<ReportRow> = grid
        .cells
        .iter()
        .map(|c| ReportRow {
            alpha: c.alpha,
            beta: c.beta,
            n: c.n,
            method: c.method.name().to_owned(),
            metric: "mean".to_owned(),
            value: c.mean,
            failures: c.failures,
        })
        .collect();
    for (d, c) in robustness_diff(grid)?.iter().zip(&grid.cells) {
        rows.push(ReportRow {
            alpha: d.alpha,
            beta: d.beta,
            n: d.n,
            method: d.method.name().to_owned(),
            metric: "abs_diff".to_owned(),
            value: d.abs_diff,
            failures: c.failures,
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[ReportRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Data(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Data(e.to_string()))
}

/// JSON array of rows; non-finite values become `null`.
pub fn to_json(rows: &[ReportRow]) -> Result<String> {
    serde_json::to_string_pretty(rows).map_err(|e| Error::Data(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableDigest {
    pub name: String,
    pub path: String,
    pub sha256: String,
}

/// Everything needed to re-run a command.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Command line that reproduces the run, seed included.
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    pub version: String,
    pub table_digests: Vec<TableDigest>,
}

impl RunManifest {
    pub fn new(command: &str, argv: Vec<String>, config: serde_json::Value, master_seed: Option<u64>) -> Self {
        Self {
            command: command.to_owned(),
            argv,
            config,
            master_seed,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            table_digests: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Data(e.to_string()))
    }

    /// `<output>.manifest.json`.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write_beside(&self, output: &Path) -> Result<PathBuf> {
        let path = Self::path_for(output);
        write_atomic(&path, &(self.to_json()? + "\n"))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcvstable_core::evaluation::{BiasCell, RmseRow};
    use qcvstable_core::Method;

    #[test]
    fn csv_columns_and_values() {
        let report = RmseReport {
            rows: vec![RmseRow {
                alpha: 1.5,
                beta: 0.0,
                n: 1000,
                method: Method::N1,
                rmse: 0.0517,
                failures: 2,
            }],
        };
        let csv = to_csv(&rmse_rows(&report)).unwrap();
        assert_eq!(csv, "alpha,beta,n,method,metric,value,failures\n1.5,0.0,1000,n1,rmse,0.0517,2\n");
    }

    #[test]
    fn robustness_rows_include_zero_diff_column() {
        let cell = |beta: f64, mean: f64| BiasCell {
            alpha: 1.5,
            beta,
            n: 100,
            method: Method::N1,
            mean,
            count: 10,
            failures: 0,
        };
        let grid = BiasGrid {
            cells: vec![cell(0.0, 1.5), cell(1.0, 1.45)],
        };
        let rows = robustness_rows(&grid).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[2].metric, "abs_diff");
        assert_eq!(rows[2].value, 0.0);
        assert!((rows[3].value - 0.05).abs() < 1e-12);
        let missing = BiasGrid {
            cells: vec![cell(1.0, 1.45)],
        };
        assert!(robustness_rows(&missing).is_err());
    }

    #[test]
    fn manifest_path() {
        assert_eq!(
            RunManifest::path_for(Path::new("out/r.csv")),
            PathBuf::from("out/r.csv.manifest.json")
        );
    }
}
