//! Reading observations from plain or CSV files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Fewest observations accepted from a data file.
pub const MIN_VALUES: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Format {
    /// One number per line; blank lines and `#` comments are skipped.
    Plain,
    /// Comma-separated with a header row; `column` selects by name, else
    /// the first column whose first data row parses as a number.
    Csv { column: Option<String> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataFile {
    pub path: PathBuf,
    pub format: Format,
    pub values: Vec<f64>,
}

impl DataFile {
    /// Reads `path`; the format is CSV when a column is requested or the
    /// extension is `.csv`.
    pub fn read(path: impl AsRef<Path>, column: Option<&str>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_csv = column.is_some()
            || path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let format = if is_csv {
            Format::Csv {
                column: column.map(str::to_owned),
            }
        } else {
            Format::Plain
        };
        let values = match &format {
            Format::Plain => parse_plain(path, &text)?,
            Format::Csv { column } => parse_csv(path, &text, column.as_deref())?,
        };
        if values.len() < MIN_VALUES {
            return Err(Error::Data(format!(
                "{}: {} values, need at least {MIN_VALUES}",
                path.display(),
                values.len()
            )));
        }
        Ok(Self {
            path: path.to_owned(),
            format,
            values,
        })
    }
}

fn parse_number(path: &Path, line: usize, field: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        path: path.to_owned(),
        line,
        message: format!("not a number: {:?}", field.trim()),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            path: path.to_owned(),
            line,
            message: format!("non-finite value {v}"),
        });
    }
    Ok(v)
}

fn parse_plain(path: &Path, text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_number(path, i + 1, l))
        .collect()
}

fn parse_csv(path: &Path, text: &str, column: Option<&str>) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?
        .clone();
    let records: Vec<csv::StringRecord> = reader
        .records()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    let index = match column {
        Some(name) => headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::Data(format!("{}: no column named {name:?}", path.display()))
        })?,
        None => {
            let first = records
                .first()
                .ok_or_else(|| Error::Data(format!("{}: no data rows", path.display())))?;
            first
                .iter()
                .position(|f| f.parse::<f64>().is_ok())
                .ok_or_else(|| Error::Data(format!("{}: no numeric column", path.display())))?
        }
    };
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            // header is line 1
            let line = r.position().map_or(i + 2, |p| p.line() as usize);
            parse_number(path, line, r.get(index).unwrap_or(""))
        })
        .collect()
}
