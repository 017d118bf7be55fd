//! CSV input.

use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fuzzrank_core::dataset::Dataset;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that roots relative dataset paths.
pub const DATA_DIR_VAR: &str = "FUZZRANK_DATA_DIR";

/// Missing-value marker in the breast cancer table.
pub const MISSING: &str = "?";

/// Rows of the canonical breast cancer table and what survives preprocessing.
pub const WBC_RAW_ROWS: usize = 699;
pub const WBC_COMPLETE_ROWS: usize = 683;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
}

impl Default for LabelColumn {
    fn default() -> Self {
        LabelColumn::Name(String::new())
    }
}

impl LabelColumn {
    /// The last column when no name was given.
    pub fn is_last(&self) -> bool {
        matches!(self, LabelColumn::Name(n) if n.is_empty())
    }

    fn resolve(&self, headers: Option<&[String]>, width: usize, path: &Path) -> Result<usize> {
        let unknown = || Error::UnknownLabel {
            path: path.to_path_buf(),
            label: self.to_string(),
        };
        match self {
            _ if self.is_last() => width.checked_sub(1).ok_or_else(unknown),
            LabelColumn::Index(i) if *i < width => Ok(*i),
            LabelColumn::Index(_) => Err(unknown()),
            LabelColumn::Name(name) => headers
                .and_then(|h| h.iter().position(|c| c == name))
                .ok_or_else(unknown),
        }
    }
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            _ if self.is_last() => f.write_str("<last>"),
            LabelColumn::Index(i) => write!(f, "{i}"),
            LabelColumn::Name(n) => f.write_str(n),
        }
    }
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

/// Dataset-specific cleaning applied while loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preprocess {
    #[default]
    None,
    /// Drop the sample id column and rows with `?` cells.
    Wbc,
}

/// Cells of a CSV file, as read.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub path: PathBuf,
    pub headers: Option<Vec<String>>,
    pub rows: Vec<Vec<String>>,
}

/// Joins relative paths onto `FUZZRANK_DATA_DIR` when it is set.
pub fn resolve_path(path: &Path) -> PathBuf {
    match std::env::var_os(DATA_DIR_VAR) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn looks_numeric(cell: &str) -> bool {
    let cell = cell.trim();
    cell == MISSING || cell.parse::<f64>().is_ok()
}

/// Reads a CSV file. With `detect_header` a first row made only of numbers
/// and missing markers is taken as data; otherwise the first row is always
/// the header.
pub fn read_table(path: &Path, detect_header: bool) -> Result<RawTable> {
    let path = resolve_path(path);
    let file = File::open(&path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.clone()),
        _ => Error::Io {
            path: path.clone(),
            source: e,
        },
    })?;
    let csv_err = |source| Error::Csv {
        path: path.clone(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        rows.push(record.iter().map(str::to_string).collect::<Vec<_>>());
    }
    let has_header = match rows.first() {
        Some(first) => !detect_header || !first.iter().all(|c| looks_numeric(c)),
        None => false,
    };
    let headers = if has_header { Some(rows.remove(0)) } else { None };
    Ok(RawTable { path, headers, rows })
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into())
}

/// Builds a dataset from a table whose cells other than the label column
/// must all be numbers. Classes are numbered in order of first appearance.
pub fn table_to_dataset(table: &RawTable, label: &LabelColumn) -> Result<Dataset> {
    let path = &table.path;
    let width = table
        .headers
        .as_ref()
        .map(Vec::len)
        .or_else(|| table.rows.first().map(Vec::len))
        .unwrap_or(0);
    let label_at = label.resolve(table.headers.as_deref(), width, path)?;
    let names: Vec<String> = match &table.headers {
        Some(h) => h.clone(),
        None => (0..width).map(|i| format!("x{i}")).collect(),
    };
    let feature_names: Vec<String> = names
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_at)
        .map(|(_, n)| n.clone())
        .collect();
    let mut classes: Vec<&str> = Vec::new();
    let mut labels = Vec::with_capacity(table.rows.len());
    let mut values = Vec::with_capacity(table.rows.len() * feature_names.len());
    let header_lines = usize::from(table.headers.is_some());
    for (r, row) in table.rows.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            if c == label_at {
                let id = match classes.iter().position(|k| k == cell) {
                    Some(id) => id,
                    None if classes.len() < 2 => {
                        classes.push(cell);
                        classes.len() - 1
                    }
                    None => return Err(Error::TooManyClasses(path.clone())),
                };
                labels.push(id as u8);
            } else {
                let v = cell.parse::<f64>().map_err(|_| Error::NonNumeric {
                    path: path.clone(),
                    line: r + 1 + header_lines,
                    column: names[c].clone(),
                    value: cell.clone(),
                })?;
                values.push(v);
            }
        }
    }
    Ok(Dataset::new(file_stem(path), values, labels, feature_names)?)
}

/// Loads a CSV file with a header row.
pub fn load_csv(path: &Path, label: &LabelColumn) -> Result<Dataset> {
    let table = read_table(path, false)?;
    if table.headers.is_none() {
        return Err(Error::MissingHeader(table.path));
    }
    table_to_dataset(&table, label)
}

/// Cleans the breast cancer table: drops the sample id (first column) and
/// every row with a missing cell. The class is the last column unless
/// `label` names another one. The canonical 699-row table must leave 683
/// rows.
pub fn preprocess_wbc(raw: &RawTable, label: &LabelColumn) -> Result<Dataset> {
    let complete: Vec<Vec<String>> = raw
        .rows
        .iter()
        .filter(|row| !row.iter().any(|c| c == MISSING))
        .map(|row| row[1.min(row.len())..].to_vec())
        .collect();
    if complete.is_empty() {
        return Err(Error::EmptyAfterPreprocessing);
    }
    if raw.rows.len() == WBC_RAW_ROWS && complete.len() != WBC_COMPLETE_ROWS {
        return Err(Error::UnexpectedRowCount {
            expected: WBC_COMPLETE_ROWS,
            got: complete.len(),
        });
    }
    let label = match label {
        LabelColumn::Index(0) => {
            return Err(Error::UnknownLabel {
                path: raw.path.clone(),
                label: label.to_string(),
            })
        }
        LabelColumn::Index(i) => LabelColumn::Index(i - 1),
        other => other.clone(),
    };
    let table = RawTable {
        path: raw.path.clone(),
        headers: raw.headers.as_ref().map(|h| h[1.min(h.len())..].to_vec()),
        rows: complete,
    };
    table_to_dataset(&table, &label)
}

/// Reads a dataset file and applies `preprocess`.
pub fn load_dataset(path: &Path, label: &LabelColumn, preprocess: Preprocess) -> Result<Dataset> {
    match preprocess {
        Preprocess::None => load_csv(path, label),
        Preprocess::Wbc => preprocess_wbc(&read_table(path, true)?, label),
    }
}
