//! CSV formats.
//!
//! * Series CSV: one value per row, optional single header line.
//! * Window CSV: one window per row, comma separated, optional header line.
//!   Provenance lives in a sidecar with the same stem and a `.meta.csv`
//!   extension. Stylized datasets use the columns `n,content_idx,style_idx,seed`;
//!   other datasets use `n,source,start`.
//!
//! Values are written with Rust's shortest round-trip float formatting, so a
//! write followed by a read reproduces every value exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Lineage, WindowDataset, WindowMeta};
use crate::error::{Error, Result};
use crate::series::Series;

/// Column of a series CSV, by header name or 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Index(usize),
    Name(String),
}

impl Default for Column {
    fn default() -> Self {
        Self::Index(0)
    }
}

impl std::str::FromStr for Column {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(s.to_string()),
        })
    }
}

fn open_reader(path: &Path) -> Result<csv::Reader<File>> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let file = File::open(path)?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn records(path: &Path) -> Result<Vec<csv::StringRecord>> {
    open_reader(path)?
        .records()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::Parse {
                row: i + 1,
                message: e.to_string(),
            })
        })
        .filter(|r| !matches!(r, Ok(rec) if rec.iter().all(str::is_empty)))
        .collect()
}

fn is_numeric_row(rec: &csv::StringRecord) -> bool {
    rec.iter().all(|f| f.parse::<f64>().is_ok())
}

fn parse_value(field: &str, row: usize) -> Result<f64> {
    let v: f64 = field.parse().map_err(|_| Error::Parse {
        row,
        message: format!("not a number: {field:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            row,
            message: format!("non-finite value: {field:?}"),
        });
    }
    Ok(v)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into())
}

/// Reads one column of a series CSV. Rows are numbered from 1, counting the
/// header line.
pub fn ingest_csv(path: &Path, column: &Column) -> Result<Series> {
    let rows = records(path)?;
    let has_header = rows.first().is_some_and(|r| !is_numeric_row(r));
    let index = match column {
        Column::Index(i) => *i,
        Column::Name(name) => {
            let header = rows.first().filter(|_| has_header).ok_or_else(|| Error::Parse {
                row: 1,
                message: format!("no header line to look up column {name:?}"),
            })?;
            header.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
                row: 1,
                message: format!("column {name:?} not found in header"),
            })?
        }
    };
    let skip = usize::from(has_header);
    let values = rows
        .iter()
        .enumerate()
        .skip(skip)
        .map(|(i, rec)| {
            let field = rec.get(index).ok_or_else(|| Error::Parse {
                row: i + 1,
                message: format!("missing column {index}"),
            })?;
            parse_value(field, i + 1)
        })
        .collect::<Result<Vec<f64>>>()?;
    Series::with_label(values, stem(path))
}

pub fn write_series_csv(path: &Path, series: &Series) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "value")?;
    for v in series.values() {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

/// `data.csv` -> `data.meta.csv`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_file_name(format!("{}.meta.csv", stem(path)))
}

pub fn read_windows(path: &Path) -> Result<WindowDataset> {
    let rows = records(path)?;
    let has_header = rows.first().is_some_and(|r| !is_numeric_row(r));
    let skip = usize::from(has_header);
    let mut windows = Vec::with_capacity(rows.len());
    for (i, rec) in rows.iter().enumerate().skip(skip) {
        let w = rec
            .iter()
            .map(|f| parse_value(f, i + 1))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = windows.first().map(Vec::len) {
            if w.len() != first {
                return Err(Error::Parse {
                    row: i + 1,
                    message: format!("window has {} values, expected {first}", w.len()),
                });
            }
        }
        windows.push(w);
    }
    let sidecar = sidecar_path(path);
    let meta = if sidecar.exists() {
        read_meta(&sidecar, windows.len())?
    } else {
        let source = stem(path);
        (0..windows.len())
            .map(|i| WindowMeta {
                source: source.clone(),
                start: Some(i),
                lineage: None,
            })
            .collect()
    };
    WindowDataset::new(windows, meta)
}

fn read_meta(path: &Path, expected: usize) -> Result<Vec<WindowMeta>> {
    let rows = records(path)?;
    let header: Vec<String> = rows
        .first()
        .ok_or(Error::Parse {
            row: 1,
            message: "empty metadata file".into(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    let int = |rec: &csv::StringRecord, col: usize, row: usize| -> Result<u64> {
        rec.get(col)
            .and_then(|f| f.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse {
                row,
                message: format!("bad integer in column {col}"),
            })
    };
    let lineage = header == ["n", "content_idx", "style_idx", "seed"];
    if !lineage && header != ["n", "source", "start"] {
        return Err(Error::Parse {
            row: 1,
            message: format!("unrecognized metadata header {header:?}"),
        });
    }
    let meta: Vec<WindowMeta> = rows
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, rec)| {
            let row = i + 1;
            if lineage {
                Ok(WindowMeta {
                    source: "stylized".into(),
                    start: Some(int(rec, 0, row)? as usize),
                    lineage: Some(Lineage {
                        content_idx: int(rec, 1, row)? as usize,
                        style_idx: int(rec, 2, row)? as usize,
                        seed: int(rec, 3, row)?,
                    }),
                })
            } else {
                let start = match rec.get(2) {
                    Some("") | None => None,
                    Some(_) => Some(int(rec, 2, row)? as usize),
                };
                Ok(WindowMeta {
                    source: rec.get(1).unwrap_or_default().to_string(),
                    start,
                    lineage: None,
                })
            }
        })
        .collect::<Result<_>>()?;
    if meta.len() != expected {
        return Err(Error::Parse {
            row: meta.len() + 1,
            message: format!("metadata has {} rows, data has {expected}", meta.len()),
        });
    }
    Ok(meta)
}

/// Writes the window CSV and its metadata sidecar.
pub fn write_windows(path: &Path, ds: &WindowDataset) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for w in ds.windows() {
        let line: Vec<String> = w.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;

    let mut meta = BufWriter::new(File::create(sidecar_path(path))?);
    let all_lineage = !ds.is_empty() && ds.meta().iter().all(|m| m.lineage.is_some());
    if all_lineage {
        writeln!(meta, "n,content_idx,style_idx,seed")?;
        for (i, m) in ds.meta().iter().enumerate() {
            let l = m.lineage.expect("checked above");
            let n = m.start.unwrap_or(i);
            writeln!(meta, "{n},{},{},{}", l.content_idx, l.style_idx, l.seed)?;
        }
    } else {
        writeln!(meta, "n,source,start")?;
        for (i, m) in ds.meta().iter().enumerate() {
            let start = m.start.map(|s| s.to_string()).unwrap_or_default();
            writeln!(meta, "{i},{},{start}", m.source.replace(',', "_"))?;
        }
    }
    meta.flush()?;
    Ok(())
}
