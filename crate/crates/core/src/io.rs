//! File emission: CSV tables, legacy ASCII VTK and the per-run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::harness::ConvergenceSeries;
use crate::ib::Point;

/// Formats a value with 17 significant digits so it round-trips exactly.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with one header row.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|s| s.as_ref().to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: &[f64]) -> Result<()> {
        self.push_cells(row.iter().map(|&x| fmt_num(x)).collect())
    }

    /// Appends a row of preformatted cells.
    pub fn push_cells(&mut self, cells: Vec<String>) -> Result<()> {
        if cells.len() != self.header.len() {
            return Err(Error::DimensionMismatch {
                expected: self.header.len(),
                actual: cells.len(),
            });
        }
        self.rows.push(cells);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// `resolution,error,wall_time_seconds`; the last column is empty when the
/// series carries no timings.
pub fn series_table(series: &ConvergenceSeries) -> CsvTable {
    let mut t = CsvTable::new(&["resolution", "error", "wall_time_seconds"]);
    for k in 0..series.len() {
        let wall = series
            .wall_time()
            .map(|w| fmt_num(w[k]))
            .unwrap_or_default();
        t.push_cells(vec![
            fmt_num(series.resolution()[k]),
            fmt_num(series.error()[k]),
            wall,
        ])
        .expect("three columns");
    }
    t
}

/// Legacy ASCII VTK structured points holding one scalar field.
pub fn vtk_structured_points(field: &Field, name: &str) -> String {
    let n = field.n();
    let h = field.h();
    let mut out = String::with_capacity(n * n * 24 + 256);
    let _ = write!(
        out,
        "# vtk DataFile Version 2.0\n{name}\nASCII\nDATASET STRUCTURED_POINTS\n\
         DIMENSIONS {n} {n} 1\nORIGIN 0 0 0\nSPACING {h} {h} 1\n\
         POINT_DATA {}\nSCALARS {name} double 1\nLOOKUP_TABLE default\n",
        n * n
    );
    for x in field.as_slice() {
        out.push_str(&fmt_num(*x));
        out.push('\n');
    }
    out
}

/// Legacy ASCII VTK polydata with one vertex cell per point.
pub fn vtk_polydata(points: &[Point], name: &str) -> String {
    let m = points.len();
    let mut out = format!(
        "# vtk DataFile Version 2.0\n{name}\nASCII\nDATASET POLYDATA\nPOINTS {m} double\n"
    );
    for p in points {
        let _ = writeln!(out, "{} {} 0", fmt_num(p[0]), fmt_num(p[1]));
    }
    let _ = writeln!(out, "VERTICES {m} {}", 2 * m);
    for k in 0..m {
        let _ = writeln!(out, "1 {k}");
    }
    out
}

/// Writes files below a root directory and remembers each one for
/// `manifest.txt`.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<(String, u64)>,
}

pub const MANIFEST: &str = "manifest.txt";

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| Error::file(&root, e))?;
        Ok(Self {
            root,
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    /// Writes `contents` to `rel` (slash-separated, relative to the root).
    pub fn write(&mut self, rel: &str, contents: &str) -> Result<PathBuf> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::file(parent, e))?;
        }
        fs::write(&path, contents).map_err(|e| Error::file(&path, e))?;
        self.record(rel, contents.len() as u64);
        Ok(path)
    }

    /// Records a file written by someone else, reading its size from disk.
    pub fn adopt(&mut self, rel: &str) -> Result<()> {
        let path = self.root.join(rel);
        let size = fs::metadata(&path).map_err(|e| Error::file(&path, e))?.len();
        self.record(rel, size);
        Ok(())
    }

    fn record(&mut self, rel: &str, size: u64) {
        match self.written.iter_mut().find(|(r, _)| r == rel) {
            Some(entry) => entry.1 = size,
            None => self.written.push((rel.to_owned(), size)),
        }
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.written
    }

    /// Writes `manifest.txt` (`size path` per line, sorted by path).
    pub fn finish(self) -> Result<PathBuf> {
        let mut entries = self.written;
        entries.sort();
        let mut text = String::new();
        for (rel, size) in &entries {
            let _ = writeln!(text, "{size} {rel}");
        }
        let path = self.root.join(MANIFEST);
        fs::write(&path, text).map_err(|e| Error::file(&path, e))?;
        Ok(path)
    }
}

/// Parses a manifest back into `(path, size)` pairs.
pub fn read_manifest(path: &Path) -> Result<Vec<(String, u64)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let (size, rel) = l.split_once(' ').ok_or_else(|| Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: "expected `size path`".into(),
            })?;
            let size = size.parse().map_err(|_| Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: format!("bad size {size:?}"),
            })?;
            Ok((rel.to_owned(), size))
        })
        .collect()
}
