//! Plot-ready files: long-format CSV grids, small tables and the JSON
//! manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GridValues {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl GridValues {
    fn len(&self) -> usize {
        match self {
            GridValues::Real(v) => v.len(),
            GridValues::Complex(v) => v.len(),
        }
    }
}

/// Values on a `t × x` grid, one row per time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeGrid {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub values: GridValues,
}

impl SpacetimeGrid {
    pub fn new(x: Vec<f64>, t: Vec<f64>, values: GridValues) -> Result<Self> {
        if values.len() != x.len() * t.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} times × {} positions",
                values.len(),
                t.len(),
                x.len()
            )));
        }
        Ok(Self { x, t, values })
    }

    pub fn real(x: Vec<f64>, t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(x, t, GridValues::Real(values))
    }

    pub fn complex(x: Vec<f64>, t: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        Self::new(x, t, GridValues::Complex(values))
    }
}

/// Round-trippable 17-significant-digit form.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write `t,x,value` (or `t,x,re,im`) rows, t-major, LF line endings.
pub fn emit_spacetime_csv(grid: &SpacetimeGrid, path: &Path) -> Result<PathBuf> {
    let mut out = BufWriter::new(File::create(path)?);
    let header = match grid.values {
        GridValues::Real(_) => "t,x,value",
        GridValues::Complex(_) => "t,x,re,im",
    };
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    let nx = grid.x.len();
    for (row, &t) in grid.t.iter().enumerate() {
        let ts = format_value(t);
        for (col, &x) in grid.x.iter().enumerate() {
            let idx = row * nx + col;
            let line = match &grid.values {
                GridValues::Real(v) => format!("{ts},{},{}\n", format_value(x), format_value(v[idx])),
                GridValues::Complex(v) => format!(
                    "{ts},{},{},{}\n",
                    format_value(x),
                    format_value(v[idx].re),
                    format_value(v[idx].im)
                ),
            };
            out.write_all(line.as_bytes())?;
        }
    }
    out.flush()?;
    Ok(path.to_path_buf())
}

/// Write a CSV with the given header and pre-formatted cells.
pub fn emit_table_csv(header: &[&str], rows: &[Vec<String>], path: &Path) -> Result<PathBuf> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(header.join(",").as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        out.write_all(row.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<PathBuf> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(path.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_grid() {
        let dir = tempfile::tempdir().unwrap();
        let g = SpacetimeGrid::real(vec![0.0, 0.5], vec![0.0, 1.0], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let p = emit_spacetime_csv(&g, &dir.path().join("g.csv")).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "t,x,value");
        assert_eq!(lines[2], "0.0000000000000000e0,5.0000000000000000e-1,2.0000000000000000e0");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn complex_header() {
        let dir = tempfile::tempdir().unwrap();
        let g = SpacetimeGrid::complex(vec![0.0], vec![1.0], vec![Complex64::new(1.0, -2.0)]).unwrap();
        let p = emit_spacetime_csv(&g, &dir.path().join("c.csv")).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        assert!(text.starts_with("t,x,re,im\n"));
        assert!(text.ends_with(",-2.0000000000000000e0\n"));
    }

    #[test]
    fn inconsistent_grid_rejected() {
        assert!(SpacetimeGrid::real(vec![0.0, 1.0], vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn values_round_trip() {
        for v in [std::f64::consts::PI, -1e-300, 6.02214076e23, 0.1 + 0.2] {
            assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
        }
    }
}
