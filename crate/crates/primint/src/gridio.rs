//! Grid files.
//!
//! CSV: the header row holds the chart positions of the x nodes after one
//! leading label cell; every following row starts with the chart position
//! of its y node and then lists `F` along that row. Rows run from
//! `y = -inf` upwards.
//!
//! JSON: `{"label", "resolution", "chart": "t/(1+|t|)", "values": [[...]]}`
//! with `values[j][i]` at `(x_i, y_j)`. Multipliers use the same envelope
//! with one value per cell instead of per node.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use primint_core::primitive::{GridConstant, GridSample};
use primint_core::{Chart, Grid2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::CliError;

/// Node positions read from a file may differ from the uniform grid by this much.
pub const POSITION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] primint_core::Error),
    #[error("{0}")]
    Layout(String),
}

fn layout(msg: impl Into<String>) -> FormatError {
    FormatError::Layout(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEnvelope {
    pub label: String,
    pub resolution: usize,
    pub chart: String,
    pub values: Vec<Vec<f64>>,
}

impl GridEnvelope {
    pub fn from_sample(label: &str, s: &GridSample) -> Self {
        let n = s.grid().xs().len();
        GridEnvelope {
            label: label.to_string(),
            resolution: s.grid().resolution(),
            chart: Chart::NAME.to_string(),
            values: s.values().chunks(n).map(<[f64]>::to_vec).collect(),
        }
    }

    fn flatten(&self, rows: usize) -> Result<(Grid2, Vec<f64>), FormatError> {
        if self.chart != Chart::NAME {
            return Err(layout(format!("unsupported chart {:?}", self.chart)));
        }
        let grid = Grid2::uniform(self.resolution)?;
        if self.values.len() != rows || self.values.iter().any(|r| r.len() != rows) {
            return Err(layout(format!("expected {rows} x {rows} values for resolution {}", self.resolution)));
        }
        Ok((grid, self.values.concat()))
    }

    pub fn to_sample(&self) -> Result<GridSample, FormatError> {
        let (grid, v) = self.flatten(self.resolution + 1)?;
        Ok(GridSample::new(grid, v)?)
    }

    pub fn to_cells(&self) -> Result<GridConstant, FormatError> {
        let (grid, v) = self.flatten(self.resolution)?;
        Ok(GridConstant::new(grid, v)?)
    }
}

pub fn read_json(r: impl Read) -> Result<GridEnvelope, FormatError> {
    Ok(serde_json::from_reader(r)?)
}

pub fn write_json(w: impl Write, label: &str, s: &GridSample) -> Result<(), FormatError> {
    serde_json::to_writer_pretty(w, &GridEnvelope::from_sample(label, s))?;
    Ok(())
}

fn check_positions(found: &[f64], resolution: usize, axis: &str) -> Result<(), FormatError> {
    let want = Grid2::uniform(resolution)?;
    for (k, (a, b)) in found.iter().zip(want.x_positions()).enumerate() {
        if (a - b).abs() > POSITION_TOLERANCE {
            return Err(layout(format!("{axis} node {k} at {a}, expected {b}")));
        }
    }
    Ok(())
}

pub fn read_csv(r: impl Read) -> Result<GridSample, FormatError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(r);
    let mut records = reader.records();
    let header = records.next().ok_or_else(|| layout("empty file"))??;
    let parse = |s: &str| s.parse::<f64>().map_err(|_| layout(format!("not a number: {s:?}")));
    let xs = header.iter().skip(1).map(parse).collect::<Result<Vec<_>, _>>()?;
    if xs.len() < 3 {
        return Err(layout("need at least three x nodes"));
    }
    let resolution = xs.len() - 1;
    check_positions(&xs, resolution, "x")?;
    let mut ys = Vec::with_capacity(xs.len());
    let mut values = Vec::with_capacity(xs.len() * xs.len());
    for rec in records {
        let rec = rec?;
        if rec.len() != xs.len() + 1 {
            return Err(layout(format!("row {} has {} cells, expected {}", ys.len() + 1, rec.len(), xs.len() + 1)));
        }
        ys.push(parse(&rec[0])?);
        for cell in rec.iter().skip(1) {
            values.push(parse(cell)?);
        }
    }
    if ys.len() != xs.len() {
        return Err(layout(format!("expected {} rows, found {}", xs.len(), ys.len())));
    }
    check_positions(&ys, resolution, "y")?;
    Ok(GridSample::new(Grid2::uniform(resolution)?, values)?)
}

pub fn write_csv(w: impl Write, s: &GridSample) -> Result<(), FormatError> {
    let mut out = csv::Writer::from_writer(w);
    let grid = s.grid();
    let mut header = vec!["y\\x".to_string()];
    header.extend(grid.x_positions().iter().map(f64::to_string));
    out.write_record(&header)?;
    let n = grid.xs().len();
    for (j, y) in grid.y_positions().iter().enumerate() {
        let mut row = vec![y.to_string()];
        row.extend((0..n).map(|i| s.node(i, j).to_string()));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn open(path: &Path) -> Result<fs::File, CliError> {
    fs::File::open(path).map_err(|e| CliError::io(path, e))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "grid".into())
}

/// Load a primitive sample from `.csv` or JSON, with its label.
pub fn load_sample(path: &Path) -> Result<(String, GridSample), CliError> {
    let f = open(path)?;
    let bad = |e: FormatError| CliError::io(path, e);
    if is_csv(path) {
        Ok((stem(path), read_csv(f).map_err(bad)?))
    } else {
        let env = read_json(f).map_err(bad)?;
        Ok((env.label.clone(), env.to_sample().map_err(bad)?))
    }
}

/// Load per-cell multiplier values from a JSON envelope.
pub fn load_cells(path: &Path) -> Result<(String, GridConstant), CliError> {
    if is_csv(path) {
        return Err(CliError::io(path, "multipliers are read from the JSON envelope only"));
    }
    let env = read_json(open(path)?).map_err(|e| CliError::io(path, e))?;
    Ok((env.label.clone(), env.to_cells().map_err(|e| CliError::io(path, e))?))
}

pub fn save_sample(path: &Path, label: &str, s: &GridSample) -> Result<(), CliError> {
    let f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let w = std::io::BufWriter::new(f);
    if is_csv(path) { write_csv(w, s) } else { write_json(w, label, s) }.map_err(|e| CliError::io(path, e))
}
