//! CSV and JSON serialization of trajectories and sweep matrices.
//!
//! Numbers are written with 17 significant digits in scientific notation,
//! which round-trips every `f64` exactly and does not depend on locale.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analytic::AmplitudeTrajectory;
use crate::error::{Error, Result};
use crate::manifest::RunManifest;
use crate::observables::ObservableSeries;
use crate::sweep::SweepResult;

pub const TRAJECTORY_COLUMNS: [&str; 11] = [
    "t_gamma",
    "lambda_t",
    "re_c1",
    "im_c1",
    "re_c2",
    "im_c2",
    "population",
    "energy",
    "ergotropy",
    "power",
    "avg_power",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// 17 significant digits; negative zero is written as zero.
pub fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

fn csv_bytes(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// One row per time point, columns as in [`TRAJECTORY_COLUMNS`].
pub fn trajectory_csv(traj: &AmplitudeTrajectory, obs: &ObservableSeries, lambda: f64) -> Result<Vec<u8>> {
    let header: Vec<String> = TRAJECTORY_COLUMNS.iter().map(|s| s.to_string()).collect();
    let rows = (0..traj.len()).map(|k| {
        [
            traj.t[k],
            lambda * traj.t[k],
            traj.c1[k].re,
            traj.c1[k].im,
            traj.c2[k].re,
            traj.c2[k].im,
            obs.population[k],
            obs.energy[k],
            obs.ergotropy[k],
            obs.power[k],
            obs.average_power[k],
        ]
        .into_iter()
        .map(fmt_f64)
        .collect()
    });
    csv_bytes(&header, rows)
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    columns: Vec<&'static str>,
    t_gamma: &'a [f64],
    lambda_t: Vec<f64>,
    re_c1: Vec<f64>,
    im_c1: Vec<f64>,
    re_c2: Vec<f64>,
    im_c2: Vec<f64>,
    population: &'a [f64],
    energy: &'a [f64],
    ergotropy: &'a [f64],
    power: &'a [f64],
    avg_power: &'a [f64],
}

pub fn trajectory_json(traj: &AmplitudeTrajectory, obs: &ObservableSeries, lambda: f64) -> Result<Vec<u8>> {
    let doc = TrajectoryJson {
        columns: TRAJECTORY_COLUMNS.to_vec(),
        t_gamma: &traj.t,
        lambda_t: traj.t.iter().map(|t| lambda * t).collect(),
        re_c1: traj.c1.iter().map(|c| c.re).collect(),
        im_c1: traj.c1.iter().map(|c| c.im).collect(),
        re_c2: traj.c2.iter().map(|c| c.re).collect(),
        im_c2: traj.c2.iter().map(|c| c.im).collect(),
        population: &obs.population,
        energy: &obs.energy,
        ergotropy: &obs.ergotropy,
        power: &obs.power,
        avg_power: &obs.average_power,
    };
    Ok(serde_json::to_vec_pretty(&doc)?)
}

/// Header row of column-axis values, leading column of row-axis values.
pub fn matrix_csv(result: &SweepResult) -> Result<Vec<u8>> {
    let corner = format!("{}\\{}", result.row_axis.axis.as_str(), result.col_axis.axis.as_str());
    let header: Vec<String> = std::iter::once(corner).chain(result.col_values.iter().map(|&v| fmt_f64(v))).collect();
    let rows = result
        .row_values
        .iter()
        .enumerate()
        .map(|(i, &r)| std::iter::once(fmt_f64(r)).chain(result.row(i).iter().map(|&v| fmt_f64(v))).collect());
    csv_bytes(&header, rows)
}

#[derive(Serialize)]
struct MatrixJson<'a> {
    observable: &'a str,
    row_axis: &'a str,
    col_axis: &'a str,
    row_values: &'a [f64],
    col_values: &'a [f64],
    values: Vec<&'a [f64]>,
}

pub fn matrix_json(result: &SweepResult) -> Result<Vec<u8>> {
    let doc = MatrixJson {
        observable: result.observable.as_str(),
        row_axis: result.row_axis.axis.as_str(),
        col_axis: result.col_axis.axis.as_str(),
        row_values: &result.row_values,
        col_values: &result.col_values,
        values: (0..result.rows()).map(|i| result.row(i)).collect(),
    };
    Ok(serde_json::to_vec_pretty(&doc)?)
}

/// Labelled columns of equal length, e.g. several named time series.
pub fn columns_csv(columns: &[(String, Vec<f64>)]) -> Result<Vec<u8>> {
    let n = columns.first().map_or(0, |c| c.1.len());
    if columns.iter().any(|c| c.1.len() != n) {
        return Err(Error::domain("columns differ in length"));
    }
    let header: Vec<String> = columns.iter().map(|c| c.0.clone()).collect();
    let rows = (0..n).map(|k| columns.iter().map(|c| fmt_f64(c.1[k])).collect());
    csv_bytes(&header, rows)
}

#[derive(Serialize)]
struct NamedColumn<'a> {
    name: &'a str,
    values: &'a [f64],
}

/// Labelled columns as an ordered JSON array of `{name, values}` objects.
pub fn columns_json(columns: &[(String, Vec<f64>)]) -> Result<Vec<u8>> {
    let doc: Vec<NamedColumn> = columns.iter().map(|(name, values)| NamedColumn { name, values }).collect();
    Ok(serde_json::to_vec_pretty(&doc)?)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// `<out>.manifest.json`
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes an output file and its manifest.
pub fn write_with_manifest(out: &Path, bytes: &[u8], manifest: &RunManifest) -> Result<()> {
    write_atomic(out, bytes)?;
    write_atomic(&manifest_path(out), manifest.to_json()?.as_bytes())?;
    Ok(())
}

/// Reads back a matrix CSV written by [`matrix_csv`].
/// Row-axis values, column-axis values and the rows of cells.
pub type ParsedMatrix = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

pub fn parse_matrix_csv(bytes: &[u8]) -> Result<ParsedMatrix> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::domain(format!("bad number '{s}': {e}")));
    let cols = r.headers()?.iter().skip(1).map(parse).collect::<Result<Vec<_>>>()?;
    let (mut rows, mut values) = (Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec?;
        let mut it = rec.iter();
        rows.push(parse(it.next().unwrap_or(""))?);
        values.push(it.map(parse).collect::<Result<Vec<_>>>()?);
    }
    Ok((rows, cols, values))
}

pub fn fs_read(path: &Path) -> Result<Vec<u8>> {
    Ok(fs::read(path)?)
}
