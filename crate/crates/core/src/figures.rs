//! Plot-ready datasets for the figure panels, plus a terminal preview.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::analytic::{default_initial, AnalyticSolution};
use crate::error::{Error, Result};
use crate::export::{columns_csv, columns_json};
use crate::manifest::RunManifest;
use crate::model::ModelParams;
use crate::observables::ObservableSeries;
use crate::sweep::{
    sweep_geometry_width, sweep_time_geometry, Axis, GridSpec, Observable, Spacing, SweepOptions, SweepResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig4c,
}

impl Figure {
    pub const ALL: [Figure; 7] =
        [Figure::Fig2a, Figure::Fig2b, Figure::Fig3a, Figure::Fig3b, Figure::Fig4a, Figure::Fig4b, Figure::Fig4c];

    pub fn as_str(&self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig4c => "fig4c",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown figure '{s}' (expected fig2a..fig4c)")))
    }
}

/// Grid settings for figure datasets. Model parameters other than the
/// swept ones come from `params`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureSettings {
    pub params: ModelParams,
    pub l_points: usize,
    pub l_max: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
    /// Time window of the fig2/fig3 panels in units of the memory time.
    pub lambda_t_max: f64,
    pub time_points: usize,
    pub options: SweepOptions,
}

impl Default for FigureSettings {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            l_points: 201,
            l_max: 1.0,
            lambda_min: 0.02,
            lambda_max: 1.0,
            lambda_points: 101,
            lambda_t_max: 10.0,
            time_points: 2001,
            options: SweepOptions::default(),
        }
    }
}

/// The three channel configurations of the fig3 panels.
pub const FIG3_SERIES: [(&str, f64); 3] = [("theta_0", 0.0), ("theta_pi_2", 0.25), ("theta_pi_4", 0.125)];

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSet {
    pub t: Vec<f64>,
    pub lambda_t: Vec<f64>,
    /// Labelled series, in [`FIG3_SERIES`] order.
    pub series: Vec<(String, Vec<f64>)>,
    pub manifest: RunManifest,
}

impl SeriesSet {
    pub fn get(&self, label: &str) -> Option<&[f64]> {
        self.series.iter().find(|s| s.0 == label).map(|s| s.1.as_slice())
    }

    fn columns(&self) -> Vec<(String, Vec<f64>)> {
        let mut columns =
            vec![("t_gamma".to_string(), self.t.clone()), ("lambda_t".to_string(), self.lambda_t.clone())];
        columns.extend(self.series.iter().cloned());
        columns
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        columns_csv(&self.columns())
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        columns_json(&self.columns())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FigureData {
    Map(SweepResult),
    Series(SeriesSet),
}

impl FigureData {
    pub fn manifest(&self) -> &RunManifest {
        match self {
            FigureData::Map(m) => &m.manifest,
            FigureData::Series(s) => &s.manifest,
        }
    }

    pub fn manifest_mut(&mut self) -> &mut RunManifest {
        match self {
            FigureData::Map(m) => &mut m.manifest,
            FigureData::Series(s) => &mut s.manifest,
        }
    }

    pub fn preview(&self, width: usize, height: usize) -> String {
        match self {
            FigureData::Map(m) => {
                let title =
                    format!("{} ({} x {})", m.observable.as_str(), m.row_axis.axis.as_str(), m.col_axis.axis.as_str());
                ascii_heatmap(&title, &m.values, m.rows(), m.cols(), width, height)
            }
            FigureData::Series(s) => {
                let values: Vec<f64> = s.series.iter().flat_map(|c| c.1.iter().copied()).collect();
                let mut out =
                    ascii_heatmap("series x lambda_t", &values, s.series.len(), s.t.len(), width, s.series.len());
                for (k, (label, _)) in s.series.iter().enumerate() {
                    let _ = writeln!(out, "row {k}: {label}");
                }
                out
            }
        }
    }
}

pub fn build(figure: Figure, settings: &FigureSettings) -> Result<FigureData> {
    let params = settings.params;
    params.validate()?;
    let mut data = match figure {
        Figure::Fig2a | Figure::Fig2b => {
            let observable = if figure == Figure::Fig2a { Observable::Energy } else { Observable::Ergotropy };
            let l_grid = GridSpec::linear(Axis::LOverLambda0, 0.0, settings.l_max, settings.l_points)?;
            let t_grid =
                GridSpec::linear(Axis::Time, 0.0, settings.lambda_t_max / params.lambda, settings.time_points)?;
            FigureData::Map(sweep_time_geometry(&params, &l_grid, &t_grid, observable, &settings.options)?)
        }
        Figure::Fig3a | Figure::Fig3b => FigureData::Series(fig3_series(figure, settings)?),
        Figure::Fig4a | Figure::Fig4b | Figure::Fig4c => {
            let observable = match figure {
                Figure::Fig4a => Observable::MaxEnergy,
                Figure::Fig4b => Observable::MaxPower,
                _ => Observable::MaxErgotropy,
            };
            let l_grid = GridSpec::linear(Axis::LOverLambda0, 0.0, settings.l_max, settings.l_points)?;
            let lambda_grid = GridSpec::new(
                Axis::LambdaOverGamma,
                settings.lambda_min,
                settings.lambda_max,
                settings.lambda_points,
                Spacing::Log,
            )?;
            FigureData::Map(sweep_geometry_width(&params, &l_grid, &lambda_grid, observable, &settings.options)?)
        }
    };
    data.manifest_mut().figure = Some(figure.as_str().to_string());
    Ok(data)
}

fn fig3_series(figure: Figure, settings: &FigureSettings) -> Result<SeriesSet> {
    let t_max = settings.lambda_t_max / settings.params.lambda;
    let params = settings.params.with_time(t_max, settings.time_points);
    params.validate()?;
    let grid = params.time_grid();
    let (c1, c2) = default_initial();
    let mut series = Vec::with_capacity(FIG3_SERIES.len());
    for (label, l) in FIG3_SERIES {
        let traj = AnalyticSolution::new(&params.with_separation(l), c1, c2)?.trajectory(&grid);
        let obs = ObservableSeries::from_trajectory(&traj);
        let values = if figure == Figure::Fig3a { obs.energy } else { obs.ergotropy };
        series.push((label.to_string(), values));
    }
    let kind = if figure == Figure::Fig3a { "energy" } else { "ergotropy" };
    let mut manifest = RunManifest::new("figure-series", "analytic", &params, (c1, c2));
    manifest.observable = Some(kind.to_string());
    Ok(SeriesSet { lambda_t: grid.iter().map(|t| t * params.lambda).collect(), t: grid, series, manifest })
}

const SHADES: &[u8] = b" .:-=+*#%@";

/// Block-averaged character heatmap of a row-major matrix, first row on top.
pub fn ascii_heatmap(title: &str, values: &[f64], rows: usize, cols: usize, width: usize, height: usize) -> String {
    let mut out = String::new();
    if rows == 0 || cols == 0 || values.len() != rows * cols {
        return out;
    }
    let (w, h) = (width.clamp(1, cols), height.clamp(1, rows));
    let mut cells = vec![0.0; w * h];
    for (i, cell) in cells.iter_mut().enumerate() {
        let (y, x) = (i / w, i % w);
        let (r0, r1) = (y * rows / h, ((y + 1) * rows / h).max(y * rows / h + 1));
        let (c0, c1) = (x * cols / w, ((x + 1) * cols / w).max(x * cols / w + 1));
        let mut sum = 0.0;
        for r in r0..r1 {
            sum += values[r * cols + c0..r * cols + c1].iter().sum::<f64>();
        }
        *cell = sum / ((r1 - r0) * (c1 - c0)) as f64;
    }
    let lo = cells.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cells.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let _ = writeln!(out, "{title}  [min {lo:.4}, max {hi:.4}]");
    let span = if hi > lo { hi - lo } else { 1.0 };
    for y in 0..h {
        out.push('|');
        for x in 0..w {
            let level = ((cells[y * w + x] - lo) / span * (SHADES.len() - 1) as f64).round() as usize;
            out.push(SHADES[level.min(SHADES.len() - 1)] as char);
        }
        out.push_str("|\n");
    }
    out
}
