//! Reproducibility manifest written next to every output file.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::ModelParams;
use crate::sweep::GridSpec;

pub const ARTIFACT: &str = "qbgeom";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const UNITS_NOTE: &str =
    "gamma = 1; times in 1/gamma; energy and ergotropy in units of omega0; power in units of omega0*gamma";

/// Flat record of everything needed to regenerate an output.
///
/// Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact: String,
    pub version: String,
    pub timestamp: String,
    pub command: String,
    pub kind: String,
    pub solver: String,
    pub scheme: Option<String>,
    pub dt: Option<f64>,
    pub omega0_over_gamma: f64,
    pub zeta_over_gamma: f64,
    pub zeta_over_omega0: f64,
    pub gamma: f64,
    pub lambda_over_gamma: f64,
    pub l_over_lambda0: f64,
    pub t_max: f64,
    pub n_steps: usize,
    pub c1_0_re: f64,
    pub c1_0_im: f64,
    pub c2_0_re: f64,
    pub c2_0_im: f64,
    pub observable: Option<String>,
    pub row_axis: Option<String>,
    pub row_min: Option<f64>,
    pub row_max: Option<f64>,
    pub row_points: Option<usize>,
    pub row_spacing: Option<String>,
    pub col_axis: Option<String>,
    pub col_min: Option<f64>,
    pub col_max: Option<f64>,
    pub col_points: Option<usize>,
    pub col_spacing: Option<String>,
    pub horizon_lambda_t: Option<f64>,
    pub samples_per_period: Option<f64>,
    pub min_time_points: Option<usize>,
    pub refine_maxima: Option<bool>,
    pub figure: Option<String>,
    pub seed: Option<u64>,
    pub units: String,
}

impl RunManifest {
    pub fn new(kind: &str, solver: &str, params: &ModelParams, initial: (Complex64, Complex64)) -> Self {
        Self {
            artifact: ARTIFACT.to_string(),
            version: VERSION.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command: String::new(),
            kind: kind.to_string(),
            solver: solver.to_string(),
            scheme: None,
            dt: None,
            omega0_over_gamma: params.omega0,
            zeta_over_gamma: params.zeta,
            zeta_over_omega0: params.zeta / params.omega0,
            gamma: params.gamma,
            lambda_over_gamma: params.lambda,
            l_over_lambda0: params.l_over_lambda0,
            t_max: params.t_max,
            n_steps: params.n_steps,
            c1_0_re: initial.0.re,
            c1_0_im: initial.0.im,
            c2_0_re: initial.1.re,
            c2_0_im: initial.1.im,
            observable: None,
            row_axis: None,
            row_min: None,
            row_max: None,
            row_points: None,
            row_spacing: None,
            col_axis: None,
            col_min: None,
            col_max: None,
            col_points: None,
            col_spacing: None,
            horizon_lambda_t: None,
            samples_per_period: None,
            min_time_points: None,
            refine_maxima: None,
            figure: None,
            seed: None,
            units: UNITS_NOTE.to_string(),
        }
    }

    /// Model parameters as recorded (zeta taken in units of gamma).
    pub fn params(&self) -> ModelParams {
        ModelParams {
            omega0: self.omega0_over_gamma,
            zeta: self.zeta_over_gamma,
            gamma: self.gamma,
            lambda: self.lambda_over_gamma,
            l_over_lambda0: self.l_over_lambda0,
            t_max: self.t_max,
            n_steps: self.n_steps,
        }
    }

    pub fn with_rows(mut self, grid: &GridSpec) -> Self {
        self.row_axis = Some(grid.axis.as_str().to_string());
        self.row_min = Some(grid.min);
        self.row_max = Some(grid.max);
        self.row_points = Some(grid.n_points);
        self.row_spacing = Some(grid.spacing.as_str().to_string());
        self
    }

    pub fn with_cols(mut self, grid: &GridSpec) -> Self {
        self.col_axis = Some(grid.axis.as_str().to_string());
        self.col_min = Some(grid.min);
        self.col_max = Some(grid.max);
        self.col_points = Some(grid.n_points);
        self.col_spacing = Some(grid.spacing.as_str().to_string());
        self
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
