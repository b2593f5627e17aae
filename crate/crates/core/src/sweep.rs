//! Deterministic parallel evaluation of observables over parameter grids.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{default_initial, AnalyticSolution};
use crate::error::{Error, Result};
use crate::manifest::RunManifest;
use crate::model::{uniform_grid, ModelParams};
use crate::observables::{argmax, power_at};

/// At most this many near-maximal grid peaks are refined per cell.
const MAX_REFINED_PEAKS: usize = 64;
const GOLDEN_ITERATIONS: usize = 40;
const ROOT_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    LOverLambda0,
    LambdaOverGamma,
    Time,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::LOverLambda0 => "l_over_lambda0",
            Axis::LambdaOverGamma => "lambda_over_gamma",
            Axis::Time => "time",
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l_over_lambda0" => Ok(Axis::LOverLambda0),
            "lambda_over_gamma" => Ok(Axis::LambdaOverGamma),
            "time" => Ok(Axis::Time),
            _ => Err(Error::domain(format!("unknown axis '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacing {
    Linear,
    Log,
}

impl Spacing {
    pub fn as_str(&self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    }
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            _ => Err(Error::domain(format!("unknown spacing '{s}'"))),
        }
    }
}

/// One sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(axis: Axis, min: f64, max: f64, n_points: usize, spacing: Spacing) -> Result<Self> {
        let grid = Self { axis, min, max, n_points, spacing };
        grid.validate()?;
        Ok(grid)
    }

    pub fn linear(axis: Axis, min: f64, max: f64, n_points: usize) -> Result<Self> {
        Self::new(axis, min, max, n_points, Spacing::Linear)
    }

    /// A one-point axis.
    pub fn single(axis: Axis, value: f64) -> Result<Self> {
        Self::new(axis, value, value, 1, Spacing::Linear)
    }

    pub fn validate(&self) -> Result<()> {
        let name = self.axis.as_str();
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::domain(format!("{name} grid bounds must be finite")));
        }
        if self.n_points == 1 {
            if self.min != self.max {
                return Err(Error::domain(format!("{name}: a one-point grid needs min == max")));
            }
        } else if self.n_points < 2 || !(self.min < self.max) {
            return Err(Error::domain(format!(
                "{name} grid needs min < max and at least 2 points (got [{}, {}] with {})",
                self.min, self.max, self.n_points
            )));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::domain(format!("{name}: log spacing requires min > 0")));
        }
        if matches!(self.axis, Axis::LambdaOverGamma) && self.min <= 0.0 {
            return Err(Error::domain("lambda_over_gamma grid must be positive"));
        }
        if matches!(self.axis, Axis::Time) && self.min < 0.0 {
            return Err(Error::domain("time grid must be non-negative"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.n_points;
        if n == 1 {
            return vec![self.min];
        }
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    return self.max;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    Energy,
    Ergotropy,
    Power,
    MaxEnergy,
    MaxErgotropy,
    MaxPower,
}

impl Observable {
    pub fn as_str(&self) -> &'static str {
        match self {
            Observable::Energy => "energy",
            Observable::Ergotropy => "ergotropy",
            Observable::Power => "power",
            Observable::MaxEnergy => "max_energy",
            Observable::MaxErgotropy => "max_ergotropy",
            Observable::MaxPower => "max_power",
        }
    }

    /// The time-maximum counterpart of a pointwise observable.
    pub fn maximized(&self) -> Self {
        match self {
            Observable::Energy | Observable::MaxEnergy => Observable::MaxEnergy,
            Observable::Ergotropy | Observable::MaxErgotropy => Observable::MaxErgotropy,
            Observable::Power | Observable::MaxPower => Observable::MaxPower,
        }
    }

    pub fn pointwise(&self) -> Self {
        match self {
            Observable::Energy | Observable::MaxEnergy => Observable::Energy,
            Observable::Ergotropy | Observable::MaxErgotropy => Observable::Ergotropy,
            Observable::Power | Observable::MaxPower => Observable::Power,
        }
    }

    /// Value at one instant, energies in units of ω₀ and power in ω₀γ.
    pub fn evaluate(&self, c2: Complex64, dc2: Complex64) -> f64 {
        match self.pointwise() {
            Observable::Energy => c2.norm_sqr(),
            Observable::Ergotropy => {
                let p = c2.norm_sqr();
                if p > 0.5 {
                    2.0 * p - 1.0
                } else {
                    0.0
                }
            }
            _ => power_at(c2, dc2, 1.0),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "energy" => Ok(Observable::Energy),
            "ergotropy" => Ok(Observable::Ergotropy),
            "power" => Ok(Observable::Power),
            "max_energy" => Ok(Observable::MaxEnergy),
            "max_ergotropy" => Ok(Observable::MaxErgotropy),
            "max_power" => Ok(Observable::MaxPower),
            _ => Err(Error::domain(format!("unknown observable '{s}'"))),
        }
    }
}

/// Engine settings shared by all sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub workers: usize,
    /// Time-maximum window in units of the memory time, `λ t_max`.
    pub horizon: f64,
    /// Time-grid resolution for maxima, per period of the fastest channel rate.
    pub samples_per_period: f64,
    pub min_time_points: usize,
    /// Polish near-maximal grid peaks with a golden-section search on the closed form.
    pub refine: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            horizon: 100.0,
            samples_per_period: 8.0,
            min_time_points: 257,
            refine: true,
        }
    }
}

/// A labelled row-major matrix of one observable.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub row_axis: GridSpec,
    pub col_axis: GridSpec,
    pub row_values: Vec<f64>,
    pub col_values: Vec<f64>,
    pub observable: Observable,
    pub values: Vec<f64>,
    pub manifest: RunManifest,
}

impl SweepResult {
    pub fn rows(&self) -> usize {
        self.row_values.len()
    }

    pub fn cols(&self) -> usize {
        self.col_values.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.cols();
        &self.values[row * c..(row + 1) * c]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows()).map(|r| self.get(r, col)).collect()
    }

    /// Values at the `k`-th point of the geometry axis, whichever side it is on.
    pub fn geometry_slice(&self, k: usize) -> Option<Vec<f64>> {
        if self.row_axis.axis == Axis::LOverLambda0 {
            Some(self.row(k).to_vec())
        } else if self.col_axis.axis == Axis::LOverLambda0 {
            Some(self.column(k))
        } else {
            None
        }
    }

    pub fn geometry_values(&self) -> Option<&[f64]> {
        if self.row_axis.axis == Axis::LOverLambda0 {
            Some(&self.row_values)
        } else if self.col_axis.axis == Axis::LOverLambda0 {
            Some(&self.col_values)
        } else {
            None
        }
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Evaluates `eval` on every cell with `workers` threads.
///
/// Results are placed by cell index, so the output does not depend on the
/// worker count or on scheduling.
pub fn run_parallel<C, R, F>(cells: &[C], workers: usize, eval: F) -> Result<Vec<R>>
where
    C: Sync,
    R: Send,
    F: Fn(&C) -> R + Sync + Send,
{
    if workers == 0 {
        return Err(Error::domain("worker count must be at least 1"));
    }
    if cells.is_empty() {
        return Ok(Vec::new());
    }
    if workers == 1 {
        return Ok(cells.iter().map(eval).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| cells.par_iter().map(&eval).collect()))
}

/// Observable on a shared time grid, one closed-form trajectory per separation.
/// Rows are separations, columns are times.
pub fn sweep_time_geometry(
    params: &ModelParams,
    l_grid: &GridSpec,
    t_grid: &GridSpec,
    observable: Observable,
    options: &SweepOptions,
) -> Result<SweepResult> {
    params.validate()?;
    expect_axis(l_grid, Axis::LOverLambda0)?;
    expect_axis(t_grid, Axis::Time)?;
    let observable = observable.pointwise();
    let ls = l_grid.values();
    let ts = t_grid.values();
    let (c1, c2) = default_initial();

    let rows = run_parallel(&ls, options.workers, |&l| -> Result<Vec<f64>> {
        let solution = AnalyticSolution::new(&params.with_separation(l), c1, c2)?;
        Ok(if t_grid.spacing == Spacing::Linear {
            solution.battery_uniform(&ts).map(|(c, d)| observable.evaluate(c, d)).collect()
        } else {
            ts.iter()
                .map(|&t| {
                    let (_, c, d) = solution.eval(t);
                    observable.evaluate(c, d)
                })
                .collect()
        })
    })?;
    let values = rows.into_iter().collect::<Result<Vec<_>>>()?.concat();

    let mut manifest =
        RunManifest::new("sweep-time-geometry", "analytic", params, (c1, c2)).with_rows(l_grid).with_cols(t_grid);
    manifest.observable = Some(observable.as_str().to_string());
    Ok(SweepResult {
        row_axis: *l_grid,
        col_axis: *t_grid,
        row_values: ls,
        col_values: ts,
        observable,
        values,
        manifest,
    })
}

/// Time maximum of an observable for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMaximum {
    pub t_star: f64,
    pub value: f64,
    /// Number of time samples used on the uniform grid.
    pub samples: usize,
}

/// Uniform time grid used for the time maximum of one cell: `λ t_max = horizon`,
/// with a spacing that resolves the fastest channel frequency.
pub fn maximum_time_grid(params: &ModelParams, options: &SweepOptions) -> Result<Vec<f64>> {
    let (c1, c2) = default_initial();
    let solution = AnalyticSolution::new(params, c1, c2)?;
    Ok(maximum_grid_for(params, &solution, options))
}

/// Upper bound on the angular frequencies present in `|c2|²` and the power:
/// products of two exponentials, so twice the largest root modulus.
fn fastest_rate(params: &ModelParams, solution: &AnalyticSolution) -> f64 {
    let (p, m) = solution.roots();
    2.0 * [p.s1, p.s2, m.s1, m.s2].iter().map(|s| s.norm()).fold(params.lambda, f64::max)
}

fn maximum_grid_for(params: &ModelParams, solution: &AnalyticSolution, options: &SweepOptions) -> Vec<f64> {
    let t_max = options.horizon / params.lambda;
    let dt = 2.0 * PI / (options.samples_per_period * fastest_rate(params, solution));
    let n = ((t_max / dt).ceil() as usize + 1).max(options.min_time_points).max(2);
    uniform_grid(t_max, n)
}

pub fn cell_maximum(params: &ModelParams, observable: Observable, options: &SweepOptions) -> Result<CellMaximum> {
    let (c1, c2) = default_initial();
    let solution = AnalyticSolution::new(params, c1, c2)?;
    let grid = maximum_grid_for(params, &solution, options);
    // ergotropy is a monotone map of the population: maximize the population
    let target = match observable.pointwise() {
        Observable::Ergotropy => Observable::Energy,
        other => other,
    };
    let series: Vec<f64> = solution.battery_uniform(&grid).map(|(c, d)| target.evaluate(c, d)).collect();
    let best = argmax(&series).ok_or_else(|| Error::domain("empty time grid"))?;
    let (mut t_star, mut value) = (grid[best], series[best]);

    if options.refine && grid.len() > 2 {
        let h = grid[1] - grid[0];
        let lo = series.iter().copied().fold(f64::INFINITY, f64::min);
        let phase = fastest_rate(params, &solution) * h;
        // a sampled peak sits within h/2 of the true one: error <= |f''| h²/8,
        // with |f''| bounded by twice the swing times the squared frequency
        let margin = 0.125 * phase * phase * (value - lo) + 1e-15;
        let mut peaks: Vec<usize> = (1..grid.len() - 1)
            .filter(|&i| series[i] >= series[i - 1] && series[i] >= series[i + 1] && series[i] >= value - margin)
            .collect();
        peaks.sort_by(|&a, &b| series[b].total_cmp(&series[a]).then(a.cmp(&b)));
        peaks.truncate(MAX_REFINED_PEAKS);
        for i in peaks {
            let (t, v) = refine_peak(&solution, target, grid[i - 1], grid[i + 1]);
            if v > value || (v == value && t < t_star) {
                t_star = t;
                value = v;
            }
        }
    }

    if observable.pointwise() == Observable::Ergotropy {
        value = if value > 0.5 { 2.0 * value - 1.0 } else { 0.0 };
        if value == 0.0 {
            t_star = grid[0];
        }
    }
    Ok(CellMaximum { t_star, value, samples: grid.len() })
}

/// Locates the maximum of `target` inside a bracketing grid interval.
///
/// The population is maximized through the sign change of its analytic
/// derivative `2 Re[c2* dc2/dt]`; the power falls back to golden-section search.
fn refine_peak(solution: &AnalyticSolution, target: Observable, a: f64, b: f64) -> (f64, f64) {
    let value = |t: f64| {
        let (_, c, d) = solution.eval(t);
        target.evaluate(c, d)
    };
    if target == Observable::Energy {
        let slope = |t: f64| {
            let (_, c, d) = solution.eval(t);
            (c.conj() * d).re
        };
        let (fa, fb) = (slope(a), slope(b));
        if fa > 0.0 && fb < 0.0 {
            let t = illinois_root(slope, a, b, fa, fb);
            return (t, value(t));
        }
    }
    golden_max(value, a, b)
}

/// Regula falsi with the Illinois modification on a bracketing interval.
fn illinois_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    let mut side = 0i8;
    for _ in 0..ROOT_ITERATIONS {
        let c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            break;
        }
        let fc = f(c);
        if fc == 0.0 || (b - a) <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
            return c;
        }
        if (fc > 0.0) == (fa > 0.0) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < 1e-13 * b.abs().max(1.0) {
            break;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Time maxima over a separation x width map. Rows are `λ/γ`, columns are `l/λ₀`.
pub fn sweep_geometry_width(
    params: &ModelParams,
    l_grid: &GridSpec,
    lambda_grid: &GridSpec,
    observable: Observable,
    options: &SweepOptions,
) -> Result<SweepResult> {
    params.validate()?;
    expect_axis(l_grid, Axis::LOverLambda0)?;
    expect_axis(lambda_grid, Axis::LambdaOverGamma)?;
    if !(options.horizon > 0.0) || !(options.samples_per_period > 0.0) {
        return Err(Error::domain("sweep horizon and samples per period must be positive"));
    }
    let observable = observable.maximized();
    let ls = l_grid.values();
    let lambdas = lambda_grid.values();
    let cells: Vec<(f64, f64)> = lambdas.iter().flat_map(|&lam| ls.iter().map(move |&l| (lam, l))).collect();

    let out = run_parallel(&cells, options.workers, |&(lam, l)| {
        cell_maximum(&params.with_lambda(lam).with_separation(l), observable, options).map(|m| m.value)
    })?;
    let values = out.into_iter().collect::<Result<Vec<_>>>()?;

    let mut manifest = RunManifest::new("sweep-geometry-width", "analytic", params, default_initial())
        .with_rows(lambda_grid)
        .with_cols(l_grid);
    manifest.observable = Some(observable.as_str().to_string());
    manifest.horizon_lambda_t = Some(options.horizon);
    manifest.samples_per_period = Some(options.samples_per_period);
    manifest.min_time_points = Some(options.min_time_points);
    manifest.refine_maxima = Some(options.refine);
    Ok(SweepResult {
        row_axis: *lambda_grid,
        col_axis: *l_grid,
        row_values: lambdas,
        col_values: ls,
        observable,
        values,
        manifest,
    })
}

/// Largest change of any cell when the maximization window grows by 25%.
pub fn horizon_drift(
    params: &ModelParams,
    l_grid: &GridSpec,
    lambda_grid: &GridSpec,
    observable: Observable,
    options: &SweepOptions,
) -> Result<f64> {
    let base = sweep_geometry_width(params, l_grid, lambda_grid, observable, options)?;
    let longer = SweepOptions { horizon: 1.25 * options.horizon, ..*options };
    let ext = sweep_geometry_width(params, l_grid, lambda_grid, observable, &longer)?;
    Ok(base.values.iter().zip(&ext.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

fn expect_axis(grid: &GridSpec, axis: Axis) -> Result<()> {
    grid.validate()?;
    if grid.axis != axis {
        return Err(Error::domain(format!("expected a {} grid, got {}", axis.as_str(), grid.axis.as_str())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(workers: usize) -> SweepOptions {
        SweepOptions { workers, ..SweepOptions::default() }
    }

    #[test]
    fn grid_values() {
        let g = GridSpec::linear(Axis::LOverLambda0, 0.0, 1.0, 201).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 201);
        assert_eq!((v[0], v[100], v[200]), (0.0, 0.5, 1.0));
        let g = GridSpec::new(Axis::LambdaOverGamma, 0.02, 1.0, 101, Spacing::Log).unwrap();
        let v = g.values();
        assert_eq!((v[0], v[100]), (0.02, 1.0));
        assert!((v[50] - (0.02f64).sqrt()).abs() < 1e-15);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn invalid_grids_are_rejected() {
        assert!(GridSpec::linear(Axis::Time, 1.0, 1.0, 5).is_err());
        assert!(GridSpec::linear(Axis::Time, 2.0, 1.0, 5).is_err());
        assert!(GridSpec::linear(Axis::Time, 0.0, 1.0, 0).is_err());
        assert!(GridSpec::new(Axis::LOverLambda0, 0.0, 1.0, 5, Spacing::Log).is_err());
        assert!(GridSpec::linear(Axis::LambdaOverGamma, 0.0, 1.0, 5).is_err());
        assert!(GridSpec::single(Axis::LOverLambda0, 0.3).is_ok());
        assert!(GridSpec::linear(Axis::LOverLambda0, f64::NAN, 1.0, 5).is_err());
    }

    #[test]
    fn mismatched_axes_are_rejected() {
        let p = ModelParams::default();
        let l = GridSpec::linear(Axis::LOverLambda0, 0.0, 1.0, 3).unwrap();
        let t = GridSpec::linear(Axis::Time, 0.0, 10.0, 3).unwrap();
        assert!(sweep_time_geometry(&p, &t, &l, Observable::Energy, &opts(1)).is_err());
        assert!(sweep_geometry_width(&p, &l, &t, Observable::Energy, &opts(1)).is_err());
    }

    #[test]
    fn run_parallel_is_ordered_and_handles_empty() {
        let cells: Vec<u64> = (0..1000).collect();
        let a = run_parallel(&cells, 1, |&x| x * x).unwrap();
        let b = run_parallel(&cells, 8, |&x| x * x).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[999], 999 * 999);
        let empty: Vec<u64> = Vec::new();
        assert!(run_parallel(&empty, 4, |&x| x).unwrap().is_empty());
        assert!(run_parallel(&cells, 0, |&x| x).is_err());
    }

    #[test]
    fn illinois_finds_root() {
        let r = illinois_root(|x| 0.7 - x * x, 0.0, 2.0, 0.7, -3.3);
        assert!((r - 0.7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn golden_search_finds_parabola_peak() {
        let (t, v) = golden_max(|x| 1.0 - (x - 0.3).powi(2), 0.0, 1.0);
        assert!((t - 0.3).abs() < 1e-8);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn refinement_never_lowers_the_grid_maximum() {
        let p = ModelParams::default().with_separation(0.125);
        let coarse = SweepOptions { refine: false, ..opts(1) };
        let fine = opts(1);
        for obs in [Observable::MaxEnergy, Observable::MaxErgotropy, Observable::MaxPower] {
            let a = cell_maximum(&p, obs, &coarse).unwrap();
            let b = cell_maximum(&p, obs, &fine).unwrap();
            assert!(b.value >= a.value, "{obs}");
            assert!(b.value - a.value < 1e-2, "{obs}");
        }
    }

    #[test]
    fn observable_names_round_trip() {
        for o in [
            Observable::Energy,
            Observable::Ergotropy,
            Observable::Power,
            Observable::MaxEnergy,
            Observable::MaxErgotropy,
            Observable::MaxPower,
        ] {
            assert_eq!(o.as_str().parse::<Observable>().unwrap(), o);
        }
        assert_eq!(Observable::Power.maximized(), Observable::MaxPower);
    }
}
