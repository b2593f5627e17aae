//! Seeded invariant suite behind the `validate` command.
//!
//! Each property is evaluated over a reproducible random ensemble and
//! reported with its worst observed deviation and tolerance. A fault can be
//! injected into the closed-form solver to check which properties notice it.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{channel_residual, channel_roots, default_initial, AmplitudeTrajectory, AnalyticSolution};
use crate::error::{Error, Result};
use crate::export::matrix_csv;
use crate::model::{ChannelSpec, ModelParams};
use crate::numeric::{max_battery_deviation, propagate_numeric, IntegratorConfig, Scheme};
use crate::observables::{ergotropy_diagonal, ergotropy_qubit, instantaneous_power, ObservableSeries};
use crate::sweep::{
    cell_maximum, sweep_geometry_width, sweep_time_geometry, Axis, GridSpec, Observable, Spacing, SweepOptions,
};

/// Deliberate solver defects for mutation testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    None,
    /// Propagate both channels with the coherent detuning sign reversed.
    FlipDetuningSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Fault::None),
            "flip-detuning-sign" => Ok(Fault::FlipDetuningSign),
            _ => Err(Error::domain(format!("unknown fault '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationConfig {
    pub seed: u64,
    /// Random parameter sets for the ensemble properties.
    pub ensemble: usize,
    /// Horizon of the solver cross-check.
    pub t_max: f64,
    pub dt: f64,
    pub workers: usize,
    pub fault: Fault,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self { seed: 42, ensemble: 20, t_max: 2500.0, dt: 0.005, workers: 1, fault: Fault::None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub ensemble: usize,
    pub fault: Fault,
    pub properties: Vec<PropertyOutcome>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "validation seed={} ensemble={} fault={:?}", self.seed, self.ensemble, self.fault);
        for p in &self.properties {
            let _ = writeln!(
                out,
                "{} {:<32} worst={:.3e} tol={:.1e} {}",
                if p.passed { "PASS" } else { "FAIL" },
                p.name,
                p.worst,
                p.tolerance,
                p.detail
            );
        }
        let failed = self.properties.iter().filter(|p| !p.passed).count();
        let _ = writeln!(out, "{} of {} properties passed", self.properties.len() - failed, self.properties.len());
        out
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

/// Closed-form solver with the configured fault applied.
#[derive(Debug, Clone, Copy)]
pub struct SolverUnderTest {
    pub fault: Fault,
}

impl SolverUnderTest {
    fn channels(&self, params: &ModelParams) -> (ChannelSpec, ChannelSpec) {
        let (plus, minus) = params.channels();
        match self.fault {
            Fault::None => (plus, minus),
            Fault::FlipDetuningSign => (plus.conjugate(), minus.conjugate()),
        }
    }

    pub fn solution(&self, params: &ModelParams) -> Result<AnalyticSolution> {
        let (plus, minus) = self.channels(params);
        let (c1, c2) = default_initial();
        AnalyticSolution::with_channels(params, plus, minus, c1, c2)
    }

    pub fn trajectory(&self, params: &ModelParams) -> Result<AmplitudeTrajectory> {
        Ok(self.solution(params)?.trajectory(&params.time_grid()))
    }

    /// Largest channel-equation residual at the sample times, measured
    /// against the model's true channels.
    pub fn residual(&self, params: &ModelParams, times: &[f64]) -> f64 {
        let (plus, minus) = params.channels();
        let (used_plus, used_minus) = self.channels(params);
        let b0 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut worst: f64 = 0.0;
        for (truth, used) in [(plus, used_plus), (minus, used_minus)] {
            let roots = channel_roots(&used, params);
            for &t in times {
                worst = worst.max(channel_residual(b0, &roots, &truth, params, t).norm());
            }
        }
        worst
    }
}

fn outcome(name: &'static str, worst: f64, tolerance: f64, detail: String) -> PropertyOutcome {
    PropertyOutcome { name, passed: worst <= tolerance, worst, tolerance, detail }
}

/// Random parameter set in the cross-check ranges.
pub fn random_params(rng: &mut impl Rng, t_max: f64, n_steps: usize) -> ModelParams {
    ModelParams {
        lambda: rng.gen_range(0.02..2.0),
        zeta: rng.gen_range(0.0..2.0),
        l_over_lambda0: rng.gen_range(0.0..1.0),
        ..ModelParams::default()
    }
    .with_time(t_max, n_steps)
}

pub fn run_suite(config: &ValidationConfig) -> Result<ValidationReport> {
    if config.ensemble == 0 {
        return Err(Error::domain("ensemble size must be at least 1"));
    }
    let solver = SolverUnderTest { fault: config.fault };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut properties = Vec::new();

    // solver cross-check and norm bounds over the random ensemble
    let n_steps = ((config.t_max / 0.5).round() as usize).max(10) + 1;
    let ensemble: Vec<ModelParams> =
        (0..config.ensemble).map(|_| random_params(&mut rng, config.t_max, n_steps)).collect();
    let rk4 = IntegratorConfig::new(Scheme::AugmentedRk4, config.dt);
    let (mut oracle, mut norm_excess, mut residual) = (0.0f64, f64::NEG_INFINITY, 0.0f64);
    let sample_times: Vec<f64> = [0.0, 0.1, 0.37, 1.0, 3.3, 10.0, 47.0, 150.0, 600.0].to_vec();
    for p in &ensemble {
        let exact = solver.trajectory(p)?;
        let numeric = propagate_numeric(p, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), &rk4)?;
        oracle = oracle.max(max_battery_deviation(&exact, &numeric));
        for n in exact.system_norm() {
            norm_excess = norm_excess.max(n - 1.0);
        }
        residual = residual.max(solver.residual(p, &sample_times));
    }
    properties.push(outcome(
        "oracle_equivalence",
        oracle,
        1e-6,
        format!("max |c2 analytic - c2 rk4| over t <= {}, dt = {}", config.t_max, config.dt),
    ));
    properties.push(outcome(
        "norm_bound",
        norm_excess.max(0.0),
        1e-9,
        "bath population 1 - |c1|^2 - |c2|^2 >= 0".into(),
    ));
    properties.push(outcome("channel_residual", residual, 1e-9, "integro-differential residual".into()));

    // exact channel swap: theta = 0 against theta = pi/2
    let mut swap = 0.0f64;
    let mut zetas = vec![0.0, 1.0];
    zetas.extend((0..3).map(|_| rng.gen_range(-2.0..2.0)));
    for zeta in zetas {
        let base = ModelParams { zeta, ..ModelParams::default() }.with_time(500.0, 4001);
        let a = solver.trajectory(&base.with_separation(0.0))?.population();
        let b = solver.trajectory(&base.with_separation(0.25))?.population();
        swap = swap.max(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    properties.push(outcome("channel_swap_symmetry", swap, 1e-12, "populations at theta = 0 and pi/2".into()));

    properties.push(mixed_channel_enhancement(&solver)?);
    properties.extend(map_properties(config)?);
    properties.push(power_energy_consistency(&solver)?);
    properties.push(ergotropy_oracle(&mut rng)?);
    properties.push(dark_channel_limit(&solver)?);

    Ok(ValidationReport { seed: config.seed, ensemble: config.ensemble, fault: config.fault, properties })
}

/// Default parameters: the theta = pi/4 maxima against the theta = 0 maxima.
fn mixed_channel_enhancement(solver: &SolverUnderTest) -> Result<PropertyOutcome> {
    let base = ModelParams::default().with_time(2500.0, 250_001);
    let series = |l: f64| -> Result<ObservableSeries> {
        Ok(ObservableSeries::from_trajectory(&solver.trajectory(&base.with_separation(l))?))
    };
    let (single, mixed) = (series(0.0)?, series(0.125)?);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let dw = max(&mixed.ergotropy) - max(&single.ergotropy);
    let de = max(&mixed.energy) - max(&single.energy);
    // passes when both differences are strictly positive
    let worst = -dw.min(de);
    Ok(PropertyOutcome {
        name: "mixed_channel_enhancement",
        passed: dw > 0.0 && de > 0.0,
        worst,
        tolerance: 0.0,
        detail: format!("maxW(pi/4) - maxW(0) = {dw:.3e}, maxE(pi/4) - maxE(0) = {de:.3e}"),
    })
}

fn map_properties(config: &ValidationConfig) -> Result<Vec<PropertyOutcome>> {
    let params = ModelParams::default();
    let opts = SweepOptions { workers: config.workers.max(1), ..SweepOptions::default() };
    let l_grid = GridSpec::linear(Axis::LOverLambda0, 0.0, 1.0, 41)?;
    let t_grid = GridSpec::linear(Axis::Time, 0.0, 250.0, 1001)?;
    let energy = sweep_time_geometry(&params, &l_grid, &t_grid, Observable::Energy, &opts)?;
    let ergo = sweep_time_geometry(&params, &l_grid, &t_grid, Observable::Ergotropy, &opts)?;

    // threshold law, exact
    let mut threshold = 0.0f64;
    for (&p, &w) in energy.values.iter().zip(&ergo.values) {
        let expected = if p > 0.5 { 2.0 * p - 1.0 } else { 0.0 };
        threshold = threshold.max((w - expected).abs());
    }

    let lambda_grid = GridSpec::new(Axis::LambdaOverGamma, 0.02, 1.0, 21, Spacing::Log)?;
    let max_e = sweep_geometry_width(&params, &l_grid, &lambda_grid, Observable::MaxEnergy, &opts)?;
    let max_w = sweep_geometry_width(&params, &l_grid, &lambda_grid, Observable::MaxErgotropy, &opts)?;
    let mut rise = 0.0f64;
    for map in [&max_e, &max_w] {
        for c in 0..map.cols() {
            let col = map.column(c);
            for k in 1..col.len() {
                rise = rise.max(col[k] - col[k - 1]);
            }
        }
    }

    // l_k + 0.5 is l_{k+20} on the 41-point grid
    let mut period = 0.0f64;
    for map in [&energy, &ergo, &max_e, &max_w] {
        for k in 0..=20 {
            let (a, b) = (map.geometry_slice(k).unwrap(), map.geometry_slice(k + 20).unwrap());
            period = period.max(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        }
    }

    let mut determinism = 0.0f64;
    let reference = matrix_csv(&max_e)?;
    for workers in [1usize, 4, 8] {
        let again = sweep_geometry_width(
            &params,
            &l_grid,
            &lambda_grid,
            Observable::MaxEnergy,
            &SweepOptions { workers, ..opts },
        )?;
        if matrix_csv(&again)? != reference {
            determinism = 1.0;
        }
    }

    Ok(vec![
        outcome("threshold_law", threshold, 0.0, "W - omega0 (2p - 1) Theta(p - 1/2) on a 41 x 1001 map".into()),
        outcome("memory_monotonicity", rise, 1e-3, "largest rise of max_energy/max_ergotropy along lambda".into()),
        outcome("geometry_periodicity", period, 1e-12, "slice(l) vs slice(l + 0.5) on all maps".into()),
        outcome("worker_determinism", determinism, 0.0, "matrix CSV bytes for 1, 4, 8 workers".into()),
    ])
}

fn power_energy_consistency(solver: &SolverUnderTest) -> Result<PropertyOutcome> {
    let params = ModelParams::default().with_separation(0.125).with_time(50.0, 100_001);
    let traj = solver.trajectory(&params)?;
    let power = instantaneous_power(&traj, 1.0);
    let energy: Vec<f64> = traj.population();
    let mut integral = 0.0;
    let mut worst = 0.0f64;
    for k in 1..traj.len() {
        integral += 0.5 * (power[k] + power[k - 1]) * (traj.t[k] - traj.t[k - 1]);
        worst = worst.max((integral - (energy[k] - energy[0])).abs());
    }
    Ok(outcome("power_energy_integral", worst, 1e-6, "trapezoid integral of P vs E(t) - E(0), h = 5e-4".into()))
}

fn ergotropy_oracle(rng: &mut impl Rng) -> Result<PropertyOutcome> {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p: f64 = rng.gen_range(0.0..1.0);
        let omega0: f64 = rng.gen_range(0.1..200.0);
        let general = ergotropy_diagonal(&[1.0 - p, p], &[0.0, omega0])?;
        worst = worst.max((general - ergotropy_qubit(&[p], omega0)[0]).abs() / omega0);
    }
    for _ in 0..100 {
        let raw: [f64; 3] = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        let total: f64 = raw.iter().sum();
        let mut pops = raw.map(|r| r / total);
        pops[2] = 1.0 - pops[0] - pops[1];
        let energies = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let w = ergotropy_diagonal(&pops, &energies)?;
        let brute = brute_force_ergotropy(&pops, &energies);
        worst = worst.max((w - brute).abs());
    }
    Ok(outcome("ergotropy_oracle", worst, 1e-12, "qubit formula and 3-level permutation minimum".into()))
}

/// Energy minus the least energy over all population-to-level assignments.
pub fn brute_force_ergotropy(populations: &[f64; 3], energies: &[f64; 3]) -> f64 {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let energy: f64 = populations.iter().zip(energies).map(|(p, e)| p * e).sum();
    let least = PERMS
        .iter()
        .map(|perm| perm.iter().enumerate().map(|(i, &j)| populations[i] * energies[j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    energy - least
}

fn dark_channel_limit(solver: &SolverUnderTest) -> Result<PropertyOutcome> {
    let params = ModelParams { zeta: 0.0, ..ModelParams::default() }.with_separation(0.0).with_time(2000.0, 2001);
    let traj = solver.trajectory(&params)?;
    let p = *traj.population().last().expect("nonempty");
    let w = cell_maximum(&params, Observable::Ergotropy, &SweepOptions { workers: 1, ..Default::default() })?;
    Ok(outcome(
        "dark_channel_limit",
        (p - 0.25).abs(),
        1e-3,
        format!("|c2(2000)|^2 = {p:.6}, horizon max W = {:.4}", w.value),
    ))
}
