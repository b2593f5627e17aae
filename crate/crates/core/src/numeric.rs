//! Fixed-step numerical propagation of the channel equations.
//!
//! Two structurally different schemes are provided:
//!
//! * `AugmentedRk4` trades the exponential memory integral for an auxiliary
//!   variable `z(t) = ∫₀ᵗ e^{-λ(t-t')} b(t') dt'`, giving the local system
//!   `b' = -iδ b - κ z`, `z' = b - λ z`, stepped with classical RK4.
//! * `VolterraTrapezoid` keeps the memory integral and evaluates it with
//!   trapezoidal weights over the whole history at every step (O(N²)).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{check_initial_norm, AmplitudeTrajectory};
use crate::error::{Error, Result};
use crate::model::{ChannelSpec, ModelParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest accepted `dt * max(λ, |δ|, √κ)`.
pub const STABILITY_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    AugmentedRk4,
    VolterraTrapezoid,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::AugmentedRk4 => "augmented-rk4",
            Scheme::VolterraTrapezoid => "volterra-trapezoid",
        }
    }

    /// Global convergence order of the scheme.
    pub fn order(&self) -> u32 {
        match self {
            Scheme::AugmentedRk4 => 4,
            Scheme::VolterraTrapezoid => 2,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "augmented-rk4" => Ok(Scheme::AugmentedRk4),
            "volterra-trapezoid" => Ok(Scheme::VolterraTrapezoid),
            other => Err(Error::domain(format!("unknown integration scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    /// Requested step; the effective step divides the output grid spacing and never exceeds it.
    pub dt: f64,
    pub abs_tol: f64,
}

impl IntegratorConfig {
    pub fn new(scheme: Scheme, dt: f64) -> Self {
        Self { scheme, dt, abs_tol: 1e-6 }
    }

    fn validate(&self, params: &ModelParams) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::domain(format!("dt must be positive, got {}", self.dt)));
        }
        if self.dt > params.t_max / 10.0 {
            return Err(Error::domain(format!("dt = {} exceeds t_max/10 = {}", self.dt, params.t_max / 10.0)));
        }
        Ok(())
    }

    /// Number of integrator steps per output interval and the resulting step.
    pub fn substeps(&self, params: &ModelParams) -> (usize, f64) {
        let h = params.time_step();
        let m = ((h / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (m, h / m as f64)
    }
}

/// Fastest rate entering a channel's dynamics, used by the stability check.
fn channel_rate(channel: &ChannelSpec, params: &ModelParams) -> f64 {
    params.lambda.max(channel.detuning.abs()).max(channel.kernel_strength(params).max(0.0).sqrt())
}

/// One classical fourth-order Runge-Kutta step for a fixed-size complex state.
pub fn rk4_step<const N: usize, F>(rhs: &F, t: f64, y: &[Complex64; N], h: f64) -> [Complex64; N]
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    let shifted = |base: &[Complex64; N], k: &[Complex64; N], scale: f64| {
        let mut out = *base;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += ki * scale;
        }
        out
    };
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &shifted(y, &k1, 0.5 * h));
    let k3 = rhs(t + 0.5 * h, &shifted(y, &k2, 0.5 * h));
    let k4 = rhs(t + h, &shifted(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
    }
    out
}

/// Unit-amplitude channel response and its derivative at the output grid points.
struct ChannelSeries {
    b: Vec<Complex64>,
    db: Vec<Complex64>,
}

fn integrate_rk4(channel: &ChannelSpec, params: &ModelParams, outputs: usize, m: usize, h: f64) -> ChannelSeries {
    let delta = channel.detuning;
    let kappa = channel.kernel_strength(params);
    let lambda = params.lambda;
    let rhs = move |_t: f64, y: &[Complex64; 2]| [-I * delta * y[0] - kappa * y[1], y[0] - lambda * y[1]];

    let mut y = [Complex64::new(1.0, 0.0), ZERO];
    let mut series = ChannelSeries { b: Vec::with_capacity(outputs), db: Vec::with_capacity(outputs) };
    let mut step = 0usize;
    for k in 0..outputs {
        if k > 0 {
            for _ in 0..m {
                y = rk4_step(&rhs, step as f64 * h, &y, h);
                step += 1;
            }
        }
        series.b.push(y[0]);
        series.db.push(rhs(step as f64 * h, &y)[0]);
    }
    series
}

fn integrate_trapezoid(channel: &ChannelSpec, params: &ModelParams, outputs: usize, m: usize, h: f64) -> ChannelSeries {
    let delta = channel.detuning;
    let kappa = channel.kernel_strength(params);
    let total = (outputs - 1) * m;
    let kernel: Vec<f64> = (0..=total).map(|j| (-params.lambda * h * j as f64).exp()).collect();

    let mut b = Vec::with_capacity(total + 1);
    b.push(Complex64::new(1.0, 0.0));
    // F_n = b'(t_n) with the memory integral in trapezoidal form
    let mut force = -I * delta * b[0];
    let mut series = ChannelSeries { b: Vec::with_capacity(outputs), db: Vec::with_capacity(outputs) };
    series.b.push(b[0]);
    series.db.push(force);

    let lhs = 1.0 + 0.5 * h * (I * delta + 0.5 * kappa * h);
    for n in 0..total {
        // history part of the integral at t_{n+1}, excluding the new endpoint
        let mut history = 0.5 * kernel[n + 1] * b[0];
        for j in 1..=n {
            history += kernel[n + 1 - j] * b[j];
        }
        let rhs = b[n] + 0.5 * h * force - 0.5 * h * kappa * h * history;
        let next = rhs / lhs;
        force = -I * delta * next - kappa * (h * history + 0.5 * h * next);
        b.push(next);
        if (n + 1) % m == 0 {
            series.b.push(next);
            series.db.push(force);
        }
    }
    series
}

/// Numerical counterpart of [`crate::analytic::propagate_analytic`].
pub fn propagate_numeric(
    params: &ModelParams,
    c1_0: Complex64,
    c2_0: Complex64,
    config: &IntegratorConfig,
) -> Result<AmplitudeTrajectory> {
    let (plus, minus) = params.channels();
    propagate_numeric_channels(params, plus, minus, c1_0, c2_0, config)
}

/// As [`propagate_numeric`] with explicitly supplied collective channels.
pub fn propagate_numeric_channels(
    params: &ModelParams,
    plus: ChannelSpec,
    minus: ChannelSpec,
    c1_0: Complex64,
    c2_0: Complex64,
    config: &IntegratorConfig,
) -> Result<AmplitudeTrajectory> {
    params.validate()?;
    check_initial_norm(c1_0, c2_0)?;
    config.validate(params)?;
    for ch in [&plus, &minus] {
        let product = config.dt * channel_rate(ch, params);
        if product > STABILITY_LIMIT {
            return Err(Error::Stability { dt: config.dt, product, limit: STABILITY_LIMIT });
        }
    }

    let grid = params.time_grid();
    let (m, h) = config.substeps(params);
    let run = |ch: &ChannelSpec| match config.scheme {
        Scheme::AugmentedRk4 => integrate_rk4(ch, params, grid.len(), m, h),
        Scheme::VolterraTrapezoid => integrate_trapezoid(ch, params, grid.len(), m, h),
    };
    let (p, q) = (run(&plus), run(&minus));

    let bp0 = (c1_0 + c2_0) * FRAC_1_SQRT_2;
    let bm0 = (c1_0 - c2_0) * FRAC_1_SQRT_2;
    let mut traj = AmplitudeTrajectory {
        t: grid,
        c1: Vec::with_capacity(p.b.len()),
        c2: Vec::with_capacity(p.b.len()),
        dc2_dt: Vec::with_capacity(p.b.len()),
    };
    for k in 0..p.b.len() {
        let (bp, bm) = (bp0 * p.b[k], bm0 * q.b[k]);
        if k == 0 {
            traj.c1.push(c1_0);
            traj.c2.push(c2_0);
        } else {
            traj.c1.push((bp + bm) * FRAC_1_SQRT_2);
            traj.c2.push((bp - bm) * FRAC_1_SQRT_2);
        }
        traj.dc2_dt.push((bp0 * p.db[k] - bm0 * q.db[k]) * FRAC_1_SQRT_2);
    }
    Ok(traj)
}

/// Largest pointwise distance between the battery amplitudes of two trajectories.
pub fn max_battery_deviation(a: &AmplitudeTrajectory, b: &AmplitudeTrajectory) -> f64 {
    a.c2.iter().zip(&b.c2).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
