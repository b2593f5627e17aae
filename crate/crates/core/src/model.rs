//! Physical parameters, the geometric channel decomposition and the bath.
//!
//! Units: the system-reservoir coupling `gamma` is fixed to 1, so every rate
//! is a multiple of it and every time a multiple of its inverse. Energies
//! reported by [`crate::observables`] are in units of the qubit frequency.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default qubit frequency in units of the reservoir coupling.
pub const DEFAULT_OMEGA0: f64 = 100.0;
/// Default dipole-dipole coupling as a fraction of the qubit frequency.
pub const DEFAULT_ZETA_OVER_OMEGA0: f64 = 0.01;
/// Default Lorentzian half-width in units of the reservoir coupling.
pub const DEFAULT_LAMBDA: f64 = 0.04;

/// All physical and numerical inputs of a single run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega0: f64,
    pub zeta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub l_over_lambda0: f64,
    pub t_max: f64,
    pub n_steps: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega0: DEFAULT_OMEGA0,
            zeta: DEFAULT_ZETA_OVER_OMEGA0 * DEFAULT_OMEGA0,
            gamma: 1.0,
            lambda: DEFAULT_LAMBDA,
            l_over_lambda0: 0.125,
            t_max: 100.0,
            n_steps: 2001,
        }
    }
}

impl ModelParams {
    /// Builds parameters from the dimensionless ratios used on the command line
    /// (`zeta` given as a fraction of `omega0`).
    pub fn from_ratios(
        omega0_over_gamma: f64,
        zeta_over_omega0: f64,
        lambda_over_gamma: f64,
        l_over_lambda0: f64,
        t_max: f64,
        n_steps: usize,
    ) -> Result<Self> {
        let params = Self {
            omega0: omega0_over_gamma,
            zeta: zeta_over_omega0 * omega0_over_gamma,
            gamma: 1.0,
            lambda: lambda_over_gamma,
            l_over_lambda0,
            t_max,
            n_steps,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega0, self.zeta, self.gamma, self.lambda, self.l_over_lambda0, self.t_max];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("model parameters must be finite"));
        }
        if self.omega0 <= 0.0 {
            return Err(Error::domain(format!("omega0 must be positive, got {}", self.omega0)));
        }
        if self.lambda <= 0.0 {
            return Err(Error::domain(format!("lambda must be positive, got {}", self.lambda)));
        }
        if self.gamma != 1.0 {
            return Err(Error::domain(format!("gamma is the unit of rate and must be 1, got {}", self.gamma)));
        }
        if self.t_max <= 0.0 {
            return Err(Error::domain(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.n_steps < 2 {
            return Err(Error::domain(format!("n_steps must be at least 2, got {}", self.n_steps)));
        }
        Ok(())
    }

    /// Geometric phase k0*l reduced to [0, pi).
    pub fn theta(&self) -> f64 {
        theta_from_separation(self.l_over_lambda0)
    }

    /// Symmetric (`+`) and antisymmetric (`-`) collective channels.
    pub fn channels(&self) -> (ChannelSpec, ChannelSpec) {
        let (g_plus, g_minus) = channel_weights(self.theta());
        (ChannelSpec { weight: g_plus, detuning: self.zeta }, ChannelSpec { weight: g_minus, detuning: -self.zeta })
    }

    /// Uniform time grid with `n_steps` points, both endpoints included.
    pub fn time_grid(&self) -> Vec<f64> {
        uniform_grid(self.t_max, self.n_steps)
    }

    pub fn time_step(&self) -> f64 {
        self.t_max / (self.n_steps - 1) as f64
    }

    /// Reservoir memory time 1/lambda.
    pub fn memory_time(&self) -> f64 {
        1.0 / self.lambda
    }

    pub fn with_separation(mut self, l_over_lambda0: f64) -> Self {
        self.l_over_lambda0 = l_over_lambda0;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_time(mut self, t_max: f64, n_steps: usize) -> Self {
        self.t_max = t_max;
        self.n_steps = n_steps;
        self
    }
}

pub(crate) fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { t_max } else { t_max * (i as f64 / last) }).collect()
}

/// theta = 2*pi*(l/lambda0), reduced modulo pi.
///
/// The reduction is applied to the separation (period 1/2) before scaling so
/// that large separations keep full precision.
pub fn theta_from_separation(l_over_lambda0: f64) -> f64 {
    let reduced = l_over_lambda0.rem_euclid(0.5);
    // rem_euclid can round up to the modulus itself for tiny negative inputs
    let reduced = if reduced >= 0.5 { 0.0 } else { reduced };
    2.0 * PI * reduced
}

/// One collective channel: its kernel weight and coherent detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub weight: f64,
    pub detuning: f64,
}

impl ChannelSpec {
    pub fn new(weight: f64, detuning: f64) -> Self {
        Self { weight, detuning }
    }

    /// Amplitude of the channel's memory kernel at tau = 0, g*gamma*lambda/2.
    pub fn kernel_strength(&self, params: &ModelParams) -> f64 {
        0.5 * self.weight * params.gamma * params.lambda
    }

    /// The channel with its detuning sign reversed.
    pub fn conjugate(&self) -> Self {
        Self { weight: self.weight, detuning: -self.detuning }
    }
}

/// Kernel weights of the symmetric and antisymmetric channels,
/// `1 + cos 2θ` and `1 - cos 2θ`.
pub fn channel_weights(theta: f64) -> (f64, f64) {
    let c = (2.0 * theta).cos();
    (1.0 + c, 1.0 - c)
}

/// Lorentzian spectral density J(ω) centred on the qubit frequency.
pub fn spectral_density(omega: f64, params: &ModelParams) -> f64 {
    let lam2 = params.lambda * params.lambda;
    let detuning = params.omega0 - omega;
    params.gamma / (2.0 * PI) * lam2 / (detuning * detuning + lam2)
}

/// Bath correlation function in the frame rotating at the qubit frequency,
/// `(γλ/2) e^{-λτ}`.
pub fn memory_kernel(tau: f64, params: &ModelParams) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::domain(format!("memory kernel needs tau >= 0, got {tau}")));
    }
    Ok(0.5 * params.gamma * params.lambda * (-params.lambda * tau).exp())
}
