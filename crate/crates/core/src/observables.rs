//! Energy, ergotropy and charging power of the battery qubit.
//!
//! Energies are in units of the qubit frequency `omega0` times the value
//! passed in, so calling with `omega0 = 1` gives results in units of ω₀.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytic::AmplitudeTrajectory;
use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

const NORM_TOL: f64 = 1e-12;

/// Diagonal battery state `diag(1 - p, p)` in the `{|g⟩, |e⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryState {
    population: f64,
}

impl BatteryState {
    pub fn new(population: f64) -> Result<Self> {
        if !(0.0..=1.0 + 1e-9).contains(&population) {
            return Err(Error::domain(format!("battery population {population} outside [0, 1]")));
        }
        Ok(Self { population })
    }

    pub fn population(&self) -> f64 {
        self.population
    }

    pub fn energy(&self, omega0: f64) -> f64 {
        omega0 * self.population
    }

    pub fn ergotropy(&self, omega0: f64) -> f64 {
        qubit_ergotropy(self.population, omega0)
    }

    /// The same state as a sorted spectral pair plus level assignment.
    pub fn spectral_pair(&self, omega0: f64) -> (SpectralPair, Vec<usize>) {
        let p = self.population.min(1.0);
        SpectralPair::from_diagonal(&[1.0 - p, p], &[0.0, omega0]).expect("qubit state is normalised")
    }
}

/// Populations in non-increasing order and energies in non-decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPair {
    state_eigenvalues: Vec<f64>,
    energy_eigenvalues: Vec<f64>,
}

impl SpectralPair {
    pub fn new(state_eigenvalues: Vec<f64>, energy_eigenvalues: Vec<f64>) -> Result<Self> {
        if state_eigenvalues.len() != energy_eigenvalues.len() || state_eigenvalues.is_empty() {
            return Err(Error::domain("state and energy spectra must be nonempty and of equal length"));
        }
        if state_eigenvalues.iter().chain(&energy_eigenvalues).any(|v| !v.is_finite()) {
            return Err(Error::domain("spectra must be finite"));
        }
        if state_eigenvalues.iter().any(|&r| r < -NORM_TOL) {
            return Err(Error::domain("state eigenvalues must be non-negative"));
        }
        let total: f64 = state_eigenvalues.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::domain(format!("state eigenvalues sum to {total}, expected 1")));
        }
        if state_eigenvalues.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain("state eigenvalues must be sorted in non-increasing order"));
        }
        if energy_eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("energy eigenvalues must be sorted in non-decreasing order"));
        }
        Ok(Self { state_eigenvalues, energy_eigenvalues })
    }

    /// Sorts a state diagonal in the energy basis into a spectral pair.
    ///
    /// The returned assignment maps the j-th largest population to the
    /// (sorted) energy level that carries it.
    pub fn from_diagonal(populations: &[f64], energies: &[f64]) -> Result<(Self, Vec<usize>)> {
        if populations.len() != energies.len() {
            return Err(Error::domain("populations and energies differ in length"));
        }
        let mut levels: Vec<usize> = (0..energies.len()).collect();
        levels.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
        let sorted_energies: Vec<f64> = levels.iter().map(|&i| energies[i]).collect();
        // rank[i] = position of original level i in the ascending energy order
        let mut rank = vec![0; levels.len()];
        for (pos, &i) in levels.iter().enumerate() {
            rank[i] = pos;
        }
        let mut order: Vec<usize> = (0..populations.len()).collect();
        order.sort_by(|&a, &b| populations[b].total_cmp(&populations[a]));
        let sorted_pops: Vec<f64> = order.iter().map(|&i| populations[i]).collect();
        let assignment = order.iter().map(|&i| rank[i]).collect();
        Ok((Self::new(sorted_pops, sorted_energies)?, assignment))
    }

    pub fn state_eigenvalues(&self) -> &[f64] {
        &self.state_eigenvalues
    }

    pub fn energy_eigenvalues(&self) -> &[f64] {
        &self.energy_eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.state_eigenvalues.len()
    }

    /// Energy of the passive state, largest population on the lowest level.
    pub fn passive_energy(&self) -> f64 {
        self.state_eigenvalues.iter().zip(&self.energy_eigenvalues).map(|(r, e)| r * e).sum()
    }
}

/// Ergotropy of a state diagonal in the energy basis whose j-th largest
/// population sits on level `assignment[j]`: `Σ_j r_j (ℰ_{π(j)} - ℰ_j)`.
pub fn ergotropy_general(spec: &SpectralPair, assignment: &[usize]) -> Result<f64> {
    let n = spec.dim();
    if assignment.len() != n {
        return Err(Error::domain("assignment length does not match the spectrum"));
    }
    let mut seen = vec![false; n];
    for &level in assignment {
        if level >= n || std::mem::replace(&mut seen[level], true) {
            return Err(Error::domain("assignment is not a permutation"));
        }
    }
    let e = &spec.energy_eigenvalues;
    let w = spec
        .state_eigenvalues
        .iter()
        .zip(assignment)
        .enumerate()
        .map(|(j, (r, &level))| r * (e[level] - e[j]))
        .sum::<f64>();
    Ok(w.max(0.0))
}

/// Ergotropy of a diagonal state given populations per energy level.
pub fn ergotropy_diagonal(populations: &[f64], energies: &[f64]) -> Result<f64> {
    let (spec, assignment) = SpectralPair::from_diagonal(populations, energies)?;
    ergotropy_general(&spec, &assignment)
}

/// Ergotropy `tr(ρH) - tr(σ_ρ H)` of an arbitrary density matrix.
pub fn ergotropy_matrix(rho: &ComplexMatrix, hamiltonian: &ComplexMatrix) -> Result<f64> {
    if !rho.is_square() || rho.shape() != hamiltonian.shape() {
        return Err(Error::domain("density matrix and Hamiltonian must be square and of equal size"));
    }
    let mut r: Vec<f64> = rho.clone().symmetric_eigenvalues().iter().copied().collect();
    let mut e: Vec<f64> = hamiltonian.clone().symmetric_eigenvalues().iter().copied().collect();
    r.sort_by(|a, b| b.total_cmp(a));
    e.sort_by(f64::total_cmp);
    let trace: f64 = r.iter().sum();
    if (trace - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!("density matrix has trace {trace}")));
    }
    let energy = (rho * hamiltonian).trace().re;
    let passive: f64 = r.iter().zip(&e).map(|(a, b)| a * b).sum();
    Ok((energy - passive).max(0.0))
}

fn qubit_ergotropy(p: f64, omega0: f64) -> f64 {
    if p > 0.5 {
        omega0 * (2.0 * p - 1.0)
    } else {
        0.0
    }
}

/// Battery energy `ω₀ p`.
pub fn energy(populations: &[f64], omega0: f64) -> Vec<f64> {
    populations.iter().map(|p| omega0 * p).collect()
}

/// Qubit ergotropy `ω₀ (2p - 1) Θ(p - 1/2)`.
pub fn ergotropy_qubit(populations: &[f64], omega0: f64) -> Vec<f64> {
    populations.iter().map(|&p| qubit_ergotropy(p, omega0)).collect()
}

/// `2 ω₀ Re[c2* dc2/dt]`.
pub fn power_at(c2: Complex64, dc2: Complex64, omega0: f64) -> f64 {
    2.0 * omega0 * (c2.conj() * dc2).re
}

pub fn instantaneous_power(traj: &AmplitudeTrajectory, omega0: f64) -> Vec<f64> {
    traj.c2.iter().zip(&traj.dc2_dt).map(|(&c, &d)| power_at(c, d, omega0)).collect()
}

/// `E(t)/t`, with the value at `t = 0` set to 0.
pub fn average_power(energy: &[f64], t_grid: &[f64]) -> Vec<f64> {
    energy.iter().zip(t_grid).map(|(&e, &t)| if t > 0.0 { e / t } else { 0.0 }).collect()
}

/// Grid time and value of the largest entry; ties go to the earliest time.
pub fn max_over_time(series: &[f64], t_grid: &[f64]) -> Result<(f64, f64)> {
    let idx = argmax(series).ok_or_else(|| Error::domain("cannot take the maximum of an empty series"))?;
    let t = *t_grid.get(idx).ok_or_else(|| Error::domain("time grid shorter than series"))?;
    Ok((t, series[idx]))
}

/// Index of the first maximal element.
pub fn argmax(series: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in series.iter().enumerate() {
        match best {
            Some(b) if !(v > series[b]) => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Battery figures of merit along a trajectory, energies in units of ω₀ and
/// powers in units of ω₀γ.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub t: Vec<f64>,
    pub population: Vec<f64>,
    pub energy: Vec<f64>,
    pub ergotropy: Vec<f64>,
    pub power: Vec<f64>,
    pub average_power: Vec<f64>,
}

impl ObservableSeries {
    pub fn from_trajectory(traj: &AmplitudeTrajectory) -> Self {
        let omega0 = 1.0;
        let population = traj.population();
        let energy = energy(&population, omega0);
        let average_power = average_power(&energy, &traj.t);
        Self {
            t: traj.t.clone(),
            ergotropy: ergotropy_qubit(&population, omega0),
            power: instantaneous_power(traj, omega0),
            population,
            energy,
            average_power,
        }
    }
}
