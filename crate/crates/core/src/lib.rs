//! Geometry-controlled quantum battery: a charger qubit and a battery qubit
//! coupled through a common Lorentzian reservoir.
//!
//! The separation between the qubits fixes how strongly the symmetric and
//! antisymmetric collective states couple to the reservoir. This crate
//! propagates the single-excitation amplitudes exactly ([`analytic`]) and
//! numerically ([`numeric`]), turns them into battery figures of merit
//! ([`observables`]) and evaluates them over parameter grids ([`sweep`]).

// `!(x > y)` is used deliberately so that NaN inputs fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod export;
pub mod figures;
pub mod manifest;
pub mod model;
pub mod numeric;
pub mod observables;
pub mod sweep;
pub mod validation;

pub use analytic::{
    channel_roots, default_initial, propagate_analytic, propagate_channel, AmplitudeTrajectory, AnalyticSolution,
    ChannelRoots,
};
pub use error::{Error, Result};
pub use manifest::RunManifest;
pub use model::{channel_weights, memory_kernel, spectral_density, ChannelSpec, ModelParams};
pub use numeric::{propagate_numeric, IntegratorConfig, Scheme};
pub use observables::{
    average_power, energy, ergotropy_general, ergotropy_qubit, instantaneous_power, max_over_time, ObservableSeries,
    SpectralPair,
};
pub use sweep::{
    run_parallel, sweep_geometry_width, sweep_time_geometry, Axis, GridSpec, Observable, Spacing, SweepOptions,
    SweepResult,
};

pub use num_complex::Complex64;
