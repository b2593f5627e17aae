//! Benchmark fixtures shared by the criterion targets.

use qbgeom_core::{Axis, GridSpec, ModelParams, Spacing};

/// Figure-default parameters on a long trajectory.
pub fn long_run(n_steps: usize) -> ModelParams {
    ModelParams::default().with_time(2500.0, n_steps)
}

/// Square geometry x width grid with the figure ranges.
pub fn square_grid(n: usize) -> (GridSpec, GridSpec) {
    (
        GridSpec::linear(Axis::LOverLambda0, 0.0, 1.0, n).expect("valid grid"),
        GridSpec::new(Axis::LambdaOverGamma, 0.02, 1.0, n, Spacing::Log).expect("valid grid"),
    )
}
