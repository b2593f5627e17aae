//! Closed-form propagation of the single-excitation amplitudes.
//!
//! After elimination of the Lorentzian bath each collective channel obeys
//!
//! ```text
//! b'(t) = -iδ b(t) - κ ∫₀ᵗ e^{-λ(t-t')} b(t') dt',    κ = gγλ/2,
//! ```
//!
//! whose Laplace transform is `B(s) = b(0) (s+λ) / ((s+iδ)(s+λ) + κ)`.
//! With roots `s1`, `s2` of the denominator,
//!
//! ```text
//! b(t) = b(0) [e^{s2 t} + (s1+λ) D(t)],   D(t) = (e^{s1 t} - e^{s2 t}) / (s1 - s2),
//! ```
//!
//! and `D` is evaluated as `t e^{s2 t} φ1((s1-s2) t)` with `φ1(z) = (e^z - 1)/z`,
//! which stays accurate as the roots merge. `b(0) D(t)` is also the memory
//! integral itself.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ChannelSpec, ModelParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative root separation below which the confluent formula is used.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Uniform-grid propagation re-anchors the exponential recurrences with a
/// direct evaluation every this many steps.
const REANCHOR_INTERVAL: usize = 64;

/// Roots of `s² + (λ + iδ)s + (iδλ + gγλ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRoots {
    pub s1: Complex64,
    pub s2: Complex64,
    pub degenerate: bool,
}

impl ChannelRoots {
    /// Value of the characteristic polynomial at `s`.
    pub fn characteristic(channel: &ChannelSpec, params: &ModelParams, s: Complex64) -> Complex64 {
        let (b, c) = quadratic_coefficients(channel, params);
        s * s + b * s + c
    }
}

fn quadratic_coefficients(channel: &ChannelSpec, params: &ModelParams) -> (Complex64, Complex64) {
    let lambda = params.lambda;
    let b = Complex64::new(lambda, channel.detuning);
    let c = Complex64::new(channel.kernel_strength(params), channel.detuning * lambda);
    (b, c)
}

pub fn channel_roots(channel: &ChannelSpec, params: &ModelParams) -> ChannelRoots {
    let (b, c) = quadratic_coefficients(channel, params);
    let sq = (b * b - 4.0 * c).sqrt();
    // pick the branch without cancellation, recover the other root from the product
    let q = if (b + sq).norm_sqr() >= (b - sq).norm_sqr() { -0.5 * (b + sq) } else { -0.5 * (b - sq) };
    let s1 = q;
    let s2 = if c == Complex64::new(0.0, 0.0) { Complex64::new(0.0, 0.0) } else { c / q };
    let scale = s1.norm().max(s2.norm()).max(params.lambda);
    let degenerate = (s1 - s2).norm() < DEGENERACY_THRESHOLD * scale;
    ChannelRoots { s1, s2, degenerate }
}

/// `e^z - 1` without cancellation for small `|z|`.
pub(crate) fn expm1(z: Complex64) -> Complex64 {
    let (sin_y, cos_y) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * cos_y - 2.0 * half * half, z.re.exp() * sin_y)
}

/// `(e^z - 1)/z`, equal to 1 at the origin.
pub(crate) fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        1.0 + 0.5 * z
    } else {
        expm1(z) / z
    }
}

/// Channel amplitude, its derivative and the memory integral, all for `b(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelState {
    pub b: Complex64,
    pub db: Complex64,
    pub memory: Complex64,
}

/// Closed-form evaluator of one channel's unit-amplitude response.
#[derive(Debug, Clone, Copy)]
pub struct ChannelPropagator {
    pub roots: ChannelRoots,
    lambda: f64,
}

impl ChannelPropagator {
    pub fn new(channel: &ChannelSpec, params: &ModelParams) -> Self {
        Self::from_roots(channel_roots(channel, params), params)
    }

    pub fn from_roots(roots: ChannelRoots, params: &ModelParams) -> Self {
        Self { roots, lambda: params.lambda }
    }

    fn combine(&self, e2: Complex64, d: Complex64) -> ChannelState {
        let ChannelRoots { s1, s2, .. } = self.roots;
        let a1 = s1 + self.lambda;
        ChannelState { b: e2 + a1 * d, db: (s1 + s2 + self.lambda) * e2 + s1 * a1 * d, memory: d }
    }

    pub fn eval(&self, t: f64) -> ChannelState {
        let ChannelRoots { s1, s2, degenerate } = self.roots;
        if degenerate {
            let s = 0.5 * (s1 + s2);
            let e = (s * t).exp();
            let a = s + self.lambda;
            ChannelState { b: e * (1.0 + a * t), db: e * (s + a * (1.0 + s * t)), memory: t * e }
        } else {
            let e2 = (s2 * t).exp();
            let d = t * e2 * phi1((s1 - s2) * t);
            self.combine(e2, d)
        }
    }

    /// Evaluates the response on `grid`, assumed uniform with spacing
    /// `grid[1] - grid[0]`, via exponential recurrences.
    pub fn uniform<'a>(&'a self, grid: &'a [f64]) -> UniformEval<'a> {
        let h = if grid.len() > 1 { grid[1] - grid[0] } else { 0.0 };
        let ChannelRoots { s1, s2, .. } = self.roots;
        UniformEval {
            prop: self,
            grid,
            k: 0,
            r1: (s1 * h).exp(),
            r2: (s2 * h).exp(),
            w: h * (s2 * h).exp() * phi1((s1 - s2) * h),
            e2: Complex64::new(0.0, 0.0),
            d: Complex64::new(0.0, 0.0),
        }
    }

    fn anchor(&self, t: f64) -> (Complex64, Complex64) {
        let ChannelRoots { s1, s2, .. } = self.roots;
        let e2 = (s2 * t).exp();
        (e2, t * e2 * phi1((s1 - s2) * t))
    }
}

/// Iterator returned by [`ChannelPropagator::uniform`].
pub struct UniformEval<'a> {
    prop: &'a ChannelPropagator,
    grid: &'a [f64],
    k: usize,
    r1: Complex64,
    r2: Complex64,
    w: Complex64,
    e2: Complex64,
    d: Complex64,
}

impl Iterator for UniformEval<'_> {
    type Item = ChannelState;

    fn next(&mut self) -> Option<ChannelState> {
        let t = *self.grid.get(self.k)?;
        if self.k.is_multiple_of(REANCHOR_INTERVAL) {
            (self.e2, self.d) = self.prop.anchor(t);
        } else {
            self.d = self.r1 * self.d + self.w * self.e2;
            self.e2 *= self.r2;
        }
        self.k += 1;
        Some(self.prop.combine(self.e2, self.d))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.grid.len() - self.k;
        (left, Some(left))
    }
}

/// Propagates one channel from `b0` on an arbitrary time grid, returning
/// amplitudes and their time derivatives.
pub fn propagate_channel(
    b0: Complex64,
    roots: ChannelRoots,
    params: &ModelParams,
    t_grid: &[f64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let prop = ChannelPropagator::from_roots(roots, params);
    t_grid
        .iter()
        .map(|&t| {
            let s = prop.eval(t);
            (b0 * s.b, b0 * s.db)
        })
        .unzip()
}

/// Residual of the channel's integro-differential equation at `t`.
///
/// The memory integral is formed term by term from the residue expansion
/// `b = A1 e^{s1 t} + A2 e^{s2 t}` rather than from the propagator's own
/// bookkeeping, so that a propagator built from wrong roots shows up here.
pub fn channel_residual(
    b0: Complex64,
    roots: &ChannelRoots,
    channel: &ChannelSpec,
    params: &ModelParams,
    t: f64,
) -> Complex64 {
    let lambda = params.lambda;
    let kappa = channel.kernel_strength(params);
    let state = ChannelPropagator::from_roots(*roots, params).eval(t);
    let (b, db) = (b0 * state.b, b0 * state.db);
    let integral = if roots.degenerate {
        b0 * t * (0.5 * (roots.s1 + roots.s2) * t).exp()
    } else {
        let ChannelRoots { s1, s2, .. } = *roots;
        let decay = (-lambda * t).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, sign) in [(s1, 1.0), (s2, -1.0)] {
            let coeff = sign * b0 * (s + lambda) / (s1 - s2);
            // ∫₀ᵗ e^{-λ(t-t')} e^{s t'} dt'
            let primitive = if (s + lambda).norm() < 1e-300 {
                Complex64::new(t * decay, 0.0)
            } else {
                ((s * t).exp() - decay) / (s + lambda)
            };
            acc += coeff * primitive;
        }
        acc
    };
    db + I * channel.detuning * b + kappa * integral
}

/// Time grid plus charger and battery amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    pub t: Vec<f64>,
    pub c1: Vec<Complex64>,
    pub c2: Vec<Complex64>,
    pub dc2_dt: Vec<Complex64>,
}

impl AmplitudeTrajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Battery excitation probability |c2|².
    pub fn population(&self) -> Vec<f64> {
        self.c2.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Charger plus battery population; the remainder sits in the bath.
    pub fn system_norm(&self) -> Vec<f64> {
        self.c1.iter().zip(&self.c2).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect()
    }

    pub fn bath_population(&self) -> Vec<f64> {
        self.system_norm().into_iter().map(|n| 1.0 - n).collect()
    }

    /// Collective amplitudes `(c1 ± c2)/√2`.
    pub fn collective(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        self.c1.iter().zip(&self.c2).map(|(a, b)| ((a + b) * FRAC_1_SQRT_2, (a - b) * FRAC_1_SQRT_2)).unzip()
    }
}

pub(crate) fn check_initial_norm(c1_0: Complex64, c2_0: Complex64) -> Result<()> {
    let norm = c1_0.norm_sqr() + c2_0.norm_sqr();
    if !norm.is_finite() || norm > 1.0 + 1e-12 {
        return Err(Error::domain(format!("initial populations sum to {norm}, must not exceed 1")));
    }
    Ok(())
}

/// Charger-excited, battery-empty initial amplitudes.
pub fn default_initial() -> (Complex64, Complex64) {
    (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
}

/// Pointwise closed-form solution of both channels for fixed initial data.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticSolution {
    plus: ChannelPropagator,
    minus: ChannelPropagator,
    b_plus0: Complex64,
    b_minus0: Complex64,
    initial: (Complex64, Complex64),
}

impl AnalyticSolution {
    pub fn new(params: &ModelParams, c1_0: Complex64, c2_0: Complex64) -> Result<Self> {
        let (plus, minus) = params.channels();
        Self::with_channels(params, plus, minus, c1_0, c2_0)
    }

    /// As [`AnalyticSolution::new`] but with explicitly supplied channels.
    pub fn with_channels(
        params: &ModelParams,
        plus: ChannelSpec,
        minus: ChannelSpec,
        c1_0: Complex64,
        c2_0: Complex64,
    ) -> Result<Self> {
        params.validate()?;
        check_initial_norm(c1_0, c2_0)?;
        Ok(Self {
            plus: ChannelPropagator::new(&plus, params),
            minus: ChannelPropagator::new(&minus, params),
            b_plus0: (c1_0 + c2_0) * FRAC_1_SQRT_2,
            b_minus0: (c1_0 - c2_0) * FRAC_1_SQRT_2,
            initial: (c1_0, c2_0),
        })
    }

    pub fn roots(&self) -> (ChannelRoots, ChannelRoots) {
        (self.plus.roots, self.minus.roots)
    }

    /// `(c1, c2, dc2/dt)` at time `t`.
    pub fn eval(&self, t: f64) -> (Complex64, Complex64, Complex64) {
        let p = self.plus.eval(t);
        let m = self.minus.eval(t);
        self.reconstruct(t, p, m)
    }

    fn reconstruct(&self, t: f64, p: ChannelState, m: ChannelState) -> (Complex64, Complex64, Complex64) {
        let bp = self.b_plus0 * p.b;
        let bm = self.b_minus0 * m.b;
        let dbp = self.b_plus0 * p.db;
        let dbm = self.b_minus0 * m.db;
        let dc2 = (dbp - dbm) * FRAC_1_SQRT_2;
        if t == 0.0 {
            // the collective round trip is not exact in floating point
            return (self.initial.0, self.initial.1, dc2);
        }
        ((bp + bm) * FRAC_1_SQRT_2, (bp - bm) * FRAC_1_SQRT_2, dc2)
    }

    /// Evaluates on a uniform grid.
    pub fn trajectory(&self, grid: &[f64]) -> AmplitudeTrajectory {
        let n = grid.len();
        let mut traj = AmplitudeTrajectory {
            t: grid.to_vec(),
            c1: Vec::with_capacity(n),
            c2: Vec::with_capacity(n),
            dc2_dt: Vec::with_capacity(n),
        };
        for ((p, m), &t) in self.plus.uniform(grid).zip(self.minus.uniform(grid)).zip(grid) {
            let (c1, c2, dc2) = self.reconstruct(t, p, m);
            traj.c1.push(c1);
            traj.c2.push(c2);
            traj.dc2_dt.push(dc2);
        }
        traj
    }

    /// `(c2, dc2/dt)` along a uniform grid without storing the trajectory.
    pub fn battery_uniform<'a>(&'a self, grid: &'a [f64]) -> impl Iterator<Item = (Complex64, Complex64)> + 'a {
        self.plus.uniform(grid).zip(self.minus.uniform(grid)).zip(grid).map(move |((p, m), &t)| {
            let (_, c2, dc2) = self.reconstruct(t, p, m);
            (c2, dc2)
        })
    }
}

/// Closed-form amplitudes on the uniform grid of `params`.
pub fn propagate_analytic(params: &ModelParams, c1_0: Complex64, c2_0: Complex64) -> Result<AmplitudeTrajectory> {
    let solution = AnalyticSolution::new(params, c1_0, c2_0)?;
    Ok(solution.trajectory(&params.time_grid()))
}

/// As [`propagate_analytic`] with explicitly supplied collective channels.
pub fn propagate_collective(
    params: &ModelParams,
    plus: ChannelSpec,
    minus: ChannelSpec,
    c1_0: Complex64,
    c2_0: Complex64,
) -> Result<AmplitudeTrajectory> {
    let solution = AnalyticSolution::with_channels(params, plus, minus, c1_0, c2_0)?;
    Ok(solution.trajectory(&params.time_grid()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(lambda: f64, zeta: f64) -> ModelParams {
        ModelParams { lambda, zeta, ..ModelParams::default() }
    }

    fn sorted(r: ChannelRoots) -> [Complex64; 2] {
        let mut v = [r.s1, r.s2];
        v.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap().then(a.re.partial_cmp(&b.re).unwrap()));
        v
    }

    #[test]
    fn roots_of_uncoupled_channel_factor() {
        let p = params(0.04, 0.0);
        let r = channel_roots(&ChannelSpec::new(0.0, 0.5), &p);
        let [a, b] = sorted(r);
        assert!((a - c(0.0, -0.5)).norm() < 1e-15, "{a}");
        assert!((b - c(-0.04, 0.0)).norm() < 1e-15, "{b}");
        assert!(!r.degenerate);
    }

    #[test]
    fn roots_of_bright_resonant_channel() {
        let p = params(0.04, 0.0);
        let r = channel_roots(&ChannelSpec::new(2.0, 0.0), &p);
        let [a, b] = sorted(r);
        let half_sqrt = 0.1584f64.sqrt() / 2.0;
        assert!((a - c(-0.02, -half_sqrt)).norm() < 1e-15);
        assert!((b - c(-0.02, half_sqrt)).norm() < 1e-15);
        assert!((half_sqrt - 0.199).abs() < 1e-3);
    }

    #[test]
    fn double_root_is_flagged() {
        let p = params(0.04, 0.0);
        let r = channel_roots(&ChannelSpec::new(0.02, 0.0), &p);
        assert!(r.degenerate);
        assert!((r.s1 - c(-0.02, 0.0)).norm() < 1e-9);
        assert!((r.s2 - c(-0.02, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn roots_solve_characteristic_polynomial() {
        for &(g, d, l) in &[(0.0, 1.0, 0.04), (2.0, -1.5, 0.02), (1.3, 0.7, 2.0), (0.5, 0.0, 1.0)] {
            let p = params(l, 0.0);
            let ch = ChannelSpec::new(g, d);
            let r = channel_roots(&ch, &p);
            for s in [r.s1, r.s2] {
                assert!(ChannelRoots::characteristic(&ch, &p, s).norm() < 1e-12);
                assert!(s.re <= 0.0);
            }
        }
    }

    #[test]
    fn initial_value_is_exact() {
        let p = params(0.04, 1.0);
        let ch = ChannelSpec::new(1.2, 1.0);
        let b0 = c(0.3, -0.4);
        let (b, _) = propagate_channel(b0, channel_roots(&ch, &p), &p, &[0.0]);
        assert_eq!(b[0], b0);
    }

    #[test]
    fn dark_channel_is_unitary() {
        let p = params(0.04, 0.0);
        let ch = ChannelSpec::new(0.0, 0.7);
        let grid: Vec<f64> = (0..200).map(|k| k as f64 * 0.5).collect();
        let (b, _) = propagate_channel(c(1.0, 0.0), channel_roots(&ch, &p), &p, &grid);
        for (bk, t) in b.iter().zip(&grid) {
            assert!((bk - (-I * 0.7 * t).exp()).norm() < 1e-12);
        }
    }

    #[test]
    fn confluent_branch_matches_nearby_split_roots() {
        let p = params(0.04, 0.0);
        let exact = ChannelPropagator::new(&ChannelSpec::new(0.02, 0.0), &p);
        assert!(exact.roots.degenerate);
        let near = ChannelPropagator::new(&ChannelSpec::new(0.02 * (1.0 + 1e-6), 0.0), &p);
        assert!(!near.roots.degenerate);
        for t in [0.0, 1.0, 25.0, 100.0, 400.0] {
            let (a, b) = (exact.eval(t), near.eval(t));
            assert!((a.b - b.b).norm() < 1e-5, "t={t}");
            assert!((a.db - b.db).norm() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn residual_vanishes() {
        let p = params(0.04, 1.0);
        for ch in [ChannelSpec::new(2.0, 1.0), ChannelSpec::new(0.02, 0.0), ChannelSpec::new(0.7, -0.3)] {
            let r = channel_roots(&ch, &p);
            for t in [0.0, 0.3, 7.0, 60.0, 300.0] {
                let res = channel_residual(c(FRAC_1_SQRT_2, 0.0), &r, &ch, &p, t);
                assert!(res.norm() < 1e-9, "{ch:?} t={t} res={res}");
            }
        }
    }

    #[test]
    fn residual_detects_wrong_detuning_sign() {
        let p = params(0.04, 1.0);
        let ch = ChannelSpec::new(1.0, 1.0);
        let wrong = channel_roots(&ch.conjugate(), &p);
        let res = channel_residual(c(1.0, 0.0), &wrong, &ch, &p, 3.0);
        assert!(res.norm() > 1e-3);
    }

    #[test]
    fn uniform_recurrence_matches_pointwise() {
        let p = params(0.04, 1.0).with_time(2500.0, 5001);
        let grid = p.time_grid();
        for ch in [ChannelSpec::new(2.0, 1.0), ChannelSpec::new(0.0, -1.0), ChannelSpec::new(0.02, 0.0)] {
            let prop = ChannelPropagator::new(&ch, &p);
            let mut worst: f64 = 0.0;
            for (s, &t) in prop.uniform(&grid).zip(&grid) {
                let d = prop.eval(t);
                worst = worst.max((s.b - d.b).norm()).max((s.db - d.db).norm());
            }
            assert!(worst < 1e-12, "{ch:?}: {worst}");
        }
    }

    #[test]
    fn defaults_start_in_charger() {
        let p = ModelParams::default();
        let (c1, c2) = default_initial();
        let traj = propagate_analytic(&p, c1, c2).unwrap();
        assert_eq!(traj.c1[0], c(1.0, 0.0));
        assert_eq!(traj.c2[0], c(0.0, 0.0));
        assert_eq!(traj.len(), p.n_steps);
    }

    #[test]
    fn rejects_overnormalized_initial_state() {
        let p = ModelParams::default();
        let err = propagate_analytic(&p, c(1.0, 0.0), c(0.1, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn swap_of_channels_preserves_battery_population() {
        for zeta in [0.0, 1.0, -0.6] {
            let base = ModelParams { zeta, ..ModelParams::default() }.with_time(200.0, 801);
            let a = propagate_analytic(&base.with_separation(0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
            let b = propagate_analytic(&base.with_separation(0.25), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
            for (x, y) in a.population().iter().zip(b.population()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
