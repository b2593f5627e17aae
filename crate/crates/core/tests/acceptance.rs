//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qbgeom-core --test acceptance`. The process exits
//! non-zero when any criterion fails.

use std::time::Instant;

use qbgeom_core::figures::{build, Figure, FigureData, FigureSettings};
use qbgeom_core::numeric::max_battery_deviation;
use qbgeom_core::observables::ergotropy_diagonal;
use qbgeom_core::sweep::cell_maximum;
use qbgeom_core::validation::{brute_force_ergotropy, random_params};
use qbgeom_core::{
    export, instantaneous_power, propagate_analytic, propagate_numeric, sweep_geometry_width, sweep_time_geometry,
    Axis, Complex64, GridSpec, IntegratorConfig, ModelParams, Observable, Scheme, SweepOptions, SweepResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn initial() -> (Complex64, Complex64) {
    (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
}

fn verdict(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

struct Maps {
    energy: SweepResult,
    ergotropy: SweepResult,
    power: SweepResult,
    max_energy: SweepResult,
    max_power: SweepResult,
    max_ergotropy: SweepResult,
}

fn map(figure: Figure) -> SweepResult {
    match build(figure, &FigureSettings::default()).expect("figure data") {
        FigureData::Map(m) => m,
        FigureData::Series(_) => unreachable!("{figure:?} is a map"),
    }
}

fn maps() -> Maps {
    let params = ModelParams::default();
    let settings = FigureSettings::default();
    let l_grid = GridSpec::linear(Axis::LOverLambda0, 0.0, 1.0, settings.l_points).unwrap();
    let t_grid =
        GridSpec::linear(Axis::Time, 0.0, settings.lambda_t_max / params.lambda, settings.time_points).unwrap();
    Maps {
        energy: map(Figure::Fig2a),
        ergotropy: map(Figure::Fig2b),
        power: sweep_time_geometry(&params, &l_grid, &t_grid, Observable::Power, &settings.options).unwrap(),
        max_energy: map(Figure::Fig4a),
        max_power: map(Figure::Fig4b),
        max_ergotropy: map(Figure::Fig4c),
    }
}

fn oracle_and_norm() -> (Check, Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let config = IntegratorConfig::new(Scheme::AugmentedRk4, 0.005);
    let (c1, c2) = initial();
    let start = Instant::now();
    let (mut dev, mut norm, mut bath) = (0.0f64, f64::NEG_INFINITY, f64::INFINITY);
    for _ in 0..20 {
        let params = random_params(&mut rng, 2500.0, 5001);
        let exact = propagate_analytic(&params, c1, c2).unwrap();
        let numeric = propagate_numeric(&params, c1, c2, &config).unwrap();
        dev = dev.max(max_battery_deviation(&exact, &numeric));
        for traj in [&exact, &numeric] {
            norm = norm.max(traj.system_norm().into_iter().fold(f64::NEG_INFINITY, f64::max));
            bath = bath.min(traj.bath_population().into_iter().fold(f64::INFINITY, f64::min));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        verdict(dev < 1e-6 && secs < 60.0, format!("max |dc2| = {dev:.2e} (< 1e-6), runtime {secs:.1} s (< 60 s)")),
        verdict(
            norm <= 1.0 + 1e-9 && bath >= -1e-9,
            format!("max |c1|^2+|c2|^2 = {norm:.15}, min bath population = {bath:.2e}"),
        ),
    )
}

fn channel_swap() -> Check {
    let (c1, c2) = initial();
    let mut worst = 0.0f64;
    for zeta in [0.0, 1.0] {
        let base = ModelParams { zeta, ..ModelParams::default() }.with_time(2500.0, 25_001);
        let a = propagate_analytic(&base.with_separation(0.0), c1, c2).unwrap().population();
        let b = propagate_analytic(&base.with_separation(0.25), c1, c2).unwrap().population();
        worst = worst.max(max_abs_diff(&a, &b));
    }
    verdict(worst <= 1e-12, format!("max |p(theta=0) - p(theta=pi/2)| = {worst:.2e} over zeta in {{0, 1}}"))
}

fn mixed_enhancement() -> Check {
    let params = ModelParams::default();
    let opts = SweepOptions::default();
    let at = |l: f64, obs: Observable| cell_maximum(&params.with_separation(l), obs, &opts).unwrap();
    let (w0, wm) = (at(0.0, Observable::MaxErgotropy), at(0.125, Observable::MaxErgotropy));
    let (e0, em) = (at(0.0, Observable::MaxEnergy), at(0.125, Observable::MaxEnergy));
    verdict(
        wm.value > w0.value && em.value > e0.value,
        format!("max W: pi/4 {:.6} vs 0 {:.6}; max E: pi/4 {:.6} vs 0 {:.6}", wm.value, w0.value, em.value, e0.value),
    )
}

fn threshold_law(maps: &Maps) -> Check {
    let mut worst = 0.0f64;
    let mut cells = 0usize;
    for (&p, &w) in maps.energy.values.iter().zip(&maps.ergotropy.values) {
        let expected = if p > 0.5 { 2.0 * p - 1.0 } else { 0.0 };
        worst = worst.max((w - expected).abs());
        cells += 1;
    }
    verdict(worst == 0.0, format!("max |W - (2p-1)Theta(p-1/2)| = {worst:.1e} over {cells} cells"))
}

fn monotonic_degradation(maps: &Maps) -> Check {
    let mut rise = 0.0f64;
    for m in [&maps.max_energy, &maps.max_ergotropy] {
        for c in 0..m.cols() {
            let col = m.column(c);
            rise = rise.max(col.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max));
        }
    }
    verdict(rise <= 1e-3, format!("largest rise along lambda = {rise:.2e} (<= 1e-3)"))
}

fn periodicity(maps: &Maps) -> Check {
    let mut worst = 0.0f64;
    for m in [&maps.energy, &maps.ergotropy, &maps.power, &maps.max_energy, &maps.max_power, &maps.max_ergotropy] {
        let ls = m.geometry_values().unwrap();
        let shift = ls.iter().position(|&l| (l - ls[0] - 0.5).abs() < 1e-12).unwrap();
        for k in 0..ls.len() - shift {
            worst = worst.max(max_abs_diff(&m.geometry_slice(k).unwrap(), &m.geometry_slice(k + shift).unwrap()));
        }
    }
    verdict(worst <= 1e-12, format!("max |slice(l) - slice(l+0.5)| = {worst:.2e} over 6 maps"))
}

fn fd_error(params: &ModelParams) -> f64 {
    let (c1, c2) = initial();
    let traj = propagate_analytic(params, c1, c2).unwrap();
    let power = instantaneous_power(&traj, 1.0);
    let e = traj.population();
    let h = params.time_step();
    let scale = power.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    (1..e.len() - 1).map(|k| ((e[k + 1] - e[k - 1]) / (2.0 * h) - power[k]).abs()).fold(0.0, f64::max) / scale
}

fn power_energy() -> Check {
    let (c1, c2) = initial();
    let params = ModelParams::default().with_separation(0.125).with_time(50.0, 100_001);
    let traj = propagate_analytic(&params, c1, c2).unwrap();
    let power = instantaneous_power(&traj, 1.0);
    let e = traj.population();
    let (mut integral, mut worst) = (0.0, 0.0f64);
    for k in 1..e.len() {
        integral += 0.5 * (power[k] + power[k - 1]) * (traj.t[k] - traj.t[k - 1]);
        worst = worst.max((integral - (e[k] - e[0])).abs());
    }
    let base = ModelParams::default().with_separation(0.125);
    let errs: Vec<f64> = [1001, 2001, 4001].iter().map(|&n| fd_error(&base.with_time(20.0, n))).collect();
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let ok = worst < 1e-6 && orders.iter().all(|p| (p - 2.0).abs() < 0.3);
    verdict(ok, format!("trapezoid gap {worst:.2e} (< 1e-6), finite-difference orders {orders:.2?}"))
}

fn ergotropy_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p: f64 = rng.gen_range(0.0..=1.0);
        let omega0: f64 = rng.gen_range(0.1..200.0);
        let general = ergotropy_diagonal(&[1.0 - p, p], &[0.0, omega0]).unwrap();
        worst = worst.max((general - qbgeom_core::ergotropy_qubit(&[p], omega0)[0]).abs() / omega0);
    }
    let mut worst3 = 0.0f64;
    for _ in 0..100 {
        let raw: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let total: f64 = raw.iter().sum();
        let pops = raw.map(|r| r / total);
        let energies = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let w = ergotropy_diagonal(&pops, &energies).unwrap();
        worst3 = worst3.max((w - brute_force_ergotropy(&pops, &energies)).abs());
    }
    verdict(
        worst <= 1e-12 && worst3 <= 1e-12,
        format!("qubit formula gap {worst:.1e}, 3-level permutation gap {worst3:.1e}"),
    )
}

fn dark_channel() -> Check {
    let (c1, c2) = initial();
    let params = ModelParams { zeta: 0.0, ..ModelParams::default() }.with_separation(0.0).with_time(2000.0, 2001);
    let traj = propagate_analytic(&params, c1, c2).unwrap();
    let p = *traj.population().last().unwrap();
    let w = qbgeom_core::ergotropy_qubit(&[p], 1.0)[0];
    verdict((p - 0.25).abs() < 1e-3, format!("|c2(2000)|^2 = {p:.10}, W(2000) = {w}"))
}

fn determinism() -> Check {
    let params = ModelParams::default();
    let l_grid = GridSpec::linear(Axis::LOverLambda0, 0.0, 1.0, 200).unwrap();
    let lambda_grid = GridSpec::new(Axis::LambdaOverGamma, 0.02, 1.0, 200, qbgeom_core::Spacing::Log).unwrap();
    let mut outputs = Vec::new();
    let mut timing = 0.0;
    for workers in [1usize, 4, 8] {
        let opts = SweepOptions { workers, ..SweepOptions::default() };
        let start = Instant::now();
        let result = sweep_geometry_width(&params, &l_grid, &lambda_grid, Observable::MaxEnergy, &opts).unwrap();
        if workers == 4 {
            timing = start.elapsed().as_secs_f64();
        }
        outputs.push(export::matrix_csv(&result).unwrap());
    }
    let identical = outputs.windows(2).all(|w| w[0] == w[1]);
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    verdict(
        identical && timing < 10.0,
        format!(
            "CSV identical for 1/4/8 workers: {identical}; 200x200 in {timing:.2} s with 4 workers on {cores} core(s)"
        ),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Check)> = Vec::new();
    let (oracle, norm) = oracle_and_norm();
    results.push((1, "oracle equivalence", oracle));
    results.push((2, "norm safety", norm));
    results.push((3, "channel-swap symmetry", channel_swap()));
    results.push((4, "mixed-channel enhancement", mixed_enhancement()));
    let maps = maps();
    results.push((5, "threshold law", threshold_law(&maps)));
    results.push((6, "monotonic memory degradation", monotonic_degradation(&maps)));
    results.push((7, "geometry periodicity", periodicity(&maps)));
    results.push((8, "power-energy consistency", power_energy()));
    results.push((9, "ergotropy oracle", ergotropy_oracle()));
    results.push((10, "dark-channel limit", dark_channel()));
    results.push((11, "determinism", determinism()));

    let mut failed = 0;
    for (id, name, check) in &results {
        let (tag, detail) = match check {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {id:>2} {tag} {name}: {detail}");
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
