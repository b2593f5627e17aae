use std::path::{Path, PathBuf};

use qbgeom_core::export::{self, Format};
use qbgeom_core::figures::{self, Figure, FigureData, FigureSettings};
use qbgeom_core::validation::{self, Fault, ValidationConfig};
use qbgeom_core::{
    default_initial, propagate_analytic, propagate_numeric, sweep_geometry_width, sweep_time_geometry, Axis, GridSpec,
    IntegratorConfig, ModelParams, Observable, ObservableSeries, RunManifest, Scheme, Spacing, SweepOptions,
};

use crate::args::{CommonArgs, FigureArgs, MaximaArgs, ModelArgs, SimulateArgs, SweepArgs, ValidateArgs};
use crate::config::Config;
use crate::CliError;

/// Reproducing command line, built from resolved values.
#[derive(Debug, Default)]
struct Invocation {
    parts: Vec<String>,
}

impl Invocation {
    fn new(subcommand: &str) -> Self {
        Self { parts: vec!["qbgeom".into(), subcommand.into()] }
    }

    fn arg(&mut self, flag: &str, value: impl ToString) {
        self.parts.push(format!("--{flag}"));
        self.parts.push(shell_quote(&value.to_string()));
    }

    fn flag(&mut self, flag: &str) {
        self.parts.push(format!("--{flag}"));
    }

    fn positional(&mut self, value: &str) {
        self.parts.push(shell_quote(value));
    }

    fn finish(self) -> String {
        self.parts.join(" ")
    }
}

fn shell_quote(s: &str) -> String {
    let plain = !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_./+=:,".contains(c));
    if plain {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', "'\\''"))
    }
}

pub struct Context {
    pub config: Config,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub seed: Option<u64>,
}

impl Context {
    pub fn new(common: &CommonArgs) -> Result<Self, CliError> {
        let config = match &common.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let format = match common.format.clone().map_or_else(|| config.string("format"), |f| Ok(Some(f)))? {
            None => Format::Csv,
            Some(f) => match f.as_str() {
                "csv" => Format::Csv,
                "json" => Format::Json,
                other => return Err(CliError::Usage(format!("unknown format '{other}' (expected csv or json)"))),
            },
        };
        let out = match &common.out {
            Some(p) => Some(p.clone()),
            None => config.string("out")?.map(PathBuf::from),
        };
        let default_workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        let workers = config.pick_usize(common.workers, "workers", default_workers)?;
        if workers == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        let seed = match common.seed {
            Some(s) => Some(s),
            None => config.u64("seed")?,
        };
        Ok(Self { config, format, out, workers, seed })
    }

    fn out_path(&self, stem: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(format!("{stem}.{}", self.format.extension())))
    }

    fn finish(&self, mut inv: Invocation, out: &Path) -> String {
        inv.arg("out", out.display());
        inv.arg("format", self.format.extension());
        inv.arg("workers", self.workers);
        if let Some(seed) = self.seed {
            inv.arg("seed", seed);
        }
        inv.finish()
    }
}

fn resolve_model(
    ctx: &Context,
    m: &ModelArgs,
    t_max: Option<f64>,
    steps: Option<usize>,
    inv: &mut Invocation,
) -> Result<ModelParams, CliError> {
    let cfg = &ctx.config;
    let d = ModelParams::default();
    let omega0 = cfg.pick_f64(m.omega0_over_gamma, "omega0-over-gamma", d.omega0)?;
    let zeta = if let Some(z) = m.zeta_over_gamma {
        z
    } else if let Some(r) = m.zeta_over_omega0 {
        r * omega0
    } else {
        match (cfg.f64("zeta-over-gamma")?, cfg.f64("zeta-over-omega0")?) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("config sets both zeta-over-gamma and zeta-over-omega0".into()))
            }
            (Some(z), None) => z,
            (None, Some(r)) => r * omega0,
            (None, None) => d.zeta / d.omega0 * omega0,
        }
    };
    let params = ModelParams {
        omega0,
        zeta,
        gamma: 1.0,
        lambda: cfg.pick_f64(m.lambda_over_gamma, "lambda-over-gamma", d.lambda)?,
        l_over_lambda0: cfg.pick_f64(m.l_over_lambda0, "l-over-lambda0", d.l_over_lambda0)?,
        t_max: cfg.pick_f64(t_max, "t-max", d.t_max)?,
        n_steps: cfg.pick_usize(steps, "steps", d.n_steps)?,
    };
    params.validate()?;
    inv.arg("omega0-over-gamma", params.omega0);
    inv.arg("zeta-over-gamma", params.zeta);
    inv.arg("lambda-over-gamma", params.lambda);
    inv.arg("l-over-lambda0", params.l_over_lambda0);
    Ok(params)
}

fn resolve_options(ctx: &Context, m: &MaximaArgs, inv: &mut Invocation) -> Result<SweepOptions, CliError> {
    let cfg = &ctx.config;
    let d = SweepOptions::default();
    let refine = if m.no_refine { false } else { cfg.bool("refine")?.unwrap_or(d.refine) };
    let opts = SweepOptions {
        workers: ctx.workers,
        horizon: cfg.pick_f64(m.horizon, "horizon", d.horizon)?,
        samples_per_period: cfg.pick_f64(m.samples_per_period, "samples-per-period", d.samples_per_period)?,
        min_time_points: cfg.pick_usize(m.min_time_points, "min-time-points", d.min_time_points)?,
        refine,
    };
    if !(opts.horizon > 0.0) || !(opts.samples_per_period >= 2.0) || opts.min_time_points < 2 {
        return Err(CliError::Usage("need horizon > 0, samples-per-period >= 2 and min-time-points >= 2".into()));
    }
    inv.arg("horizon", opts.horizon);
    inv.arg("samples-per-period", opts.samples_per_period);
    inv.arg("min-time-points", opts.min_time_points);
    if !opts.refine {
        inv.flag("no-refine");
    }
    Ok(opts)
}

fn write_output(out: &Path, bytes: &[u8], manifest: &RunManifest) -> Result<(), CliError> {
    export::write_with_manifest(out, bytes, manifest)?;
    eprintln!("wrote {} and {}", out.display(), export::manifest_path(out).display());
    Ok(())
}

pub fn simulate(ctx: &Context, a: &SimulateArgs) -> Result<(), CliError> {
    let mut inv = Invocation::new("simulate");
    let params = resolve_model(ctx, &a.model, a.t_max, a.steps, &mut inv)?;
    inv.arg("t-max", params.t_max);
    inv.arg("steps", params.n_steps);
    let solver = ctx.config.pick_parsed::<String>(a.solver.as_deref(), "solver", "analytic".into())?;
    let (c1, c2) = default_initial();
    let (traj, mut manifest) = match solver.as_str() {
        "analytic" => {
            inv.arg("solver", "analytic");
            (propagate_analytic(&params, c1, c2)?, RunManifest::new("simulate", "analytic", &params, (c1, c2)))
        }
        "numeric" => {
            let scheme = ctx.config.pick_parsed(a.scheme.as_deref(), "scheme", Scheme::AugmentedRk4)?;
            let dt = ctx.config.pick_f64(a.dt, "dt", 0.01)?;
            inv.arg("solver", "numeric");
            inv.arg("scheme", scheme.as_str());
            inv.arg("dt", dt);
            let traj = propagate_numeric(&params, c1, c2, &IntegratorConfig::new(scheme, dt))?;
            let mut manifest = RunManifest::new("simulate", "numeric", &params, (c1, c2));
            manifest.scheme = Some(scheme.as_str().to_string());
            manifest.dt = Some(dt);
            (traj, manifest)
        }
        other => return Err(CliError::Usage(format!("unknown solver '{other}' (expected analytic or numeric)"))),
    };
    let obs = ObservableSeries::from_trajectory(&traj);
    let bytes = match ctx.format {
        Format::Csv => export::trajectory_csv(&traj, &obs, params.lambda)?,
        Format::Json => export::trajectory_json(&traj, &obs, params.lambda)?,
    };
    let out = ctx.out_path("trajectory");
    manifest.seed = ctx.seed;
    manifest.command = ctx.finish(inv, &out);
    write_output(&out, &bytes, &manifest)
}

pub fn sweep(ctx: &Context, a: &SweepArgs) -> Result<(), CliError> {
    let cfg = &ctx.config;
    let mut inv = Invocation::new("sweep");
    let mode = cfg.pick_parsed::<String>(a.mode.as_deref(), "mode", "geometry-width".into())?;
    let default_obs = if mode == "time-geometry" { Observable::Energy } else { Observable::MaxEnergy };
    let observable = cfg.pick_parsed(a.observable.as_deref(), "observable", default_obs)?;
    inv.arg("mode", &mode);
    inv.arg("observable", observable.as_str());
    let params = resolve_model(ctx, &a.model, None, None, &mut inv)?;
    let l_grid = GridSpec::linear(
        Axis::LOverLambda0,
        cfg.pick_f64(a.l_min, "l-min", 0.0)?,
        cfg.pick_f64(a.l_max, "l-max", 1.0)?,
        cfg.pick_usize(a.l_points, "l-points", 201)?,
    )?;
    inv.arg("l-min", l_grid.min);
    inv.arg("l-max", l_grid.max);
    inv.arg("l-points", l_grid.n_points);

    let mut result = match mode.as_str() {
        "time-geometry" => {
            let t_grid = GridSpec::new(
                Axis::Time,
                cfg.pick_f64(a.t_min, "t-min", 0.0)?,
                cfg.pick_f64(a.t_max, "t-max", params.t_max)?,
                cfg.pick_usize(a.t_points, "t-points", params.n_steps)?,
                cfg.pick_parsed(a.t_spacing.as_deref(), "t-spacing", Spacing::Linear)?,
            )?;
            inv.arg("t-min", t_grid.min);
            inv.arg("t-max", t_grid.max);
            inv.arg("t-points", t_grid.n_points);
            inv.arg("t-spacing", t_grid.spacing.as_str());
            let opts = SweepOptions { workers: ctx.workers, ..SweepOptions::default() };
            sweep_time_geometry(&params, &l_grid, &t_grid, observable, &opts)?
        }
        "geometry-width" => {
            let lambda_grid = GridSpec::new(
                Axis::LambdaOverGamma,
                cfg.pick_f64(a.lambda_min, "lambda-min", 0.02)?,
                cfg.pick_f64(a.lambda_max, "lambda-max", 1.0)?,
                cfg.pick_usize(a.lambda_points, "lambda-points", 101)?,
                cfg.pick_parsed(a.lambda_spacing.as_deref(), "lambda-spacing", Spacing::Log)?,
            )?;
            inv.arg("lambda-min", lambda_grid.min);
            inv.arg("lambda-max", lambda_grid.max);
            inv.arg("lambda-points", lambda_grid.n_points);
            inv.arg("lambda-spacing", lambda_grid.spacing.as_str());
            let opts = resolve_options(ctx, &a.maxima, &mut inv)?;
            sweep_geometry_width(&params, &l_grid, &lambda_grid, observable, &opts)?
        }
        other => {
            return Err(CliError::Usage(format!("unknown mode '{other}' (expected time-geometry or geometry-width)")))
        }
    };
    let bytes = match ctx.format {
        Format::Csv => export::matrix_csv(&result)?,
        Format::Json => export::matrix_json(&result)?,
    };
    let out = ctx.out_path("sweep");
    result.manifest.seed = ctx.seed;
    result.manifest.command = ctx.finish(inv, &out);
    write_output(&out, &bytes, &result.manifest)
}

pub fn figure(ctx: &Context, a: &FigureArgs) -> Result<(), CliError> {
    let cfg = &ctx.config;
    let fig: Figure = a.name.parse().map_err(|e: qbgeom_core::Error| CliError::Usage(e.to_string()))?;
    let mut inv = Invocation::new("figure");
    inv.positional(fig.as_str());
    let params = resolve_model(ctx, &a.model, None, None, &mut inv)?;
    let d = FigureSettings::default();
    let settings = FigureSettings {
        params,
        l_points: cfg.pick_usize(a.l_points, "l-points", d.l_points)?,
        l_max: cfg.pick_f64(a.l_max, "l-max", d.l_max)?,
        lambda_min: cfg.pick_f64(a.lambda_min, "lambda-min", d.lambda_min)?,
        lambda_max: cfg.pick_f64(a.lambda_max, "lambda-max", d.lambda_max)?,
        lambda_points: cfg.pick_usize(a.lambda_points, "lambda-points", d.lambda_points)?,
        lambda_t_max: cfg.pick_f64(a.lambda_t_max, "lambda-t-max", d.lambda_t_max)?,
        time_points: cfg.pick_usize(a.time_points, "time-points", d.time_points)?,
        options: resolve_options(ctx, &a.maxima, &mut inv)?,
    };
    inv.arg("l-max", settings.l_max);
    inv.arg("l-points", settings.l_points);
    inv.arg("lambda-min", settings.lambda_min);
    inv.arg("lambda-max", settings.lambda_max);
    inv.arg("lambda-points", settings.lambda_points);
    inv.arg("lambda-t-max", settings.lambda_t_max);
    inv.arg("time-points", settings.time_points);

    let mut data = figures::build(fig, &settings)?;
    let bytes = match (&data, ctx.format) {
        (FigureData::Map(m), Format::Csv) => export::matrix_csv(m)?,
        (FigureData::Map(m), Format::Json) => export::matrix_json(m)?,
        (FigureData::Series(s), Format::Csv) => s.to_csv()?,
        (FigureData::Series(s), Format::Json) => s.to_json()?,
    };
    if a.ascii_preview {
        print!("{}", data.preview(72, 24));
    }
    let out = ctx.out_path(fig.as_str());
    let command = ctx.finish(inv, &out);
    let manifest = data.manifest_mut();
    manifest.seed = ctx.seed;
    manifest.command = command;
    write_output(&out, &bytes, data.manifest())
}

/// Returns whether every property passed.
pub fn validate(ctx: &Context, a: &ValidateArgs) -> Result<bool, CliError> {
    let cfg = &ctx.config;
    let d = ValidationConfig::default();
    let config = ValidationConfig {
        seed: ctx.seed.unwrap_or(d.seed),
        ensemble: cfg.pick_usize(a.ensemble, "ensemble", d.ensemble)?,
        t_max: cfg.pick_f64(a.t_max, "t-max", d.t_max)?,
        dt: d.dt,
        workers: ctx.workers,
        fault: match &a.inject_fault {
            Some(f) => f.parse().map_err(|e: qbgeom_core::Error| CliError::Usage(e.to_string()))?,
            None => Fault::None,
        },
    };
    if !(config.t_max >= 10.0 * config.dt) {
        return Err(CliError::Usage(format!("validation t-max must be at least {}", 10.0 * config.dt)));
    }
    let report = validation::run_suite(&config)?;
    let json = report.to_json().map_err(qbgeom_core::Error::from)?;
    match ctx.format {
        Format::Csv => print!("{}", report.to_text()),
        Format::Json => println!("{json}"),
    }
    if let Some(out) = &ctx.out {
        export::write_atomic(out, json.as_bytes())?;
    }
    Ok(report.passed())
}
