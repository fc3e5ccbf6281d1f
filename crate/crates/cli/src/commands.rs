//! Subcommands and their option resolution.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use fraccurv_core::estimators::{
    cesaro_estimate, condition_ii_diagnostic, curvature_curve, local_limit, omega_scaling_diagnostic, renewal_estimate,
    variation_bound_report, ConditionIiReport, CurvatureCurve, CurveOptions, Engine, FractalCurvatureEstimate,
    RenewalOptions,
};
use fraccurv_core::geometry::{distance_transform, parallel_set, rasterize_attractor, scene_grid};
use fraccurv_core::ifs::Ifs;

use crate::cache::{cache_key, CurveCache};
use crate::config::{parse_config, ConfigErrors, RunConfig};
use crate::output::{curve_csv, curve_rows, emit, estimates_csv, fmt_float, localize_csv};

/// Scale at which exact curves stop when nothing else is requested.
pub const DEFAULT_EXACT_EPS_MIN: f64 = 1e-5;
/// Grid curves stop at this many cell widths.
pub const GRID_EPS_MIN_CELLS: f64 = 8.0;
pub const DEFAULT_RENDER_EPS: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(
    name = "fraccurv",
    version,
    about = "Fractal curvature measures of self-similar sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Similarity dimension, η and lattice classification.
    Dim(Common),
    /// Curvature curve table.
    Curve(Common),
    /// Fractal curvature estimates.
    Fractal(Common),
    /// Localized masses on cylinder cells.
    Localize(Common),
    /// Overlap, counting and uniform-bound diagnostics.
    Check(Common),
    /// Binary PGM image of the parallel set.
    Render(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Cesaro,
    Renewal,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Run configuration (JSON).
    pub config: PathBuf,
    #[arg(long)]
    pub eps_min: Option<f64>,
    #[arg(long)]
    pub eps_max: Option<f64>,
    #[arg(long)]
    pub samples_per_decade: Option<usize>,
    /// Cells along the longer side of the grid.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Curvature index; all indices when omitted.
    #[arg(short = 'k')]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Word length of the localization cells.
    #[arg(long)]
    pub level: Option<usize>,
    /// Reference radius of the renewal integrand.
    #[arg(long = "R")]
    pub reference_radius: Option<f64>,
    /// Use the indicator `1_(0, r_i]` instead of the scale-consistent `1_(0, R r_i]`.
    #[arg(long)]
    pub literal_indicator: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Parallel radius for `render`.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Lower end of Cesàro and localization windows.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Ignore and do not write the curve cache.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(ConfigErrors),
    #[error(transparent)]
    Core(#[from] fraccurv_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Configuration with command-line overrides applied.
struct Run {
    cfg: RunConfig,
    ifs: Ifs,
    args: Common,
}

impl Run {
    fn load(args: &Common) -> Result<Run> {
        let mut cfg = parse_config(&args.config).map_err(CliError::Config)?;
        let mut errors = Vec::new();
        if let Some(g) = args.grid {
            cfg.grid = g;
        }
        if let Some(s) = args.samples_per_decade {
            cfg.samples_per_decade = s;
        }
        if args.reference_radius.is_some() {
            cfg.reference_radius = args.reference_radius;
        }
        for (name, v) in [
            ("--eps-min", args.eps_min),
            ("--eps-max", args.eps_max),
            ("--eps", args.eps),
            ("--delta", args.delta),
            ("--R", args.reference_radius),
        ] {
            if let Some(x) = v {
                if !(x.is_finite() && x > 0.0) {
                    errors.push(format!("{name}: must be a positive number, got {x}"));
                }
            }
        }
        if cfg.samples_per_decade == 0 {
            errors.push("--samples-per-decade: must be positive".into());
        }
        if let Some(k) = args.k {
            if k > cfg.ambient_dim {
                errors.push(format!("-k: must be at most {}, got {k}", cfg.ambient_dim));
            }
        }
        if !errors.is_empty() {
            return Err(CliError::Config(ConfigErrors(errors)));
        }
        let ifs = cfg.build_ifs()?;
        Ok(Run {
            cfg,
            ifs,
            args: args.clone(),
        })
    }

    fn ks(&self) -> Vec<usize> {
        match self.args.k {
            Some(k) => vec![k],
            None => (0..=self.cfg.ambient_dim).collect(),
        }
    }

    fn curve_options(&self, localize_level: Option<usize>) -> Result<CurveOptions> {
        let engine = self.cfg.engine();
        let eps_max = self
            .args
            .eps_max
            .or(self.cfg.eps_max)
            .unwrap_or(self.ifs.reference_radius());
        let eps_min = match self.args.eps_min.or(self.cfg.eps_min) {
            Some(e) => e,
            None => match engine {
                Engine::Exact1d => DEFAULT_EXACT_EPS_MIN,
                Engine::Grid { cells } => GRID_EPS_MIN_CELLS * scene_grid(&self.ifs, cells, eps_max)?.h,
            },
        };
        Ok(CurveOptions {
            eps_max,
            eps_min,
            samples_per_decade: self.cfg.samples_per_decade,
            engine,
            localize_level,
        })
    }

    /// Computes the curve or loads it from the cache.
    fn curve(&self, localize_level: Option<usize>) -> Result<CurvatureCurve> {
        let opts = self.curve_options(localize_level)?;
        if self.args.no_cache {
            return Ok(curvature_curve(&self.ifs, &opts)?);
        }
        let cache = CurveCache::for_config(&self.args.config);
        let key = cache_key(&self.cfg, &opts);
        if let Some(c) = cache.load(&key) {
            return Ok(c);
        }
        let c = curvature_curve(&self.ifs, &opts)?;
        // a failed cache write only costs a recomputation
        let _ = cache.store(&key, &c);
        Ok(c)
    }

    fn delta(&self, curve: &CurvatureCurve) -> f64 {
        self.args
            .delta
            .or(self.cfg.delta)
            .unwrap_or_else(|| curve.grid.lower_edge())
    }

    fn out(&self) -> Option<&Path> {
        self.args.out.as_deref()
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dim(a) => dim(&Run::load(&a)?),
        Command::Curve(a) => curve(&Run::load(&a)?),
        Command::Fractal(a) => fractal(&Run::load(&a)?),
        Command::Localize(a) => localize(&Run::load(&a)?),
        Command::Check(a) => check(&Run::load(&a)?),
        Command::Render(a) => render(&Run::load(&a)?),
    }
}

fn dim(run: &Run) -> Result<()> {
    let ifs = &run.ifs;
    let text = format!(
        "D = {}\neta = {}\n{}\n",
        fmt_float(ifs.dimension()),
        fmt_float(ifs.eta()),
        ifs.lattice().describe()
    );
    Ok(emit(run.out(), text.as_bytes())?)
}

fn curve(run: &Run) -> Result<()> {
    let c = run.curve(None)?;
    let mut rows = curve_rows(&c);
    if let Some(k) = run.args.k {
        rows.retain(|r| r.k == k);
    }
    Ok(emit(run.out(), curve_csv(&rows).as_bytes())?)
}

fn fractal(run: &Run) -> Result<()> {
    let c = run.curve(None)?;
    let delta = run.delta(&c);
    let opts = RenewalOptions {
        literal_indicator: run.args.literal_indicator,
    };
    let methods = match run.args.method {
        Some(m) => vec![m],
        None => vec![MethodArg::Cesaro, MethodArg::Renewal],
    };
    let mut estimates: Vec<FractalCurvatureEstimate> = Vec::new();
    for k in run.ks() {
        for &m in &methods {
            estimates.push(match m {
                MethodArg::Cesaro => cesaro_estimate(&c, k, delta)?,
                MethodArg::Renewal => renewal_estimate(&c, k, opts)?,
            });
        }
    }
    Ok(emit(run.out(), estimates_csv(&estimates).as_bytes())?)
}

fn localize(run: &Run) -> Result<()> {
    let level = run.args.level.or(run.cfg.level).unwrap_or(1);
    let c = run.curve(Some(level))?;
    let delta = run.delta(&c);
    let k = run.args.k.unwrap_or(run.cfg.ambient_dim);
    let report = local_limit(&c, k, delta)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(emit(run.out(), localize_csv(&report).as_bytes())?)
}

fn check(run: &Run) -> Result<()> {
    let c = run.curve(None)?;
    let ifs = &run.ifs;
    let mut out = String::from("diagnostic,k,param,value\n");
    let mut line = |d: &str, k: String, p: String, v: f64| out.push_str(&format!("{d},{k},{p},{}\n", fmt_float(v)));
    for k in run.ks() {
        let vb = variation_bound_report(&c, k)?;
        line("variation-bound", k.to_string(), "bound".into(), vb.bound);
        line("variation-bound", k.to_string(), "argmax_eps".into(), vb.argmax_eps);
        line("variation-bound", k.to_string(), "slope".into(), vb.slope);
    }
    if let Engine::Grid { cells } = run.cfg.engine() {
        let h = scene_grid(ifs, cells, c.grid.eps_max)?.h;
        let eps: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|f| f * ifs.diam())
            .filter(|&e| e >= 8.0 * h)
            .collect();
        for k in run.ks() {
            if eps.is_empty() {
                break;
            }
            match condition_ii_diagnostic(ifs, k, cells, &eps)? {
                ConditionIiReport::NotApplicable { .. } => {}
                ConditionIiReport::Evaluated { ratios, sup, slope, .. } => {
                    for (e, r) in ratios {
                        line("condition-ii", k.to_string(), format!("eps={}", fmt_float(e)), r);
                    }
                    line("condition-ii", k.to_string(), "sup".into(), sup);
                    line("condition-ii", k.to_string(), "slope".into(), slope);
                }
            }
        }
    }
    let r = ifs.reference_radius();
    let eps = 0.01 * ifs.diam();
    let deltas: Vec<f64> = [0.4, 0.2, 0.1, 0.05].iter().map(|f| f * ifs.diam()).collect();
    let om = omega_scaling_diagnostic(ifs, r, &deltas, eps)?;
    for (delta, e, count, scaled) in &om.rows {
        line(
            "omega",
            "-".into(),
            format!("delta={};eps={};count={count}", fmt_float(*delta), fmt_float(*e)),
            *scaled,
        );
    }
    line("omega", "-".into(), "gamma".into(), om.gamma);
    Ok(emit(run.out(), out.as_bytes())?)
}

/// `P5` image, white for points of the parallel set, top row first.
pub fn pgm(width: usize, height: usize, pixel: impl Fn(usize, usize) -> bool) -> Vec<u8> {
    let mut bytes = format!("P5\n{width} {height}\n255\n").into_bytes();
    for j in (0..height).rev() {
        for i in 0..width {
            bytes.push(if pixel(i, j) { 255 } else { 0 });
        }
    }
    bytes
}

fn render(run: &Run) -> Result<()> {
    let eps = run.args.eps.or(run.cfg.render_eps).unwrap_or(DEFAULT_RENDER_EPS);
    let spec = scene_grid(&run.ifs, run.cfg.grid, eps)?;
    let dg = distance_transform(&rasterize_attractor(&run.ifs, spec)?)?;
    let set = parallel_set(&dg, eps)?;
    let bytes = pgm(spec.width, spec.height, |i, j| set.get(i, j));
    Ok(emit(run.out(), &bytes)?)
}
