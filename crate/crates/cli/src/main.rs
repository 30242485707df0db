//! `projdim`: tiling checks, series dumps, dimension estimates and renders.

mod manifest;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use projdim::estimators::{
    counting_exponent, counting_function, de_leo_lower_bound, estimate_hausdorff, estimate_sigma,
    half_decade_schedule, hole_series, norm_series, singular_series, DimensionEstimate, ExponentEstimate,
    GrowthOptions, SeriesReport, SingularVariant,
};
use projdim::ifs::{validate_tiling_with, IfsSystem, SystemConfig};
use projdim::oracles::{calibrated_box_count, dyadic_scales, BoxCountReport};
use projdim::render::{ensure_planar, render_svg};
use projdim::words::{Execution, PruningPolicy};
use projdim::Error;
use serde_json::json;

use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "projdim", version, about = "Dimension estimates for self-projective gaskets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the tiling hypotheses of a system.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Random points for the disjointness check.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Estimate the dimension of the attractor.
    Dimension {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Sigma)]
        method: Method,
        #[arg(long, default_value_t = 14)]
        depth: usize,
        /// Largest norm cap of the counting schedule.
        #[arg(long, default_value_t = 1e5)]
        norm_cap: f64,
        /// Search interval `lo,hi` for the growth root.
        #[arg(long, value_parser = parse_interval)]
        interval: Option<(f64, f64)>,
        #[arg(long, value_enum, default_value_t = Variant::SMinusOne)]
        variant: Variant,
        /// Points in each box-counting cloud.
        #[arg(long, default_value_t = 1_000_000)]
        points: usize,
    },
    /// Dump per-level sums of a series as CSV.
    Series {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::HoleSeries)]
        kind: Kind,
        /// t, r or s depending on the kind.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        param: f64,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        norm_cap: Option<f64>,
        #[arg(long, value_enum, default_value_t = Variant::SMinusTwo)]
        variant: Variant,
    },
    /// Draw the images of one word length as SVG (d = 2).
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Built-in system; `rauzy` when no config is given.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// JSON system description.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Single-threaded, fixed-order traversal.
    #[arg(long)]
    sequential: bool,
    /// Output file; a manifest is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn source(&self) -> String {
        match (&self.config, &self.preset) {
            (Some(p), _) => p.display().to_string(),
            (None, Some(name)) => name.clone(),
            (None, None) => "rauzy".into(),
        }
    }

    fn system_config(&self) -> Result<SystemConfig, Error> {
        match &self.config {
            Some(path) => SystemConfig::from_json(&std::fs::read_to_string(path)?),
            None => {
                let name = self.source();
                SystemConfig::preset(&name).ok_or_else(|| Error::Config(format!("unknown preset {name:?}")))
            }
        }
    }

    /// A system whose tiling checks pass.
    fn system(&self) -> Result<IfsSystem, Error> {
        let system = IfsSystem::from_config(&self.system_config()?)?;
        let report = validate_tiling_with(&system, 100_000, self.seed)?;
        if !report.passed() {
            return Err(Error::Tiling(report.summary()));
        }
        Ok(system)
    }

    fn emit(&self, command: &str, policy: serde_json::Value, text: &str, started: Instant) -> Result<(), Error> {
        match &self.out {
            Some(path) => {
                RunManifest::new(command, &self.source(), policy, self.seed, self.sequential).write(
                    path,
                    text,
                    started.elapsed(),
                )?;
                eprintln!("wrote {} and {}", path.display(), RunManifest::path_for(path).display());
            }
            None => print!("{text}"),
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Sigma,
    Hausdorff,
    Deleo,
    BoxcountOracle,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    HoleSeries,
    NormSeries,
    SingularSeries,
    CountingFunction,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    #[value(name = "s-1")]
    SMinusOne,
    #[value(name = "s-2")]
    SMinusTwo,
}

impl From<Variant> for SingularVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::SMinusOne => Self::SMinusOne,
            Variant::SMinusTwo => Self::SMinusTwo,
        }
    }
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

/// 2 for systems that break the hypotheses, 1 for everything else.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotUnimodular { .. }
        | Error::NegativeEntry { .. }
        | Error::ColumnSumTooSmall { .. }
        | Error::HoleDeterminant { .. }
        | Error::Tiling(_) => 2,
        _ => 1,
    }
}

fn norm_cap_u64(cap: f64) -> Result<u64, Error> {
    if !(cap >= 1.0) || !cap.is_finite() {
        return Err(Error::Policy(format!("norm cap must be at least 1, got {cap}")));
    }
    Ok(cap.floor() as u64)
}

fn validate(common: &Common, samples: usize) -> Result<u8, Error> {
    let started = Instant::now();
    let system = IfsSystem::from_config(&common.system_config()?)?;
    let report = validate_tiling_with(&system, samples, common.seed)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    common.emit("validate", json!({ "samples": samples }), &text, started)?;
    eprintln!("{}: {}", system.name(), report.summary());
    Ok(if report.passed() { 0 } else { 2 })
}

const ESTIMATE_HEADER: &str = "quantity,method,point,lo,hi,shallower";

fn estimate_row(out: &mut String, quantity: &str, e: &ExponentEstimate) {
    let method = serde_json::to_value(e.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let shallower = e.shallower.map(|x| x.to_string()).unwrap_or_default();
    let _ = writeln!(out, "{quantity},{method},{},{},{},{shallower}", e.point, e.lo, e.hi);
}

fn describe(name: &str, e: &ExponentEstimate) -> String {
    let shallower = e.shallower.map_or("n/a".into(), |x| format!("{x:.6}"));
    format!("{name:<28} {:.6}  [{:.6}, {:.6}]  shallower truncation: {shallower}", e.point, e.lo, e.hi)
}

struct Dimension<'a> {
    common: &'a Common,
    system: IfsSystem,
    depth: usize,
    norm_cap: f64,
    interval: Option<(f64, f64)>,
    variant: SingularVariant,
    points: usize,
}

impl Dimension<'_> {
    fn sigma(&self) -> Result<ExponentEstimate, Error> {
        let e = estimate_sigma(
            &self.system,
            self.interval.unwrap_or((-1.0, 0.0)),
            self.depth,
            &GrowthOptions::default(),
            self.common.execution(),
        )?;
        Ok(e.shifted(self.system.dimension() as f64))
    }

    fn hausdorff(&self) -> Result<ExponentEstimate, Error> {
        estimate_hausdorff(
            &self.system,
            self.interval.unwrap_or((1.01, 1.99)),
            self.depth,
            self.variant,
            &GrowthOptions::default(),
            self.common.execution(),
        )
    }

    fn rho(&self) -> Result<ExponentEstimate, Error> {
        let cap = norm_cap_u64(self.norm_cap)?;
        let top = (cap as f64).log10().floor() as u32;
        let mut schedule = half_decade_schedule(1, top);
        schedule.retain(|&t| t <= cap);
        if schedule.last() != Some(&cap) {
            schedule.push(cap);
        }
        counting_exponent(self.system.generators(), &schedule)
    }

    fn boxcount(&self) -> Result<(BoxCountReport, BoxCountReport), Error> {
        calibrated_box_count(&self.system, self.points, &dyadic_scales(3, 9), self.common.seed)
    }
}

fn dimension(d: Dimension<'_>, method: Method) -> Result<u8, Error> {
    let started = Instant::now();
    let dim = d.system.dimension();
    let mut csv = format!("{ESTIMATE_HEADER}\n");
    let mut report = String::new();
    let wants = |m: Method| method == m || method == Method::All;
    let mut sigma = None;
    let mut rho = None;
    let mut hausdorff = None;
    if wants(Method::Sigma) {
        let e = d.sigma()?;
        estimate_row(&mut csv, "box-dimension", &e);
        let _ = writeln!(report, "{}", describe("d + sigma (box dimension)", &e));
        sigma = Some(e);
    }
    if wants(Method::Hausdorff) {
        let e = d.hausdorff()?;
        estimate_row(&mut csv, "hausdorff", &e);
        let _ = writeln!(report, "{}", describe("singular-value root", &e));
        hausdorff = Some(e);
    }
    if wants(Method::Deleo) {
        let e = d.rho()?;
        estimate_row(&mut csv, "rho", &e);
        let b = de_leo_lower_bound(dim, (&e).into());
        let _ = writeln!(csv, "de-leo-lower,counting-regression,{},{},{},", b.point, b.lo, b.hi);
        let _ = writeln!(report, "{}", describe("counting exponent rho", &e));
        let _ = writeln!(report, "{:<28} {:.6}  [{:.6}, {:.6}]", "lower bound", b.point, b.lo, b.hi);
        rho = Some(e);
    }
    if wants(Method::BoxcountOracle) {
        let (gate, r) = d.boxcount()?;
        let _ = writeln!(csv, "box-count-oracle,grid,{},{},{},", r.slope, r.slope - r.residual, r.slope + r.residual);
        let _ = writeln!(report, "{:<28} {:.6}  (calibration slope {:.6}, residual {:.2e})", "grid box count", r.slope, gate.slope, r.residual);
    }
    if method == Method::All {
        let box_dim = sigma.as_ref().map(|s| s.shifted(-(dim as f64)));
        let est = DimensionEstimate::new(dim, box_dim.as_ref(), rho.as_ref());
        if let (Some(s), Some(h)) = (&sigma, &hausdorff) {
            let _ = writeln!(report, "box and Hausdorff brackets overlap: {}", s.overlaps(h));
        }
        if let Some(ok) = est.sandwich_holds() {
            let _ = writeln!(report, "lower bound below box estimate: {ok}");
        }
    }
    let policy = json!({
        "depth": d.depth,
        "norm_cap": d.norm_cap,
        "interval": d.interval,
        "variant": d.variant.tag(),
        "points": d.points,
    });
    eprint!("{report}");
    d.common.emit("dimension", policy, &csv, started)?;
    Ok(0)
}

fn series(common: &Common, kind: Kind, param: f64, depth: Option<usize>, norm_cap: Option<f64>, variant: Variant) -> Result<u8, Error> {
    let started = Instant::now();
    let system = common.system()?;
    let policy = match (norm_cap, depth) {
        (Some(t), _) => PruningPolicy::NormCap(t),
        (None, d) => PruningPolicy::MaxDepth(d.unwrap_or(8)),
    };
    let report: SeriesReport = match kind {
        Kind::HoleSeries => hole_series(&system, param, policy, common.execution())?,
        Kind::SingularSeries => singular_series(&system, param, variant.into(), policy, common.execution())?,
        Kind::NormSeries => norm_series(system.generators(), param, norm_cap_u64(norm_cap.unwrap_or(1000.0))?)?,
        Kind::CountingFunction => {
            let cap = norm_cap_u64(norm_cap.unwrap_or(1000.0))?;
            let mut schedule: Vec<u64> = (0..).map(|k| 1u64 << k).take_while(|&t| t < cap).collect();
            schedule.push(cap);
            counting_function(system.generators(), &schedule)?
        }
    };
    let policy = json!({ "kind": report.kind.tag(), "parameter": param, "truncation": report.truncation });
    common.emit("series", policy, &report.to_csv(), started)?;
    Ok(0)
}

fn render(common: &Common, depth: usize) -> Result<u8, Error> {
    let started = Instant::now();
    ensure_planar(common.system_config()?.dimension)?;
    let system = common.system()?;
    let svg = render_svg(&system, depth)?;
    common.emit("render", json!({ "depth": depth }), &svg, started)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Validate { common, samples } => validate(&common, samples),
        Command::Dimension { common, method, depth, norm_cap, interval, variant, points } => {
            let system = common.system()?;
            let d = Dimension { common: &common, system, depth, norm_cap, interval, variant: variant.into(), points };
            dimension(d, method)
        }
        Command::Series { common, kind, param, depth, norm_cap, variant } => {
            series(&common, kind, param, depth, norm_cap, variant)
        }
        Command::Render { common, depth } => render(&common, depth),
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("PROJDIM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
