mod grid;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use zipmap::chain::{self, ChainReport};
use zipmap::io::{self as zio};
use zipmap::{BranchPolicy, Ext64, NewtonConfig, Pipeline, Polyline, Variant, ZipError, C64};

/// Environment variable overriding the Newton tolerance.
const NEWTON_TOL_VAR: &str = "ZIPMAP_NEWTON_TOL";

#[derive(Parser)]
#[command(name = "zipmap", version, about = "Numerical conformal maps onto the half-plane and the disc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a map from a points file and save it as JSON.
    Build {
        #[arg(long, value_enum, default_value = "geodesic")]
        algo: Algo,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Normalize onto the disc, sending this interior point to 0.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        normalize: Option<C64>,
    },
    /// Append the half-plane to disc normalization to a saved map.
    Normalize {
        #[arg(long)]
        pipeline: PathBuf,
        /// Interior point sent to 0.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        interior: C64,
        /// Index of the data point sent to 1.
        #[arg(long, default_value_t = 0)]
        fix: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a saved map on the points of a file.
    Eval {
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long, value_enum, default_value = "fwd")]
        dir: Direction,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "interior")]
        mode: Mode,
        /// Starting point for branch continuation in extension mode.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        seed: Option<C64>,
        /// Map the results back and report the largest round-trip error.
        #[arg(long)]
        roundtrip: bool,
    },
    /// Sample the boundary of the computed domain.
    Boundary {
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long = "per-arc", default_value_t = 20)]
        per_arc: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Images of a polar or cartesian grid of the disc, as CSV or SVG.
    Grid {
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long, value_enum, default_value = "polar")]
        kind: grid::GridKind,
        #[arg(long, default_value_t = 8)]
        rings: usize,
        #[arg(long, default_value_t = 16)]
        rays: usize,
        /// Place ring k at radius 1 − 2^(−k) instead of k/(rings + 1).
        #[arg(long = "rings-geometric")]
        rings_geometric: bool,
        /// Points per grid curve.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Output file; `.svg` selects SVG, anything else CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a geometric check and print its report as JSON.
    Validate {
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long = "in")]
        input: PathBuf,
        /// Treat the input as a closed curve or chain.
        #[arg(long)]
        closed: bool,
        #[arg(long, default_value_t = chain::DEFAULT_EPS0)]
        eps: f64,
        #[arg(long, default_value_t = chain::DEFAULT_C1)]
        c1: f64,
        #[arg(long, default_value_t = 5.0)]
        factor: f64,
        #[arg(long = "max-triples", default_value_t = 2_000_000)]
        max_triples: usize,
        /// Fail when the computed constant exceeds this bound.
        #[arg(long)]
        max: Option<f64>,
    },
    /// Map the inverted ellipse and compare prevertices with their exact values.
    Selftest {
        #[arg(long, value_enum, default_value = "geodesic")]
        algo: Algo,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0.95)]
        r: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Geodesic,
    Slit,
    Zipper,
}

impl Algo {
    fn variant(self) -> Variant {
        match self {
            Algo::Geodesic => Variant::Geodesic,
            Algo::Slit => Variant::Slit,
            Algo::Zipper => Variant::Zipper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Fwd,
    Inv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Interior,
    Exterior,
    Extension,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    DiscChain,
    Pacman,
    Turning,
    Spacing,
    Quasicircle,
    Separation,
}

/// Failure classes with their exit codes.
enum Failure {
    Validation(String),
    Numerical(anyhow::Error),
    Usage(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Usage(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let usage = e
            .chain()
            .any(|c| matches!(c.downcast_ref::<ZipError>(), Some(ZipError::Format(_) | ZipError::NotNormalized)));
        if usage || e.chain().any(|c| c.is::<std::io::Error>()) {
            Failure::Usage(e)
        } else {
            Failure::Numerical(e)
        }
    }
}

impl From<ZipError> for Failure {
    fn from(e: ZipError) -> Self {
        anyhow::Error::new(e).into()
    }
}

type CmdResult = Result<(), Failure>;

fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = s.split_once(',').ok_or("expected RE,IM")?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part {im:?}"))?;
    Ok(Complex::new(re, im))
}

fn newton_config() -> Result<NewtonConfig<f64>, Failure> {
    match std::env::var(NEWTON_TOL_VAR) {
        Err(_) => Ok(NewtonConfig::default()),
        Ok(raw) => {
            let tol: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(anyhow::anyhow!("{NEWTON_TOL_VAR}={raw:?} is not a number")))?;
            NewtonConfig::with_tol(tol).map_err(|e| Failure::Usage(anyhow::Error::new(e).context(NEWTON_TOL_VAR)))
        }
    }
}

fn read_points(path: &Path) -> Result<Vec<Ext64>, Failure> {
    let text = zio::read_text(path)?;
    zio::parse_points(&text)
        .with_context(|| path.display().to_string())
        .map_err(Failure::Usage)
}

fn load_pipeline(path: &Path) -> Result<Pipeline, Failure> {
    let text = zio::read_text(path)?;
    let p: Pipeline = zio::pipeline_from_json(&text)
        .with_context(|| path.display().to_string())
        .map_err(Failure::Usage)?;
    Ok(if std::env::var_os(NEWTON_TOL_VAR).is_some() { p.with_newton(newton_config()?)? } else { p })
}

fn save_pipeline(p: &Pipeline, path: &Path) -> CmdResult {
    zio::write_text(path, &zio::pipeline_to_json(p)?)?;
    Ok(())
}

fn cmd_build(algo: Algo, input: &Path, out: &Path, normalize: Option<C64>) -> CmdResult {
    let points = read_points(input)?;
    let cfg = newton_config()?;
    let start = Instant::now();
    let mut p = Pipeline::build(algo.variant(), &points, cfg).context("build failed")?;
    let elapsed = start.elapsed();
    if let Some(z) = normalize {
        let fix = points
            .iter()
            .find_map(|z| z.finite())
            .ok_or_else(|| Failure::Usage(anyhow::anyhow!("no finite data point to send to 1")))?;
        p = p.normalize_to_disc(z, fix).context("normalization failed")?;
    }
    let max_im = p
        .prevertices
        .iter()
        .filter_map(|v| v.interior.finite())
        .map(|v| if p.is_normalized() { (v.norm() - 1.0).abs() } else { v.im.abs() })
        .fold(0.0, f64::max);
    let mut interp: f64 = 0.0;
    for (z, v) in points.iter().zip(&p.prevertices) {
        if let (Some(z), Ok(Ext64::Finite(w))) = (z.finite(), p.eval_inverse(v.interior)) {
            interp = interp.max((w - z).norm());
        }
    }
    save_pipeline(&p, out)?;
    println!("n = {}", points.len());
    println!("build time = {:.3} s", elapsed.as_secs_f64());
    println!("max |Im prevertex| = {max_im:e}");
    println!("max interpolation error = {interp:e}");
    Ok(())
}

fn cmd_normalize(pipeline: &Path, interior: C64, fix: usize, out: &Path) -> CmdResult {
    let p = load_pipeline(pipeline)?;
    let z = p
        .data_points
        .get(fix)
        .and_then(|z| z.finite())
        .ok_or_else(|| Failure::Usage(anyhow::anyhow!("data point {fix} does not exist or is ∞")))?;
    save_pipeline(&p.normalize_to_disc(interior, z)?, out)
}

fn format_row(v: &Result<Ext64, ZipError>) -> String {
    match v {
        Ok(z) => zio::format_points(std::slice::from_ref(z)).lines().nth(1).unwrap_or("").to_string(),
        Err(e) => format!("error,{}", e.to_string().replace(',', ";")),
    }
}

fn cmd_eval(
    pipeline: &Path,
    dir: Direction,
    input: &Path,
    out: &Path,
    mode: Mode,
    seed: Option<C64>,
    roundtrip: bool,
) -> CmdResult {
    let p = load_pipeline(pipeline)?;
    let points = read_points(input)?;
    let policy = match mode {
        Mode::Interior => BranchPolicy::Interior,
        Mode::Exterior => BranchPolicy::Exterior,
        Mode::Extension => BranchPolicy::Extension { seed: seed.map(Ext64::from) },
    };
    let results: Vec<Result<Ext64, ZipError>> = points
        .iter()
        .map(|&z| match dir {
            Direction::Fwd => p.eval_forward(z, policy),
            Direction::Inv => p.eval_inverse_with(z, policy),
        })
        .collect();
    let mut text = String::from("# re,im\n");
    for r in &results {
        text.push_str(&format_row(r));
        text.push('\n');
    }
    zio::write_text(out, &text)?;
    let failures = results.iter().filter(|r| r.is_err()).count();
    if roundtrip {
        let mut worst: f64 = 0.0;
        for (z, r) in points.iter().zip(&results) {
            let Ok(v) = r else { continue };
            let back = match dir {
                Direction::Fwd => p.eval_inverse_with(*v, policy),
                Direction::Inv => p.eval_forward(*v, policy),
            };
            if let (Some(a), Ok(Ext64::Finite(b))) = (z.finite(), back) {
                worst = worst.max((a - b).norm());
            }
        }
        println!("max round-trip error = {worst:e}");
    }
    println!("evaluated {} point(s), {failures} failure(s)", points.len());
    if failures > 0 {
        return Err(Failure::Numerical(anyhow::anyhow!("{failures} point(s) could not be evaluated")));
    }
    Ok(())
}

fn data_flags(p: &Pipeline, per_arc: usize, len: usize) -> Vec<bool> {
    let n = p.data_points.len();
    (0..len).map(|i| i % per_arc == 0 && i / per_arc < n || (!p.bounded && i + 1 == len)).collect()
}

fn cmd_boundary(pipeline: &Path, per_arc: usize, out: &Path) -> CmdResult {
    let p = load_pipeline(pipeline)?;
    if per_arc == 0 {
        return Err(Failure::Usage(anyhow::anyhow!("--per-arc must be at least 1")));
    }
    let curve = p.boundary_sample(per_arc)?;
    let flags = data_flags(&p, per_arc, curve.len());
    zio::write_text(out, &zio::format_boundary(&curve, &flags))?;
    println!("wrote {} boundary point(s), {} data point(s)", curve.len(), flags.iter().filter(|&&f| f).count());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_grid(
    pipeline: &Path,
    kind: grid::GridKind,
    rings: usize,
    rays: usize,
    geometric: bool,
    samples: usize,
    out: &Path,
) -> CmdResult {
    let p = load_pipeline(pipeline)?;
    if !p.is_normalized() {
        return Err(Failure::Usage(anyhow::Error::new(ZipError::NotNormalized).context(
            "use `zipmap normalize` or `zipmap build --normalize RE,IM` before drawing a grid",
        )));
    }
    let spec = grid::GridSpec { kind, rings, rays, geometric, samples };
    let curves = grid::grid_images(&p, &spec)?;
    let svg = out.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"));
    let text = if svg {
        let boundary = p.boundary_sample(20)?;
        grid::to_svg(&curves, &boundary)
    } else {
        grid::to_csv(&curves)
    };
    zio::write_text(out, &text)?;
    println!("wrote {} grid curve(s)", curves.len());
    Ok(())
}

#[derive(serde::Serialize)]
struct ValidateOutput {
    check: &'static str,
    #[serde(flatten)]
    report: ChainReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_validate(
    check: Check,
    input: &Path,
    closed: bool,
    eps: f64,
    c1: f64,
    factor: f64,
    max_triples: usize,
    max: Option<f64>,
) -> CmdResult {
    let text = zio::read_text(input)?;
    let finite = |pts: &[Ext64]| -> Result<Vec<C64>, Failure> {
        pts.iter()
            .map(|z| z.finite().ok_or_else(|| Failure::Usage(anyhow::anyhow!("this check needs finite points"))))
            .collect()
    };
    let bounded = |value: f64| {
        let mut report = ChainReport::from_violations(Vec::new());
        if let Some(m) = max {
            report.ok = value <= m;
        }
        report
    };
    let (name, report, value) = match check {
        Check::DiscChain => {
            let ch = zio::parse_discs::<f64>(&text, closed).map_err(|e| Failure::Usage(e.into()))?;
            ("disc-chain", chain::validate_disc_chain(&ch), None)
        }
        Check::Pacman => {
            let pts = zio::parse_points::<f64>(&text).map_err(|e| Failure::Usage(e.into()))?;
            ("pacman", chain::pacman_condition(&pts, eps, c1)?, None)
        }
        Check::Turning => {
            let pts = finite(&zio::parse_points::<f64>(&text).map_err(|e| Failure::Usage(e.into()))?)?;
            ("turning", chain::turning_angle_check(&pts, eps), None)
        }
        Check::Spacing => {
            let pts = finite(&zio::parse_points::<f64>(&text).map_err(|e| Failure::Usage(e.into()))?)?;
            let d = chain::spacing_constant(&pts)?;
            ("spacing", bounded(d), Some(d))
        }
        Check::Quasicircle => {
            let pts = finite(&zio::parse_points::<f64>(&text).map_err(|e| Failure::Usage(e.into()))?)?;
            let curve = Polyline::from_complex(&pts, true)?;
            let k = chain::quasicircle_constant(&curve, max_triples);
            ("quasicircle", bounded(k), Some(k))
        }
        Check::Separation => {
            let pts = finite(&zio::parse_points::<f64>(&text).map_err(|e| Failure::Usage(e.into()))?)?;
            ("separation", chain::neighborhood_separation_check(&pts, factor), None)
        }
    };
    let ok = report.ok;
    let out = ValidateOutput { check: name, report, value };
    println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    if ok {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{name} check failed")))
    }
}

fn cmd_selftest(algo: Algo, n: usize, r: f64) -> CmdResult {
    if n < 8 {
        return Err(Failure::Usage(anyhow::anyhow!("--n must be at least 8")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Failure::Usage(anyhow::anyhow!("--r must lie in (0, 1)")));
    }
    let cfg = newton_config()?;
    let outcome = selftest::run(algo.variant(), n, r, cfg)?;
    let threshold = selftest::threshold(algo.variant(), n);
    println!("algorithm = {}", algo.variant().name());
    println!("n = {n}, r = {r}");
    println!("build time = {:.3} s", outcome.build_seconds);
    println!("max prevertex error = {:e}", outcome.max_error);
    println!("threshold = {threshold:e}");
    if outcome.max_error < threshold {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::Validation(format!("error {:e} is above {threshold:e}", outcome.max_error)))
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Build { algo, input, out, normalize } => cmd_build(algo, &input, &out, normalize),
        Command::Normalize { pipeline, interior, fix, out } => cmd_normalize(&pipeline, interior, fix, &out),
        Command::Eval { pipeline, dir, input, out, mode, seed, roundtrip } => {
            cmd_eval(&pipeline, dir, &input, &out, mode, seed, roundtrip)
        }
        Command::Boundary { pipeline, per_arc, out } => cmd_boundary(&pipeline, per_arc, &out),
        Command::Grid { pipeline, kind, rings, rays, rings_geometric, samples, out } => {
            cmd_grid(&pipeline, kind, rings, rays, rings_geometric, samples, &out)
        }
        Command::Validate { check, input, closed, eps, c1, factor, max_triples, max } => {
            cmd_validate(check, &input, closed, eps, c1, factor, max_triples, max)
        }
        Command::Selftest { algo, n, r } => cmd_selftest(algo, n, r),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Validation(msg) => eprintln!("zipmap: {msg}"),
                Failure::Numerical(e) | Failure::Usage(e) => eprintln!("zipmap: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
