//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed invariants or I/O error, 2 invalid
//! arguments, 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::analysis::{
    fit_exp_law, fit_power_law, lipschitz_bound, run_sweep, write_sweep_csv, SweepRecord,
};
use crate::error::Error;
use crate::fmt::json_num;
use crate::moments::{solve_moment_system, DiscreteMeasure};
use crate::plot::{chart_from_csv, render_svg};
use crate::polyapprox::{remez_sqrt, NodeScheme};
use crate::profile::{build_f, build_g, default_radii, write_profile_rows};
use crate::quad::QuadConfig;
use crate::verify::{run_checks, Perturbation, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const THREADS_ENV: &str = "BUMPFORGE_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "bumpforge",
    version,
    about = "Optimal radial bump functions for shallow ReLU networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure and radial profile for one dimension.
    Compute(ComputeArgs),
    /// Norms, bounds and decay statistics over a range of dimensions.
    Sweep(SweepArgs),
    /// Run the invariant suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Render exported profile or sweep CSVs as an SVG chart.
    Plot(PlotArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SchemeArg {
    Optimal,
    Equidistant,
    Chebyshev,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct NodeArgs {
    /// Left end of the node interval for optimal and equidistant nodes.
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    /// Plateau half-width: nodes are placed on [eps, 1].
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Simpson points per radial integral (odd, at least 11).
    #[arg(long = "quad-points", default_value_t = 1001)]
    quad_points: usize,
}

#[derive(Args, Debug, Clone)]
struct RangeArgs {
    #[arg(long = "d-min", default_value_t = 3)]
    d_min: u32,
    #[arg(long = "d-max", default_value_t = 31)]
    d_max: u32,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Odd dimension, at least 3.
    #[arg(long)]
    d: u32,
    #[arg(long, value_enum, default_value_t = SchemeArg::Optimal)]
    scheme: SchemeArg,
    #[command(flatten)]
    nodes: NodeArgs,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    range: RangeArgs,
    /// Node scheme; repeat to sweep several.
    #[arg(long, value_enum)]
    scheme: Vec<SchemeArg>,
    #[command(flatten)]
    nodes: NodeArgs,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long, value_enum, default_value_t = SchemeArg::Optimal)]
    scheme: SchemeArg,
    #[command(flatten)]
    nodes: NodeArgs,
    /// Add this amount to one weight before checking.
    #[arg(long = "perturb-weight", requires = "perturb_index")]
    perturb_weight: Option<f64>,
    /// Index of the weight to perturb.
    #[arg(long = "perturb-index", requires = "perturb_weight")]
    perturb_index: Option<usize>,
    /// Also write the full check list as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Profile or sweep CSV; repeat to overlay.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// SVG file to write.
    #[arg(long)]
    out: PathBuf,
    /// Logarithmic axes.
    #[arg(long)]
    log: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(f) = configure_threads() {
        return report(f);
    }
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
        Command::Plot(a) => plot(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> i32 {
    let (code, kind, msg) = match f {
        Failure::Usage(m) => (EXIT_USAGE, "invalid argument", m),
        Failure::Numerical(m) => (EXIT_NUMERICAL, "numerical failure", m),
        Failure::Io(m) => (EXIT_FAILED, "i/o error", m),
    };
    eprintln!("bumpforge: {kind}: {msg}");
    code
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        usage(format!(
            "{THREADS_ENV} must be a positive integer, got '{raw}'"
        ))
    })?;
    // A second call in the same process (tests) finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn check_dimension(d: u32) -> CliResult<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(usage(format!("--d must be odd and at least 3, got {d}")));
    }
    Ok(())
}

fn dimensions(r: &RangeArgs) -> CliResult<Vec<u32>> {
    check_dimension(r.d_min)?;
    check_dimension(r.d_max)?;
    if r.d_min > r.d_max {
        return Err(usage(format!(
            "--d-min {} exceeds --d-max {}",
            r.d_min, r.d_max
        )));
    }
    Ok((r.d_min..=r.d_max).step_by(2).collect())
}

fn quad_config(a: &NodeArgs) -> CliResult<QuadConfig> {
    QuadConfig::new(a.quad_points).ok_or_else(|| {
        usage(format!(
            "--quad-points must be odd and at least 11, got {}",
            a.quad_points
        ))
    })
}

/// Resolves the scheme and its node interval from `--lo` and `--eps`.
fn node_scheme(s: SchemeArg, a: &NodeArgs) -> CliResult<NodeScheme> {
    if !(0.0..1.0).contains(&a.eps) {
        return Err(usage(format!("--eps must lie in [0, 1), got {}", a.eps)));
    }
    if !(0.0..1.0).contains(&a.lo) {
        return Err(usage(format!("--lo must lie in [0, 1), got {}", a.lo)));
    }
    if a.eps > 0.0 && a.lo > 0.0 && a.eps != a.lo {
        return Err(usage(
            "--lo and --eps disagree; the plateau sets the node interval",
        ));
    }
    let lo = a.lo.max(a.eps);
    Ok(match s {
        SchemeArg::Optimal => NodeScheme::Optimal { lo },
        SchemeArg::Equidistant => NodeScheme::Equidistant { lo },
        SchemeArg::Chebyshev if lo > 0.0 => {
            return Err(usage("chebyshev nodes always span [0, 1]; drop --lo/--eps"));
        }
        SchemeArg::Chebyshev => NodeScheme::Chebyshev,
    })
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(())
}

fn write_json(path: &Path, v: &Value) -> CliResult<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, v)?;
        writeln!(w)
    })
}

fn print_json(v: &Value) {
    // A closed pipe downstream is not an error worth reporting.
    let _ = writeln!(
        std::io::stdout().lock(),
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    );
}

fn measure_json(m: &DiscreteMeasure) -> Value {
    Value::Array(
        m.atoms()
            .enumerate()
            .map(|(i, (s, mu))| json!({ "i": i, "s_i": json_num(s), "mu_i": json_num(mu) }))
            .collect(),
    )
}

fn compute(a: ComputeArgs) -> CliResult<i32> {
    check_dimension(a.d)?;
    let quad = quad_config(&a.nodes)?;
    let scheme = node_scheme(a.scheme, &a.nodes)?;
    let n = (a.d as usize - 1) / 2;
    let measure = solve_moment_system(&scheme.nodes(n)?)?;
    let lo = scheme.lo();
    let level = remez_sqrt(n, lo * lo)?.level();
    let gamma = measure.gamma();
    let tv_even = measure.tv_even();
    let lip = lipschitz_bound(a.d, tv_even);

    let stem = format!("d{}_{}", a.d, scheme.name());
    let ext = match a.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let measure_path = a.out.join(format!("measure_{stem}.{ext}"));
    let profile_path = a.out.join(format!("profile_{stem}.{ext}"));

    let bump = build_f(build_g(measure.clone())).with_quad(quad);
    let radii = default_radii();
    let f = bump.eval_many(&radii);
    let fp = bump.eval_prime_many(&radii);
    match a.format {
        Format::Csv => {
            write_atomic(&measure_path, |w| measure.write_csv(w))?;
            write_atomic(&profile_path, |w| write_profile_rows(w, &radii, &f, &fp))?;
        }
        Format::Json => {
            write_json(&measure_path, &measure_json(&measure))?;
            let rows: Vec<Value> = radii
                .iter()
                .zip(&f)
                .zip(&fp)
                .map(|((r, f), fp)| json!({ "r": json_num(*r), "f": json_num(*f), "f_prime": json_num(*fp) }))
                .collect();
            write_json(&profile_path, &Value::Array(rows))?;
        }
    }

    print_json(&json!({
        "d": a.d,
        "scheme": scheme.name(),
        "lo": json_num(lo),
        "gamma": json_num(gamma),
        "tv_even": json_num(tv_even),
        "remez_level": json_num(level),
        "lipschitz_bound": json_num(lip),
        "nodes": measure.points().iter().map(|&s| json_num(s)).collect::<Vec<_>>(),
        "weights": measure.weights().iter().map(|&w| json_num(w)).collect::<Vec<_>>(),
        "measure_file": measure_path.display().to_string(),
        "profile_file": profile_path.display().to_string(),
    }));
    Ok(EXIT_OK)
}

fn record_json(r: &SweepRecord) -> Value {
    json!({
        "d": r.d,
        "scheme": r.scheme,
        "gamma": json_num(r.gamma),
        "gamma_over_d": json_num(r.gamma_over_d),
        "remez_level": json_num(r.remez_level),
        "lipschitz_bound": json_num(r.lipschitz_bound),
        "max_abs_fprime": json_num(r.max_abs_fprime),
        "radial_l1": json_num(r.radial_l1),
        "ball_avg": json_num(r.ball_avg),
    })
}

/// Fitted laws for one scheme; `null` where fewer than two dimensions exist.
fn scheme_fits(records: &[SweepRecord]) -> Value {
    let d: Vec<f64> = records.iter().map(|r| r.d as f64).collect();
    let pick = |f: fn(&SweepRecord) -> f64| records.iter().map(f).collect::<Vec<f64>>();
    let power = |ys: Vec<f64>| match fit_power_law(&d, &ys) {
        Ok(l) => json!({ "coeff": json_num(l.coeff), "exponent": json_num(l.exponent) }),
        Err(_) => Value::Null,
    };
    let ball = match fit_exp_law(&d, &pick(|r| r.ball_avg)) {
        Ok(l) => json!({ "intercept": json_num(l.intercept), "slope": json_num(l.slope) }),
        Err(_) => Value::Null,
    };
    json!({
        "gamma_power_law": power(pick(|r| r.gamma)),
        "radial_l1_power_law": power(pick(|r| r.radial_l1)),
        "ball_avg_exp_law": ball,
    })
}

fn sweep(a: SweepArgs) -> CliResult<i32> {
    let dims = dimensions(&a.range)?;
    let quad = quad_config(&a.nodes)?;
    let mut schemes = a.scheme.clone();
    if schemes.is_empty() {
        schemes.push(SchemeArg::Optimal);
    }
    schemes.dedup();

    let mut all = Vec::new();
    let mut fits = Map::new();
    for s in schemes {
        let scheme = node_scheme(s, &a.nodes)?;
        let records = run_sweep(&dims, &scheme, quad)?;
        fits.insert(scheme.name().to_string(), scheme_fits(&records));
        all.extend(records);
    }
    let summary = json!({
        "d_min": a.range.d_min,
        "d_max": a.range.d_max,
        "fits": Value::Object(fits),
    });

    match a.format {
        Format::Csv => write_atomic(&a.out.join("sweep.csv"), |w| write_sweep_csv(w, &all))?,
        Format::Json => write_json(
            &a.out.join("sweep.json"),
            &Value::Array(all.iter().map(record_json).collect()),
        )?,
    }
    write_json(&a.out.join("sweep_fits.json"), &summary)?;
    print_json(&summary);
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs) -> CliResult<i32> {
    let cfg = VerifyConfig {
        dims: dimensions(&a.range)?,
        scheme: node_scheme(a.scheme, &a.nodes)?,
        eps: a.nodes.eps,
        quad: quad_config(&a.nodes)?,
        perturb: match (a.perturb_index, a.perturb_weight) {
            (Some(index), Some(delta)) => Some(Perturbation { index, delta }),
            _ => None,
        },
    };
    let checks = run_checks(&cfg)?;
    let failures: Vec<Value> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| json!({ "name": c.name, "d": c.d, "detail": c.detail }))
        .collect();
    let passed = failures.is_empty();
    let summary = json!({ "passed": passed, "checks": checks.len(), "failures": failures });
    if let Some(path) = &a.out {
        write_json(path, &json!({ "passed": passed, "checks": checks }))?;
    }
    print_json(&summary);
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn plot(a: PlotArgs) -> CliResult<i32> {
    if let Some(missing) = a.input.iter().find(|p| !p.is_file()) {
        return Err(usage(format!(
            "input file {} does not exist",
            missing.display()
        )));
    }
    let inputs: Vec<&Path> = a.input.iter().map(PathBuf::as_path).collect();
    let chart = chart_from_csv(&inputs, a.log)?;
    let svg = render_svg(&chart);
    write_atomic(&a.out, |w| w.write_all(svg.as_bytes()))?;
    Ok(EXIT_OK)
}
