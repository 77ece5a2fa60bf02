//! Command-line front end.
//!
//! Every subcommand writes a [`VerificationReport`]; the exit code is 0 when
//! all of its checks pass, 1 when one fails and 2 on a usage or
//! configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::catalog::{field_covector, field_vector, field_y, origin_initial_data, FieldId};
use crate::config::{OutputFormat, RunConfig, CONFIG_FILE_NAME, SEED_ENV_VAR};
use crate::curvature::{connection, curvature, identity_residuals};
use crate::embedding::sectional_curvature_check;
use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::{Chart, ChartPoint};
use crate::killing::{compat_rank, max_killing_residual, transport_jet, transport_jet_adaptive, Segment, JET_LABELS};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::sample_points;
use crate::scale_factor::ScaleFactorProfile;
use crate::tensor::{relative_deviation, Linear};
use crate::verify;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "frw-killing", version, about = "Curvature and Killing-field verification for closed homogeneous isotropic universes")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Scale-factor profile, e.g. `secant:1`, `constant:2`, `exponential:1,1`.
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Configuration file with `key=value` lines [default: ./verify.cfg if present].
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Report destination; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Include the wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Point as `chart:c0,c1,c2,c3` (charts `x`/`north`, `y`/`south`, `u`).
    #[arg(long, conflicts_with_all = ["chart", "coords"])]
    point: Option<String>,
    #[arg(long, requires = "coords")]
    chart: Option<String>,
    #[arg(long, requires = "chart")]
    coords: Option<String>,
}

impl PointArgs {
    fn resolve(&self, default: &str) -> Result<ChartPoint> {
        match (&self.point, &self.chart, &self.coords) {
            (Some(p), _, _) => p.parse(),
            (None, Some(chart), Some(coords)) => format!("{chart}:{coords}").parse(),
            _ => default.parse(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Connection, Ricci tensor and scalar curvature at a point.
    CurvatureReport {
        #[command(flatten)]
        at: PointArgs,
    },
    /// Finite-difference Killing residual of a catalog field at sample points.
    KillingCheck {
        #[arg(long)]
        field: String,
    },
    /// Rank and kernel of the compatibility operator at a point.
    CompatRank {
        #[command(flatten)]
        at: PointArgs,
    },
    /// Dimension bound of the isometry algebra over sample points.
    AlgebraDim,
    /// Transport of a rotational field's origin data to a point.
    Transport {
        #[arg(long)]
        field: String,
        /// Target point as `chart:c0,c1,c2,c3`.
        #[arg(long)]
        to: String,
        /// Fixed step count; adaptive when absent.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// List the catalog or evaluate one field.
    Catalog {
        #[arg(long, conflicts_with = "eval")]
        list: bool,
        #[arg(long, value_name = "ID")]
        eval: Option<String>,
        #[command(flatten)]
        at: PointArgs,
    },
    /// Hyperboloid embedding of the constant-curvature universe.
    EmbedCheck {
        /// Hyperboloid radius [default: the secant profile's radius, or 1].
        #[arg(long)]
        a: Option<f64>,
    },
    /// Every check that applies to the profile.
    FullVerify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CurvatureReport { .. } => "curvature-report",
            Command::KillingCheck { .. } => "killing-check",
            Command::CompatRank { .. } => "compat-rank",
            Command::AlgebraDim => "algebra-dim",
            Command::Transport { .. } => "transport",
            Command::Catalog { .. } => "catalog",
            Command::EmbedCheck { .. } => "embed-check",
            Command::FullVerify => "full-verify",
        }
    }
}

/// Configuration from defaults, the config file, the seed variable and the
/// flags, in increasing precedence.
fn build_config(g: &GlobalArgs, env_seed: Option<&str>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    match &g.config {
        Some(path) => cfg.apply_file(path)?,
        None => {
            let path = PathBuf::from(CONFIG_FILE_NAME);
            if path.is_file() {
                cfg.apply_file(&path)?;
            }
        }
    }
    cfg.apply_seed_env(env_seed)?;
    if let Some(p) = &g.profile {
        cfg.apply("profile", p)?;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(n) = g.samples {
        cfg.apply("sample_count", &n.to_string())?;
    }
    if let Some(f) = g.format {
        cfg.format = f;
    }
    if let Some(o) = &g.output {
        cfg.output = Some(o.clone());
    }
    for t in &g.tolerances {
        let (name, value) = t
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("--tol expects name=value, got '{t}'")))?;
        cfg.apply(&format!("tol.{}", name.trim()), value)?;
    }
    Ok(cfg)
}

fn parse_field(s: &str) -> Result<FieldId> {
    s.parse()
}

fn curvature_report(profile: &ScaleFactorProfile, p: &ChartPoint, cfg: &RunConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("curvature-report", cfg.to_json_value());
    let gamma = connection(profile, p)?;
    let c = curvature(profile, p)?;
    let ids = identity_residuals(&c);
    let scale = c.riemann.max_abs().max(1.0);
    let identity = ids.antisymmetry.max(ids.first_bianchi).max(ids.ricci_asymmetry) / scale;
    let nonzero: Vec<_> = gamma
        .nonzero_components(1e-14)
        .into_iter()
        .map(|(idx, value)| json!({"idx": idx, "value": value}))
        .collect();
    r.set_result("point", json!(p.to_string()));
    r.set_result("profile", json!(profile.to_string()));
    r.set_result("gamma_nonzero", json!(nonzero));
    r.set_result("ricci_diag", json!((0..4).map(|i| c.ricci[i][i]).collect::<Vec<_>>()));
    r.set_result("scalar", json!(c.scalar));
    r.set_result("max_identity_residual", json!(identity));
    r.push(CheckRecord::at_most("identity", identity, cfg.tol("identity")));
    Ok(r)
}

fn killing_check(profile: &ScaleFactorProfile, id: FieldId, cfg: &RunConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("killing-check", cfg.to_json_value());
    let chart = if id.is_hyperbolic() { Chart::ModifiedU } else { Chart::NorthPole };
    let points = sample_points(profile, chart, cfg.sample_count, cfg.seed)?;
    let field = |q: &ChartPoint| field_covector(id, profile, q);
    let mut worst: f64 = 0.0;
    for p in &points {
        let scale = field(p)?.max_abs().max(1.0);
        worst = worst.max(max_killing_residual(profile, p, &field, fd::DEFAULT_FIELD_STEP)? / scale);
    }
    let tol = cfg.tol("killing");
    r.set_result("field", json!(id.name()));
    r.set_result("max_residual", json!(worst));
    r.set_result("verdict", json!(if worst <= tol { "Killing" } else { "NotKilling" }));
    r.push(CheckRecord::at_most("killing", worst, tol));
    Ok(r)
}

fn compat_report(profile: &ScaleFactorProfile, p: &ChartPoint, cfg: &RunConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("compat-rank", cfg.to_json_value());
    let c = compat_rank(profile, p, cfg.tol("rank"))?;
    r.push(CheckRecord::at_least("rank_gap", c.rank_gap, cfg.tol("rank_gap")));
    r.push(CheckRecord::equals("reduced_agrees", c.reduced_agrees as u8 as f64, 1.0));
    r.results = serde_json::to_value(&c).map_err(|e| Error::Io(e.to_string()))?;
    Ok(r)
}

fn algebra_dim(profile: &ScaleFactorProfile, cfg: &RunConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("algebra-dim", cfg.to_json_value());
    let points = sample_points(profile, Chart::NorthPole, cfg.sample_count.max(3), cfg.seed)?;
    verify::dimension_battery(profile, &points, cfg, &mut r);
    Ok(r)
}

fn transport(
    profile: &ScaleFactorProfile,
    id: FieldId,
    target: &ChartPoint,
    steps: Option<usize>,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    if target.chart != Chart::NorthPole {
        return Err(Error::ChartProfileMismatch("transport targets are north-chart points".into()));
    }
    let mut r = VerificationReport::new("transport", cfg.to_json_value());
    let start = ChartPoint::north([target.time(), 0.0, 0.0, 0.0]);
    let jet0 = origin_initial_data(id, profile, start.time())?;
    let path = Segment {
        from: start.coords,
        to: target.coords,
    };
    let (jet, used) = match steps {
        Some(n) => (transport_jet(profile, &start, &jet0, &path, n)?, n),
        None => {
            let o = transport_jet_adaptive(profile, &start, &jet0, &path)?;
            (o.jet, o.steps)
        }
    };
    let exact = crate::catalog::field_jet(id, profile, target)?;
    let labelled = |v: [f64; 10]| -> serde_json::Map<String, serde_json::Value> {
        JET_LABELS.iter().zip(v).map(|(k, x)| (k.to_string(), json!(x))).collect()
    };
    let dev = relative_deviation(&jet, &exact);
    r.set_result("field", json!(id.name()));
    r.set_result("from", json!(start.to_string()));
    r.set_result("to", json!(target.to_string()));
    r.set_result("steps", json!(used));
    r.set_result("jet", json!(labelled(jet.to_array())));
    r.set_result("closed_form", json!(labelled(exact.to_array())));
    r.push(CheckRecord::at_most("transport.closure", dev, cfg.tol("transport")));
    Ok(r)
}

fn catalog_list(cfg: &RunConfig) -> VerificationReport {
    let mut r = VerificationReport::new("catalog", cfg.to_json_value());
    let list: Vec<_> = FieldId::ALL
        .iter()
        .map(|id| json!({"id": id.name(), "description": id.description(), "validity": id.validity()}))
        .collect();
    r.set_result("fields", json!(list));
    r
}

fn catalog_eval(profile: &ScaleFactorProfile, id: FieldId, p: &ChartPoint, cfg: &RunConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("catalog", cfg.to_json_value());
    r.set_result("id", json!(id.name()));
    r.set_result("point", json!(p.to_string()));
    r.set_result("vector", json!(field_vector(id, profile, p)?));
    r.set_result("covector", json!(field_covector(id, profile, p)?));
    r.set_result("y", json!(field_y(id, profile, p)?));
    r.set_result("killing_for_profile", json!(id.is_killing_for(profile)));
    Ok(r)
}

fn embed_check(a: f64, cfg: &RunConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("embed-check", cfg.to_json_value());
    let profile = ScaleFactorProfile::secant(a)?;
    let points = sample_points(&profile, Chart::ModifiedU, cfg.sample_count, cfg.seed)?;
    let (mut hyp, mut met) = (0.0f64, 0.0f64);
    for u in &points {
        hyp = hyp.max(crate::embedding::hyperboloid_residual(&crate::embedding::embed(u, a)?, a));
        met = met.max(crate::embedding::induced_metric_deviation(u, a, fd::DEFAULT_FIELD_STEP)?);
    }
    let nested: Vec<ChartPoint> = points.iter().take(verify::NESTED_SAMPLE_CAP).copied().collect();
    let s = sectional_curvature_check(a, &nested)?;
    r.set_result("max_hyperboloid_dev", json!(hyp));
    r.set_result("max_metric_dev", json!(met));
    r.set_result("K_estimate", json!(s.k_estimate));
    r.push(CheckRecord::at_most("embedding.hyperboloid", hyp, cfg.tol("hyperboloid")));
    r.push(CheckRecord::at_most("embedding.induced_metric", met, cfg.tol("induced_metric")));
    r.push(CheckRecord::at_most(
        "embedding.sectional",
        (s.k_estimate + 1.0 / (a * a)).abs(),
        cfg.tol("sectional"),
    ));
    Ok(r)
}

fn execute(command: &Command, cfg: &RunConfig) -> Result<VerificationReport> {
    let profile = || -> Result<ScaleFactorProfile> { cfg.profile.parse() };
    match command {
        Command::CurvatureReport { at } => curvature_report(&profile()?, &at.resolve("x:0,0,0,0")?, cfg),
        Command::KillingCheck { field } => killing_check(&profile()?, parse_field(field)?, cfg),
        Command::CompatRank { at } => compat_report(&profile()?, &at.resolve("x:0,0,0,0")?, cfg),
        Command::AlgebraDim => algebra_dim(&profile()?, cfg),
        Command::Transport { field, to, steps } => transport(&profile()?, parse_field(field)?, &to.parse()?, *steps, cfg),
        Command::Catalog { list, eval, at } => match eval {
            Some(id) if !list => catalog_eval(&profile()?, parse_field(id)?, &at.resolve("x:0,0,0,0")?, cfg),
            _ => Ok(catalog_list(cfg)),
        },
        Command::EmbedCheck { a } => {
            let a = match a {
                Some(a) => *a,
                None => profile()?.secant_radius().unwrap_or(1.0),
            };
            embed_check(a, cfg)
        }
        Command::FullVerify => verify::full_verify(&profile()?, cfg),
    }
}

/// Errors caused by the invocation rather than by a failed computation.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::InvalidProfile(_)
            | Error::ChartProfileMismatch(_)
            | Error::Io(_)
            | Error::Domain { .. }
            | Error::SingularPoint
            | Error::StepTooLarge { .. }
    )
}

fn emit(report: &VerificationReport, cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let text = match cfg.format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => report.to_csv()?,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    }
}

/// Runs the command line with an explicit seed variable and output streams.
pub fn run_with<I, T>(argv: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let cfg = match build_config(&cli.global, env_seed) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let started = Instant::now();
    let mut report = match execute(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", cli.command.name());
            return if is_usage_error(&e) { EXIT_USAGE } else { EXIT_FAIL };
        }
    };
    if cli.global.timing {
        report.wall_time_seconds = Some(started.elapsed().as_secs_f64());
    }
    if let Err(e) = emit(&report, &cfg, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if report.pass {
        EXIT_PASS
    } else {
        for c in report.checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(stderr, "FAIL {}: {:e} (tolerance {:e})", c.name, c.max_residual, c.tolerance);
        }
        EXIT_FAIL
    }
}

/// Runs the command line against the process environment.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV_VAR).ok();
    run_with(
        argv,
        env_seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
