//! Acceptance criteria, one line per criterion.
//!
//! Run with `cargo test --test acceptance`. The process exits nonzero when
//! any criterion fails.

use std::process::Command;

use frw_killing::catalog::{
    field_covector, field_jet, hyperbolic_formula, norm_squared, origin_initial_data, timelike_combination_scan,
    Combination, FieldId,
};
use frw_killing::curvature::{
    christoffel_closed, christoffel_numeric, identity_residuals, nabla_riemann_closed, nabla_riemann_numeric,
    riemann_closed, riemann_numeric,
};
use frw_killing::embedding::{embed, hyperboloid_residual, induced_metric_deviation, sectional_curvature_check};
use frw_killing::error::Result;
use frw_killing::fd::{DEFAULT_FIELD_STEP, DEFAULT_STEP};
use frw_killing::geometry::{metric_at, Chart, ChartPoint};
use frw_killing::killing::{algebra_dimension_report, max_killing_residual, ricci_identity_residual, DEFAULT_RANK_TOL};
use frw_killing::sampling::sample_points;
use frw_killing::scale_factor::{
    constant_curvature_residual, first_integral_residual, time_from_x0, x0_from_time, ScaleFactorProfile,
};
use frw_killing::tensor::{relative_deviation, Linear, Vec4};
use frw_killing::verify::{transport_origin, transport_two_paths};

const SEED: u64 = 42;
const SAMPLES: usize = 100;

fn profiles() -> Vec<ScaleFactorProfile> {
    vec![
        ScaleFactorProfile::constant(2.0).unwrap(),
        ScaleFactorProfile::exponential(1.0, 1.0).unwrap(),
        ScaleFactorProfile::secant(1.0).unwrap(),
    ]
}

fn pole_samples(profile: &ScaleFactorProfile, count: usize) -> Vec<ChartPoint> {
    sample_points(profile, Chart::NorthPole, count, SEED).unwrap()
}

/// Outcome of one criterion: pass flag and a short measurement summary.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            detail: String::new(),
        }
    }

    fn at_most(&mut self, name: &str, value: f64, tol: f64) {
        let ok = value.is_finite() && value <= tol;
        self.note(ok, format!("{name}={value:.2e}<={tol:.0e}"));
    }

    fn note(&mut self, ok: bool, text: String) {
        self.pass &= ok;
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        if !ok {
            self.detail.push_str("FAILED ");
        }
        self.detail.push_str(&text);
    }

    fn error(&mut self, what: &str, e: impl std::fmt::Display) {
        self.note(false, format!("{what}: {e}"));
    }
}

fn max_over<F: FnMut(&ChartPoint) -> Result<f64>>(points: &[ChartPoint], mut f: F) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        worst = worst.max(f(p)?);
    }
    Ok(worst)
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    for profile in profiles() {
        let points = pole_samples(&profile, SAMPLES);
        let (mut g, mut r, mut ric, mut s, mut n) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in &points {
            let mut run = || -> Result<()> {
                g = g.max(relative_deviation(
                    &christoffel_closed(&profile, p)?.gamma,
                    &christoffel_numeric(&profile, p, DEFAULT_STEP)?.gamma,
                ));
                let closed = riemann_closed(&profile, p)?;
                let numeric = riemann_numeric(&profile, p, DEFAULT_STEP)?;
                r = r.max(relative_deviation(&closed.riemann, &numeric.riemann));
                ric = ric.max(relative_deviation(&closed.ricci, &numeric.ricci));
                s = s.max(relative_deviation(&closed.scalar, &numeric.scalar));
                n = n.max(relative_deviation(
                    &nabla_riemann_closed(&profile, p)?.nabla_riemann,
                    &nabla_riemann_numeric(&profile, p, DEFAULT_STEP)?.nabla_riemann,
                ));
                Ok(())
            };
            if let Err(e) = run() {
                o.error(&format!("{profile} at {p}"), e);
            }
        }
        o.at_most(&format!("{profile} gamma"), g, 1e-7);
        o.at_most(&format!("{profile} riemann"), r, 1e-6);
        o.at_most(&format!("{profile} ricci"), ric, 1e-6);
        o.at_most(&format!("{profile} scalar"), s, 1e-6);
        o.at_most(&format!("{profile} nabla"), n, 1e-6);
    }
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    for profile in profiles() {
        let points = pole_samples(&profile, SAMPLES);
        let algebraic = max_over(&points, |p| {
            let c = riemann_numeric(&profile, p, DEFAULT_STEP)?;
            let r = identity_residuals(&c);
            Ok(r.antisymmetry.max(r.first_bianchi) / c.riemann.max_abs().max(1.0))
        });
        match algebraic {
            Ok(v) => o.at_most(&format!("{profile} antisymmetry/bianchi"), v, 1e-10),
            Err(e) => o.error("identities", e),
        }
        let fields: Vec<FieldId> = FieldId::ALL.into_iter().filter(|id| id.is_killing_for(&profile)).collect();
        let ricci_id = max_over(&points[..10], |p| {
            let mut worst: f64 = 0.0;
            for &id in &fields {
                let field = |q: &ChartPoint| field_covector(id, &profile, q);
                let scale = field(p)?.max_abs().max(1.0);
                worst = worst.max(ricci_identity_residual(&profile, p, &field, DEFAULT_FIELD_STEP)? / scale);
            }
            Ok(worst)
        });
        match ricci_id {
            Ok(v) => o.at_most(&format!("{profile} ricci identity ({} fields)", fields.len()), v, 1e-5),
            Err(e) => o.error("ricci identity", e),
        }
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let cases = [
        (ScaleFactorProfile::constant(2.0).unwrap(), -1.5),
        (ScaleFactorProfile::secant(1.0).unwrap(), -12.0),
    ];
    for (profile, expected) in cases {
        let points = pole_samples(&profile, SAMPLES);
        let closed = max_over(&points, |p| Ok((riemann_closed(&profile, p)?.scalar - expected).abs()));
        let numeric = max_over(&points, |p| {
            Ok((riemann_numeric(&profile, p, DEFAULT_STEP)?.scalar - expected).abs() / expected.abs())
        });
        match (closed, numeric) {
            (Ok(c), Ok(n)) => {
                o.at_most(&format!("{profile} closed |S-({expected})|"), c, 1e-8);
                o.at_most(&format!("{profile} metric-only rel"), n, 1e-8);
            }
            (Err(e), _) | (_, Err(e)) => o.error("scalar", e),
        }
    }
    o
}

/// Covector used for the Killing suite; hyperbolic fields of non-secant
/// profiles come from the raw formula in the pole chart.
fn suite_covector(id: FieldId, profile: &ScaleFactorProfile, q: &ChartPoint) -> Result<Vec4> {
    if id.is_hyperbolic() && profile.secant_radius().is_none() {
        let (v, _) = hyperbolic_formula(id, &q.coords)?;
        let g = metric_at(profile, q)?.diagonal();
        return Ok([g[0] * v[0], g[1] * v[1], g[2] * v[2], g[3] * v[3]]);
    }
    field_covector(id, profile, q)
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    for profile in profiles() {
        let points = pole_samples(&profile, SAMPLES);
        let mut accepted = Vec::new();
        let mut worst_accepted: f64 = 0.0;
        let mut weakest_rejected = f64::INFINITY;
        for id in FieldId::ALL {
            let field = |q: &ChartPoint| suite_covector(id, &profile, q);
            let res = max_over(&points, |p| {
                Ok(max_killing_residual(&profile, p, &field, DEFAULT_FIELD_STEP)? / field(p)?.max_abs().max(1.0))
            });
            let res = match res {
                Ok(v) => v,
                Err(e) => {
                    o.error(&format!("{profile} {id}"), e);
                    continue;
                }
            };
            if res < 1e-6 {
                accepted.push(id);
                worst_accepted = worst_accepted.max(res);
            } else {
                weakest_rejected = weakest_rejected.min(res);
            }
        }
        let expected: Vec<FieldId> = FieldId::ALL.into_iter().filter(|id| id.is_killing_for(&profile)).collect();
        let names: Vec<&str> = accepted.iter().map(|id| id.name()).collect();
        o.note(
            accepted == expected,
            format!(
                "{profile} accepts {} fields [{}] (max {worst_accepted:.1e}, smallest rejected {weakest_rejected:.1e})",
                accepted.len(),
                names.join(",")
            ),
        );
    }
    // the hyperbolic fields under the u-chart metric
    let secant = ScaleFactorProfile::secant(1.0).unwrap();
    let u_points = sample_points(&secant, Chart::ModifiedU, SAMPLES, SEED).unwrap();
    let hyp = max_over(&u_points, |p| {
        let mut worst: f64 = 0.0;
        for id in FieldId::HYPERBOLIC {
            let field = |q: &ChartPoint| field_covector(id, &secant, q);
            worst = worst.max(max_killing_residual(&secant, p, &field, DEFAULT_FIELD_STEP)? / field(p)?.max_abs().max(1.0));
        }
        Ok(worst)
    });
    match hyp {
        Ok(v) => o.at_most("secant:1 hyp1-4 in u-chart", v, 1e-6),
        Err(e) => o.error("u-chart", e),
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    for (profile, expected) in profiles().into_iter().zip([7, 6, 10]) {
        let points = pole_samples(&profile, 20);
        match algebra_dimension_report(&profile, &points, DEFAULT_RANK_TOL) {
            Ok(d) => {
                o.note(d.dimension == expected, format!("{profile} dim={} (expect {expected})", d.dimension));
                o.note(d.min_rank_gap > 1e6, format!("gap={:.1e}", d.min_rank_gap));
            }
            Err(e) => o.error(&format!("{profile}"), e),
        }
    }
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    for profile in profiles() {
        let start = transport_origin(&profile);
        let targets = pole_samples(&profile, 10);
        let (mut closure, mut independence) = (0.0f64, 0.0f64);
        for target in &targets {
            for id in FieldId::ROTATIONS {
                let run = || -> Result<(f64, f64)> {
                    let jet0 = origin_initial_data(id, &profile, start.time())?;
                    let (a, b) = transport_two_paths(&profile, &start, &jet0, target)?;
                    Ok((relative_deviation(&a, &field_jet(id, &profile, target)?), relative_deviation(&a, &b)))
                };
                match run() {
                    Ok((c, i)) => {
                        closure = closure.max(c);
                        independence = independence.max(i);
                    }
                    Err(e) => o.error(&format!("{profile} {id} to {target}"), e),
                }
            }
        }
        o.at_most(&format!("{profile} closure"), closure, 1e-6);
        o.at_most(&format!("{profile} two-path"), independence, 1e-6);
    }
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    for a in [0.5, 1.0, 3.0] {
        let profile = ScaleFactorProfile::secant(a).unwrap();
        let c = 1.0;
        let (lo, hi) = profile.safe_interval();
        let (mut ode, mut integral, mut trip, mut product) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for k in 0..=100 {
            let x0 = lo + (hi - lo) * k as f64 / 100.0;
            let mut run = || -> Result<()> {
                ode = ode.max(constant_curvature_residual(&profile, x0)?.abs() / (a * a));
                integral = integral.max(first_integral_residual(&profile, x0, 1.0 / (a * a))?.abs() / (a * a));
                let t = time_from_x0(a, c, x0)?;
                trip = trip.max((x0_from_time(a, c, t)? - x0).abs());
                product = product.max((x0.cos() * (c * t / a).cosh() - 1.0).abs());
                Ok(())
            };
            if let Err(e) = run() {
                o.error(&format!("a={a} x0={x0}"), e);
            }
        }
        o.at_most(&format!("a={a} ode/a^2"), ode, 1e-10);
        o.at_most("first integral/a^2", integral, 1e-10);
        o.at_most("round trip", trip, 1e-10);
        o.at_most("cos*cosh-1", product, 1e-10);
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    for a in [1.0, 2.5] {
        let profile = ScaleFactorProfile::secant(a).unwrap();
        let points = sample_points(&profile, Chart::ModifiedU, SAMPLES, SEED).unwrap();
        let hyp = max_over(&points, |u| Ok(hyperboloid_residual(&embed(u, a)?, a)));
        let metric = max_over(&points, |u| induced_metric_deviation(u, a, DEFAULT_FIELD_STEP));
        let sectional = sectional_curvature_check(a, &points[..20]);
        match (hyp, metric, sectional) {
            (Ok(h), Ok(m), Ok(s)) => {
                o.at_most(&format!("a={a} hyperboloid"), h, 1e-12);
                o.at_most("induced metric", m, 1e-7);
                o.at_most("|K+1/a^2|", (s.k_estimate + 1.0 / (a * a)).abs(), 1e-6);
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => o.error(&format!("a={a}"), e),
        }
    }
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let secant = ScaleFactorProfile::secant(1.0).unwrap();
    match timelike_combination_scan(&secant, SAMPLES, SEED) {
        Ok(w) => {
            let worst = w.iter().map(|w| w.norm_squared).fold(f64::NEG_INFINITY, f64::max);
            let strictly = w.iter().filter(|w| w.norm_squared <= 0.0).count();
            o.note(w.len() == SAMPLES, format!("{} witnesses", w.len()));
            o.at_most("max g(X,X)", worst, 1e-12);
            o.note(true, format!("{strictly} with g(X,X)<=0 exactly"));
        }
        Err(e) => o.error("scan", e),
    }
    let constant = ScaleFactorProfile::constant(1.0).unwrap();
    let points = pole_samples(&constant, SAMPLES);
    let static0 = Combination::single(FieldId::Static0);
    let dev = max_over(&points, |p| {
        let q = norm_squared(&static0, &constant, p)?;
        let r = constant.eval_r(p.time(), 0)?;
        Ok(if q > 0.0 { (q - r * r).abs() } else { f64::INFINITY })
    });
    match dev {
        Ok(v) => o.at_most("constant:1 static |g-R^2| (all >0)", v, 1e-12),
        Err(e) => o.error("static", e),
    }
    o
}

fn run_binary(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_frw-killing"))
        .args(args)
        .env_remove("KL_SEED")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new();
    let args = ["full-verify", "--profile", "secant:1", "--seed", "42"];
    let (c1, a) = run_binary(&args);
    let (c2, b) = run_binary(&args);
    o.note(c1 == Some(0) && c2 == Some(0), format!("exit codes {c1:?} {c2:?}"));
    o.note(!a.is_empty() && a == b, format!("{} bytes, identical={}", a.len(), a == b));
    let dim = |bytes: &[u8]| -> Option<u64> {
        serde_json::from_slice::<serde_json::Value>(bytes).ok()?["results"]["algebra_dimension"].as_u64()
    };
    o.note(dim(&a) == Some(10), format!("secant:1 dimension {:?}", dim(&a)));
    let (c3, d) = run_binary(&["full-verify", "--profile", "constant:2"]);
    o.note(c3 == Some(0) && dim(&d) == Some(7), format!("constant:2 exit {c3:?} dimension {:?}", dim(&d)));
    o
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("curvature oracle suite", criterion_1),
        ("identity suite", criterion_2),
        ("scalar curvature spot values", criterion_3),
        ("killing catalog suite", criterion_4),
        ("dimension counts", criterion_5),
        ("transport closure", criterion_6),
        ("exceptional-case ODE", criterion_7),
        ("embedding", criterion_8),
        ("time-like combination scan", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failures = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name}: {}", n + 1, o.detail);
        failures += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
