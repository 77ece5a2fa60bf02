//! Check batteries behind the `full-verify` command.
//!
//! Each battery appends [`CheckRecord`]s to a report. A battery that cannot
//! be evaluated (a domain error, an unstable rank) records a failed check
//! instead of aborting the run, so the report always lists every check.

use serde_json::json;

use crate::catalog::{
    field_covector, field_jet, hyperbolic_formula, norm_squared, origin_initial_data, timelike_combination_scan,
    Combination, FieldId,
};
use crate::config::RunConfig;
use crate::curvature::{
    christoffel_closed, christoffel_numeric, identity_residuals, nabla_riemann_closed, nabla_riemann_numeric,
    ricci_by_contraction, riemann_closed, riemann_numeric, scalar_from_ricci,
};
use crate::embedding::{embed, hyperboloid_residual, induced_metric_deviation, sectional_curvature_check};
use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::{metric_at, Chart, ChartPoint};
use crate::killing::{
    algebra_dimension_report, first_compat_residual, max_killing_residual, ricci_identity_residual, transport_jet_adaptive, KillingJet, Polyline,
    Segment, JET_DIM,
};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::sample_points;
use crate::scale_factor::{
    classify_case, constant_curvature_residual, first_integral_residual, time_from_x0, x0_from_time, CaseLabel,
    ScaleFactorProfile,
};
use crate::tensor::{relative_deviation, Linear, Vec4};

/// Points used by the expensive nested-difference checks.
pub const NESTED_SAMPLE_CAP: usize = 10;
/// Remote points for the transport battery.
pub const TRANSPORT_TARGETS: usize = 10;

/// Running maximum of a residual that records the first failure to
/// evaluate.
struct MaxOf {
    value: f64,
    error: Option<Error>,
}

impl MaxOf {
    fn new() -> Self {
        MaxOf { value: 0.0, error: None }
    }

    fn add(&mut self, r: Result<f64>) {
        match r {
            Ok(v) => self.value = if v.is_nan() { f64::NAN } else { self.value.max(v) },
            Err(e) => {
                self.error.get_or_insert(e);
            }
        }
    }

    fn at_most(self, report: &mut VerificationReport, name: &str, tol: f64) {
        match self.error {
            None => report.push(CheckRecord::at_most(name, self.value, tol)),
            Some(e) => fail(report, name, tol, e),
        }
    }
}

fn fail(report: &mut VerificationReport, name: &str, tol: f64, e: Error) {
    report.push(CheckRecord::failed(name, tol));
    report.set_result(&format!("{name}.error"), json!(e.to_string()));
}

/// Profile case from nine times across the safe interval.
pub fn profile_case(profile: &ScaleFactorProfile) -> Result<CaseLabel> {
    let (lo, hi) = profile.safe_interval();
    let samples: Vec<f64> = (0..9).map(|k| lo + (hi - lo) * k as f64 / 8.0).collect();
    classify_case(profile, &samples, profile.default_classify_tol())
}

/// Dimension of the isometry algebra expected for a case.
pub fn expected_dimension(case: CaseLabel) -> Option<usize> {
    match case {
        CaseLabel::Generic => Some(6),
        CaseLabel::Static => Some(7),
        CaseLabel::ConstantCurvature => Some(10),
        CaseLabel::AmbiguousDegenerate => None,
    }
}

/// Closed-form connection, curvature and curvature gradient against the
/// metric-only finite-difference recomputation.
pub fn curvature_battery(profile: &ScaleFactorProfile, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    let (mut gamma, mut riemann, mut ricci, mut scalar, mut nabla) =
        (MaxOf::new(), MaxOf::new(), MaxOf::new(), MaxOf::new(), MaxOf::new());
    for p in points {
        gamma.add((|| {
            let closed = christoffel_closed(profile, p)?;
            let numeric = christoffel_numeric(profile, p, fd::DEFAULT_STEP)?;
            Ok(relative_deviation(&closed.gamma, &numeric.gamma))
        })());
        let pair = riemann_closed(profile, p).and_then(|c| Ok((c, riemann_numeric(profile, p, fd::DEFAULT_STEP)?)));
        match pair {
            Ok((c, n)) => {
                riemann.add(Ok(relative_deviation(&c.riemann, &n.riemann)));
                ricci.add(Ok(relative_deviation(&c.ricci, &n.ricci)));
                scalar.add(Ok(relative_deviation(&c.scalar, &n.scalar)));
            }
            Err(e) => {
                riemann.add(Err(e.clone()));
                ricci.add(Err(e.clone()));
                scalar.add(Err(e));
            }
        }
        nabla.add((|| {
            let closed = nabla_riemann_closed(profile, p)?;
            let numeric = nabla_riemann_numeric(profile, p, fd::DEFAULT_STEP)?;
            Ok(relative_deviation(&closed.nabla_riemann, &numeric.nabla_riemann))
        })());
    }
    let tol = cfg.tol("curvature");
    gamma.at_most(report, "curvature.gamma", cfg.tol("gamma"));
    riemann.at_most(report, "curvature.riemann", tol);
    ricci.at_most(report, "curvature.ricci", tol);
    scalar.at_most(report, "curvature.scalar", tol);
    nabla.at_most(report, "curvature.nabla_riemann", tol);
}

/// Algebraic identities of the numeric curvature and the Ricci identity on
/// the profile's catalog fields.
pub fn identity_battery(profile: &ScaleFactorProfile, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    let (mut asym, mut bianchi) = (MaxOf::new(), MaxOf::new());
    for p in points {
        match riemann_numeric(profile, p, fd::DEFAULT_STEP) {
            Ok(c) => {
                let scale = c.riemann.max_abs().max(1.0);
                let r = identity_residuals(&c);
                asym.add(Ok(r.antisymmetry / scale));
                bianchi.add(Ok(r.first_bianchi / scale));
            }
            Err(e) => {
                asym.add(Err(e.clone()));
                bianchi.add(Err(e));
            }
        }
    }
    asym.at_most(report, "identity.antisymmetry", cfg.tol("identity"));
    bianchi.at_most(report, "identity.first_bianchi", cfg.tol("identity"));

    let mut ricci_id = MaxOf::new();
    for p in points.iter().take(NESTED_SAMPLE_CAP) {
        for id in FieldId::ALL.into_iter().filter(|id| id.is_killing_for(profile)) {
            let field = |q: &ChartPoint| field_covector(id, profile, q);
            ricci_id.add((|| {
                let scale = field(p)?.max_abs().max(1.0);
                Ok(ricci_identity_residual(profile, p, &field, fd::DEFAULT_FIELD_STEP)? / scale)
            })());
        }
    }
    ricci_id.at_most(report, "identity.ricci_identity", cfg.tol("ricci_identity"));

    // the first-order compatibility condition holds for every jet
    let mut first = MaxOf::new();
    for p in points {
        first.add(riemann_closed(profile, p).map(|c| {
            let scale = c.riemann.max_abs().max(1.0);
            (0..JET_DIM)
                .map(|slot| first_compat_residual(&c.riemann, &KillingJet::basis(slot)).max_abs() / scale)
                .fold(0.0, f64::max)
        }));
    }
    first.at_most(report, "identity.first_compat", cfg.tol("first_compat"));
}

/// Scalar curvature by contraction against the expected value: `−6/a²`
/// for a static profile, `−12/a²` for the secant profile and
/// `−6/R² − 6R″/R³` otherwise.
pub fn scalar_battery(profile: &ScaleFactorProfile, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    let mut dev = MaxOf::new();
    let mut values = Vec::new();
    for p in points {
        dev.add((|| {
            let c = riemann_closed(profile, p)?;
            let metric = metric_at(profile, p)?;
            let s = scalar_from_ricci(&metric, &ricci_by_contraction(&c.riemann));
            let expected = match profile.secant_radius() {
                Some(a) => -12.0 / (a * a),
                None => {
                    let d = profile.derivatives(p.time())?;
                    -6.0 / (d.r * d.r) - 6.0 * d.r2 / d.r.powi(3)
                }
            };
            values.push(s);
            Ok((s - expected).abs() / expected.abs().max(1.0))
        })());
    }
    if let (Some(lo), Some(hi)) = (
        values.iter().copied().reduce(f64::min),
        values.iter().copied().reduce(f64::max),
    ) {
        report.set_result("scalar_range", json!([lo, hi]));
    }
    dev.at_most(report, "scalar.value", cfg.tol("scalar"));
}

/// Covector of a field for the Killing battery. Hyperbolic fields of a
/// non-secant profile are read from the raw formula in the point's own
/// chart, so the check can reject them.
fn catalog_covector(id: FieldId, profile: &ScaleFactorProfile, q: &ChartPoint) -> Result<Vec4> {
    if id.is_hyperbolic() && profile.secant_radius().is_none() {
        let (v, _) = hyperbolic_formula(id, &q.coords)?;
        let g = metric_at(profile, q)?.diagonal();
        return Ok([g[0] * v[0], g[1] * v[1], g[2] * v[2], g[3] * v[3]]);
    }
    field_covector(id, profile, q)
}

/// Finite-difference Killing residual of every catalog field. Fields that
/// should be Killing must stay below the tolerance; the others must exceed
/// it somewhere.
pub fn killing_battery(profile: &ScaleFactorProfile, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    let tol = cfg.tol("killing");
    let mut verdicts = serde_json::Map::new();
    for id in FieldId::ALL {
        let mut res = MaxOf::new();
        let field = |q: &ChartPoint| catalog_covector(id, profile, q);
        for p in points {
            res.add((|| {
                let scale = field(p)?.max_abs().max(1.0);
                Ok(max_killing_residual(profile, p, &field, fd::DEFAULT_FIELD_STEP)? / scale)
            })());
        }
        let expected = id.is_killing_for(profile);
        verdicts.insert(id.name().to_string(), json!(expected));
        if expected {
            res.at_most(report, &format!("killing.{id}"), tol);
        } else {
            match res.error {
                None => report.push(CheckRecord::at_least(format!("killing.{id}.rejected"), res.value, tol)),
                Some(e) => fail(report, &format!("killing.{id}.rejected"), tol, e),
            }
        }
    }
    report.set_result("killing_fields", serde_json::Value::Object(verdicts));
}

/// Compatibility-rank analysis over the sample points.
pub fn dimension_battery(profile: &ScaleFactorProfile, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    let case = match profile_case(profile) {
        Ok(c) => c,
        Err(e) => return fail(report, "algebra_dimension", 0.0, e),
    };
    report.set_result("case", json!(case.to_string()));
    match algebra_dimension_report(profile, points, cfg.tol("rank")) {
        Ok(dim) => {
            report.set_result("algebra_dimension", json!(dim.dimension));
            report.set_result("min_rank_gap", json!(dim.min_rank_gap));
            match expected_dimension(case) {
                Some(expected) => report.push(CheckRecord::equals(
                    "algebra_dimension",
                    dim.dimension as f64,
                    expected as f64,
                )),
                None => report.push(CheckRecord::failed("algebra_dimension", 0.0)),
            }
            report.push(CheckRecord::at_least("rank_gap", dim.min_rank_gap, cfg.tol("rank_gap")));
        }
        Err(e) => {
            fail(report, "algebra_dimension", 0.0, e);
            report.push(CheckRecord::failed("rank_gap", cfg.tol("rank_gap")));
        }
    }
}

/// Origin of the transport battery: the spatial origin at the middle of
/// the safe interval.
pub fn transport_origin(profile: &ScaleFactorProfile) -> ChartPoint {
    let (lo, hi) = profile.safe_interval();
    ChartPoint::north([0.5 * (lo + hi), 0.0, 0.0, 0.0])
}

/// Transport of `jet0` from `start` to `target` along the straight segment
/// and along a detour that moves in space first and in time last.
pub fn transport_two_paths(
    profile: &ScaleFactorProfile,
    start: &ChartPoint,
    jet0: &KillingJet,
    target: &ChartPoint,
) -> Result<(KillingJet, KillingJet)> {
    let direct = Segment {
        from: start.coords,
        to: target.coords,
    };
    let t = target.coords;
    let corner = [start.coords[0], t[1], t[2], t[3]];
    let detour = Polyline::new(vec![start.coords, corner, t])?;
    let a = transport_jet_adaptive(profile, start, jet0, &direct)?;
    let b = transport_jet_adaptive(profile, start, jet0, &detour)?;
    Ok((a.jet, b.jet))
}

/// Rotational fields transported from origin data to remote points against
/// their closed-form jets, and the agreement of two paths.
pub fn transport_battery(profile: &ScaleFactorProfile, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    let start = transport_origin(profile);
    let (mut closure, mut independence) = (MaxOf::new(), MaxOf::new());
    for target in points.iter().take(TRANSPORT_TARGETS) {
        for id in FieldId::ROTATIONS {
            match (|| -> Result<(f64, f64)> {
                let jet0 = origin_initial_data(id, profile, start.time())?;
                let (a, b) = transport_two_paths(profile, &start, &jet0, target)?;
                let exact = field_jet(id, profile, target)?;
                Ok((relative_deviation(&a, &exact), relative_deviation(&a, &b)))
            })() {
                Ok((c, i)) => {
                    closure.add(Ok(c));
                    independence.add(Ok(i));
                }
                Err(e) => {
                    closure.add(Err(e.clone()));
                    independence.add(Err(e));
                }
            }
        }
    }
    closure.at_most(report, "transport.closure", cfg.tol("transport"));
    independence.at_most(report, "transport.path_independence", cfg.tol("transport"));
}

/// Differential equation, first integral and time transform of the secant
/// profile.
pub fn ode_battery(profile: &ScaleFactorProfile, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    let Some(a) = profile.secant_radius() else {
        return;
    };
    let c = profile.light_speed();
    let tol = cfg.tol("ode");
    let (mut ode, mut integral, mut round_trip, mut product) = (MaxOf::new(), MaxOf::new(), MaxOf::new(), MaxOf::new());
    for p in points {
        let x0 = p.time();
        ode.add(constant_curvature_residual(profile, x0).map(|r| r.abs() / (a * a)));
        integral.add(first_integral_residual(profile, x0, 1.0 / (a * a)).map(|r| r.abs() / (a * a)));
        round_trip.add(time_from_x0(a, c, x0).and_then(|t| x0_from_time(a, c, t)).map(|back| (back - x0).abs()));
        product.add(time_from_x0(a, c, x0).map(|t| (x0.cos() * (c * t / a).cosh() - 1.0).abs()));
    }
    ode.at_most(report, "ode.constant_curvature", tol);
    integral.at_most(report, "ode.first_integral", tol);
    round_trip.at_most(report, "ode.time_round_trip", tol);
    product.at_most(report, "ode.cos_cosh", tol);
}

/// Hyperboloid embedding of the secant profile.
pub fn embedding_battery(a: f64, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    let (mut hyp, mut metric) = (MaxOf::new(), MaxOf::new());
    for u in points {
        hyp.add(embed(u, a).map(|z| hyperboloid_residual(&z, a)));
        metric.add(induced_metric_deviation(u, a, fd::DEFAULT_FIELD_STEP));
    }
    hyp.at_most(report, "embedding.hyperboloid", cfg.tol("hyperboloid"));
    metric.at_most(report, "embedding.induced_metric", cfg.tol("induced_metric"));
    let nested: Vec<ChartPoint> = points.iter().take(NESTED_SAMPLE_CAP).copied().collect();
    match sectional_curvature_check(a, &nested) {
        Ok(s) => {
            report.set_result("K_estimate", json!(s.k_estimate));
            report.push(CheckRecord::at_most(
                "embedding.sectional",
                (s.k_estimate + 1.0 / (a * a)).abs(),
                cfg.tol("sectional"),
            ));
        }
        Err(e) => fail(report, "embedding.sectional", cfg.tol("sectional"), e),
    }
}

/// Causal character of Killing combinations. For the secant profile, each
/// random combination must have a non-time-like witness; for a static
/// profile, the static field is time-like with `g(X, X) = R²`.
pub fn scan_battery(profile: &ScaleFactorProfile, points: &[ChartPoint], cfg: &RunConfig, report: &mut VerificationReport) {
    if let Some(a) = profile.secant_radius() {
        match timelike_combination_scan(profile, cfg.sample_count, cfg.seed) {
            Ok(w) => {
                let worst = w.iter().map(|w| w.norm_squared).fold(f64::NEG_INFINITY, f64::max);
                report.set_result("witnesses", json!(w.len()));
                report.push(CheckRecord::at_most("scan.witness", worst / (a * a), 1e-12));
            }
            Err(e) => fail(report, "scan.witness", 1e-12, e),
        }
    } else if profile.is_constant() {
        let mut dev = MaxOf::new();
        let mut min_q = f64::INFINITY;
        for p in points {
            dev.add((|| {
                let q = norm_squared(&Combination::single(FieldId::Static0), profile, p)?;
                let r = profile.eval_r(p.time(), 0)?;
                min_q = min_q.min(q);
                Ok((q - r * r).abs() / (r * r))
            })());
        }
        dev.at_most(report, "scan.static_norm", 1e-12);
        report.push(CheckRecord::at_least("scan.static_timelike", min_q, f64::MIN_POSITIVE));
    }
}

/// Every battery that applies to `profile`.
pub fn full_verify(profile: &ScaleFactorProfile, cfg: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("full-verify", cfg.to_json_value());
    let pole = sample_points(profile, Chart::NorthPole, cfg.sample_count, cfg.seed)?;
    curvature_battery(profile, &pole, cfg, &mut report);
    identity_battery(profile, &pole, cfg, &mut report);
    scalar_battery(profile, &pole, cfg, &mut report);
    killing_battery(profile, &pole, cfg, &mut report);
    dimension_battery(profile, &pole, cfg, &mut report);
    transport_battery(profile, &pole, cfg, &mut report);
    ode_battery(profile, &pole, cfg, &mut report);
    if let Some(a) = profile.secant_radius() {
        let u = sample_points(profile, Chart::ModifiedU, cfg.sample_count, cfg.seed)?;
        embedding_battery(a, &u, cfg, &mut report);
    }
    scan_battery(profile, &pole, cfg, &mut report);
    Ok(report)
}
