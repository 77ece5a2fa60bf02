//! The Killing equation and its first-order Pfaff form.
//!
//! A Killing field is determined by its *jet* at one point: the covector
//! `X_i` and the skew tensor `Y_ij = ∇_i X_j`. Along any path the jet obeys
//!
//! ```text
//! ∇_i X_j  = Y_ij
//! ∇_i Y_jk = Σ Rˢ_ijk X_s
//! ```
//!
//! and integrability of that system imposes a linear constraint on the jet
//! at every point (the compatibility operator below). Its kernel bounds the
//! dimension of the isometry algebra.

use serde::Serialize;

use crate::curvature::{connection, curvature, curvature_gradient, nabla_riemann_closed, riemann_closed};
use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::{check_point, lower, metric_at, raise, ChartPoint};
use crate::linalg::{self, RankAnalysis};
use crate::scale_factor::{classify_case, CaseLabel, ScaleFactorProfile};
use crate::tensor::{Linear, Mat4, Rank3, Rank4, Rank5, Vec4, DIM};

/// Jet dimension: four covector slots and six skew slots.
pub const JET_DIM: usize = 10;

/// Index pairs `(i, j)`, `i < j`, of the stored skew components, in storage
/// order `Y₀₁, Y₀₂, Y₀₃, Y₁₂, Y₁₃, Y₂₃`.
pub const Y_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Names of the ten jet slots, in [`KillingJet::to_array`] order.
pub const JET_LABELS: [&str; JET_DIM] = ["X0", "X1", "X2", "X3", "Y01", "Y02", "Y03", "Y12", "Y13", "Y23"];

/// Default relative rank tolerance for the compatibility operator.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct KillingJet {
    pub x: Vec4,
    pub y: [f64; 6],
}

impl KillingJet {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_array(v: [f64; JET_DIM]) -> Self {
        KillingJet {
            x: [v[0], v[1], v[2], v[3]],
            y: [v[4], v[5], v[6], v[7], v[8], v[9]],
        }
    }

    pub fn to_array(&self) -> [f64; JET_DIM] {
        let (x, y) = (self.x, self.y);
        [x[0], x[1], x[2], x[3], y[0], y[1], y[2], y[3], y[4], y[5]]
    }

    /// Unit jet with a single nonzero slot.
    pub fn basis(slot: usize) -> Self {
        let mut v = [0.0; JET_DIM];
        v[slot] = 1.0;
        Self::from_array(v)
    }

    /// Builds the jet from a covector and the upper triangle of `y`.
    pub fn from_parts(x: Vec4, y: &Mat4) -> Self {
        let mut out = KillingJet { x, y: [0.0; 6] };
        for (slot, &(i, j)) in Y_PAIRS.iter().enumerate() {
            out.y[slot] = y[i][j];
        }
        out
    }

    /// Full skew matrix: `Y_ii = 0`, `Y_ji = −Y_ij`.
    pub fn y_full(&self) -> Mat4 {
        let mut m = [[0.0; DIM]; DIM];
        for (slot, &(i, j)) in Y_PAIRS.iter().enumerate() {
            m[i][j] = self.y[slot];
            m[j][i] = -self.y[slot];
        }
        m
    }
}

impl Linear for KillingJet {
    fn zero() -> Self {
        Self::default()
    }

    fn axpy(&mut self, s: f64, other: &Self) {
        self.x.axpy(s, &other.x);
        self.y.axpy(s, &other.y);
    }

    fn max_abs(&self) -> f64 {
        self.x.max_abs().max(self.y.max_abs())
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.x.max_abs_diff(&other.x).max(self.y.max_abs_diff(&other.y))
    }
}

pub fn lower_index(profile: &ScaleFactorProfile, p: &ChartPoint, v: &Vec4) -> Result<Vec4> {
    Ok(lower(&metric_at(profile, p)?, v))
}

pub fn raise_index(profile: &ScaleFactorProfile, p: &ChartPoint, w: &Vec4) -> Result<Vec4> {
    Ok(raise(&metric_at(profile, p)?, w))
}

/// `∇_i X_j = ∂_i X_j − Γˢ_ij X_s`, given the partials `dx[i][j] = ∂_i X_j`.
pub fn covariant_derivative(gamma: &Rank3, x: &Vec4, dx: &Mat4) -> Mat4 {
    let mut out = *dx;
    for i in 0..DIM {
        for j in 0..DIM {
            for s in 0..DIM {
                out[i][j] -= gamma[s][i][j] * x[s];
            }
        }
    }
    out
}

/// `∇_i X_j` of a covector field by central differences.
pub fn covariant_derivative_fd<F>(profile: &ScaleFactorProfile, p: &ChartPoint, field: &F, h: f64) -> Result<Mat4>
where
    F: Fn(&ChartPoint) -> Result<Vec4>,
{
    fd::check_step(h)?;
    let x = field(p)?;
    let dx: [Vec4; 4] = fd::gradient(&p.coords, h, |c| field(&p.with_coords(*c)))?;
    Ok(covariant_derivative(&connection(profile, p)?.gamma, &x, &dx))
}

/// `∇_i X_j + ∇_j X_i` of a covector field, by central differences.
pub fn killing_residual<F>(profile: &ScaleFactorProfile, p: &ChartPoint, field: &F, h: f64) -> Result<Mat4>
where
    F: Fn(&ChartPoint) -> Result<Vec4>,
{
    let d = covariant_derivative_fd(profile, p, field, h)?;
    let mut out = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = d[i][j] + d[j][i];
        }
    }
    Ok(out)
}

/// Largest component of the symmetric residual.
pub fn max_killing_residual<F>(profile: &ScaleFactorProfile, p: &ChartPoint, field: &F, h: f64) -> Result<f64>
where
    F: Fn(&ChartPoint) -> Result<Vec4>,
{
    Ok(killing_residual(profile, p, field, h)?.max_abs())
}

/// `max |(∇_i∇_j − ∇_j∇_i) X_k + Σ Rˢ_kij X_s|` by nested central differences.
pub fn ricci_identity_residual<F>(profile: &ScaleFactorProfile, p: &ChartPoint, field: &F, h: f64) -> Result<f64>
where
    F: Fn(&ChartPoint) -> Result<Vec4>,
{
    let gamma = connection(profile, p)?.gamma;
    let riemann = curvature(profile, p)?.riemann;
    let x = field(p)?;
    let t = covariant_derivative_fd(profile, p, field, h)?;
    let dt: [Mat4; 4] = fd::gradient(&p.coords, h, |c| covariant_derivative_fd(profile, &p.with_coords(*c), field, h))?;
    // second[i][j][k] = ∇_i ∇_j X_k
    let mut second: Rank3 = Linear::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let mut acc = dt[i][j][k];
                for s in 0..DIM {
                    acc -= gamma[s][i][j] * t[s][k] + gamma[s][i][k] * t[j][s];
                }
                second[i][j][k] = acc;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let curv: f64 = (0..DIM).map(|s| riemann[s][k][i][j] * x[s]).sum();
                worst = worst.max((second[i][j][k] - second[j][i][k] + curv).abs());
            }
        }
    }
    Ok(worst)
}

/// Partial derivatives of the jet from connection and curvature:
/// `out[i]` holds `∂_i X_j = Y_ij + Σ Γˢ_ij X_s` and
/// `∂_i Y_jk = Σ Rˢ_ijk X_s + Σ Γˢ_ij Y_sk + Σ Γˢ_ik Y_js`.
pub fn pfaff_rhs_from(gamma: &Rank3, riemann: &Rank4, jet: &KillingJet) -> [KillingJet; 4] {
    let y = jet.y_full();
    let x = jet.x;
    let mut out = [KillingJet::zero(); 4];
    for (i, slot) in out.iter_mut().enumerate() {
        for j in 0..DIM {
            slot.x[j] = y[i][j] + (0..DIM).map(|s| gamma[s][i][j] * x[s]).sum::<f64>();
        }
        for (n, &(j, k)) in Y_PAIRS.iter().enumerate() {
            let mut acc = 0.0;
            for s in 0..DIM {
                acc += riemann[s][i][j][k] * x[s] + gamma[s][i][j] * y[s][k] + gamma[s][i][k] * y[j][s];
            }
            slot.y[n] = acc;
        }
    }
    out
}

pub fn pfaff_rhs(profile: &ScaleFactorProfile, p: &ChartPoint, jet: &KillingJet) -> Result<[KillingJet; 4]> {
    let gamma = connection(profile, p)?.gamma;
    let riemann = curvature(profile, p)?.riemann;
    Ok(pfaff_rhs_from(&gamma, &riemann, jet))
}

/// Integrability residual at the level of `X` for every `(i, j, k)`:
/// `−Σ Rˢ_kij X_s − Σ Rˢ_ijk X_s + Σ Rˢ_jik X_s`. It vanishes for every jet
/// by the symmetries of the curvature tensor.
pub fn first_compat_residual(riemann: &Rank4, jet: &KillingJet) -> Rank3 {
    let x = jet.x;
    let mut out: Rank3 = Linear::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let mut acc = 0.0;
                for s in 0..DIM {
                    acc += (-riemann[s][k][i][j] - riemann[s][i][j][k] + riemann[s][j][i][k]) * x[s];
                }
                out[i][j][k] = acc;
            }
        }
    }
    out
}

/// Integrability residual at the level of `Y`, indexed `[i][j][p][q]`:
///
/// ```text
/// LHS = −Σ Rˢ_pij Y_sq − Σ Rˢ_qij Y_ps
/// RHS =  Σ ∇_iRˢ_jpq X_s + Σ Rˢ_jpq Y_is − Σ ∇_jRˢ_ipq X_s − Σ Rˢ_ipq Y_js
/// ```
///
/// and the result is `LHS − RHS`.
pub fn compat_residual_from(riemann: &Rank4, nabla: &Rank5, jet: &KillingJet) -> Rank4 {
    let x = jet.x;
    let y = jet.y_full();
    let mut out: Rank4 = Linear::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            for p in 0..DIM {
                for q in 0..DIM {
                    let mut lhs = 0.0;
                    let mut rhs = 0.0;
                    for s in 0..DIM {
                        lhs -= riemann[s][p][i][j] * y[s][q] + riemann[s][q][i][j] * y[p][s];
                        rhs += nabla[i][s][j][p][q] * x[s] + riemann[s][j][p][q] * y[i][s]
                            - nabla[j][s][i][p][q] * x[s]
                            - riemann[s][i][p][q] * y[j][s];
                    }
                    out[i][j][p][q] = lhs - rhs;
                }
            }
        }
    }
    out
}

pub fn compat_residual(profile: &ScaleFactorProfile, p: &ChartPoint, jet: &KillingJet) -> Result<Rank4> {
    let riemann = curvature(profile, p)?.riemann;
    let nabla = curvature_gradient(profile, p)?.nabla_riemann;
    Ok(compat_residual_from(&riemann, &nabla, jet))
}

/// Row index pairs `((i, j), (p, q))`, `i < j`, `p < q`: 36 of them.
pub fn compat_row_labels() -> Vec<([usize; 2], [usize; 2])> {
    let mut out = Vec::with_capacity(36);
    for &(i, j) in &Y_PAIRS {
        for &(p, q) in &Y_PAIRS {
            out.push(([i, j], [p, q]));
        }
    }
    out
}

/// The compatibility operator as a 36×10 matrix acting on jet arrays.
pub fn compat_matrix_from(riemann: &Rank4, nabla: &Rank5) -> Vec<Vec<f64>> {
    let labels = compat_row_labels();
    let mut rows = vec![vec![0.0; JET_DIM]; labels.len()];
    for col in 0..JET_DIM {
        let res = compat_residual_from(riemann, nabla, &KillingJet::basis(col));
        for (r, ([i, j], [p, q])) in labels.iter().enumerate() {
            rows[r][col] = res[*i][*j][*p][*q];
        }
    }
    rows
}

/// The reduced equations in jet coordinates: two rows on `X₀`
/// (`(4R′³ − 5R″R′R + R‴R²) X₀` and `R′(2R′² − R″R + R²) X₀`) and three rows
/// `(2R′² − R″R + R²)(R′ X_i − R Y₀ᵢ)`.
pub fn reduced_matrix(profile: &ScaleFactorProfile, x0: f64) -> Result<Vec<Vec<f64>>> {
    let d = profile.derivatives(x0)?;
    let cc = d.constant_curvature_residual();
    let mut rows = vec![vec![0.0; JET_DIM]; 5];
    rows[0][0] = d.cubic_coefficient();
    rows[1][0] = d.r1 * cc;
    for i in 1..DIM {
        rows[1 + i][i] = cc * d.r1;
        rows[1 + i][3 + i] = -cc * d.r;
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatReport {
    pub point: String,
    pub matrix: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub rank: usize,
    pub kernel_dim: usize,
    pub kernel_basis: Vec<Vec<f64>>,
    /// Smallest retained over largest discarded singular value.
    pub rank_gap: f64,
    pub case: CaseLabel,
    pub reduced_rank: usize,
    /// Largest image of a compatibility-kernel vector under the reduced
    /// equations, relative to their scale.
    pub reduced_residual: f64,
    /// The reduced equations have the same solution set as the kernel.
    pub reduced_agrees: bool,
}

fn profile_case(profile: &ScaleFactorProfile) -> Result<CaseLabel> {
    let (lo, hi) = profile.safe_interval();
    let samples: Vec<f64> = (0..9).map(|k| lo + (hi - lo) * k as f64 / 8.0).collect();
    classify_case(profile, &samples, profile.default_classify_tol())
}

/// Rank and kernel of the compatibility operator at a pole-chart point.
pub fn compat_rank(profile: &ScaleFactorProfile, p: &ChartPoint, tol_rank: f64) -> Result<CompatReport> {
    if !p.chart.is_pole_chart() {
        return Err(Error::ChartProfileMismatch(
            "the compatibility rank is evaluated in the pole charts, where the curvature is exact".into(),
        ));
    }
    let riemann = riemann_closed(profile, p)?.riemann;
    let nabla = nabla_riemann_closed(profile, p)?.nabla_riemann;
    let matrix = compat_matrix_from(&riemann, &nabla);
    let scale = riemann.max_abs().max(nabla.max_abs());
    let analysis: RankAnalysis = linalg::analyze(&matrix, JET_DIM, tol_rank, scale)?;

    let reduced = reduced_matrix(profile, p.time())?;
    let reduced_scale = reduced.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let d = profile.derivatives(p.time())?;
    let reduced_analysis = linalg::analyze(&reduced, JET_DIM, tol_rank, d.r.powi(3).max(reduced_scale))?;
    let reduced_residual = linalg::annihilation_residual(&reduced, &analysis.kernel);
    let reduced_agrees = reduced_analysis.rank == analysis.rank && reduced_residual < 1e-8;

    Ok(CompatReport {
        point: p.to_string(),
        matrix,
        singular_values: analysis.singular_values,
        threshold: analysis.threshold,
        rank: analysis.rank,
        kernel_dim: JET_DIM - analysis.rank,
        kernel_basis: analysis.kernel,
        rank_gap: analysis.gap,
        case: profile_case(profile)?,
        reduced_rank: reduced_analysis.rank,
        reduced_residual,
        reduced_agrees,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraDimension {
    pub dimension: usize,
    pub kernel_dims: Vec<usize>,
    pub min_rank_gap: f64,
}

/// Upper bound for the dimension of the isometry algebra: the smallest
/// compatibility kernel over the sample points.
///
/// Jets at different points live in different spaces, so kernels are not
/// intersected directly; the pointwise minimum is the bound that transport
/// makes meaningful.
pub fn algebra_dimension_report(profile: &ScaleFactorProfile, points: &[ChartPoint], tol: f64) -> Result<AlgebraDimension> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "algebra dimension needs at least 3 sample points, got {}",
            points.len()
        )));
    }
    let mut kernel_dims = Vec::with_capacity(points.len());
    let mut min_gap = f64::INFINITY;
    for p in points {
        let report = compat_rank(profile, p, tol)?;
        kernel_dims.push(report.kernel_dim);
        min_gap = min_gap.min(report.rank_gap);
    }
    Ok(AlgebraDimension {
        dimension: kernel_dims.iter().copied().min().unwrap_or(0),
        kernel_dims,
        min_rank_gap: min_gap,
    })
}

pub fn algebra_dimension(profile: &ScaleFactorProfile, points: &[ChartPoint], tol: f64) -> Result<usize> {
    Ok(algebra_dimension_report(profile, points, tol)?.dimension)
}

/// A parametrised path `τ ∈ [0, 1]` in chart coordinates.
///
/// A curve may consist of several smooth pieces of equal parameter length;
/// the integrator never steps across a piece boundary.
pub trait Curve {
    fn position(&self, tau: f64) -> Vec4;
    fn velocity(&self, tau: f64) -> Vec4;
    fn pieces(&self) -> usize {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub from: Vec4,
    pub to: Vec4,
}

impl Curve for Segment {
    fn position(&self, tau: f64) -> Vec4 {
        let mut out = self.from;
        for (k, o) in out.iter_mut().enumerate() {
            *o += tau * (self.to[k] - self.from[k]);
        }
        out
    }

    fn velocity(&self, _tau: f64) -> Vec4 {
        let mut out = [0.0; DIM];
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.to[k] - self.from[k];
        }
        out
    }
}

/// Straight segments through the given vertices, each taking an equal share
/// of the parameter interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub vertices: Vec<Vec4>,
}

impl Polyline {
    pub fn new(vertices: Vec<Vec4>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument("a polyline needs at least two vertices".into()));
        }
        Ok(Polyline { vertices })
    }

    fn locate(&self, tau: f64) -> (Segment, f64) {
        let n = self.vertices.len() - 1;
        let scaled = (tau * n as f64).clamp(0.0, n as f64);
        let k = (scaled.floor() as usize).min(n - 1);
        let seg = Segment {
            from: self.vertices[k],
            to: self.vertices[k + 1],
        };
        (seg, scaled - k as f64)
    }
}

impl Curve for Polyline {
    fn position(&self, tau: f64) -> Vec4 {
        let (seg, local) = self.locate(tau);
        seg.position(local)
    }

    fn velocity(&self, tau: f64) -> Vec4 {
        let (seg, local) = self.locate(tau);
        let n = (self.vertices.len() - 1) as f64;
        let mut v = seg.velocity(local);
        for c in v.iter_mut() {
            *c *= n;
        }
        v
    }

    fn pieces(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Minimum number of integration steps accepted by [`transport_jet`].
pub const MIN_TRANSPORT_STEPS: usize = 16;
/// Upper bound on the step count tried by [`transport_jet_adaptive`].
pub const MAX_TRANSPORT_STEPS: usize = 1 << 14;
/// Convergence tolerance of [`transport_jet_adaptive`].
pub const TRANSPORT_TOL: f64 = 1e-9;

fn jet_velocity(profile: &ScaleFactorProfile, p: &ChartPoint, v: &Vec4, jet: &KillingJet, tau: f64) -> Result<KillingJet> {
    if let Err(e) = check_point(profile, p) {
        return match e {
            Error::Domain { .. } => Err(Error::ChartExit { tau }),
            other => Err(other),
        };
    }
    let rhs = pfaff_rhs(profile, p, jet)?;
    let mut out = KillingJet::zero();
    for (i, r) in rhs.iter().enumerate() {
        out.axpy(v[i], r);
    }
    Ok(out)
}

/// Classical fourth-order Runge–Kutta integration of the Pfaff system along
/// `path`, starting from `jet0` at `path.position(0)` in `chart`.
///
/// `steps` is rounded up to a multiple of the number of curve pieces.
pub fn transport_jet(
    profile: &ScaleFactorProfile,
    start: &ChartPoint,
    jet0: &KillingJet,
    path: &dyn Curve,
    steps: usize,
) -> Result<KillingJet> {
    if steps < MIN_TRANSPORT_STEPS {
        return Err(Error::InvalidArgument(format!(
            "transport needs at least {MIN_TRANSPORT_STEPS} steps, got {steps}"
        )));
    }
    let origin = path.position(0.0);
    if origin.max_abs_diff(&start.coords) > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "path starts at {origin:?}, not at the start point {start}"
        )));
    }
    let pieces = path.pieces().max(1);
    let per_piece = steps.div_ceil(pieces);
    let total = per_piece * pieces;
    let dt = 1.0 / total as f64;
    let chart = start.chart;
    let at = |tau: f64| ChartPoint::new(chart, path.position(tau));

    let mut jet = *jet0;
    for n in 0..total {
        let t0 = n as f64 * dt;
        // keep every stage inside the current piece
        let piece = n / per_piece;
        let lo = piece as f64 / pieces as f64;
        let hi = (piece + 1) as f64 / pieces as f64;
        let inner = |t: f64| t.clamp(lo + 1e-15, hi - 1e-15);
        let tm = t0 + 0.5 * dt;
        let t1 = t0 + dt;

        let k1 = jet_velocity(profile, &at(t0), &path.velocity(inner(t0)), &jet, t0)?;
        let mut s = jet;
        s.axpy(0.5 * dt, &k1);
        let k2 = jet_velocity(profile, &at(tm), &path.velocity(inner(tm)), &s, tm)?;
        let mut s = jet;
        s.axpy(0.5 * dt, &k2);
        let k3 = jet_velocity(profile, &at(tm), &path.velocity(inner(tm)), &s, tm)?;
        let mut s = jet;
        s.axpy(dt, &k3);
        let k4 = jet_velocity(profile, &at(t1), &path.velocity(inner(t1)), &s, t1)?;

        jet.axpy(dt / 6.0, &k1);
        jet.axpy(dt / 3.0, &k2);
        jet.axpy(dt / 3.0, &k3);
        jet.axpy(dt / 6.0, &k4);
    }
    Ok(jet)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransportOutcome {
    pub jet: KillingJet,
    pub steps: usize,
    /// Change between the last two refinements, relative to `max(1, |jet|)`.
    pub last_change: f64,
    pub converged: bool,
}

/// Transport with step doubling from [`MIN_TRANSPORT_STEPS`] until the end
/// jet changes by less than [`TRANSPORT_TOL`], capped at
/// [`MAX_TRANSPORT_STEPS`].
pub fn transport_jet_adaptive(
    profile: &ScaleFactorProfile,
    start: &ChartPoint,
    jet0: &KillingJet,
    path: &dyn Curve,
) -> Result<TransportOutcome> {
    let mut steps = MIN_TRANSPORT_STEPS;
    let mut prev = transport_jet(profile, start, jet0, path, steps)?;
    loop {
        let next_steps = steps * 2;
        let next = transport_jet(profile, start, jet0, path, next_steps)?;
        let change = next.max_abs_diff(&prev) / next.max_abs().max(1.0);
        if change < TRANSPORT_TOL || next_steps >= MAX_TRANSPORT_STEPS {
            return Ok(TransportOutcome {
                jet: next,
                steps: next_steps,
                last_change: change,
                converged: change < TRANSPORT_TOL,
            });
        }
        steps = next_steps;
        prev = next;
    }
}
