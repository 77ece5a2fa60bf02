//! Closed-form Killing fields.
//!
//! Six rotations of the spatial sphere exist for every scale factor. The
//! static field `∂/∂x⁰` is Killing only when `R′ = 0`, and the four
//! hyperbolic rotations exist only in the constant-curvature case, where
//! they are written in the u-chart.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::curvature::connection;
use crate::error::{Error, Result};
use crate::geometry::{check_point, lower, metric_at, metric_derivatives, Chart, ChartPoint};
use crate::killing::{covariant_derivative, KillingJet};
use crate::scale_factor::ScaleFactorProfile;
use crate::tensor::{Mat4, Vec4, DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FieldId {
    Mer1,
    Mer2,
    Mer3,
    Eq12,
    Eq23,
    Eq31,
    Static0,
    Hyp1,
    Hyp2,
    Hyp3,
    Hyp4,
}

impl FieldId {
    pub const ALL: [FieldId; 11] = [
        FieldId::Mer1,
        FieldId::Mer2,
        FieldId::Mer3,
        FieldId::Eq12,
        FieldId::Eq23,
        FieldId::Eq31,
        FieldId::Static0,
        FieldId::Hyp1,
        FieldId::Hyp2,
        FieldId::Hyp3,
        FieldId::Hyp4,
    ];

    pub const ROTATIONS: [FieldId; 6] = [
        FieldId::Mer1,
        FieldId::Mer2,
        FieldId::Mer3,
        FieldId::Eq12,
        FieldId::Eq23,
        FieldId::Eq31,
    ];

    pub const HYPERBOLIC: [FieldId; 4] = [FieldId::Hyp1, FieldId::Hyp2, FieldId::Hyp3, FieldId::Hyp4];

    /// The ten Killing fields of the constant-curvature case, in the order
    /// used for coefficient vectors.
    pub const SECANT_BASIS: [FieldId; 10] = [
        FieldId::Mer1,
        FieldId::Mer2,
        FieldId::Mer3,
        FieldId::Eq12,
        FieldId::Eq23,
        FieldId::Eq31,
        FieldId::Hyp1,
        FieldId::Hyp2,
        FieldId::Hyp3,
        FieldId::Hyp4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FieldId::Mer1 => "mer1",
            FieldId::Mer2 => "mer2",
            FieldId::Mer3 => "mer3",
            FieldId::Eq12 => "eq12",
            FieldId::Eq23 => "eq23",
            FieldId::Eq31 => "eq31",
            FieldId::Static0 => "static0",
            FieldId::Hyp1 => "hyp1",
            FieldId::Hyp2 => "hyp2",
            FieldId::Hyp3 => "hyp3",
            FieldId::Hyp4 => "hyp4",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            FieldId::Mer1 => "meridional rotation in the z1-z4 plane",
            FieldId::Mer2 => "meridional rotation in the z2-z4 plane",
            FieldId::Mer3 => "meridional rotation in the z3-z4 plane",
            FieldId::Eq12 => "equatorial rotation in the z1-z2 plane",
            FieldId::Eq23 => "equatorial rotation in the z2-z3 plane",
            FieldId::Eq31 => "equatorial rotation in the z3-z1 plane",
            FieldId::Static0 => "time translation d/dx0",
            FieldId::Hyp1 => "hyperbolic rotation in the z1-z0 plane",
            FieldId::Hyp2 => "hyperbolic rotation in the z2-z0 plane",
            FieldId::Hyp3 => "hyperbolic rotation in the z3-z0 plane",
            FieldId::Hyp4 => "hyperbolic rotation in the z4-z0 plane",
        }
    }

    pub fn validity(self) -> &'static str {
        if self.is_rotation() {
            "Killing for every scale factor; x-, y- and u-charts"
        } else if self == FieldId::Static0 {
            "Killing only for constant scale factors; pole charts"
        } else {
            "Killing only for the secant scale factor; u-chart (pole charts by conversion)"
        }
    }

    pub fn chart_of_definition(self) -> Chart {
        if self.is_hyperbolic() {
            Chart::ModifiedU
        } else {
            Chart::NorthPole
        }
    }

    pub fn is_rotation(self) -> bool {
        Self::ROTATIONS.contains(&self)
    }

    pub fn is_hyperbolic(self) -> bool {
        Self::HYPERBOLIC.contains(&self)
    }

    /// Whether the field is a Killing field of `profile`.
    pub fn is_killing_for(self, profile: &ScaleFactorProfile) -> bool {
        if self.is_rotation() {
            true
        } else if self == FieldId::Static0 {
            profile.is_constant()
        } else {
            profile.secant_radius().is_some()
        }
    }

    /// Axis `k ∈ {1, 2, 3}` of a meridional field, hyperbolic index
    /// `k ∈ {1, 2, 3, 4}` of a hyperbolic one.
    fn axis(self) -> usize {
        match self {
            FieldId::Mer1 | FieldId::Hyp1 => 1,
            FieldId::Mer2 | FieldId::Hyp2 => 2,
            FieldId::Mer3 | FieldId::Hyp3 => 3,
            FieldId::Hyp4 => 4,
            _ => 0,
        }
    }

    /// `(a, b)` of an equatorial field `xᵇ∂ₐ − xᵃ∂_b`.
    fn plane(self) -> Option<(usize, usize)> {
        match self {
            FieldId::Eq12 => Some((1, 2)),
            FieldId::Eq23 => Some((2, 3)),
            FieldId::Eq31 => Some((3, 1)),
            _ => None,
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        let id = match key.as_str() {
            "mer1" | "meridional1" => FieldId::Mer1,
            "mer2" | "meridional2" => FieldId::Mer2,
            "mer3" | "meridional3" => FieldId::Mer3,
            "eq12" | "equatorial12" => FieldId::Eq12,
            "eq23" | "equatorial23" => FieldId::Eq23,
            "eq31" | "equatorial31" => FieldId::Eq31,
            "static0" | "static" => FieldId::Static0,
            "hyp1" | "hyperbolic1" => FieldId::Hyp1,
            "hyp2" | "hyperbolic2" => FieldId::Hyp2,
            "hyp3" | "hyperbolic3" => FieldId::Hyp3,
            "hyp4" | "hyperbolic4" => FieldId::Hyp4,
            _ => return Err(Error::Parse(format!("unknown field id '{s}'"))),
        };
        Ok(id)
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Spatial rotation field and its Jacobian `jac[n][m] = ∂ₙXᵐ`.
fn rotation(id: FieldId, c: &Vec4) -> (Vec4, Mat4) {
    let mut v = [0.0; DIM];
    let mut jac = [[0.0; DIM]; DIM];
    if let Some((a, b)) = id.plane() {
        v[a] = c[b];
        v[b] = -c[a];
        jac[b][a] = 1.0;
        jac[a][b] = -1.0;
        return (v, jac);
    }
    let k = id.axis();
    let n2 = c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
    for m in 1..DIM {
        if m == k {
            v[m] = (2.0 * c[k] * c[k] - n2 + 1.0) / 2.0;
            for n in 1..DIM {
                jac[n][m] = 2.0 * c[k] * delta(k, n) - c[n];
            }
        } else {
            v[m] = c[k] * c[m];
            for n in 1..DIM {
                jac[n][m] = delta(k, n) * c[m] + c[k] * delta(m, n);
            }
        }
    }
    (v, jac)
}

/// Hyperbolic field in u-chart coordinates with its Jacobian. The raw
/// formula is also usable on any coordinate quadruple, which is how the
/// negative Killing tests read it in other charts.
pub fn hyperbolic_formula(id: FieldId, c: &Vec4) -> Result<(Vec4, Mat4)> {
    if !id.is_hyperbolic() {
        return Err(Error::InvalidArgument(format!("{id} is not a hyperbolic field")));
    }
    let k = id.axis();
    let t = c[0].tanh();
    let sech2 = 1.0 - t * t;
    let n2 = c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
    let d = n2 + 1.0;
    let mut v = [0.0; DIM];
    let mut jac = [[0.0; DIM]; DIM];
    if k == 4 {
        v[0] = (n2 - 1.0) / d;
        for n in 1..DIM {
            jac[n][0] = 4.0 * c[n] / (d * d);
        }
        for m in 1..DIM {
            v[m] = t * c[m];
            jac[0][m] = sech2 * c[m];
            jac[m][m] = t;
        }
        return Ok((v, jac));
    }
    v[0] = 2.0 * c[k] / d;
    for n in 1..DIM {
        jac[n][0] = 2.0 * delta(k, n) / d - 4.0 * c[k] * c[n] / (d * d);
    }
    for m in 1..DIM {
        if m == k {
            let shape = (d - 2.0 * c[k] * c[k]) / 2.0;
            v[m] = t * shape;
            jac[0][m] = sech2 * shape;
            for n in 1..DIM {
                jac[n][m] = t * (c[n] - 2.0 * c[k] * delta(k, n));
            }
        } else {
            v[m] = -t * c[k] * c[m];
            jac[0][m] = -sech2 * c[k] * c[m];
            for n in 1..DIM {
                jac[n][m] = -t * (delta(k, n) * c[m] + c[k] * delta(m, n));
            }
        }
    }
    Ok((v, jac))
}

/// Hyperbolic field expressed in a pole chart of the secant profile:
/// `u⁰ = asinh(tan x⁰)`, so `∂/∂u⁰ = cos(x⁰) ∂/∂x⁰` and the spatial
/// coordinates are shared.
fn hyperbolic_in_pole_chart(id: FieldId, c: &Vec4) -> Result<(Vec4, Mat4)> {
    let x0 = c[0];
    let (s, co) = x0.sin_cos();
    let u = [x0.tan().asinh(), c[1], c[2], c[3]];
    let (f, jf) = hyperbolic_formula(id, &u)?;
    let du0 = 1.0 / co;
    let mut v = f;
    v[0] = co * f[0];
    let mut jac = jf;
    jac[0][0] = -s * f[0] + co * jf[0][0] * du0;
    for m in 1..DIM {
        jac[0][m] = jf[0][m] * du0;
    }
    for row in jac.iter_mut().skip(1) {
        row[0] *= co;
    }
    Ok((v, jac))
}

fn mismatch(id: FieldId, p: &ChartPoint, profile: &ScaleFactorProfile) -> Error {
    Error::ChartProfileMismatch(format!("{id} is not available in the {} chart for {profile}", p.chart))
}

/// Contravariant components and Jacobian `jac[n][m] = ∂ₙXᵐ` at `p`.
pub fn field_vector_and_jacobian(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<(Vec4, Mat4)> {
    check_point(profile, p)?;
    let c = &p.coords;
    match id {
        _ if id.is_rotation() => Ok(rotation(id, c)),
        FieldId::Static0 => {
            if p.chart.is_pole_chart() {
                Ok(([1.0, 0.0, 0.0, 0.0], [[0.0; DIM]; DIM]))
            } else {
                Err(mismatch(id, p, profile))
            }
        }
        _ => match (p.chart, profile.secant_radius()) {
            (Chart::ModifiedU, _) => hyperbolic_formula(id, c),
            (_, Some(_)) => hyperbolic_in_pole_chart(id, c),
            (_, None) => Err(mismatch(id, p, profile)),
        },
    }
}

pub fn field_vector(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<Vec4> {
    Ok(field_vector_and_jacobian(id, profile, p)?.0)
}

/// Covariant components `X_i = g_ij Xʲ`.
pub fn field_covector(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<Vec4> {
    let v = field_vector(id, profile, p)?;
    Ok(lower(&metric_at(profile, p)?, &v))
}

/// `∇_i X_j` from the exact Jacobian, metric derivatives and connection.
pub fn field_covariant_derivative(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<Mat4> {
    let (v, jac) = field_vector_and_jacobian(id, profile, p)?;
    let metric = metric_at(profile, p)?;
    let dg = metric_derivatives(profile, p)?;
    let x = lower(&metric, &v);
    let mut dx = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            dx[i][j] = dg[i][j][j] * v[j] + metric.g[j][j] * jac[i][j];
        }
    }
    Ok(covariant_derivative(&connection(profile, p)?.gamma, &x, &dx))
}

/// Skew part `Y_ij = ∇_i X_j`, `i < j`, of a Killing field.
pub fn field_y(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<[f64; 6]> {
    Ok(field_jet(id, profile, p)?.y)
}

/// Full jet `(X_i, Y_ij)` of a catalog field at `p`.
pub fn field_jet(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<KillingJet> {
    let nabla = field_covariant_derivative(id, profile, p)?;
    Ok(KillingJet::from_parts(field_covector(id, profile, p)?, &nabla))
}

/// `max |∇_i X_j + ∇_j X_i|` from the exact derivatives.
pub fn exact_killing_residual(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<f64> {
    let n = field_covariant_derivative(id, profile, p)?;
    let mut worst: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            worst = worst.max((n[i][j] + n[j][i]).abs());
        }
    }
    Ok(worst)
}

/// Covector components of the rotational fields as tabulated in closed form,
/// with a single `R²` factor throughout.
pub fn tabulated_covector(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<Vec4> {
    if !id.is_rotation() || !p.chart.is_pole_chart() {
        return Err(mismatch(id, p, profile));
    }
    let r = profile.eval_r(p.time(), 0)?;
    let r2 = r * r;
    let x = p.coords;
    let n2 = p.spatial_norm_sq();
    let d2 = (n2 + 1.0) * (n2 + 1.0);
    let mut out = [0.0; DIM];
    if let Some((a, b)) = id.plane() {
        out[a] = -4.0 * r2 * x[b] / d2;
        out[b] = 4.0 * r2 * x[a] / d2;
        return Ok(out);
    }
    let k = id.axis();
    for m in 1..DIM {
        out[m] = if m == k {
            -(4.0 * x[k] * x[k] - 2.0 * n2 + 2.0) / d2 * r2
        } else {
            -4.0 * x[k] * x[m] / d2 * r2
        };
    }
    Ok(out)
}

/// Skew components `(Y₀₁, Y₀₂, Y₀₃, Y₁₂, Y₁₃, Y₂₃)` of the rotational fields
/// as tabulated in closed form, with one sign repaired.
pub fn tabulated_y(id: FieldId, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<[f64; 6]> {
    if !id.is_rotation() || !p.chart.is_pole_chart() {
        return Err(mismatch(id, p, profile));
    }
    let d = profile.derivatives(p.time())?;
    let (rr, r2) = (d.r * d.r1, d.r * d.r);
    let [_, x1, x2, x3] = p.coords;
    let n2 = p.spatial_norm_sq();
    let dd = n2 + 1.0;
    let (d2, d3) = (dd * dd, dd * dd * dd);
    let shape = |xk: f64| 2.0 * xk * xk - n2 + 1.0;
    let y = match id {
        FieldId::Mer1 => [
            -2.0 * rr * shape(x1) / d2,
            -4.0 * rr * x1 * x2 / d2,
            -4.0 * rr * x1 * x3 / d2,
            -8.0 * r2 * x2 / d3,
            -8.0 * r2 * x3 / d3,
            0.0,
        ],
        FieldId::Mer2 => [
            -4.0 * rr * x2 * x1 / d2,
            -2.0 * rr * shape(x2) / d2,
            -4.0 * rr * x2 * x3 / d2,
            8.0 * r2 * x1 / d3,
            0.0,
            -8.0 * r2 * x3 / d3,
        ],
        FieldId::Mer3 => [
            -4.0 * rr * x3 * x1 / d2,
            -4.0 * rr * x3 * x2 / d2,
            -2.0 * rr * shape(x3) / d2,
            0.0,
            8.0 * r2 * x1 / d3,
            8.0 * r2 * x2 / d3,
        ],
        FieldId::Eq12 => [
            -4.0 * rr * x2 / d2,
            4.0 * rr * x1 / d2,
            0.0,
            4.0 * r2 * shape(x3) / d3,
            -8.0 * r2 * x3 * x2 / d3,
            8.0 * r2 * x3 * x1 / d3,
        ],
        FieldId::Eq23 => [
            0.0,
            -4.0 * rr * x3 / d2,
            4.0 * rr * x2 / d2,
            8.0 * r2 * x1 * x3 / d3,
            -8.0 * r2 * x1 * x2 / d3,
            4.0 * r2 * shape(x1) / d3,
        ],
        FieldId::Eq31 => [
            4.0 * rr * x3 / d2,
            0.0,
            -4.0 * rr * x1 / d2,
            8.0 * r2 * x2 * x3 / d3,
            -4.0 * r2 * shape(x2) / d3,
            // printed with a minus sign; the cyclic image of the other two
            // equatorial tables fixes it as +8R²x¹x²/D³
            8.0 * r2 * x2 * x1 / d3,
        ],
        _ => unreachable!("rotation ids only"),
    };
    Ok(y)
}

/// Jet of a rotational field at the spatial origin `(x0, 0, 0, 0)`.
///
/// Meridional field `k`: `X_k = −2R²`, `Y₀ₖ = −2RR′`. Equatorial field in
/// the `(a, b)` plane: `Y_ab = 4R²`, stored with the sign of the ordered
/// pair (so the `z³z¹` rotation has `Y₁₃ = −4R²`).
pub fn origin_initial_data(id: FieldId, profile: &ScaleFactorProfile, x0: f64) -> Result<KillingJet> {
    if !id.is_rotation() {
        return Err(Error::InvalidArgument(format!(
            "origin initial data is tabulated for the rotations only, not {id}"
        )));
    }
    let d = profile.derivatives(x0)?;
    let mut jet = KillingJet::zero();
    if let Some((a, b)) = id.plane() {
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let slot = crate::killing::Y_PAIRS
            .iter()
            .position(|&pair| pair == (lo, hi))
            .expect("spatial pair");
        jet.y[slot] = sign * 4.0 * d.r * d.r;
    } else {
        let k = id.axis();
        jet.x[k] = -2.0 * d.r * d.r;
        jet.y[k - 1] = -2.0 * d.r * d.r1;
    }
    Ok(jet)
}

/// A constant-coefficient combination of catalog fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Combination {
    pub terms: Vec<(FieldId, f64)>,
}

impl Combination {
    pub fn single(id: FieldId) -> Self {
        Combination { terms: vec![(id, 1.0)] }
    }

    /// Combination of the ten constant-curvature fields in
    /// [`FieldId::SECANT_BASIS`] order.
    pub fn secant(coefficients: &[f64; 10]) -> Self {
        Combination {
            terms: FieldId::SECANT_BASIS.iter().copied().zip(coefficients.iter().copied()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c == 0.0)
    }

    pub fn vector(&self, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<Vec4> {
        let mut v = [0.0; DIM];
        for (id, c) in &self.terms {
            if *c == 0.0 {
                continue;
            }
            let f = field_vector(*id, profile, p)?;
            for k in 0..DIM {
                v[k] += c * f[k];
            }
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CausalCharacter {
    TimeLike,
    SpaceLike,
    Null,
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CausalCharacter::TimeLike => "TimeLike",
            CausalCharacter::SpaceLike => "SpaceLike",
            CausalCharacter::Null => "Null",
        };
        f.write_str(s)
    }
}

/// `g(X, X)` of a combination at `p`.
pub fn norm_squared(combo: &Combination, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<f64> {
    let v = combo.vector(profile, p)?;
    let g = metric_at(profile, p)?.diagonal();
    Ok((0..DIM).map(|k| g[k] * v[k] * v[k]).sum())
}

/// Causal character with tolerance `1e-12 · |g₀₀|`, and the value of
/// `g(X, X)`.
pub fn causal_character(combo: &Combination, profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<(CausalCharacter, f64)> {
    if combo.is_zero() {
        return Err(Error::ZeroField);
    }
    let q = norm_squared(combo, profile, p)?;
    let tol = 1e-12 * metric_at(profile, p)?.g[0][0].abs();
    let c = if q > tol {
        CausalCharacter::TimeLike
    } else if q < -tol {
        CausalCharacter::SpaceLike
    } else {
        CausalCharacter::Null
    };
    Ok((c, q))
}

/// Point where a combination is not time-like.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub coefficients: [f64; 10],
    pub point: String,
    pub coords: Vec4,
    pub norm_squared: f64,
}

const SCAN_GRID: usize = 8;
const SCAN_SLICES: usize = 9;
const SCAN_DESCENT_STEPS: usize = 50;
const SCAN_HALF_WIDTH: f64 = 1.2;
const SCAN_TIME_HALF_WIDTH: f64 = 1.0;

/// The u-chart and its inversion `u = v/|v|²`, which together cover the
/// whole spatial sphere with bounded coordinates.
#[derive(Debug, Clone, Copy)]
enum ScanChart {
    Direct,
    Inverted,
}

fn scan_point(chart: ScanChart, c: &Vec4) -> Option<ChartPoint> {
    match chart {
        ScanChart::Direct => Some(ChartPoint::modified_u(*c)),
        ScanChart::Inverted => {
            let n2 = c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
            if n2 < 1e-300 {
                return None;
            }
            Some(ChartPoint::modified_u([c[0], c[1] / n2, c[2] / n2, c[3] / n2]))
        }
    }
}

fn scan_value(combo: &Combination, profile: &ScaleFactorProfile, chart: ScanChart, c: &Vec4) -> Result<Option<(f64, ChartPoint)>> {
    match scan_point(chart, c) {
        Some(p) => Ok(Some((norm_squared(combo, profile, &p)?, p))),
        None => Ok(None),
    }
}

/// Grid search followed by coordinate descent for a point with
/// `g(X, X) ≤ 1e-12 · |g₀₀|`.
pub fn find_witness(
    combo: &Combination,
    profile: &ScaleFactorProfile,
    trial: usize,
    coefficients: [f64; 10],
) -> Result<Witness> {
    let a = profile.secant_radius().ok_or_else(|| {
        Error::ChartProfileMismatch(format!("the time-like scan needs the secant profile, not {profile}"))
    })?;
    let tol = 1e-12 * a * a;
    let mut best: Option<(f64, ScanChart, Vec4)> = None;
    let grid = |k: usize, n: usize, w: f64| -w + 2.0 * w * (k as f64) / ((n - 1) as f64);
    for chart in [ScanChart::Direct, ScanChart::Inverted] {
        for t in 0..SCAN_SLICES {
            let u0 = grid(t, SCAN_SLICES, SCAN_TIME_HALF_WIDTH);
            for i in 0..SCAN_GRID {
                for j in 0..SCAN_GRID {
                    for k in 0..SCAN_GRID {
                        let c = [
                            u0,
                            grid(i, SCAN_GRID, SCAN_HALF_WIDTH),
                            grid(j, SCAN_GRID, SCAN_HALF_WIDTH),
                            grid(k, SCAN_GRID, SCAN_HALF_WIDTH),
                        ];
                        if let Some((q, p)) = scan_value(combo, profile, chart, &c)? {
                            if q <= tol {
                                return Ok(Witness {
                                    trial,
                                    coefficients,
                                    point: p.to_string(),
                                    coords: p.coords,
                                    norm_squared: q,
                                });
                            }
                            if best.is_none_or(|(b, _, _)| q < b) {
                                best = Some((q, chart, c));
                            }
                        }
                    }
                }
            }
        }
    }
    let (mut q_best, chart, mut c) = best.expect("grid contains admissible points");
    let mut step = 2.0 * SCAN_HALF_WIDTH / (SCAN_GRID - 1) as f64;
    for _ in 0..SCAN_DESCENT_STEPS {
        let mut improved = false;
        for axis in 0..DIM {
            for dir in [-1.0, 1.0] {
                let mut trial_c = c;
                trial_c[axis] += dir * step;
                if let Some((q, p)) = scan_value(combo, profile, chart, &trial_c)? {
                    if q <= tol {
                        return Ok(Witness {
                            trial,
                            coefficients,
                            point: p.to_string(),
                            coords: p.coords,
                            norm_squared: q,
                        });
                    }
                    if q < q_best {
                        q_best = q;
                        c = trial_c;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Err(Error::WitnessNotFound { trial, best: q_best })
}

/// Seed of trial `k`, drawn in sequence from a generator seeded by the
/// master seed.
pub fn trial_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(master);
    (0..count).map(|_| rng.gen()).collect()
}

/// Nonzero coefficient vector with entries uniform in `[−1, 1]`.
pub fn random_coefficients(seed: u64) -> [f64; 10] {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    loop {
        let mut c = [0.0; 10];
        for v in c.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        if c.iter().any(|v| *v != 0.0) {
            return c;
        }
    }
}

/// For each of `trial_count` random combinations of the ten Killing fields
/// of the secant profile, a point where the combination is not time-like.
pub fn timelike_combination_scan(profile: &ScaleFactorProfile, trial_count: usize, seed: u64) -> Result<Vec<Witness>> {
    if trial_count == 0 {
        return Err(Error::InvalidArgument("the scan needs at least one trial".into()));
    }
    trial_seeds(seed, trial_count)
        .into_iter()
        .enumerate()
        .map(|(trial, s)| {
            let coefficients = random_coefficients(s);
            find_witness(&Combination::secant(&coefficients), profile, trial, coefficients)
        })
        .collect()
}
