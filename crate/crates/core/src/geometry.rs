//! Stereographic charts on `M = ℝ × S³` and the metric in each chart.
//!
//! Three charts are supported: the North Pole chart `x`, the South Pole chart
//! `y` and, for the secant profile only, the modified chart `u` whose time
//! coordinate is `u⁰ = ct/a`. The metric is diagonal in all three.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scale_factor::ScaleFactorProfile;
use crate::tensor::{Mat4, Vec4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Chart {
    NorthPole,
    SouthPole,
    ModifiedU,
}

impl Chart {
    pub fn short_name(self) -> &'static str {
        match self {
            Chart::NorthPole => "x",
            Chart::SouthPole => "y",
            Chart::ModifiedU => "u",
        }
    }

    pub fn is_pole_chart(self) -> bool {
        matches!(self, Chart::NorthPole | Chart::SouthPole)
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" | "north" | "northpole" => Ok(Chart::NorthPole),
            "y" | "south" | "southpole" => Ok(Chart::SouthPole),
            "u" | "modified" | "modifiedu" => Ok(Chart::ModifiedU),
            other => Err(Error::Parse(format!("unknown chart '{other}'"))),
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::NorthPole => "north",
            Chart::SouthPole => "south",
            Chart::ModifiedU => "u",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartPoint {
    pub chart: Chart,
    pub coords: Vec4,
}

impl ChartPoint {
    pub fn new(chart: Chart, coords: Vec4) -> Self {
        ChartPoint { chart, coords }
    }

    pub fn north(coords: Vec4) -> Self {
        Self::new(Chart::NorthPole, coords)
    }

    pub fn south(coords: Vec4) -> Self {
        Self::new(Chart::SouthPole, coords)
    }

    pub fn modified_u(coords: Vec4) -> Self {
        Self::new(Chart::ModifiedU, coords)
    }

    pub fn with_coords(&self, coords: Vec4) -> Self {
        Self::new(self.chart, coords)
    }

    pub fn time(&self) -> f64 {
        self.coords[0]
    }

    /// `|x|² = (x¹)² + (x²)² + (x³)²`.
    pub fn spatial_norm_sq(&self) -> f64 {
        self.coords[1..].iter().map(|c| c * c).sum()
    }
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coords;
        write!(f, "{}:{},{},{},{}", self.chart.short_name(), c[0], c[1], c[2], c[3])
    }
}

impl FromStr for ChartPoint {
    type Err = Error;

    /// `x:0.2,1,0,0`, `south:...`, `u:0,0,0,0`.
    fn from_str(s: &str) -> Result<Self> {
        let (chart, coords) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("point '{s}': expected chart:c0,c1,c2,c3")))?;
        Ok(ChartPoint::new(chart.parse()?, parse_coords(coords)?))
    }
}

pub fn parse_coords(s: &str) -> Result<Vec4> {
    let values: Vec<f64> = s
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coordinate '{v}'")))
        })
        .collect::<Result<_>>()?;
    match values.as_slice() {
        [a, b, c, d] if values.iter().all(|v| v.is_finite()) => Ok([*a, *b, *c, *d]),
        _ => Err(Error::Parse(format!("expected four finite coordinates, got '{s}'"))),
    }
}

/// Metric components and their inverse at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricAtPoint {
    pub g: Mat4,
    pub g_inv: Mat4,
}

impl MetricAtPoint {
    /// Builds both from the diagonal; the inverse is the elementwise
    /// reciprocal, never a matrix inversion.
    pub fn from_diagonal(d: Vec4) -> Self {
        let mut g = [[0.0; 4]; 4];
        let mut g_inv = [[0.0; 4]; 4];
        for i in 0..4 {
            g[i][i] = d[i];
            g_inv[i][i] = 1.0 / d[i];
        }
        MetricAtPoint { g, g_inv }
    }

    pub fn diagonal(&self) -> Vec4 {
        [self.g[0][0], self.g[1][1], self.g[2][2], self.g[3][3]]
    }
}

/// Event in the other pole chart: `yⁱ = xⁱ/|x|²`, time unchanged.
pub fn transition(p: &ChartPoint) -> Result<ChartPoint> {
    let target = match p.chart {
        Chart::NorthPole => Chart::SouthPole,
        Chart::SouthPole => Chart::NorthPole,
        Chart::ModifiedU => {
            return Err(Error::ChartProfileMismatch(
                "transition is defined between the two pole charts only".into(),
            ))
        }
    };
    let n2 = p.spatial_norm_sq();
    if n2 == 0.0 {
        return Err(Error::SingularPoint);
    }
    let c = p.coords;
    Ok(ChartPoint::new(target, [c[0], c[1] / n2, c[2] / n2, c[3] / n2]))
}

/// Jacobian `∂(new)/∂(old)` of [`transition`] at `p`: `jac[a][b] = ∂yᵃ/∂xᵇ`.
pub fn transition_jacobian(p: &ChartPoint) -> Result<Mat4> {
    transition(p)?;
    let n2 = p.spatial_norm_sq();
    let c = p.coords;
    let mut jac = [[0.0; 4]; 4];
    jac[0][0] = 1.0;
    for a in 1..4 {
        for b in 1..4 {
            let delta = if a == b { 1.0 } else { 0.0 };
            jac[a][b] = delta / n2 - 2.0 * c[a] * c[b] / (n2 * n2);
        }
    }
    Ok(jac)
}

/// Chart switching policy: points far out in a pole chart (`|x|² > 1`) are
/// re-expressed in the opposite pole chart, keeping `(|x|²+1)²` well
/// conditioned.
pub fn well_conditioned(p: &ChartPoint) -> ChartPoint {
    if p.chart.is_pole_chart() && p.spatial_norm_sq() > 1.0 {
        transition(p).unwrap_or(*p)
    } else {
        *p
    }
}

/// Validates that `p` lies in the chart's domain for this profile.
pub fn check_point(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<()> {
    if p.coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite coordinates in {p}")));
    }
    match p.chart {
        Chart::NorthPole | Chart::SouthPole => profile.check(p.time()),
        Chart::ModifiedU => secant_radius_for_u_chart(profile).map(|_| ()),
    }
}

pub(crate) fn secant_radius_for_u_chart(profile: &ScaleFactorProfile) -> Result<f64> {
    profile.secant_radius().ok_or_else(|| {
        Error::ChartProfileMismatch(format!(
            "the modified u-chart exists only for the secant profile, not {profile}"
        ))
    })
}

/// Diagonal metric coefficients `(g₀₀, g₁₁ = g₂₂ = g₃₃)` and their first
/// derivative in the time coordinate.
fn warp(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<(f64, f64, f64, f64)> {
    check_point(profile, p)?;
    match p.chart {
        Chart::NorthPole | Chart::SouthPole => {
            let d = profile.derivatives(p.time())?;
            // g00 = R², spatial scale R²
            Ok((d.r * d.r, 2.0 * d.r * d.r1, d.r * d.r, 2.0 * d.r * d.r1))
        }
        Chart::ModifiedU => {
            let a = secant_radius_for_u_chart(profile)?;
            let (ch, sh) = (p.time().cosh(), p.time().sinh());
            Ok((a * a, 0.0, a * a * ch * ch, 2.0 * a * a * ch * sh))
        }
    }
}

/// `g₀₀ = R²`, `gᵢᵢ = −4R²/(|x|²+1)²` in the pole charts;
/// `g₀₀ = a²`, `gᵢᵢ = −4a²cosh²(u⁰)/(|u|²+1)²` in the u-chart.
pub fn metric_at(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<MetricAtPoint> {
    let (g00, _, scale, _) = warp(profile, p)?;
    let conformal = 1.0 + p.spatial_norm_sq();
    let gs = -4.0 * scale / (conformal * conformal);
    Ok(MetricAtPoint::from_diagonal([g00, gs, gs, gs]))
}

/// Analytic first derivatives of the metric: `dg[s][i][j] = ∂g_ij/∂xˢ`.
pub fn metric_derivatives(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<[Mat4; 4]> {
    let (_, dg00, scale, dscale) = warp(profile, p)?;
    let conformal = 1.0 + p.spatial_norm_sq();
    let c2 = conformal * conformal;
    let mut dg = [[[0.0; 4]; 4]; 4];
    dg[0][0][0] = dg00;
    for i in 1..4 {
        dg[0][i][i] = -4.0 * dscale / c2;
        for s in 1..4 {
            dg[s][i][i] = 16.0 * scale * p.coords[s] / (c2 * conformal);
        }
    }
    Ok(dg)
}

/// Lowers a vector at `p`: `X_i = g_ij Xʲ`.
pub fn lower(metric: &MetricAtPoint, v: &Vec4) -> Vec4 {
    crate::tensor::mat_vec(&metric.g, v)
}

/// Raises a covector at `p`: `Xⁱ = gⁱʲ X_j`.
pub fn raise(metric: &MetricAtPoint, w: &Vec4) -> Vec4 {
    crate::tensor::mat_vec(&metric.g_inv, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;
    use crate::tensor::{identity, mat_mul, relative_deviation, transpose};

    #[test]
    fn transition_examples() {
        let p = transition(&ChartPoint::north([0.2, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(p, ChartPoint::south([0.2, 1.0, 0.0, 0.0]));
        let p = transition(&ChartPoint::north([0.0, 2.0, 0.0, 0.0])).unwrap();
        assert_eq!(p, ChartPoint::south([0.0, 0.5, 0.0, 0.0]));
        assert_eq!(
            transition(&ChartPoint::north([1.5, 0.0, 0.0, 0.0])),
            Err(Error::SingularPoint)
        );
    }

    #[test]
    fn transition_is_an_involution() {
        let p = ChartPoint::north([0.3, -0.7, 2.5, 0.01]);
        let back = transition(&transition(&p).unwrap()).unwrap();
        assert_eq!(back.chart, Chart::NorthPole);
        for k in 0..4 {
            assert!((back.coords[k] - p.coords[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn metric_examples() {
        let c2 = ScaleFactorProfile::constant(2.0).unwrap();
        let m = metric_at(&c2, &ChartPoint::north([0.9, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(m.diagonal(), [4.0, -16.0, -16.0, -16.0]);
        let c1 = ScaleFactorProfile::constant(1.0).unwrap();
        let m = metric_at(&c1, &ChartPoint::north([0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(m.g[1][1], -1.0);
        let s1 = ScaleFactorProfile::secant(1.0).unwrap();
        let m = metric_at(&s1, &ChartPoint::modified_u([0.0; 4])).unwrap();
        assert_eq!(m.diagonal(), [1.0, -4.0, -4.0, -4.0]);
        assert!(matches!(
            metric_at(&c1, &ChartPoint::modified_u([0.0; 4])),
            Err(Error::ChartProfileMismatch(_))
        ));
    }

    #[test]
    fn inverse_metric_is_elementwise_reciprocal() {
        let p = ScaleFactorProfile::exponential(1.5, 0.7).unwrap();
        let m = metric_at(&p, &ChartPoint::south([0.4, 0.3, -0.2, 0.8])).unwrap();
        let prod = mat_mul(&m.g, &m.g_inv);
        assert!(relative_deviation(&prod, &identity()) < 1e-14);
        for i in 0..4 {
            assert_eq!(m.g_inv[i][i], 1.0 / m.g[i][i]);
        }
        assert!(m.g[0][0] > 0.0 && m.g[1][1] < 0.0);
        assert_eq!(m.g[1][1], m.g[3][3]);
    }

    #[test]
    fn metric_pulls_back_through_transition() {
        let p = ScaleFactorProfile::secant(1.2).unwrap();
        for coords in [[0.1, 0.4, -0.3, 0.2], [-0.5, 1.7, 0.2, -0.9], [0.8, 0.0, 0.0, 2.0]] {
            let x = ChartPoint::north(coords);
            let y = transition(&x).unwrap();
            // Jacobian by finite differences of the transition map.
            let cols: [Vec4; 4] = fd::gradient(&coords, fd::DEFAULT_FIELD_STEP, |c| {
                Ok(transition(&ChartPoint::north(*c))?.coords)
            })
            .unwrap();
            let mut jac = [[0.0; 4]; 4];
            for a in 0..4 {
                for b in 0..4 {
                    jac[a][b] = cols[b][a];
                }
            }
            let exact = transition_jacobian(&x).unwrap();
            assert!(relative_deviation(&jac, &exact) < 1e-10);
            let gy = metric_at(&p, &y).unwrap().g;
            let pulled = mat_mul(&transpose(&jac), &mat_mul(&gy, &jac));
            let gx = metric_at(&p, &x).unwrap().g;
            assert!(relative_deviation(&pulled, &gx) < 1e-8);
        }
    }

    #[test]
    fn analytic_metric_derivatives_match_fd() {
        let profiles = [
            (ScaleFactorProfile::exponential(1.0, 1.0).unwrap(), Chart::NorthPole),
            (ScaleFactorProfile::secant(2.0).unwrap(), Chart::ModifiedU),
            (ScaleFactorProfile::secant(2.0).unwrap(), Chart::SouthPole),
        ];
        for (profile, chart) in profiles {
            let p = ChartPoint::new(chart, [0.3, 0.2, -0.5, 0.4]);
            let fdg: [Mat4; 4] = fd::gradient(&p.coords, fd::DEFAULT_FIELD_STEP, |c| {
                Ok(metric_at(&profile, &p.with_coords(*c))?.g)
            })
            .unwrap();
            let dg = metric_derivatives(&profile, &p).unwrap();
            assert!(relative_deviation(&fdg, &dg) < 1e-11);
        }
    }

    #[test]
    fn chart_switch_policy() {
        let far = ChartPoint::north([0.0, 3.0, 0.0, 0.0]);
        assert_eq!(well_conditioned(&far).chart, Chart::SouthPole);
        let near = ChartPoint::north([0.0, 0.5, 0.0, 0.0]);
        assert_eq!(well_conditioned(&near), near);
    }

    #[test]
    fn parse_points() {
        let p: ChartPoint = "north:0.2,1,0,0".parse().unwrap();
        assert_eq!(p, ChartPoint::north([0.2, 1.0, 0.0, 0.0]));
        let p: ChartPoint = "u:0,0,0,0".parse().unwrap();
        assert_eq!(p.chart, Chart::ModifiedU);
        assert!("x:1,2,3".parse::<ChartPoint>().is_err());
        assert!("q:1,2,3,4".parse::<ChartPoint>().is_err());
        assert_eq!(p.to_string(), "u:0,0,0,0");
    }
}
