//! Embedding of the constant-curvature universe as a hyperboloid
//! `−(z⁰)² + Σ(zⁱ)² = A²` in five-dimensional space with the metric
//! `diag(+1, −1, −1, −1, −1)`.

use nalgebra::Matrix4;
use serde::Serialize;

use crate::curvature::{constant_curvature_model, fit_sectional_curvature, lower_riemann, riemann_numeric};
use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::{metric_at, Chart, ChartPoint, MetricAtPoint};
use crate::scale_factor::ScaleFactorProfile;
use crate::tensor::{Linear, DIM};

pub const AMBIENT_DIM: usize = 5;
pub const AMBIENT_SIGNATURE: [f64; AMBIENT_DIM] = [1.0, -1.0, -1.0, -1.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbientPoint {
    pub z: [f64; AMBIENT_DIM],
}

impl AmbientPoint {
    /// `−(z⁰)² + Σ(zⁱ)²`.
    pub fn hyperboloid_form(&self) -> f64 {
        -self.z[0] * self.z[0] + self.z[1..].iter().map(|v| v * v).sum::<f64>()
    }

    /// Euclidean radius of the spatial part `(z¹, …, z⁴)`.
    pub fn spatial_radius(&self) -> f64 {
        self.z[1..].iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn check_radius(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("embedding radius must be positive, got {a}")))
    }
}

/// `zⁱ = A cosh(u⁰) 2uⁱ/(|u|²+1)`, `z⁴ = A cosh(u⁰) (|u|²−1)/(|u|²+1)`,
/// `z⁰ = A sinh(u⁰)`.
pub fn embed(u: &ChartPoint, a: f64) -> Result<AmbientPoint> {
    check_radius(a)?;
    if u.chart != Chart::ModifiedU {
        return Err(Error::ChartProfileMismatch(format!(
            "the embedding is written in the u-chart, got a {} point",
            u.chart
        )));
    }
    let c = &u.coords;
    let n2 = u.spatial_norm_sq();
    let d = n2 + 1.0;
    let ch = a * c[0].cosh();
    Ok(AmbientPoint {
        z: [
            a * c[0].sinh(),
            ch * 2.0 * c[1] / d,
            ch * 2.0 * c[2] / d,
            ch * 2.0 * c[3] / d,
            ch * (n2 - 1.0) / d,
        ],
    })
}

/// `|−(z⁰)² + Σ(zⁱ)² − A²| / A²`.
pub fn hyperboloid_residual(z: &AmbientPoint, a: f64) -> f64 {
    (z.hyperboloid_form() - a * a).abs() / (a * a)
}

/// `|√Σ(zⁱ)² − A cosh(u⁰)| / (A cosh(u⁰))`.
pub fn sphere_radius_residual(u: &ChartPoint, a: f64) -> Result<f64> {
    let z = embed(u, a)?;
    let expected = a * u.time().cosh();
    Ok((z.spatial_radius() - expected).abs() / expected)
}

/// Pullback `Jᵀ diag(+1, −1, −1, −1, −1) J` of the ambient metric, with `J`
/// the central-difference Jacobian of [`embed`].
pub fn induced_metric(u: &ChartPoint, a: f64, h: f64) -> Result<MetricAtPoint> {
    fd::check_step(h)?;
    embed(u, a)?;
    let jac: [[f64; AMBIENT_DIM]; 4] = fd::gradient(&u.coords, h, |c| Ok(embed(&u.with_coords(*c), a)?.z))?;
    let mut g = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            g[i][j] = (0..AMBIENT_DIM).map(|k| AMBIENT_SIGNATURE[k] * jac[i][k] * jac[j][k]).sum();
        }
    }
    let inv = Matrix4::from_fn(|i, j| g[i][j])
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument(format!("induced metric is degenerate at {u}")))?;
    let mut g_inv = [[0.0; DIM]; DIM];
    for (i, row) in g_inv.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = inv[(i, j)];
        }
    }
    Ok(MetricAtPoint { g, g_inv })
}

/// Componentwise deviation of the induced metric from the u-chart metric of
/// the secant profile with `a = A`, relative to the larger metric entry.
pub fn induced_metric_deviation(u: &ChartPoint, a: f64, h: f64) -> Result<f64> {
    let induced = induced_metric(u, a, h)?;
    let chart = metric_at(&ScaleFactorProfile::secant(a)?, u)?;
    Ok(crate::tensor::relative_deviation(&induced.g, &chart.g))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionalCheck {
    /// `max |R_pqij − K(g_pi g_qj − g_pj g_qi)|` with `K = −1/a²`.
    pub max_deviation: f64,
    /// Mean least-squares fit of `K` over the samples.
    pub k_estimate: f64,
}

/// Constant-curvature test on the metric-only numeric curvature of the
/// secant profile in the u-chart.
pub fn sectional_curvature_check(a: f64, samples: &[ChartPoint]) -> Result<SectionalCheck> {
    check_radius(a)?;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("sectional curvature check needs samples".into()));
    }
    let profile = ScaleFactorProfile::secant(a)?;
    let k = -1.0 / (a * a);
    let mut worst: f64 = 0.0;
    let mut k_sum = 0.0;
    for u in samples {
        if u.chart != Chart::ModifiedU {
            return Err(Error::ChartProfileMismatch("samples must be u-chart points".into()));
        }
        let metric = metric_at(&profile, u)?;
        let riemann = riemann_numeric(&profile, u, fd::DEFAULT_STEP)?.riemann;
        let lowered = lower_riemann(&metric, &riemann);
        let model = constant_curvature_model(&metric, k);
        worst = worst.max(lowered.max_abs_diff(&model));
        k_sum += fit_sectional_curvature(&metric, &riemann);
    }
    Ok(SectionalCheck {
        max_deviation: worst,
        k_estimate: k_sum / samples.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::DEFAULT_FIELD_STEP;

    #[test]
    fn embed_examples() {
        let z = embed(&ChartPoint::modified_u([0.0; 4]), 1.0).unwrap();
        assert_eq!(z.z, [0.0, 0.0, 0.0, 0.0, -1.0]);
        let z = embed(&ChartPoint::modified_u([0.0, 1.0, 0.0, 0.0]), 1.0).unwrap();
        assert_eq!(z.z, [0.0, 1.0, 0.0, 0.0, 0.0]);
        let t: f64 = 0.7;
        let z = embed(&ChartPoint::modified_u([t, 0.0, 0.0, 0.0]), 2.0).unwrap();
        assert!((z.z[0] - 2.0 * t.sinh()).abs() < 1e-15);
        assert!((z.z[4] + 2.0 * t.cosh()).abs() < 1e-15);
        assert!(embed(&ChartPoint::north([0.0; 4]), 1.0).is_err());
        assert!(embed(&ChartPoint::modified_u([0.0; 4]), 0.0).is_err());
    }

    #[test]
    fn hyperboloid_and_sphere() {
        let u = ChartPoint::modified_u([0.9, -1.3, 0.4, 2.2]);
        let z = embed(&u, 1.7).unwrap();
        assert!(hyperboloid_residual(&z, 1.7) < 1e-14);
        assert!(sphere_radius_residual(&u, 1.7).unwrap() < 1e-15);
    }

    #[test]
    fn induced_metric_examples() {
        let g = induced_metric(&ChartPoint::modified_u([0.0; 4]), 1.0, DEFAULT_FIELD_STEP).unwrap().g;
        let expected = [1.0, -4.0, -4.0, -4.0];
        for i in 0..4 {
            assert!((g[i][i] - expected[i]).abs() < 1e-9);
        }
        let g = induced_metric(&ChartPoint::modified_u([0.5, 0.0, 0.0, 0.0]), 1.0, DEFAULT_FIELD_STEP).unwrap().g;
        assert!((g[1][1] + 4.0 * 0.5f64.cosh().powi(2)).abs() < 1e-9);
        let g = induced_metric(&ChartPoint::modified_u([0.0, 1.0, 0.0, 0.0]), 2.0, DEFAULT_FIELD_STEP).unwrap().g;
        assert!((g[0][0] - 4.0).abs() < 1e-9);
        assert!((g[1][1] + 4.0).abs() < 1e-9);
        let u = ChartPoint::modified_u([0.3, 0.5, -0.6, 0.1]);
        assert!(induced_metric_deviation(&u, 1.3, DEFAULT_FIELD_STEP).unwrap() < 1e-7);
    }

    #[test]
    fn sectional_curvature_examples() {
        let r = sectional_curvature_check(1.0, &[ChartPoint::modified_u([0.0; 4])]).unwrap();
        assert!(r.max_deviation < 1e-7, "{}", r.max_deviation);
        let samples = [
            ChartPoint::modified_u([0.2, 0.1, -0.3, 0.4]),
            ChartPoint::modified_u([-0.5, 0.6, 0.2, 0.0]),
        ];
        let r = sectional_curvature_check(2.0, &samples).unwrap();
        assert!((r.k_estimate + 0.25).abs() < 1e-6);
        assert!(r.max_deviation < 1e-6 * 0.25, "{}", r.max_deviation);
    }
}
