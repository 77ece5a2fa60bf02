//! Levi-Civita connection, curvature and curvature gradient.
//!
//! Every quantity has two independent routes:
//!
//! * closed forms, valid in the two pole charts, written directly in terms of
//!   `R, R′, R″, R‴` and `|x|²`;
//! * a numeric oracle that sees only [`metric_at`] and differentiates it with
//!   central finite differences (connection from `∂g`, curvature from `∂Γ`,
//!   curvature gradient from `∂R`).
//!
//! Index conventions: `gamma[k][i][j] = Γᵏᵢⱼ`,
//! `riemann[p][q][i][j] = Rᵖ_qij = ∂ᵢΓᵖⱼq − ∂ⱼΓᵖᵢq + ΓᵖᵢₕΓʰⱼq − ΓᵖⱼₕΓʰᵢq`,
//! `ricci[q][j] = Σₚ Rᵖ_qpj`, `nabla[s][p][q][i][j] = ∇ₛRᵖ_qij`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::{check_point, metric_at, metric_derivatives, Chart, ChartPoint, MetricAtPoint};
use crate::scale_factor::{Derivatives, ScaleFactorProfile};
use crate::tensor::{Linear, Mat4, Rank3, Rank4, Rank5, DIM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionAtPoint {
    pub gamma: Rank3,
}

impl ConnectionAtPoint {
    /// Nonzero components with `i ≤ j` (symmetric pairs counted once).
    pub fn nonzero_components(&self, tol: f64) -> Vec<([usize; 3], f64)> {
        let mut out = Vec::new();
        for k in 0..DIM {
            for i in 0..DIM {
                for j in i..DIM {
                    let v = self.gamma[k][i][j];
                    if v.abs() > tol {
                        out.push(([k, i, j], v));
                    }
                }
            }
        }
        out
    }

    /// Number of nonzero entries counting `Γᵏᵢⱼ` and `Γᵏⱼᵢ` separately.
    pub fn nonzero_entry_count(&self, tol: f64) -> usize {
        self.gamma
            .iter()
            .flatten()
            .flatten()
            .filter(|v| v.abs() > tol)
            .count()
    }

    /// `max |Γᵏᵢⱼ − Γᵏⱼᵢ|`.
    pub fn torsion(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    worst = worst.max((self.gamma[k][i][j] - self.gamma[k][j][i]).abs());
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureAtPoint {
    pub riemann: Rank4,
    pub ricci: Mat4,
    pub scalar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureGradientAtPoint {
    pub nabla_riemann: Rank5,
}

/// Maximum residuals of the algebraic and differential curvature identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub antisymmetry: f64,
    pub first_bianchi: f64,
    pub ricci_asymmetry: f64,
}

fn require_pole_chart(p: &ChartPoint, what: &str) -> Result<()> {
    if p.chart.is_pole_chart() {
        Ok(())
    } else {
        Err(Error::ChartProfileMismatch(format!(
            "closed-form {what} are tabulated for the pole charts only; use the numeric route in the u-chart"
        )))
    }
}

fn pole_data(profile: &ScaleFactorProfile, p: &ChartPoint, what: &str) -> Result<(Derivatives, f64)> {
    require_pole_chart(p, what)?;
    check_point(profile, p)?;
    Ok((profile.derivatives(p.time())?, 1.0 + p.spatial_norm_sq()))
}

/// Connection components from the closed-form table.
pub fn christoffel_closed(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<ConnectionAtPoint> {
    let (d, conf) = pole_data(profile, p, "connection components")?;
    let x = p.coords;
    let h = d.r1 / d.r;
    let mut g: Rank3 = Linear::zero();
    g[0][0][0] = h;
    for i in 1..DIM {
        g[0][i][i] = 4.0 * h / (conf * conf);
        g[i][0][i] = h;
        g[i][i][0] = h;
    }
    for k in 1..DIM {
        for i in 1..DIM {
            if i == k {
                g[k][k][k] = -2.0 * x[k] / conf;
            } else {
                g[k][i][i] = 2.0 * x[k] / conf;
                g[k][i][k] = -2.0 * x[i] / conf;
                g[k][k][i] = -2.0 * x[i] / conf;
            }
        }
    }
    Ok(ConnectionAtPoint { gamma: g })
}

/// `Γᵏᵢⱼ = ½ gᵏˢ (∂ⱼg_is + ∂ᵢg_sj − ∂ₛg_ij)` from metric derivatives
/// `dg[s][i][j] = ∂ₛg_ij`.
pub fn christoffel_from_metric_derivatives(metric: &MetricAtPoint, dg: &[Mat4; 4]) -> Rank3 {
    let mut gamma: Rank3 = Linear::zero();
    for k in 0..DIM {
        for i in 0..DIM {
            for j in 0..DIM {
                let mut acc = 0.0;
                for s in 0..DIM {
                    acc += 0.5 * metric.g_inv[k][s] * (dg[j][i][s] + dg[i][s][j] - dg[s][i][j]);
                }
                gamma[k][i][j] = acc;
            }
        }
    }
    gamma
}

/// Connection from the analytic metric derivatives; valid in every chart.
pub fn christoffel_analytic(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<ConnectionAtPoint> {
    let metric = metric_at(profile, p)?;
    let dg = metric_derivatives(profile, p)?;
    Ok(ConnectionAtPoint {
        gamma: christoffel_from_metric_derivatives(&metric, &dg),
    })
}

/// Connection from finite differences of the metric alone.
pub fn christoffel_numeric(profile: &ScaleFactorProfile, p: &ChartPoint, h: f64) -> Result<ConnectionAtPoint> {
    fd::check_step(h)?;
    let metric = metric_at(profile, p)?;
    let dg: [Mat4; 4] = fd::gradient(&p.coords, h, |c| Ok(metric_at(profile, &p.with_coords(*c))?.g))?;
    Ok(ConnectionAtPoint {
        gamma: christoffel_from_metric_derivatives(&metric, &dg),
    })
}

/// Curvature from the connection and its derivatives
/// `dgamma[i][p][j][q] = ∂ᵢΓᵖⱼq`.
pub fn riemann_from_connection(gamma: &Rank3, dgamma: &[Rank3; 4]) -> Rank4 {
    let mut r: Rank4 = Linear::zero();
    for p in 0..DIM {
        for q in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    let mut acc = dgamma[i][p][j][q] - dgamma[j][p][i][q];
                    for h in 0..DIM {
                        acc += gamma[p][i][h] * gamma[h][j][q] - gamma[p][j][h] * gamma[h][i][q];
                    }
                    r[p][q][i][j] = acc;
                }
            }
        }
    }
    r
}

/// `R_qj = Σₚ Rᵖ_qpj`.
pub fn ricci_by_contraction(riemann: &Rank4) -> Mat4 {
    let mut ric = [[0.0; DIM]; DIM];
    for q in 0..DIM {
        for j in 0..DIM {
            ric[q][j] = (0..DIM).map(|p| riemann[p][q][p][j]).sum();
        }
    }
    ric
}

pub fn scalar_from_ricci(metric: &MetricAtPoint, ricci: &Mat4) -> f64 {
    let mut s = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            s += metric.g_inv[i][j] * ricci[i][j];
        }
    }
    s
}

/// Curvature from the closed-form tables.
pub fn riemann_closed(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<CurvatureAtPoint> {
    let (d, conf) = pole_data(profile, p, "curvature components")?;
    let c2 = conf * conf;
    let time_part = (d.r2 * d.r - d.r1 * d.r1) / (d.r * d.r);
    let space_part = 4.0 * (d.r1 * d.r1 + d.r * d.r) / (d.r * d.r * c2);
    let mut r: Rank4 = Linear::zero();
    for i in 1..DIM {
        r[0][i][0][i] = 4.0 * time_part / c2;
        r[0][i][i][0] = -4.0 * time_part / c2;
        r[i][0][0][i] = time_part;
        r[i][0][i][0] = -time_part;
        for j in 1..DIM {
            if i != j {
                r[i][j][i][j] = space_part;
                r[i][j][j][i] = -space_part;
            }
        }
    }
    Ok(CurvatureAtPoint {
        riemann: r,
        ricci: ricci_table(&d, conf),
        scalar: scalar_table(&d),
    })
}

fn ricci_table(d: &Derivatives, conf: f64) -> Mat4 {
    let mut ric = [[0.0; DIM]; DIM];
    ric[0][0] = (3.0 * d.r1 * d.r1 - 3.0 * d.r * d.r2) / (d.r * d.r);
    let spatial = (8.0 * d.r * d.r + 4.0 * d.r1 * d.r1 + 4.0 * d.r * d.r2) / (d.r * d.r * conf * conf);
    for i in 1..DIM {
        ric[i][i] = spatial;
    }
    ric
}

fn scalar_table(d: &Derivatives) -> f64 {
    -6.0 / (d.r * d.r) - 6.0 * d.r2 / d.r.powi(3)
}

/// Curvature by the numeric oracle: finite differences of the numeric
/// connection, which itself uses finite differences of the metric.
pub fn riemann_numeric(profile: &ScaleFactorProfile, p: &ChartPoint, h: f64) -> Result<CurvatureAtPoint> {
    fd::check_step(h)?;
    let metric = metric_at(profile, p)?;
    let gamma = christoffel_numeric(profile, p, h)?.gamma;
    let dgamma: [Rank3; 4] =
        fd::gradient(&p.coords, h, |c| Ok(christoffel_numeric(profile, &p.with_coords(*c), h)?.gamma))?;
    let riemann = riemann_from_connection(&gamma, &dgamma);
    let ricci = ricci_by_contraction(&riemann);
    Ok(CurvatureAtPoint {
        riemann,
        ricci,
        scalar: scalar_from_ricci(&metric, &ricci),
    })
}

/// Ricci tensor: closed table in the pole charts, numeric contraction in the
/// u-chart.
pub fn ricci(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<Mat4> {
    Ok(curvature(profile, p)?.ricci)
}

pub fn scalar_curvature(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<f64> {
    Ok(curvature(profile, p)?.scalar)
}

/// `∇ₛRᵖ_qij = ∂ₛRᵖ_qij + ΓᵖₛₕRʰ_qij − ΓʰₛqRᵖ_hij − ΓʰₛᵢRᵖ_qhj − ΓʰₛⱼRᵖ_qih`,
/// with `dr[s] = ∂ₛR`.
pub fn covariant_derivative_of_riemann(gamma: &Rank3, riemann: &Rank4, dr: &[Rank4; 4]) -> Rank5 {
    let mut out: Rank5 = Linear::zero();
    for s in 0..DIM {
        for p in 0..DIM {
            for q in 0..DIM {
                for i in 0..DIM {
                    for j in 0..DIM {
                        let mut acc = dr[s][p][q][i][j];
                        for h in 0..DIM {
                            acc += gamma[p][s][h] * riemann[h][q][i][j]
                                - gamma[h][s][q] * riemann[p][h][i][j]
                                - gamma[h][s][i] * riemann[p][q][h][j]
                                - gamma[h][s][j] * riemann[p][q][i][h];
                        }
                        out[s][p][q][i][j] = acc;
                    }
                }
            }
        }
    }
    out
}

/// Curvature gradient from the closed-form tables.
pub fn nabla_riemann_closed(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<CurvatureGradientAtPoint> {
    let (d, conf) = pole_data(profile, p, "curvature-gradient components")?;
    let (r, r1, r2, r3) = (d.r, d.r1, d.r2, d.r3);
    let c2 = conf * conf;
    let r3p = r.powi(3);
    let time_time = (16.0 * r1.powi(3) - 20.0 * r2 * r1 * r + 4.0 * r3 * r * r) / (r3p * c2);
    let time_space = (4.0 * r1.powi(3) - 5.0 * r2 * r1 * r + r3 * r * r) / r3p;
    let space_space = (-16.0 * r1.powi(3) + 8.0 * r2 * r1 * r - 8.0 * r1 * r * r) / (r3p * c2);
    let mixed_quartic = (32.0 * r1.powi(3) - 16.0 * r2 * r1 * r + 16.0 * r1 * r * r) / (r3p * c2 * c2);
    let mixed = (8.0 * r1.powi(3) - 4.0 * r2 * r1 * r + 4.0 * r1 * r * r) / (r3p * c2);

    let mut n: Rank5 = Linear::zero();
    let mut put = |s: usize, p: usize, q: usize, i: usize, j: usize, v: f64| {
        n[s][p][q][i][j] = v;
        n[s][p][q][j][i] = -v;
    };
    for a in 1..DIM {
        put(0, 0, a, 0, a, time_time);
        put(0, a, 0, 0, a, time_space);
        for b in 1..DIM {
            if a == b {
                continue;
            }
            put(0, a, b, a, b, space_space);
            put(a, 0, b, a, b, mixed_quartic);
            put(a, b, 0, a, b, mixed);
            put(a, a, b, b, 0, mixed);
            put(a, b, a, 0, b, mixed);
        }
    }
    Ok(CurvatureGradientAtPoint { nabla_riemann: n })
}

/// Curvature gradient by the numeric oracle (three nested finite-difference
/// levels on the metric).
pub fn nabla_riemann_numeric(profile: &ScaleFactorProfile, p: &ChartPoint, h: f64) -> Result<CurvatureGradientAtPoint> {
    fd::check_step(h)?;
    let gamma = christoffel_numeric(profile, p, h)?.gamma;
    let riemann = riemann_numeric(profile, p, h)?.riemann;
    let dr: [Rank4; 4] =
        fd::gradient(&p.coords, h, |c| Ok(riemann_numeric(profile, &p.with_coords(*c), h)?.riemann))?;
    Ok(CurvatureGradientAtPoint {
        nabla_riemann: covariant_derivative_of_riemann(&gamma, &riemann, &dr),
    })
}

/// Curvature by one finite-difference level on the analytic connection.
/// This is the working route in the u-chart, where no table exists.
pub fn riemann_semi_analytic(profile: &ScaleFactorProfile, p: &ChartPoint, h: f64) -> Result<CurvatureAtPoint> {
    fd::check_step(h)?;
    let metric = metric_at(profile, p)?;
    let gamma = christoffel_analytic(profile, p)?.gamma;
    let dgamma: [Rank3; 4] =
        fd::gradient(&p.coords, h, |c| Ok(christoffel_analytic(profile, &p.with_coords(*c))?.gamma))?;
    let riemann = riemann_from_connection(&gamma, &dgamma);
    let ricci = ricci_by_contraction(&riemann);
    Ok(CurvatureAtPoint {
        riemann,
        ricci,
        scalar: scalar_from_ricci(&metric, &ricci),
    })
}

/// Connection in any chart: closed table in the pole charts, analytic
/// metric derivatives in the u-chart.
pub fn connection(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<ConnectionAtPoint> {
    match p.chart {
        Chart::ModifiedU => christoffel_analytic(profile, p),
        _ => christoffel_closed(profile, p),
    }
}

pub fn curvature(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<CurvatureAtPoint> {
    match p.chart {
        Chart::ModifiedU => riemann_semi_analytic(profile, p, fd::DEFAULT_FIELD_STEP),
        _ => riemann_closed(profile, p),
    }
}

pub fn curvature_gradient(profile: &ScaleFactorProfile, p: &ChartPoint) -> Result<CurvatureGradientAtPoint> {
    match p.chart {
        Chart::ModifiedU => {
            let h = fd::DEFAULT_STEP;
            let gamma = christoffel_analytic(profile, p)?.gamma;
            let riemann = riemann_semi_analytic(profile, p, h)?.riemann;
            let dr: [Rank4; 4] = fd::gradient(&p.coords, h, |c| {
                Ok(riemann_semi_analytic(profile, &p.with_coords(*c), h)?.riemann)
            })?;
            Ok(CurvatureGradientAtPoint {
                nabla_riemann: covariant_derivative_of_riemann(&gamma, &riemann, &dr),
            })
        }
        _ => nabla_riemann_closed(profile, p),
    }
}

/// `max |Rˢᵢⱼₖ + Rˢᵢₖⱼ|`.
pub fn antisymmetry_residual(r: &Rank4) -> f64 {
    let mut worst: f64 = 0.0;
    for s in 0..DIM {
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    worst = worst.max((r[s][i][j][k] + r[s][i][k][j]).abs());
                }
            }
        }
    }
    worst
}

/// `max |Rˢᵢⱼₖ + Rˢₖᵢⱼ + Rˢⱼₖᵢ|`.
pub fn first_bianchi_residual(r: &Rank4) -> f64 {
    let mut worst: f64 = 0.0;
    for s in 0..DIM {
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    worst = worst.max((r[s][i][j][k] + r[s][k][i][j] + r[s][j][k][i]).abs());
                }
            }
        }
    }
    worst
}

/// `max |∇ₛRᵖ_qij + ∇ᵢRᵖ_qjs + ∇ⱼRᵖ_qsi|`.
pub fn second_bianchi_residual(n: &Rank5) -> f64 {
    let mut worst: f64 = 0.0;
    for s in 0..DIM {
        for p in 0..DIM {
            for q in 0..DIM {
                for i in 0..DIM {
                    for j in 0..DIM {
                        let v = n[s][p][q][i][j] + n[i][p][q][j][s] + n[j][p][q][s][i];
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
    }
    worst
}

pub fn identity_residuals(c: &CurvatureAtPoint) -> IdentityResiduals {
    let mut asym: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            asym = asym.max((c.ricci[i][j] - c.ricci[j][i]).abs());
        }
    }
    IdentityResiduals {
        antisymmetry: antisymmetry_residual(&c.riemann),
        first_bianchi: first_bianchi_residual(&c.riemann),
        ricci_asymmetry: asym,
    }
}

/// Fully lowered curvature `R_pqij = g_ps Rˢ_qij`.
pub fn lower_riemann(metric: &MetricAtPoint, r: &Rank4) -> Rank4 {
    let mut out: Rank4 = Linear::zero();
    for p in 0..DIM {
        for q in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    out[p][q][i][j] = (0..DIM).map(|s| metric.g[p][s] * r[s][q][i][j]).sum();
                }
            }
        }
    }
    out
}

/// `K (g_pi g_qj − g_pj g_qi)`.
pub fn constant_curvature_model(metric: &MetricAtPoint, k: f64) -> Rank4 {
    let g = &metric.g;
    let mut out: Rank4 = Linear::zero();
    for p in 0..DIM {
        for q in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    out[p][q][i][j] = k * (g[p][i] * g[q][j] - g[p][j] * g[q][i]);
                }
            }
        }
    }
    out
}

/// Least-squares sectional curvature `K` fitted to the lowered curvature.
pub fn fit_sectional_curvature(metric: &MetricAtPoint, r: &Rank4) -> f64 {
    let lowered = lower_riemann(metric, r);
    let model = constant_curvature_model(metric, 1.0);
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in lowered.iter().flatten().flatten().flatten().zip(model.iter().flatten().flatten().flatten()) {
        num += a * b;
        den += b * b;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::relative_deviation;

    fn constant(a: f64) -> ScaleFactorProfile {
        ScaleFactorProfile::constant(a).unwrap()
    }
    fn secant(a: f64) -> ScaleFactorProfile {
        ScaleFactorProfile::secant(a).unwrap()
    }
    fn expo() -> ScaleFactorProfile {
        ScaleFactorProfile::exponential(1.0, 1.0).unwrap()
    }

    #[test]
    fn christoffel_closed_examples() {
        let g = christoffel_closed(&constant(1.0), &ChartPoint::north([0.3, 0.5, 0.0, 0.0])).unwrap();
        assert!((g.gamma[1][1][1] + 0.8).abs() < 1e-15);
        assert!((g.gamma[2][1][2] + 0.8).abs() < 1e-15);
        assert_eq!(g.gamma[0][1][1], 0.0);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.gamma[0][i][j], 0.0);
                assert_eq!(g.gamma[i][0][j], 0.0);
            }
        }
        let g = christoffel_closed(&expo(), &ChartPoint::north([0.0; 4])).unwrap();
        assert_eq!(g.gamma[0][0][0], 1.0);
        assert_eq!(g.gamma[0][1][1], 4.0);
        assert_eq!(g.torsion(), 0.0);
        assert!(matches!(
            christoffel_closed(&secant(1.0), &ChartPoint::modified_u([0.0; 4])),
            Err(Error::ChartProfileMismatch(_))
        ));
    }

    #[test]
    fn christoffel_numeric_examples() {
        let p = ChartPoint::north([0.0, 0.5, 0.0, 0.0]);
        let g = christoffel_numeric(&constant(1.0), &p, 1e-5).unwrap();
        assert!((g.gamma[1][1][1] + 0.8).abs() < 1e-8);
        let g = christoffel_numeric(&secant(1.0), &ChartPoint::modified_u([0.0; 4]), 1e-5).unwrap();
        assert!(g.gamma[0][1][1].abs() < 1e-8);
        let g = christoffel_numeric(&expo(), &ChartPoint::north([0.0; 4]), 1e-5).unwrap();
        assert!((g.gamma[0][0][0] - 1.0).abs() < 1e-8);
        assert!(matches!(
            christoffel_numeric(&expo(), &p, 0.1),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn gamma_count_at_generic_point() {
        let g = christoffel_closed(&expo(), &ChartPoint::north([0.1, 0.2, 0.3, 0.4])).unwrap();
        // Γ⁰ has the four diagonal entries; each spatial Γᵏ has Γᵏ₀ₖ, Γᵏₖₖ,
        // two Γᵏᵢᵢ and two Γᵏᵢₖ.
        assert_eq!(g.nonzero_components(0.0).len(), 22);
        assert_eq!(g.nonzero_entry_count(0.0), 31);
    }

    #[test]
    fn riemann_closed_examples() {
        let c = riemann_closed(&constant(1.0), &ChartPoint::north([0.0; 4])).unwrap();
        assert_eq!(c.riemann[1][2][1][2], 4.0);
        assert_eq!(c.riemann[0][1][0][1], 0.0);
        let c = riemann_closed(&constant(2.0), &ChartPoint::north([0.3, 0.1, 0.7, -0.2])).unwrap();
        assert!((c.scalar + 1.5).abs() < 1e-14);
        for x0 in [-1.0, 0.0, 0.6] {
            let c = riemann_closed(&secant(1.0), &ChartPoint::north([x0, 0.2, 0.1, 0.0])).unwrap();
            assert!((c.scalar + 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ricci_examples() {
        let r = ricci(&constant(1.0), &ChartPoint::north([0.0; 4])).unwrap();
        assert_eq!(r[0][0], 0.0);
        assert_eq!(r[1][1], 8.0);
        let r = ricci(&expo(), &ChartPoint::north([0.0; 4])).unwrap();
        assert_eq!(r[0][0], 0.0);
        let r = ricci(&secant(1.0), &ChartPoint::north([0.0; 4])).unwrap();
        assert!((r[0][0] + 3.0).abs() < 1e-15);
    }

    #[test]
    fn ricci_table_agrees_with_contraction() {
        for profile in [constant(2.0), expo(), secant(1.0)] {
            let p = ChartPoint::north([0.4, -0.3, 0.6, 0.1]);
            let c = riemann_closed(&profile, &p).unwrap();
            let contracted = ricci_by_contraction(&c.riemann);
            assert!(relative_deviation(&contracted, &c.ricci) < 1e-12);
            let metric = metric_at(&profile, &p).unwrap();
            assert!((scalar_from_ricci(&metric, &contracted) - c.scalar).abs() < 1e-12 * c.scalar.abs().max(1.0));
        }
    }

    #[test]
    fn closed_forms_satisfy_identities_exactly() {
        for profile in [constant(2.0), expo(), secant(1.0)] {
            let p = ChartPoint::south([0.2, 0.5, -0.1, 0.3]);
            let c = riemann_closed(&profile, &p).unwrap();
            let res = identity_residuals(&c);
            assert_eq!(res.antisymmetry, 0.0);
            assert!(res.first_bianchi < 1e-14);
            assert_eq!(res.ricci_asymmetry, 0.0);
            let n = nabla_riemann_closed(&profile, &p).unwrap();
            assert!(second_bianchi_residual(&n.nabla_riemann) < 1e-12);
        }
    }

    #[test]
    fn curvature_gradient_examples() {
        let n = nabla_riemann_closed(&constant(3.0), &ChartPoint::north([0.1, 0.2, 0.3, 0.4])).unwrap();
        assert_eq!(n.nabla_riemann.max_abs(), 0.0);
        for x0 in [-0.9, 0.0, 0.5] {
            let n = nabla_riemann_closed(&secant(1.0), &ChartPoint::north([x0, 0.3, -0.2, 0.1])).unwrap();
            assert!(n.nabla_riemann.max_abs() < 1e-8);
        }
        let n = nabla_riemann_closed(&expo(), &ChartPoint::north([0.0; 4])).unwrap();
        assert_eq!(n.nabla_riemann[0][1][0][0][1], 0.0);
        assert_eq!(n.nabla_riemann[0][1][2][1][2], -16.0);
    }

    #[test]
    fn numeric_oracle_matches_closed_forms() {
        for profile in [constant(2.0), expo(), secant(1.0)] {
            let p = ChartPoint::north([0.35, 0.4, -0.25, 0.6]);
            let gc = christoffel_closed(&profile, &p).unwrap();
            let gn = christoffel_numeric(&profile, &p, fd::DEFAULT_STEP).unwrap();
            assert!(relative_deviation(&gc.gamma, &gn.gamma) < 1e-7);
            let rc = riemann_closed(&profile, &p).unwrap();
            let rn = riemann_numeric(&profile, &p, fd::DEFAULT_STEP).unwrap();
            assert!(relative_deviation(&rc.riemann, &rn.riemann) < 1e-6);
            assert!(relative_deviation(&rc.ricci, &rn.ricci) < 1e-6);
            assert!((rc.scalar - rn.scalar).abs() < 1e-6 * rc.scalar.abs().max(1.0));
            let nc = nabla_riemann_closed(&profile, &p).unwrap();
            let nn = nabla_riemann_numeric(&profile, &p, fd::DEFAULT_STEP).unwrap();
            let dev = relative_deviation(&nc.nabla_riemann, &nn.nabla_riemann);
            assert!(dev < 1e-6, "{profile}: {dev}");
        }
    }

    #[test]
    fn secant_has_constant_negative_curvature() {
        for a in [1.0, 2.0] {
            let profile = secant(a);
            let p = ChartPoint::north([0.7, 0.1, 0.5, -0.3]);
            let metric = metric_at(&profile, &p).unwrap();
            let c = riemann_closed(&profile, &p).unwrap();
            let lowered = lower_riemann(&metric, &c.riemann);
            let model = constant_curvature_model(&metric, -1.0 / (a * a));
            assert!(relative_deviation(&lowered, &model) < 1e-8);
            assert!((fit_sectional_curvature(&metric, &c.riemann) + 1.0 / (a * a)).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_connection_matches_table_and_u_chart_curvature_is_constant() {
        let p = ChartPoint::north([0.2, 0.3, -0.5, 0.1]);
        let a = christoffel_analytic(&expo(), &p).unwrap();
        let c = christoffel_closed(&expo(), &p).unwrap();
        assert!(relative_deviation(&a.gamma, &c.gamma) < 1e-14);

        let profile = secant(2.0);
        let u = ChartPoint::modified_u([0.4, 0.3, 0.2, -0.6]);
        let metric = metric_at(&profile, &u).unwrap();
        let cur = curvature(&profile, &u).unwrap();
        assert!((cur.scalar + 3.0).abs() < 1e-9, "{}", cur.scalar);
        let model = constant_curvature_model(&metric, -0.25);
        assert!(relative_deviation(&lower_riemann(&metric, &cur.riemann), &model) < 1e-9);
        assert!(curvature_gradient(&profile, &u).unwrap().nabla_riemann.max_abs() < 1e-7);
    }
}
