//! Scale-factor profiles `R(x⁰)` and the exceptional-case analysis.
//!
//! A profile is immutable after construction and evaluates `R` together with
//! its first three derivatives in the `x⁰` gauge, where `R dx⁰ = c dt`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance for [`classify_case`] on analytic profiles.
pub const ANALYTIC_CLASSIFY_TOL: f64 = 1e-10;

/// Default tolerance for [`classify_case`] on spline profiles, whose third
/// derivative is only piecewise constant.
pub const SPLINE_CLASSIFY_TOL: f64 = 1e-6;

/// `R` and its derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl Derivatives {
    /// `2(R′)² − R″R + R²`: vanishes exactly in the constant-curvature case.
    pub fn constant_curvature_residual(&self) -> f64 {
        2.0 * self.r1 * self.r1 - self.r2 * self.r + self.r * self.r
    }

    /// `4(R′)³ − 5R″R′R + R‴R²`.
    pub fn cubic_coefficient(&self) -> f64 {
        4.0 * self.r1.powi(3) - 5.0 * self.r2 * self.r1 * self.r + self.r3 * self.r * self.r
    }
}

/// Natural cubic spline through `(x⁰, R)` knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    second: Vec<f64>,
    source: Option<PathBuf>,
}

impl CubicSpline {
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 3 {
            return Err(Error::InvalidProfile(format!(
                "a spline profile needs at least 3 knots, got {}",
                knots.len()
            )));
        }
        let xs: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let ys: Vec<f64> = knots.iter().map(|k| k.1).collect();
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite knot".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(
                "knot abscissae must be strictly increasing".into(),
            ));
        }
        let second = natural_second_derivatives(&xs, &ys);
        let spline = CubicSpline {
            xs,
            ys,
            second,
            source: None,
        };
        // R > 0 on the whole domain, not only at the knots.
        for i in 0..spline.xs.len() - 1 {
            for s in 0..=32 {
                let x = spline.xs[i] + (spline.xs[i + 1] - spline.xs[i]) * s as f64 / 32.0;
                if spline.eval(x).r <= 0.0 {
                    return Err(Error::InvalidProfile(format!(
                        "spline scale factor is not positive near x0 = {x}"
                    )));
                }
            }
        }
        Ok(spline)
    }

    /// Reads knots from a CSV file with columns `x0,R` (header optional).
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut knots = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if record.len() < 2 {
                return Err(Error::Parse(format!(
                    "{}:{}: expected two columns x0,R",
                    path.display(),
                    line + 1
                )));
            }
            let (a, b) = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match (a, b) {
                (Ok(x), Ok(r)) => knots.push((x, r)),
                // header row
                _ if line == 0 => continue,
                _ => {
                    return Err(Error::Parse(format!(
                        "{}:{}: bad number",
                        path.display(),
                        line + 1
                    )))
                }
            }
        }
        let mut spline = CubicSpline::new(&knots)?;
        spline.source = Some(path.to_path_buf());
        Ok(spline)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn eval(&self, x: f64) -> Derivatives {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        Derivatives {
            r: a * y0 + b * y1 + ((a.powi(3) - a) * m0 + (b.powi(3) - b) * m1) * h * h / 6.0,
            r1: (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0
                + (3.0 * b * b - 1.0) / 6.0 * h * m1,
            r2: a * m0 + b * m1,
            r3: (m1 - m0) / h,
        }
    }
}

fn natural_second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    // Thomas algorithm on the interior equations.
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        let lower = h0 / 6.0;
        let diag = (h0 + h1) / 3.0;
        let upper = h1 / 6.0;
        let rhs = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
        let denom = diag - lower * c_prime[i - 1];
        c_prime[i] = upper / denom;
        d_prime[i] = (rhs - lower * d_prime[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// `R = a`.
    Constant { a: f64 },
    /// `R = a / cos(x⁰)` on `(−π/2, π/2)`.
    Secant { a: f64 },
    /// `R = a·exp(k x⁰)`.
    Exponential { a: f64, k: f64 },
    TableSpline(CubicSpline),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleFactorProfile {
    kind: ProfileKind,
    light_speed: f64,
}

fn check_length(name: &str, a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidProfile(format!(
            "{name} must be positive and finite, got {a}"
        )))
    }
}

impl ScaleFactorProfile {
    pub fn constant(a: f64) -> Result<Self> {
        check_length("a", a)?;
        Ok(Self::from_kind(ProfileKind::Constant { a }))
    }

    pub fn secant(a: f64) -> Result<Self> {
        check_length("a", a)?;
        Ok(Self::from_kind(ProfileKind::Secant { a }))
    }

    pub fn exponential(a: f64, k: f64) -> Result<Self> {
        check_length("a", a)?;
        if !k.is_finite() {
            return Err(Error::InvalidProfile(format!("rate k must be finite, got {k}")));
        }
        Ok(Self::from_kind(ProfileKind::Exponential { a, k }))
    }

    pub fn table(spline: CubicSpline) -> Self {
        Self::from_kind(ProfileKind::TableSpline(spline))
    }

    fn from_kind(kind: ProfileKind) -> Self {
        ScaleFactorProfile {
            kind,
            light_speed: 1.0,
        }
    }

    pub fn with_light_speed(mut self, c: f64) -> Result<Self> {
        check_length("c", c)?;
        self.light_speed = c;
        Ok(self)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    /// The radius `a` of the secant profile, if this is one.
    pub fn secant_radius(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::Secant { a } => Some(a),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, ProfileKind::Constant { .. })
    }

    pub fn is_spline(&self) -> bool {
        matches!(self.kind, ProfileKind::TableSpline(_))
    }

    /// Closed domain bounds; the secant domain is open at both ends.
    pub fn domain(&self) -> (f64, f64) {
        match &self.kind {
            ProfileKind::Constant { .. } | ProfileKind::Exponential { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            ProfileKind::Secant { .. } => (-FRAC_PI_2, FRAC_PI_2),
            ProfileKind::TableSpline(s) => s.domain(),
        }
    }

    pub fn contains(&self, x0: f64) -> bool {
        if !x0.is_finite() {
            return false;
        }
        let (lo, hi) = self.domain();
        match self.kind {
            ProfileKind::Secant { .. } => x0 > lo && x0 < hi,
            _ => x0 >= lo && x0 <= hi,
        }
    }

    /// Interval used for pseudo-random sampling of `x⁰`: well inside the
    /// domain so finite-difference stencils never reach its boundary.
    pub fn safe_interval(&self) -> (f64, f64) {
        match &self.kind {
            ProfileKind::TableSpline(s) => {
                let (lo, hi) = s.domain();
                let margin = 0.1 * (hi - lo);
                (lo + margin, hi - margin)
            }
            _ => (-1.0, 1.0),
        }
    }

    pub fn check(&self, x0: f64) -> Result<()> {
        if self.contains(x0) {
            Ok(())
        } else {
            let (lo, hi) = self.domain();
            let domain = match self.kind {
                ProfileKind::Secant { .. } => format!("({lo}, {hi})"),
                _ => format!("[{lo}, {hi}]"),
            };
            Err(Error::Domain { x0, domain })
        }
    }

    pub fn derivatives(&self, x0: f64) -> Result<Derivatives> {
        self.check(x0)?;
        Ok(match &self.kind {
            ProfileKind::Constant { a } => Derivatives {
                r: *a,
                r1: 0.0,
                r2: 0.0,
                r3: 0.0,
            },
            ProfileKind::Secant { a } => {
                let sec = 1.0 / x0.cos();
                let tan = x0.tan();
                Derivatives {
                    r: a * sec,
                    r1: a * sec * tan,
                    r2: a * sec * (2.0 * sec * sec - 1.0),
                    r3: a * sec * tan * (6.0 * sec * sec - 1.0),
                }
            }
            ProfileKind::Exponential { a, k } => {
                let e = a * (k * x0).exp();
                Derivatives {
                    r: e,
                    r1: k * e,
                    r2: k * k * e,
                    r3: k * k * k * e,
                }
            }
            ProfileKind::TableSpline(s) => s.eval(x0),
        })
    }

    /// `dⁿR/d(x⁰)ⁿ` for `n ≤ 3`.
    pub fn eval_r(&self, x0: f64, order: usize) -> Result<f64> {
        let d = self.derivatives(x0)?;
        match order {
            0 => Ok(d.r),
            1 => Ok(d.r1),
            2 => Ok(d.r2),
            3 => Ok(d.r3),
            n => Err(Error::InvalidArgument(format!(
                "derivative order {n} exceeds 3"
            ))),
        }
    }

    pub fn default_classify_tol(&self) -> f64 {
        if self.is_spline() {
            SPLINE_CLASSIFY_TOL
        } else {
            ANALYTIC_CLASSIFY_TOL
        }
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for ScaleFactorProfile {
    /// Canonical short form, e.g. `secant:1` or `exponential:1,1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ProfileKind::Constant { a } => write!(f, "constant:{}", fmt_num(*a))?,
            ProfileKind::Secant { a } => write!(f, "secant:{}", fmt_num(*a))?,
            ProfileKind::Exponential { a, k } => {
                write!(f, "exponential:{},{}", fmt_num(*a), fmt_num(*k))?
            }
            ProfileKind::TableSpline(s) => match &s.source {
                Some(p) => write!(f, "table:{}", p.display())?,
                None => write!(f, "table:<{} knots>", s.xs.len())?,
            },
        }
        if self.light_speed != 1.0 {
            write!(f, ";c={}", fmt_num(self.light_speed))?;
        }
        Ok(())
    }
}

fn parse_num(key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{key}: expected a number, got '{s}'")))
}

impl FromStr for ScaleFactorProfile {
    type Err = Error;

    /// Accepts either the short form (`secant:1`, `constant:2`,
    /// `exponential:1,1`, `table:knots.csv`) or the config form
    /// (`kind=secant a=1.0`, `kind=table file=knots.csv`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('=') {
            parse_config_form(s)
        } else {
            parse_short_form(s)
        }
    }
}

fn parse_short_form(s: &str) -> Result<ScaleFactorProfile> {
    let (kind, args) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("profile '{s}': expected kind:params")))?;
    let nums = || -> Result<Vec<f64>> { args.split(',').map(|v| parse_num(kind, v)).collect() };
    match kind.trim().to_ascii_lowercase().as_str() {
        "constant" => match nums()?.as_slice() {
            [a] => ScaleFactorProfile::constant(*a),
            _ => Err(Error::Parse("constant:<a>".into())),
        },
        "secant" => match nums()?.as_slice() {
            [a] => ScaleFactorProfile::secant(*a),
            _ => Err(Error::Parse("secant:<a>".into())),
        },
        "exponential" | "exp" => match nums()?.as_slice() {
            [a, k] => ScaleFactorProfile::exponential(*a, *k),
            _ => Err(Error::Parse("exponential:<a>,<k>".into())),
        },
        "table" => Ok(ScaleFactorProfile::table(CubicSpline::from_csv(Path::new(
            args.trim(),
        ))?)),
        other => Err(Error::Parse(format!("unknown profile kind '{other}'"))),
    }
}

fn parse_config_form(s: &str) -> Result<ScaleFactorProfile> {
    let mut kind = None;
    let (mut a, mut k, mut c, mut file) = (None, None, None, None);
    for token in s.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{token}'")))?;
        match key {
            "kind" => kind = Some(value.to_ascii_lowercase()),
            "a" => a = Some(parse_num(key, value)?),
            "k" => k = Some(parse_num(key, value)?),
            "c" => c = Some(parse_num(key, value)?),
            "file" => file = Some(PathBuf::from(value)),
            other => return Err(Error::Parse(format!("unknown profile key '{other}'"))),
        }
    }
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::Parse(format!("profile is missing '{name}='")))
    };
    let profile = match kind.as_deref() {
        Some("constant") => ScaleFactorProfile::constant(need(a, "a")?)?,
        Some("secant") => ScaleFactorProfile::secant(need(a, "a")?)?,
        Some("exponential") | Some("exp") => {
            ScaleFactorProfile::exponential(need(a, "a")?, need(k, "k")?)?
        }
        Some("table") => {
            let file = file.ok_or_else(|| Error::Parse("profile is missing 'file='".into()))?;
            ScaleFactorProfile::table(CubicSpline::from_csv(&file)?)
        }
        Some(other) => return Err(Error::Parse(format!("unknown profile kind '{other}'"))),
        None => return Err(Error::Parse("profile is missing 'kind='".into())),
    };
    match c {
        Some(c) => profile.with_light_speed(c),
        None => Ok(profile),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// `R′ = 0`: a static universe with a global time-like Killing field.
    Static,
    /// `2(R′)² − R″R + R² = 0`: constant negative sectional curvature.
    ConstantCurvature,
    Generic,
    /// Both tests passed at the requested tolerance; left undecided.
    AmbiguousDegenerate,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseLabel::Static => "Static",
            CaseLabel::ConstantCurvature => "ConstantCurvature",
            CaseLabel::Generic => "Generic",
            CaseLabel::AmbiguousDegenerate => "AmbiguousDegenerate",
        };
        f.write_str(s)
    }
}

pub fn classify_case(profile: &ScaleFactorProfile, sample_x0s: &[f64], tol: f64) -> Result<CaseLabel> {
    if sample_x0s.is_empty() {
        return Err(Error::InvalidArgument(
            "classify_case needs at least one sample".into(),
        ));
    }
    let mut is_static = true;
    let mut is_cc = true;
    for &x0 in sample_x0s {
        let d = profile.derivatives(x0)?;
        is_static &= d.r1.abs() <= tol * d.r.abs();
        is_cc &= d.constant_curvature_residual().abs() <= tol * d.r * d.r;
    }
    Ok(match (is_static, is_cc) {
        (true, true) => CaseLabel::AmbiguousDegenerate,
        (true, false) => CaseLabel::Static,
        (false, true) => CaseLabel::ConstantCurvature,
        (false, false) => CaseLabel::Generic,
    })
}

/// `2(R′)² − R″R + R²` at `x0`.
pub fn constant_curvature_residual(profile: &ScaleFactorProfile, x0: f64) -> Result<f64> {
    Ok(profile.derivatives(x0)?.constant_curvature_residual())
}

/// `(R′)² − C·R⁴ + R²`: zero iff the profile satisfies the first integral
/// with constant `C`. Any `C` is accepted; admissible solutions have `C > 0`.
pub fn first_integral_residual(profile: &ScaleFactorProfile, x0: f64, c: f64) -> Result<f64> {
    let d = profile.derivatives(x0)?;
    Ok(d.r1 * d.r1 - c * d.r.powi(4) + d.r * d.r)
}

fn check_secant_domain(x0: f64) -> Result<()> {
    if x0.is_finite() && x0.abs() < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::Domain {
            x0,
            domain: format!("({}, {})", -FRAC_PI_2, FRAC_PI_2),
        })
    }
}

/// Solution `R = a / cos(x⁰)` of the constant-curvature equation. The
/// integration constant that shifts `x⁰` is fixed to zero; any other value is
/// a translation of the time coordinate.
pub fn secant_solution(a: f64, x0: f64) -> Result<f64> {
    check_length("a", a)?;
    check_secant_domain(x0)?;
    Ok(a / x0.cos())
}

/// `t = (a/c)·ln((1 + sin x⁰)/cos x⁰)` for the secant profile.
pub fn time_from_x0(a: f64, c: f64, x0: f64) -> Result<f64> {
    check_length("a", a)?;
    check_length("c", c)?;
    check_secant_domain(x0)?;
    // ln((1+sin)/cos) = asinh(tan x0), which stays accurate near x0 = 0.
    Ok(a / c * x0.tan().asinh())
}

/// Inverse of [`time_from_x0`]: `x⁰ = arcsin(tanh(ct/a))`.
pub fn x0_from_time(a: f64, c: f64, t: f64) -> Result<f64> {
    check_length("a", a)?;
    check_length("c", c)?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    // arcsin(tanh(s)) = atan(sinh(s)), which avoids tanh saturating at 1.
    Ok((c * t / a).sinh().atan())
}

/// `R(t) = a·cosh(ct/a)` for the secant profile.
pub fn scale_factor_at_time(a: f64, c: f64, t: f64) -> Result<f64> {
    check_length("a", a)?;
    check_length("c", c)?;
    Ok(a * (c * t / a).cosh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn eval_r_examples() {
        let c = ScaleFactorProfile::constant(2.0).unwrap();
        assert_eq!(c.eval_r(0.7, 1).unwrap(), 0.0);
        let s = ScaleFactorProfile::secant(1.0).unwrap();
        assert!((s.eval_r(0.0, 2).unwrap() - 1.0).abs() < 1e-15);
        let e = ScaleFactorProfile::exponential(1.0, 1.0).unwrap();
        assert_eq!(e.eval_r(0.0, 3).unwrap(), 1.0);
        assert!(e.eval_r(0.0, 4).is_err());
    }

    #[test]
    fn secant_domain_is_open() {
        let s = ScaleFactorProfile::secant(1.0).unwrap();
        assert!(matches!(s.eval_r(FRAC_PI_2, 0), Err(Error::Domain { .. })));
        assert!(matches!(s.eval_r(-2.0, 0), Err(Error::Domain { .. })));
        assert!(s.eval_r(1.5, 0).is_ok());
    }

    #[test]
    fn secant_derivatives_match_finite_differences() {
        let s = ScaleFactorProfile::secant(1.3).unwrap();
        for &x0 in &[-1.0, -0.2, 0.0, 0.4, 1.1] {
            for order in 0..3 {
                let fd = crate::fd::derivative(1e-3, |dx| s.eval_r(x0 + dx, order)).unwrap();
                let exact = s.eval_r(x0, order + 1).unwrap();
                assert!((fd - exact).abs() < 1e-9 * exact.abs().max(1.0), "{x0} {order}");
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = ScaleFactorProfile::constant(2.0).unwrap();
        assert_eq!(classify_case(&c, &[0.0, 0.5, 1.0], 1e-12).unwrap(), CaseLabel::Static);
        let s = ScaleFactorProfile::secant(1.0).unwrap();
        assert_eq!(
            classify_case(&s, &[0.0, 0.3, 1.2], 1e-10).unwrap(),
            CaseLabel::ConstantCurvature
        );
        let e = ScaleFactorProfile::exponential(1.0, 1.0).unwrap();
        assert_eq!(classify_case(&e, &[0.0, 0.5], 1e-10).unwrap(), CaseLabel::Generic);
        assert!(classify_case(&e, &[], 1e-10).is_err());
    }

    #[test]
    fn first_integral_examples() {
        let s = ScaleFactorProfile::secant(1.0).unwrap();
        assert!(first_integral_residual(&s, 0.4, 1.0).unwrap().abs() < 1e-12);
        let c = ScaleFactorProfile::constant(1.0).unwrap();
        assert_eq!(first_integral_residual(&c, 0.0, 1.0).unwrap(), 0.0);
        let e = ScaleFactorProfile::exponential(1.0, 1.0).unwrap();
        assert_eq!(first_integral_residual(&e, 0.0, 1.0).unwrap(), 1.0);
        // negative C is accepted and simply fails the identity
        assert!(first_integral_residual(&s, 0.4, -1.0).unwrap() > 1.0);
    }

    #[test]
    fn secant_solution_examples() {
        assert_eq!(secant_solution(1.0, 0.0).unwrap(), 1.0);
        assert!((secant_solution(2.0, PI / 3.0).unwrap() - 4.0).abs() < 1e-14);
        let mut last = 0.0;
        for k in 1..8 {
            let x0 = FRAC_PI_2 - 10f64.powi(-k);
            let r = secant_solution(1.0, x0).unwrap();
            assert!(r.is_finite() && r > last);
            last = r;
        }
        assert!(matches!(secant_solution(1.0, FRAC_PI_2), Err(Error::Domain { .. })));
    }

    #[test]
    fn time_transform_examples() {
        assert_eq!(time_from_x0(1.0, 1.0, 0.0).unwrap(), 0.0);
        let t = time_from_x0(1.0, 1.0, PI / 3.0).unwrap();
        assert!((t - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-14);
        assert!((t.tanh() - 3f64.sqrt() / 2.0).abs() < 1e-14);
        let r = scale_factor_at_time(1.0, 1.0, (2.0 + 3f64.sqrt()).ln()).unwrap();
        assert!((r - 2.0).abs() < 1e-14);
        assert!((r - secant_solution(1.0, PI / 3.0).unwrap()).abs() < 1e-13);
        assert!(time_from_x0(1.0, 1.0, -FRAC_PI_2).is_err());
    }

    #[test]
    fn spline_reproduces_cubic_interior_and_is_positive() {
        let knots: Vec<(f64, f64)> = (0..21)
            .map(|i| {
                let x = -1.0 + 0.1 * i as f64;
                (x, 2.0 + 0.5 * x * x)
            })
            .collect();
        let p = ScaleFactorProfile::table(CubicSpline::new(&knots).unwrap());
        let d = p.derivatives(0.05).unwrap();
        assert!((d.r - (2.0 + 0.5 * 0.0025)).abs() < 1e-4);
        assert!((d.r1 - 0.05).abs() < 1e-3);
        assert!((d.r2 - 1.0).abs() < 1e-2);
        assert!(p.eval_r(1.5, 0).is_err());
        assert_eq!(p.default_classify_tol(), SPLINE_CLASSIFY_TOL);

        let bad = CubicSpline::new(&[(0.0, 1.0), (1.0, -1.0), (2.0, 1.0)]);
        assert!(bad.is_err());
    }

    #[test]
    fn parse_both_forms() {
        let p: ScaleFactorProfile = "secant:1".parse().unwrap();
        assert_eq!(p, ScaleFactorProfile::secant(1.0).unwrap());
        let p: ScaleFactorProfile = "kind=constant a=2.0".parse().unwrap();
        assert_eq!(p, ScaleFactorProfile::constant(2.0).unwrap());
        let p: ScaleFactorProfile = "exponential:1,1".parse().unwrap();
        assert_eq!(p.to_string(), "exponential:1,1");
        let p: ScaleFactorProfile = "kind=secant a=1.0 c=3".parse().unwrap();
        assert_eq!(p.light_speed(), 3.0);
        assert!("secant:-1".parse::<ScaleFactorProfile>().is_err());
        assert!("kind=secant b=1".parse::<ScaleFactorProfile>().is_err());
        assert!("bogus:1".parse::<ScaleFactorProfile>().is_err());
    }

    #[test]
    fn table_profile_from_csv() {
        let dir = std::env::temp_dir().join(format!("frw-knots-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("knots.csv");
        let mut text = String::from("x0,R\n");
        for i in 0..11 {
            let x = -1.0 + 0.2 * i as f64;
            text.push_str(&format!("{x},{}\n", 1.0 + x * x));
        }
        std::fs::write(&path, text).unwrap();
        let spec = format!("kind=table file={}", path.display());
        let p: ScaleFactorProfile = spec.parse().unwrap();
        assert!(p.is_spline());
        assert!((p.eval_r(0.0, 0).unwrap() - 1.0).abs() < 1e-2);
        assert_eq!(p.domain(), (-1.0, 1.0));
    }
}
