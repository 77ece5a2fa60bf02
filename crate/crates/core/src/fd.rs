//! Central finite differences.
//!
//! A single eighth-order central stencil is used everywhere. The numeric
//! curvature oracle differentiates the metric up to three times in nested
//! fashion, and each nesting level amplifies roundoff by roughly `1/h`; a high
//! order stencil lets `h` stay near `1e-2` while truncation error stays far
//! below roundoff.

use crate::error::{Error, Result};
use crate::tensor::Linear;

/// Largest admissible base step.
pub const MAX_STEP: f64 = 1e-2;

/// Default base step for the nested curvature oracle.
pub const DEFAULT_STEP: f64 = 5e-3;

/// Default base step for single-level derivatives (Killing residuals,
/// Jacobians of coordinate maps).
pub const DEFAULT_FIELD_STEP: f64 = 1e-3;

/// Stencil half-width: the derivative at `x` samples `x ± k h`, `k = 1..=4`.
pub const HALF_WIDTH: usize = 4;

const WEIGHTS: [f64; HALF_WIDTH] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

pub fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if h > MAX_STEP {
        return Err(Error::StepTooLarge { h, max: MAX_STEP });
    }
    Ok(())
}

/// Effective step along a coordinate: `h · max(1, |coordinate|)`.
pub fn scaled_step(h: f64, coordinate: f64) -> f64 {
    h * coordinate.abs().max(1.0)
}

/// Derivative at offset zero of `f(offset)`.
pub fn derivative<T, F>(h: f64, mut f: F) -> Result<T>
where
    T: Linear,
    F: FnMut(f64) -> Result<T>,
{
    let mut acc = T::zero();
    for (k, w) in WEIGHTS.iter().enumerate() {
        let dx = (k + 1) as f64 * h;
        let plus = f(dx)?;
        let minus = f(-dx)?;
        acc.axpy(w / h, &plus);
        acc.axpy(-w / h, &minus);
    }
    Ok(acc)
}

/// Gradient of `f` with respect to four coordinates: `out[i] = ∂f/∂xⁱ`.
pub fn gradient<T, F>(coords: &[f64; 4], h: f64, mut f: F) -> Result<[T; 4]>
where
    T: Linear,
    F: FnMut(&[f64; 4]) -> Result<T>,
{
    let mut out = [T::zero(); 4];
    for (axis, slot) in out.iter_mut().enumerate() {
        let step = scaled_step(h, coords[axis]);
        *slot = derivative(step, |dx| {
            let mut shifted = *coords;
            shifted[axis] += dx;
            f(&shifted)
        })?;
    }
    Ok(out)
}
