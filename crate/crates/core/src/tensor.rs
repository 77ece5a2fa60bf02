//! Dense component arrays for four-dimensional tensors at a point.
//!
//! All tensors are stored as nested fixed-size arrays indexed in the order
//! the components are written: `gamma[k][i][j]` is Γᵏᵢⱼ, `riemann[p][q][i][j]`
//! is Rᵖ_qij and `nabla[s][p][q][i][j]` is ∇ₛRᵖ_qij.

pub const DIM: usize = 4;

pub type Vec4 = [f64; DIM];
pub type Mat4 = [[f64; DIM]; DIM];
pub type Rank3 = [[[f64; DIM]; DIM]; DIM];
pub type Rank4 = [[[[f64; DIM]; DIM]; DIM]; DIM];
pub type Rank5 = [[[[[f64; DIM]; DIM]; DIM]; DIM]; DIM];

/// Values that form a real vector space, so they can be combined by
/// finite-difference stencils and compared componentwise.
pub trait Linear: Copy {
    fn zero() -> Self;
    fn axpy(&mut self, s: f64, x: &Self);
    fn max_abs(&self) -> f64;
    /// Largest componentwise absolute difference.
    fn max_abs_diff(&self, other: &Self) -> f64;
}

impl Linear for f64 {
    fn zero() -> Self {
        0.0
    }

    fn axpy(&mut self, s: f64, x: &Self) {
        *self += s * x;
    }

    fn max_abs(&self) -> f64 {
        self.abs()
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

impl<T: Linear, const N: usize> Linear for [T; N] {
    fn zero() -> Self {
        [T::zero(); N]
    }

    fn axpy(&mut self, s: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x.iter()) {
            a.axpy(s, b);
        }
    }

    fn max_abs(&self) -> f64 {
        self.iter().map(Linear::max_abs).fold(0.0, f64::max)
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Componentwise deviation relative to the larger of the two tensor scales
/// (with a floor of 1, so vanishing tensors are compared absolutely).
pub fn relative_deviation<T: Linear>(a: &T, b: &T) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    a.max_abs_diff(b) / scale
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = (0..DIM).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut out = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn identity() -> Mat4 {
    let mut out = [[0.0; DIM]; DIM];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    out
}

pub fn diag(d: Vec4) -> Mat4 {
    let mut out = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        out[i][i] = d[i];
    }
    out
}

pub fn mat_vec(a: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        out[i] = (0..DIM).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

pub fn quadratic_form(g: &Mat4, v: &Vec4) -> f64 {
    (0..DIM)
        .map(|i| (0..DIM).map(|j| g[i][j] * v[i] * v[j]).sum::<f64>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_arrays_are_linear() {
        let mut a: Rank3 = Linear::zero();
        let mut b: Rank3 = Linear::zero();
        b[1][2][3] = 2.0;
        a.axpy(-1.5, &b);
        assert_eq!(a[1][2][3], -3.0);
        assert_eq!(a.max_abs(), 3.0);
        assert_eq!(a.max_abs_diff(&b), 5.0);
    }

    #[test]
    fn relative_deviation_has_unit_floor() {
        let a = [1e-9, 0.0];
        let b = [0.0, 0.0];
        assert_eq!(relative_deviation(&a, &b), 1e-9);
        let c = [100.0, 0.0];
        let d = [100.0, 1.0];
        assert!((relative_deviation(&c, &d) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn matrix_helpers() {
        let a = diag([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(mat_mul(&a, &identity()), a);
        assert_eq!(transpose(&a), a);
        assert_eq!(mat_vec(&a, &[1.0; 4]), [1.0, 2.0, 3.0, 4.0]);
        assert_eq!(quadratic_form(&a, &[1.0; 4]), 10.0);
    }
}
