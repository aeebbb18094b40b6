//! Fixed-size real linear algebra used throughout the crate.

use nalgebra::{Matrix4, Vector4};

/// Real 4×4 matrix: Majorana matrices, Γ elements, group elements, kernels.
pub type RealMatrix4 = Matrix4<f64>;

/// Real 4-component column: a Majorana spinor at one point or mode.
pub type Spinor4 = Vector4<f64>;

pub fn from_rows(rows: [[f64; 4]; 4]) -> RealMatrix4 {
    RealMatrix4::from_fn(|i, j| rows[i][j])
}

pub fn max_abs(m: &RealMatrix4) -> f64 {
    m.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
}

pub fn frobenius_distance(a: &RealMatrix4, b: &RealMatrix4) -> f64 {
    (a - b).norm()
}

/// `tr(Aᵀ B)`, the Gram inner product on the matrix algebra.
pub fn gram(a: &RealMatrix4, b: &RealMatrix4) -> f64 {
    a.component_mul(b).sum()
}

pub fn is_orthogonal(m: &RealMatrix4, tol: f64) -> bool {
    max_abs(&(m.transpose() * m - RealMatrix4::identity())) <= tol
}

/// Flips the overall sign so the first entry (row-major) with magnitude
/// above `1e-12` is positive.
pub fn pin_sign(m: &RealMatrix4) -> RealMatrix4 {
    for i in 0..4 {
        for j in 0..4 {
            let v = m[(i, j)];
            if v.abs() > 1e-12 {
                return if v < 0.0 { -m } else { *m };
            }
        }
    }
    *m
}

pub fn all_finite(m: &RealMatrix4) -> bool {
    m.iter().all(|x| x.is_finite())
}
