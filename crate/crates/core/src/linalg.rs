//! Small dense helpers shared by the modules: singular values, determinants
//! and overflow-safe norms.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) type CMatrix = DMatrix<Complex64>;

/// All singular values, in no particular order.
pub(crate) fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    if m.nrows() == 1 && m.ncols() == 1 {
        return vec![m[(0, 0)].norm()];
    }
    m.clone().singular_values().iter().copied().collect()
}

pub(crate) fn sigma_min(m: &CMatrix) -> f64 {
    singular_values(m).into_iter().fold(f64::INFINITY, f64::min)
}

pub(crate) fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Determinant through LU with partial pivoting.
pub(crate) fn determinant(m: &CMatrix) -> Complex64 {
    if m.nrows() == 1 {
        return m[(0, 0)];
    }
    m.clone().lu().determinant()
}

/// Euclidean norm computed with scaling so that entries near the bottom of
/// the floating-point range do not underflow when squared.
pub(crate) fn robust_norm<'a>(xs: impl IntoIterator<Item = &'a Complex64> + Clone) -> f64 {
    let scale = xs
        .clone()
        .into_iter()
        .fold(0.0f64, |acc, z| acc.max(z.re.abs()).max(z.im.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let sum: f64 = xs
        .into_iter()
        .map(|z| {
            let re = z.re / scale;
            let im = z.im / scale;
            re * re + im * im
        })
        .sum();
    scale * sum.sqrt()
}

pub(crate) fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
