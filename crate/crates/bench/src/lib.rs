//! Deterministic inputs shared by the benchmarks.

use fredholm_core::{Complex64, MatrixElement, MonicMatrixPolynomial};

/// `count` points on a spiral from `r0` to `r1`, golden-angle spaced.
pub fn spiral_roots(count: usize, r0: f64, r1: f64) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let t = if count > 1 {
                i as f64 / (count - 1) as f64
            } else {
                0.0
            };
            Complex64::from_polar(r0 + (r1 - r0) * t, golden * i as f64)
        })
        .collect()
}

/// Scalar polynomial with half its roots inside the unit disc.
pub fn scalar_poly(degree: usize) -> MonicMatrixPolynomial {
    let inside = degree / 2;
    let mut roots = spiral_roots(inside, 0.3, 0.85);
    roots.extend(spiral_roots(degree - inside, 1.2, 2.0));
    MonicMatrixPolynomial::from_roots(&roots).expect("degree >= 1")
}

/// Degree `n` over `M_d(C)` with dense, well-scaled coefficients.
pub fn matrix_poly(n: usize, d: usize) -> MonicMatrixPolynomial {
    let coeffs = (0..n)
        .map(|k| {
            let entries: Vec<Complex64> = (0..d * d)
                .map(|j| {
                    let t = (k * d * d + j) as f64;
                    Complex64::new((1.3 * t).sin(), (0.7 * t + 0.4).cos()) / d as f64
                })
                .collect();
            MatrixElement::from_rows(d, &entries).expect("d * d entries")
        })
        .collect();
    MonicMatrixPolynomial::new(coeffs).expect("degree >= 1")
}
