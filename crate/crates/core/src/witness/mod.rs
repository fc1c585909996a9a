//! Singularity witnesses of monic matrix polynomials.
//!
//! Every monic `p` over `M_d(C)` has a point where `p(z)` is singular. The
//! witnesses are exactly the zeros of `det p(z)`, a scalar monic polynomial of
//! degree `n d`, and they are the eigenvalues of the block companion matrix.
//! Each eigenvalue is checked against the polynomial itself before it is
//! reported.

mod eigen;

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{is_invertible, MatrixElement, MonicMatrixPolynomial, NonMonicPencil};
use crate::error::{Error, Result};
use crate::serde_util;

pub use eigen::{eigenvalues, RESIDUAL_TOL};

/// Second companion form: identity blocks on the block superdiagonal,
/// `[-a_0, ..., -a_{n-1}]` in the bottom block row.
#[derive(Clone, Debug, PartialEq)]
pub struct CompanionMatrix {
    pub degree: usize,
    pub dim: usize,
    pub data: DMatrix<Complex64>,
}

impl CompanionMatrix {
    pub fn size(&self) -> usize {
        self.degree * self.dim
    }
}

pub fn companion_linearize(p: &MonicMatrixPolynomial) -> CompanionMatrix {
    let n = p.degree();
    let d = p.dim();
    let mut data = DMatrix::zeros(n * d, n * d);
    for i in 0..n.saturating_sub(1) {
        for r in 0..d {
            data[(i * d + r, (i + 1) * d + r)] = Complex64::new(1.0, 0.0);
        }
    }
    for (j, a) in p.coeffs().iter().enumerate() {
        data.view_mut(((n - 1) * d, j * d), (d, d))
            .copy_from(&(-a.matrix()));
    }
    CompanionMatrix {
        degree: n,
        dim: d,
        data,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(with = "serde_util::complex")]
    pub z: Complex64,
    /// `sigma_min(p(z))`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub count: usize,
    pub witnesses: Vec<Witness>,
}

/// Modulus first, then argument in `(-pi, pi]`.
pub(crate) fn by_modulus_then_arg(a: &Complex64, b: &Complex64) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| principal_arg(a).total_cmp(&principal_arg(b)))
}

fn principal_arg(z: &Complex64) -> f64 {
    let t = z.arg();
    // -0.0 imaginary parts land on -pi
    if t <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        t
    }
}

/// Every `z` with `det p(z) = 0`, repeated by multiplicity and verified
/// against `p`. An empty result is reported as [`Error::TheoremViolation`].
pub fn find_witnesses(p: &MonicMatrixPolynomial, tol: f64) -> Result<WitnessReport> {
    if !(tol > 0.0) {
        return Err(Error::invalid("find_witnesses", "tol must be positive"));
    }
    let companion = companion_linearize(p);
    let n = p.degree() as i32;
    let mut witnesses = Vec::new();
    for z in eigenvalues(&companion.data)? {
        let check = is_invertible(&p.evaluate(z), tol)?;
        if !check.invertible || check.sigma_min <= tol * (1.0 + z.norm()).powi(n) {
            witnesses.push(Witness {
                z,
                residual: check.sigma_min,
            });
        }
    }
    if witnesses.is_empty() {
        return Err(Error::TheoremViolation {
            degree: p.degree(),
            dim: p.dim(),
        });
    }
    witnesses.sort_by(|a, b| by_modulus_then_arg(&a.z, &b.z));
    Ok(WitnessReport {
        count: witnesses.len(),
        witnesses,
    })
}

/// Below this relative modulus an eigenvalue of `a` is treated as zero.
const ZERO_EIGENVALUE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonmonicScan {
    pub min_sigma: f64,
    #[serde(with = "serde_util::complex")]
    pub argmin: Complex64,
    #[serde(with = "serde_util::complex_vec")]
    pub det_values: Vec<Complex64>,
    /// `-1 / lambda` for each nonzero eigenvalue `lambda` of `a`.
    #[serde(with = "serde_util::complex_vec")]
    pub singular_points: Vec<Complex64>,
}

/// Scans `z a + I` over a grid. Singular points come from the spectrum of
/// `a`, not from the grid.
pub fn nonmonic_scan(pencil: &NonMonicPencil, grid: &[Complex64]) -> Result<NonmonicScan> {
    if grid.is_empty() {
        return Err(Error::invalid("nonmonic_scan", "grid must be nonempty"));
    }
    let mut min_sigma = f64::INFINITY;
    let mut argmin = grid[0];
    let mut det_values = Vec::with_capacity(grid.len());
    for &z in grid {
        let v: MatrixElement = pencil.evaluate(z);
        let s = v.sigma_min();
        if s < min_sigma {
            min_sigma = s;
            argmin = z;
        }
        det_values.push(v.determinant());
    }
    let scale = pencil.a.norm().max(1.0);
    let mut singular_points: Vec<Complex64> = eigenvalues(pencil.a.matrix())?
        .into_iter()
        .filter(|lambda| lambda.norm() > ZERO_EIGENVALUE_TOL * scale)
        .map(|lambda| -lambda.inv())
        .collect();
    singular_points.sort_by(by_modulus_then_arg);
    Ok(NonmonicScan {
        min_sigma,
        argmin,
        det_values,
        singular_points,
    })
}
