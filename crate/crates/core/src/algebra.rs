//! The concrete unital Banach algebra `M_d(C)` with the spectral norm, and
//! monic polynomials over it.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub type ComplexScalar = Complex64;

/// An element of `M_d(C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixElement(pub(crate) CMatrix);

impl MatrixElement {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::invalid(
                "MatrixElement::new",
                format!(
                    "expected a nonempty square matrix, got {}x{}",
                    m.nrows(),
                    m.ncols()
                ),
            ));
        }
        if !linalg::all_finite(&m) {
            return Err(Error::NonFinite {
                op: "MatrixElement::new",
            });
        }
        Ok(MatrixElement(m))
    }

    /// Row-major construction.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                op: "MatrixElement::from_rows",
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        MatrixElement(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        MatrixElement(DMatrix::zeros(dim, dim))
    }

    pub fn scalar(z: Complex64) -> Self {
        MatrixElement(DMatrix::from_element(1, 1, z))
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        MatrixElement(DMatrix::from_diagonal(
            &nalgebra::DVector::from_column_slice(diag),
        ))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn scale(&self, z: Complex64) -> Self {
        MatrixElement(&self.0 * z)
    }

    /// Spectral norm.
    pub fn norm(&self) -> f64 {
        algebra_norm(self)
    }

    pub fn sigma_min(&self) -> f64 {
        linalg::sigma_min(&self.0)
    }

    pub fn determinant(&self) -> Complex64 {
        linalg::determinant(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }
}

impl<'a> Add<&'a MatrixElement> for &'a MatrixElement {
    type Output = MatrixElement;
    fn add(self, rhs: &'a MatrixElement) -> MatrixElement {
        MatrixElement(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a MatrixElement> for &'a MatrixElement {
    type Output = MatrixElement;
    fn sub(self, rhs: &'a MatrixElement) -> MatrixElement {
        MatrixElement(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a MatrixElement> for &'a MatrixElement {
    type Output = MatrixElement;
    fn mul(self, rhs: &'a MatrixElement) -> MatrixElement {
        MatrixElement(&self.0 * &rhs.0)
    }
}

impl Neg for &MatrixElement {
    type Output = MatrixElement;
    fn neg(self) -> MatrixElement {
        MatrixElement(-&self.0)
    }
}

/// `p(z) = z^n I + a_{n-1} z^{n-1} + ... + a_0`; the identity leading
/// coefficient is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicMatrixPolynomial {
    dim: usize,
    coeffs: Vec<MatrixElement>,
}

impl MonicMatrixPolynomial {
    /// `coeffs[i]` is the coefficient of `z^i`, for `i < degree`.
    pub fn new(coeffs: Vec<MatrixElement>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| {
            Error::invalid("MonicMatrixPolynomial::new", "degree must be at least 1")
        })?;
        let dim = first.dim();
        if let Some(bad) = coeffs.iter().find(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch {
                op: "MonicMatrixPolynomial::new",
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(MonicMatrixPolynomial { dim, coeffs })
    }

    /// Scalar (`d = 1`) polynomial from its lower coefficients `c_0 .. c_{n-1}`.
    pub fn from_scalar_coeffs(coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.iter().any(|z| !linalg::is_finite(*z)) {
            return Err(Error::NonFinite {
                op: "MonicMatrixPolynomial::from_scalar_coeffs",
            });
        }
        Self::new(coeffs.iter().map(|&c| MatrixElement::scalar(c)).collect())
    }

    /// Scalar polynomial `prod (z - r_i)`.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let full = poly_from_roots(roots);
        Self::from_scalar_coeffs(&full[..full.len() - 1])
    }

    /// `z I - a`.
    pub fn linear(a: &MatrixElement) -> Self {
        MonicMatrixPolynomial {
            dim: a.dim(),
            coeffs: vec![-a],
        }
    }

    /// `z^m I` in dimension `dim`.
    pub fn monomial(m: usize, dim: usize) -> Result<Self> {
        Self::new(vec![MatrixElement::zeros(dim); m])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[MatrixElement] {
        &self.coeffs
    }

    /// For `d = 1`: all `n + 1` coefficients, ascending, leading 1 included.
    pub fn scalar_coeffs(&self) -> Option<Vec<Complex64>> {
        if self.dim != 1 {
            return None;
        }
        let mut out: Vec<Complex64> = self.coeffs.iter().map(|a| a.matrix()[(0, 0)]).collect();
        out.push(Complex64::new(1.0, 0.0));
        Some(out)
    }

    pub fn evaluate(&self, z: Complex64) -> MatrixElement {
        evaluate(self, z)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialDocument::from(self)).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolynomialDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        doc.try_into()
    }
}

/// `z a + I`, the non-monic pencil used to show that monicness matters.
#[derive(Clone, Debug, PartialEq)]
pub struct NonMonicPencil {
    pub a: MatrixElement,
}

impl NonMonicPencil {
    pub fn new(a: MatrixElement) -> Self {
        NonMonicPencil { a }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn evaluate(&self, z: Complex64) -> MatrixElement {
        &self.a.scale(z) + &MatrixElement::identity(self.dim())
    }
}

/// Horner evaluation of a monic matrix polynomial.
pub fn evaluate(p: &MonicMatrixPolynomial, z: Complex64) -> MatrixElement {
    let mut acc = DMatrix::<Complex64>::identity(p.dim, p.dim);
    for a in p.coeffs.iter().rev() {
        acc *= z;
        acc += &a.0;
    }
    MatrixElement(acc)
}

/// Spectral norm: submultiplicative, and `||I|| = 1`.
pub fn algebra_norm(a: &MatrixElement) -> f64 {
    linalg::spectral_norm(&a.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Invertibility {
    pub invertible: bool,
    pub sigma_min: f64,
}

/// Numerical invertibility: `sigma_min(a) > tol * max(1, ||a||)`.
pub fn is_invertible(a: &MatrixElement, tol: f64) -> Result<Invertibility> {
    if !(tol > 0.0) {
        return Err(Error::invalid("is_invertible", "tol must be positive"));
    }
    let sv = linalg::singular_values(&a.0);
    let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let norm = sv.iter().copied().fold(0.0, f64::max);
    Ok(Invertibility {
        invertible: sigma_min > tol * norm.max(1.0),
        sigma_min,
    })
}

/// The rescaled polynomial whose `z^i` coefficient is `eps^{n-i} a_i`.
pub fn scale_transform(p: &MonicMatrixPolynomial, eps: Complex64) -> MonicMatrixPolynomial {
    let n = p.degree();
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| a.scale(eps.powu((n - i) as u32)))
        .collect();
    MonicMatrixPolynomial { dim: p.dim, coeffs }
}

/// Ascending coefficients of `prod (z - r_i)`, leading 1 included.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= r * ci;
        }
        c = next;
    }
    c
}

type Cell = [f64; 2];

/// On-disk polynomial: `coeffs[i]` is the `dim x dim` coefficient of `z^i`
/// with cells written as `[re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub degree: usize,
    pub dim: usize,
    pub coeffs: Vec<Vec<Vec<Cell>>>,
}

/// On-disk matrix: same cell layout, no degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub dim: usize,
    pub matrix: Vec<Vec<Cell>>,
}

fn cells_of(a: &MatrixElement) -> Vec<Vec<Cell>> {
    let m = a.matrix();
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn element_from_cells(dim: usize, rows: &[Vec<Cell>]) -> Result<MatrixElement> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Format(format!("expected a {dim}x{dim} cell array")));
    }
    let entries: Vec<Complex64> = rows
        .iter()
        .flat_map(|r| r.iter().map(|c| Complex64::new(c[0], c[1])))
        .collect();
    MatrixElement::from_rows(dim, &entries)
}

impl From<&MonicMatrixPolynomial> for PolynomialDocument {
    fn from(p: &MonicMatrixPolynomial) -> Self {
        PolynomialDocument {
            degree: p.degree(),
            dim: p.dim(),
            coeffs: p.coeffs.iter().map(cells_of).collect(),
        }
    }
}

impl TryFrom<PolynomialDocument> for MonicMatrixPolynomial {
    type Error = Error;

    fn try_from(doc: PolynomialDocument) -> Result<Self> {
        if doc.dim == 0 {
            return Err(Error::Format("dim must be positive".into()));
        }
        if doc.coeffs.len() != doc.degree {
            return Err(Error::Format(format!(
                "degree {} but {} coefficients",
                doc.degree,
                doc.coeffs.len()
            )));
        }
        let coeffs = doc
            .coeffs
            .iter()
            .map(|rows| element_from_cells(doc.dim, rows))
            .collect::<Result<Vec<_>>>()?;
        MonicMatrixPolynomial::new(coeffs)
    }
}

impl From<&MatrixElement> for MatrixDocument {
    fn from(a: &MatrixElement) -> Self {
        MatrixDocument {
            dim: a.dim(),
            matrix: cells_of(a),
        }
    }
}

impl MatrixDocument {
    pub fn to_element(&self) -> Result<MatrixElement> {
        element_from_cells(self.dim, &self.matrix)
    }
}

/// Polynomial layout without `degree`: a single coefficient.
#[derive(Deserialize)]
struct SingleCoeffDocument {
    dim: usize,
    coeffs: Vec<Vec<Vec<Cell>>>,
}

/// Reads `{"dim", "matrix"}`, or `{"dim", "coeffs": [m]}` with one cell array.
pub fn matrix_from_json(text: &str) -> Result<MatrixElement> {
    if let Ok(doc) = serde_json::from_str::<MatrixDocument>(text) {
        return doc.to_element();
    }
    let doc: SingleCoeffDocument =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    match doc.coeffs.as_slice() {
        [m] => element_from_cells(doc.dim, m),
        other => Err(Error::Format(format!(
            "expected one matrix in coeffs, found {}",
            other.len()
        ))),
    }
}
