//! Shift operators on finitely supported sequences in `l^1(A)`, their banded
//! block-Toeplitz truncations, and the isometry-perturbation lower bound.

use std::fmt::{self, Write as _};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{algebra_norm, MatrixElement, MonicMatrixPolynomial};
use crate::error::{Error, Result};

/// A finitely supported sequence `(a_0, a_1, ...)` of algebra elements.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSequence {
    dim: usize,
    items: Vec<MatrixElement>,
}

impl FiniteSequence {
    pub fn new(dim: usize, items: Vec<MatrixElement>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid(
                "FiniteSequence::new",
                "dim must be positive",
            ));
        }
        if let Some(bad) = items.iter().find(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch {
                op: "FiniteSequence::new",
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(FiniteSequence { dim, items })
    }

    /// `e_j`: the identity in slot `j`, zeros before it.
    pub fn basis(dim: usize, j: usize) -> Self {
        let mut items = vec![MatrixElement::zeros(dim); j];
        items.push(MatrixElement::identity(dim));
        FiniteSequence { dim, items }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[MatrixElement] {
        &self.items
    }

    /// `sum_i ||a_i||` with the algebra norm.
    pub fn l1_norm(&self) -> f64 {
        self.items.iter().map(algebra_norm).sum()
    }

    /// Euclidean norm of the stacked coordinates.
    pub fn l2_norm(&self) -> f64 {
        self.items
            .iter()
            .map(|a| a.matrix().norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// The items stacked into a `(len * d) x d` block column.
    pub fn stacked(&self) -> DMatrix<Complex64> {
        let d = self.dim;
        let mut out = DMatrix::zeros(self.items.len() * d, d);
        for (i, a) in self.items.iter().enumerate() {
            out.view_mut((i * d, 0), (d, d)).copy_from(a.matrix());
        }
        out
    }

    pub fn from_stacked(dim: usize, m: &DMatrix<Complex64>) -> Result<Self> {
        if dim == 0 || m.ncols() != dim || !m.nrows().is_multiple_of(dim) {
            return Err(Error::invalid(
                "FiniteSequence::from_stacked",
                format!(
                    "{}x{} is not a block column of {dim}x{dim} blocks",
                    m.nrows(),
                    m.ncols()
                ),
            ));
        }
        let items = (0..m.nrows() / dim)
            .map(|i| MatrixElement::new(m.view((i * dim, 0), (dim, dim)).into_owned()))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteSequence { dim, items })
    }
}

/// `S_m`: prepend `m` zeros.
pub fn apply_shift(m: usize, x: &FiniteSequence) -> FiniteSequence {
    let mut items = Vec::with_capacity(m + x.items.len());
    items.extend(std::iter::repeat_n(MatrixElement::zeros(x.dim), m));
    items.extend(x.items.iter().cloned());
    FiniteSequence { dim: x.dim, items }
}

/// Block coefficient of `S_k` in `S_n + sum_i eps^{n-i} a_i S_i`.
fn band_block(p: &MonicMatrixPolynomial, eps: Complex64, k: usize) -> MatrixElement {
    let n = p.degree();
    if k == n {
        MatrixElement::identity(p.dim())
    } else {
        p.coeffs()[k].scale(eps.powu((n - k) as u32))
    }
}

/// `Q_eps x = S_n x + sum_i eps^{n-i} a_i S_i x`, coefficients acting on the
/// left of each term.
pub fn apply_operator(
    p: &MonicMatrixPolynomial,
    eps: Complex64,
    x: &FiniteSequence,
) -> Result<FiniteSequence> {
    if p.dim() != x.dim {
        return Err(Error::DimensionMismatch {
            op: "apply_operator",
            expected: p.dim(),
            found: x.dim,
        });
    }
    let n = p.degree();
    let d = x.dim;
    let blocks: Vec<MatrixElement> = (0..=n).map(|k| band_block(p, eps, k)).collect();
    let mut out = vec![DMatrix::<Complex64>::zeros(d, d); x.len() + n];
    for (j, xj) in x.items.iter().enumerate() {
        for (k, b) in blocks.iter().enumerate() {
            out[j + k] += b.matrix() * xj.matrix();
        }
    }
    let items = out.into_iter().map(MatrixElement).collect();
    Ok(FiniteSequence { dim: d, items })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// `N x N` blocks, the leading principal section.
    Square,
    /// `(N + n) x N` blocks; exact on sequences supported in the first `N` slots.
    Rect,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Square => "square",
            Shape::Rect => "rect",
        })
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Shape::Square),
            "rect" | "rectangular" => Ok(Shape::Rect),
            other => Err(Error::invalid(
                "Shape::from_str",
                format!("unknown shape {other:?}"),
            )),
        }
    }
}

/// Finite section of `Q_eps` as a dense lower block-Toeplitz matrix of band
/// width `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationMatrix {
    pub rows: usize,
    pub cols: usize,
    pub dim: usize,
    pub degree: usize,
    pub shape: Shape,
    pub data: DMatrix<Complex64>,
}

impl TruncationMatrix {
    pub fn block(&self, i: usize, j: usize) -> DMatrix<Complex64> {
        let d = self.dim;
        self.data.view((i * d, j * d), (d, d)).into_owned()
    }

    /// `rows,cols,dim,shape` header line, then one line per scalar row of
    /// `re,im` pairs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{},{},{},{}",
            self.rows, self.cols, self.dim, self.shape
        )
        .unwrap();
        for i in 0..self.data.nrows() {
            for j in 0..self.data.ncols() {
                let z = self.data[(i, j)];
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{:.16e},{:.16e}", z.re, z.im).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Format(format!("truncation csv: {what}"));
        let mut lines = text.lines();
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| bad("empty"))?
            .split(',')
            .collect();
        if header.len() != 4 {
            return Err(bad("header must be rows,cols,dim,shape"));
        }
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("header field"));
        let (rows, cols, dim) = (parse(header[0])?, parse(header[1])?, parse(header[2])?);
        let shape: Shape = header[3].trim().parse()?;
        let degree = match shape {
            Shape::Rect => rows
                .checked_sub(cols)
                .ok_or_else(|| bad("rect with rows < cols"))?,
            Shape::Square => 0,
        };
        let mut data = DMatrix::zeros(rows * dim, cols * dim);
        for i in 0..rows * dim {
            let line = lines.next().ok_or_else(|| bad("missing row"))?;
            let vals = line
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| bad("cell")))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != 2 * cols * dim {
                return Err(bad("row width"));
            }
            for j in 0..cols * dim {
                data[(i, j)] = Complex64::new(vals[2 * j], vals[2 * j + 1]);
            }
        }
        Ok(TruncationMatrix {
            rows,
            cols,
            dim,
            degree,
            shape,
            data,
        })
    }
}

pub fn assemble_truncation(
    p: &MonicMatrixPolynomial,
    eps: Complex64,
    n_blocks: usize,
    shape: Shape,
) -> Result<TruncationMatrix> {
    if n_blocks == 0 {
        return Err(Error::invalid(
            "assemble_truncation",
            "N must be at least 1",
        ));
    }
    let n = p.degree();
    let d = p.dim();
    let rows = match shape {
        Shape::Square => n_blocks,
        Shape::Rect => n_blocks + n,
    };
    let mut data = DMatrix::zeros(rows * d, n_blocks * d);
    for k in 0..=n {
        let b = band_block(p, eps, k);
        for j in 0..n_blocks {
            let i = j + k;
            if i >= rows {
                break;
            }
            data.view_mut((i * d, j * d), (d, d)).copy_from(b.matrix());
        }
    }
    Ok(TruncationMatrix {
        rows,
        cols: n_blocks,
        dim: d,
        degree: n,
        shape,
        data,
    })
}

/// `1 - B` with `B = sum_i |eps|^{n-i} ||a_i||`, when `B < 1`; then
/// `||Q_eps x||_1 >= (1 - B) ||x||_1` for every `x`. `None` means no
/// certificate, not non-injectivity.
pub fn injectivity_certificate(p: &MonicMatrixPolynomial, eps: Complex64) -> Option<f64> {
    let n = p.degree();
    let r = eps.norm();
    let budget: f64 = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| r.powi((n - i) as i32) * algebra_norm(a))
        .sum();
    (budget < 1.0).then_some(1.0 - budget)
}
