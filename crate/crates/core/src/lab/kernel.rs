use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::MonicMatrixPolynomial;
use crate::error::{Error, Result};
use crate::index::{count_roots_in_disc, FREDHOLM_MARGIN};
use crate::linalg::robust_norm;
use crate::serde_util;
use crate::witness::by_modulus_then_arg;

/// Unit vector `(conj(r)^j)_{j<N}` for an inside root `r`, with the residual
/// `||P_N^* v||` and the constant `C` in `residual <= C |r|^{N-n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelVector {
    #[serde(with = "serde_util::complex")]
    pub root: Complex64,
    #[serde(with = "serde_util::complex_vec")]
    pub vector: Vec<Complex64>,
    pub residual: f64,
    pub bound_constant: f64,
}

impl KernelVector {
    pub fn residual_bound(&self, degree: usize) -> f64 {
        let n = self.vector.len();
        self.bound_constant * self.root.norm().powi(n.saturating_sub(degree) as i32)
    }
}

/// Approximate cokernel of the square section `P_N`, one vector per root of
/// `p` strictly inside the disc, ordered by modulus then argument.
pub fn adjoint_kernel_basis(p: &MonicMatrixPolynomial, size: usize) -> Result<Vec<KernelVector>> {
    const OP: &str = "adjoint_kernel_basis";
    let coeffs = p
        .scalar_coeffs()
        .ok_or_else(|| Error::invalid(OP, "only scalar coefficients (dim 1) are supported"))?;
    if size == 0 {
        return Err(Error::invalid(OP, "section size must be positive"));
    }
    let count = count_roots_in_disc(p, FREDHOLM_MARGIN)?;
    if !count.reliable {
        return Err(Error::NotFredholm {
            op: OP,
            root: count.nearest_circle_root,
            margin: count.min_circle_margin,
        });
    }
    let mut inside: Vec<Complex64> = count.roots.into_iter().filter(|r| r.norm() < 1.0).collect();
    inside.sort_by(by_modulus_then_arg);

    let n = p.degree();
    let bound_constant = (n as f64).sqrt() * coeffs.iter().map(|c| c.norm()).sum::<f64>();
    Ok(inside
        .into_iter()
        .map(|r| {
            let rc = r.conj();
            let mut v = Vec::with_capacity(size);
            let mut pow = Complex64::new(1.0, 0.0);
            for _ in 0..size {
                v.push(pow);
                pow *= rc;
            }
            let norm = robust_norm(v.iter());
            v.iter_mut().for_each(|e| *e /= norm);
            // (P_N^* v)_i = sum_m conj(c_m) v_{i+m}
            let adj: Vec<Complex64> = (0..size)
                .map(|i| {
                    coeffs
                        .iter()
                        .enumerate()
                        .take_while(|(m, _)| i + m < size)
                        .map(|(m, c)| c.conj() * v[i + m])
                        .sum()
                })
                .collect();
            KernelVector {
                root: r,
                residual: robust_norm(adj.iter()),
                vector: v,
                bound_constant,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_inside_root() {
        let p = MonicMatrixPolynomial::from_roots(&[c(0.5, 0.0)]).unwrap();
        let basis = adjoint_kernel_basis(&p, 64).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].residual <= 1e-15);
        assert!(basis[0].residual <= basis[0].residual_bound(1));
        assert!((basis[0].vector[1] / basis[0].vector[0] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn outside_root_gives_empty_basis_and_circle_root_errors() {
        let p = MonicMatrixPolynomial::from_roots(&[c(2.0, 0.0)]).unwrap();
        assert!(adjoint_kernel_basis(&p, 16).unwrap().is_empty());
        let q = MonicMatrixPolynomial::from_roots(&[c(-1.0, 0.0)]).unwrap();
        assert!(matches!(
            adjoint_kernel_basis(&q, 16),
            Err(Error::NotFredholm { .. })
        ));
    }
}
