//! Dense nonsymmetric complex eigenvalues: Householder reduction to upper
//! Hessenberg form followed by single-shift QR sweeps with Givens rotations.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// Each returned eigenvalue must satisfy `sigma_min(M - lambda I) <= RESIDUAL_TOL * ||M||`.
pub const RESIDUAL_TOL: f64 = 1e-8;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// All eigenvalues of a square matrix, with algebraic multiplicity, in
/// deflation order.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::invalid(
            "eigenvalues",
            format!("matrix is {}x{}, not square", m.nrows(), m.ncols()),
        ));
    }
    if !linalg::all_finite(m) {
        return Err(Error::NonFinite { op: "eigenvalues" });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = m.clone();
    reduce_to_hessenberg(&mut h);
    let values = hessenberg_qr(&mut h).ok_or_else(|| Error::NonConvergence {
        op: "eigenvalues",
        matrix: m.clone(),
    })?;
    certify(m, &values)?;
    Ok(values)
}

fn certify(m: &DMatrix<Complex64>, values: &[Complex64]) -> Result<()> {
    let n = m.nrows();
    let scale = linalg::spectral_norm(m);
    for &lambda in values {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] -= lambda;
        }
        if linalg::sigma_min(&shifted) > RESIDUAL_TOL * scale {
            return Err(Error::NonConvergence {
                op: "eigenvalues",
                matrix: m.clone(),
            });
        }
    }
    Ok(())
}

fn reduce_to_hessenberg(h: &mut DMatrix<Complex64>) {
    let n = h.nrows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha_norm = linalg::robust_norm(x.iter());
        if alpha_norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * alpha_norm;
        let mut v = x;
        v[0] -= alpha;
        let vn = linalg::robust_norm(v.iter());
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);

        // H <- (I - 2 v v*) H
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)])
                .sum();
            let f = dot * 2.0;
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * f;
            }
        }
        // H <- H (I - 2 v v*)
        for i in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(j, vj)| h[(i, k + 1 + j)] * vj)
                .sum();
            let f = dot * 2.0;
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= f * vj.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let rho = ax.hypot(ay);
    let c = ax / rho;
    let s = (x / ax) * y.conj() / rho;
    (c, s)
}

fn hessenberg_qr(h: &mut DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    let n = h.nrows();
    let mut values = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let norm_est = h.iter().map(|z| z.norm()).fold(0.0, f64::max);

    loop {
        if hi == 0 {
            values.push(h[(0, 0)]);
            break;
        }
        // Locate the top of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = norm_est;
            }
            if sub <= f64::EPSILON * diag {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values.push(h[(hi, hi)]);
            hi -= 1;
            sweeps = 0;
            continue;
        }

        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return None;
        }
        let mu = if sweeps.is_multiple_of(10) {
            // exceptional shift
            let extra = if hi >= 2 {
                h[(hi - 1, hi - 2)].re.abs()
            } else {
                0.0
            };
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].re.abs() + extra, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let u = h[(k, j)];
                let v = h[(k + 1, j)];
                h[(k, j)] = u * c + s * v;
                h[(k + 1, j)] = -s.conj() * u + v * c;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..=(k + 1).min(hi) {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * c + v * s.conj();
                h[(i, k + 1)] = -u * s + v * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    Some(values)
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let l1 = (a + d) * 0.5 + disc;
    let l2 = (a + d) * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}
