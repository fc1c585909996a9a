//! Singular values of square sections `T_N(p)` of a scalar lower-triangular
//! banded Toeplitz operator, to high relative accuracy.
//!
//! When `p` has `k` zeros inside the unit disc, `k` singular values of
//! `T_N(p)` shrink like `|r|^N` and fall far below `eps * ||T_N||` long
//! before `N = 512`; a dense SVD returns rounding noise for them. Instead we
//! build a rank-revealing factorization `T_N(p) = X D Y` with `X`, `Y`
//! well conditioned uniformly in `N` and `D` diagonal, and finish with
//! pivoted QR and one-sided Jacobi, which preserves relative accuracy for
//! such factorizations.
//!
//! Factorization: `p = p_out * p_in` with `p_in = prod (z - r_i)` over the
//! inside roots, and `T_N(p) = T_N(p_out) T_N(p_in)` exactly because lower
//! triangular Toeplitz sections multiply like truncated power series.
//! `T_N(p_out)` is well conditioned. Moving the first `k` rows of
//! `T_N(p_in)` to the bottom gives `[[B11, B12], [B21, 0]]`, where `B11` is
//! unit upper triangular Toeplitz in the reversed polynomial
//! `q(w) = prod (1 - r_i w)` and hence well conditioned. The Schur
//! complement `-B21 B11^{-1} B12` only involves the `k x k` corner of
//! `B11^{-1}`, whose entries are the power-series coefficients
//! `h_m = sum_i w_i r_i^{m + k - 1}` of `1/q` with
//! `w_i = 1 / prod_{j != i} (r_i - r_j)`. That corner factors as
//! `V_L diag(w_i r_i^{N - 2k}) V_R` with small Vandermonde factors, which
//! puts every tiny quantity on the diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::poly_from_roots;
use crate::error::{Error, Result};
use crate::linalg::robust_norm;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Inside roots closer than this cannot be separated by the Vandermonde factors.
const MIN_ROOT_SEPARATION: f64 = 1e-6;
const MAX_JACOBI_SWEEPS: usize = 60;

/// `X`, the diagonal of `D`, and `Y` with `T_N(p) = X diag(D) Y`.
pub(crate) struct RankRevealing {
    pub x: DMatrix<Complex64>,
    pub d: Vec<Complex64>,
    pub y: DMatrix<Complex64>,
}

#[cfg(test)]
/// Dense `N x N` lower-triangular Toeplitz section with ascending `coeffs`.
pub(crate) fn toeplitz_section(coeffs: &[Complex64], size: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(size, size, |i, j| {
        if i >= j && i - j < coeffs.len() {
            coeffs[i - j]
        } else {
            ZERO
        }
    })
}

pub(crate) fn rank_revealing(roots: &[Complex64], size: usize) -> Result<RankRevealing> {
    let (inside, outside): (Vec<Complex64>, Vec<Complex64>) =
        roots.iter().partition(|r| r.norm() < 1.0);
    let k = inside.len();
    if size < 2 * k + 1 {
        return Err(Error::invalid(
            "decay_profile",
            format!("section size {size} too small for {k} inside roots"),
        ));
    }
    for (i, a) in inside.iter().enumerate() {
        for b in &inside[i + 1..] {
            if (a - b).norm() < MIN_ROOT_SEPARATION {
                return Err(Error::ClusteredRoots { a: *a, b: *b });
            }
        }
    }

    let (x_in, d, y) = if k == 0 {
        (
            DMatrix::identity(size, size),
            vec![ONE; size],
            DMatrix::identity(size, size),
        )
    } else {
        inside_factor(&inside, size)
    };

    let p_out = poly_from_roots(&outside);
    // X = T_N(p_out) * X_in, applied as a banded product
    let mut x = DMatrix::zeros(size, size);
    for j in 0..size {
        for i in 0..size {
            let mut acc = ZERO;
            for (m, c) in p_out.iter().enumerate().take(i + 1) {
                acc += c * x_in[(i - m, j)];
            }
            x[(i, j)] = acc;
        }
    }
    Ok(RankRevealing { x, d, y })
}

fn inside_factor(
    roots: &[Complex64],
    size: usize,
) -> (DMatrix<Complex64>, Vec<Complex64>, DMatrix<Complex64>) {
    let k = roots.len();
    let n = size;
    let c = poly_from_roots(roots); // c[k] = 1

    let lk = DMatrix::from_fn(k, k, |a, b| if a >= b { c[a - b] } else { ZERO });
    let v_left = DMatrix::from_fn(k, k, |a, i| roots[i].powu((k - 1 - a) as u32));
    let v_right = DMatrix::from_fn(k, k, |i, b| roots[i].powu(b as u32));
    let weights: Vec<Complex64> = (0..k)
        .map(|i| {
            let prod: Complex64 = (0..k)
                .filter(|&j| j != i)
                .map(|j| roots[i] - roots[j])
                .product();
            prod.inv()
        })
        .collect();

    // coefficients of 1 / q(w), q(w) = sum_m c[k - m] w^m
    let mut h = vec![ZERO; n];
    h[0] = ONE;
    for m in 1..n {
        let mut acc = ZERO;
        for l in 1..=m.min(k) {
            acc -= c[k - l] * h[m - l];
        }
        h[m] = acc;
    }

    let top = n - k;
    let mut x = DMatrix::zeros(n, n);
    // first k rows: [B21 | -L_k V_L]
    for i in 0..k {
        for b in 0..=i {
            x[(i, b)] = c[i - b];
        }
    }
    let corner = -(&lk * &v_left);
    x.view_mut((0, top), (k, k)).copy_from(&corner);
    // remaining rows: [B11 | 0], B11[a, b] = c[a + k - b] for a <= b <= a + k
    for a in 0..top {
        for b in a..(a + k + 1).min(top) {
            x[(k + a, b)] = c[a + k - b];
        }
    }

    let mut d = vec![ONE; n];
    for i in 0..k {
        d[top + i] = weights[i] * roots[i].powu((n - 2 * k) as u32);
    }

    let mut y = DMatrix::zeros(n, n);
    for a in 0..top {
        y[(a, a)] = ONE;
    }
    // Z = B11^{-1} B12: only the last k rows of B12 are nonzero and equal L_k
    for a in 0..top {
        for bp in 0..k {
            let mut acc = ZERO;
            for app in bp..k {
                let col = top - k + app;
                if col >= a {
                    acc += h[col - a] * lk[(app, bp)];
                }
            }
            y[(a, top + bp)] = acc;
        }
    }
    let bottom = &v_right * &lk;
    y.view_mut((top, top), (k, k)).copy_from(&bottom);
    (x, d, y)
}

/// Singular values of `T_N(p)` in ascending order, `p` given by its roots.
pub(crate) fn section_singular_values(roots: &[Complex64], size: usize) -> Result<Vec<f64>> {
    let rrd = rank_revealing(roots, size)?;
    let mut g = rrd.x;
    for (j, dj) in rrd.d.iter().enumerate() {
        g.column_mut(j).iter_mut().for_each(|e| *e *= dj);
    }
    let (r, perm) = pivoted_qr_r(g);
    let w = times_permuted_sparse(&r, &perm, &rrd.y);
    // a second pivoted QR leaves strongly graded rows, on which Jacobi needs few sweeps
    let (r2, _) = pivoted_qr_r(w.adjoint());
    let rows: Vec<Vec<Complex64>> = (0..size)
        .map(|i| r2.row(i).iter().copied().collect())
        .collect();
    let mut sv = jacobi_row_norms(rows).ok_or_else(|| Error::NonConvergence {
        op: "decay_profile",
        matrix: r2.clone(),
    })?;
    sv.sort_by(f64::total_cmp);
    Ok(sv)
}

/// `R * P^T * Y` where row `i` of `P^T Y` is row `perm[i]` of `Y`; `Y` is
/// mostly zero, so only its nonzero entries are visited.
fn times_permuted_sparse(
    r: &DMatrix<Complex64>,
    perm: &[usize],
    y: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let (m, n) = (r.nrows(), y.ncols());
    let mut w = DMatrix::zeros(m, n);
    for (i, &pi) in perm.iter().enumerate() {
        let rcol: Vec<Complex64> = r.column(i).iter().copied().collect();
        for j in 0..n {
            let f = y[(pi, j)];
            if f == ZERO {
                continue;
            }
            let mut wcol = w.column_mut(j);
            for (e, rv) in wcol.iter_mut().zip(&rcol) {
                *e += rv * f;
            }
        }
    }
    w
}

/// Householder QR with column pivoting; returns `R` and the permutation
/// (`G[:, perm[j]]` is the `j`-th pivoted column). Norms are scaled, so
/// columns near the underflow threshold are handled.
pub(crate) fn pivoted_qr_r(mut g: DMatrix<Complex64>) -> (DMatrix<Complex64>, Vec<usize>) {
    let (m, n) = g.shape();
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);
    let mut norms: Vec<f64> = (0..n).map(|j| robust_norm(g.column(j).iter())).collect();
    let mut reference = norms.clone();
    let mut v = vec![ZERO; m];
    let downdate_tol = f64::EPSILON.sqrt();
    for k in 0..steps {
        let pivot = (k..n).fold(k, |best, j| if norms[j] > norms[best] { j } else { best });
        if pivot != k {
            g.swap_columns(k, pivot);
            perm.swap(k, pivot);
            norms.swap(k, pivot);
            reference.swap(k, pivot);
        }
        let len = m - k;
        let xnorm = robust_norm(g.column(k).rows(k, len).iter());
        if xnorm == 0.0 {
            continue;
        }
        let x0 = g[(k, k)];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        let v = &mut v[..len];
        v.copy_from_slice(&g.column(k).as_slice()[k..]);
        v[0] -= alpha;
        let vnorm = robust_norm(v.iter());
        v.iter_mut().for_each(|e| *e /= vnorm);
        for j in k + 1..n {
            let mut col = g.column_mut(j);
            let col = &mut col.as_mut_slice()[k..];
            let dot: Complex64 = v.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
            let f = dot * 2.0;
            for (e, vi) in col.iter_mut().zip(v.iter()) {
                *e -= vi * f;
            }
            // downdate the trailing norm, recomputing when cancellation sets in
            if norms[j] > 0.0 {
                let ratio = col[0].norm() / norms[j];
                let rest = (1.0 - ratio * ratio).max(0.0);
                let scaled = norms[j] / reference[j];
                if rest * scaled * scaled <= downdate_tol {
                    norms[j] = robust_norm(col[1..].iter());
                    reference[j] = norms[j];
                } else {
                    norms[j] *= rest.sqrt();
                }
            }
        }
        g[(k, k)] = alpha;
        for i in k + 1..m {
            g[(i, k)] = ZERO;
        }
    }
    (g.upper_triangle(), perm)
}

/// `sum conj(x_i) y_i` with independent partial sums.
fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let mut acc = [ZERO; 4];
    let mut xc = x.chunks_exact(4);
    let mut yc = y.chunks_exact(4);
    for (a, b) in (&mut xc).zip(&mut yc) {
        for l in 0..4 {
            acc[l] += a[l].conj() * b[l];
        }
    }
    let mut tail = ZERO;
    for (a, b) in xc.remainder().iter().zip(yc.remainder()) {
        tail += a.conj() * b;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// One-sided Jacobi orthogonalizing the rows; returns their final norms,
/// i.e. the singular values. Each row is kept as `scale * unit vector` so
/// that rows of wildly different magnitude never square into underflow.
pub(crate) fn jacobi_row_norms(rows: Vec<Vec<Complex64>>) -> Option<Vec<f64>> {
    let n = rows.len();
    let len = rows.first().map_or(0, Vec::len);
    let mut scale = Vec::with_capacity(n);
    let mut unit = Vec::with_capacity(n);
    for mut r in rows {
        let s = robust_norm(r.iter());
        if s > 0.0 {
            r.iter_mut().for_each(|e| *e /= s);
        }
        scale.push(s);
        unit.push(r);
    }
    let tol = f64::EPSILON * (len.max(1) as f64).sqrt();

    for _ in 0..MAX_JACOBI_SWEEPS {
        // de Rijk ordering: larger rows first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| scale[b].total_cmp(&scale[a]));
        scale = order.iter().map(|&i| scale[i]).collect();
        let mut taken: Vec<Option<Vec<Complex64>>> = unit.into_iter().map(Some).collect();
        unit = order.iter().map(|&i| taken[i].take().unwrap()).collect();

        let mut rotated = false;
        for i in 0..n {
            if scale[i] == 0.0 {
                continue;
            }
            for j in i + 1..n {
                if scale[j] == 0.0 {
                    continue;
                }
                let (head, tail) = unit.split_at_mut(j);
                let (vi, vj) = (&mut head[i], &mut tail[0]);
                let gij = dot(vi, vj);
                let gabs = gij.norm();
                if gabs <= tol {
                    continue;
                }
                rotated = true;
                // rotate the row with the smaller scale (a) against the larger (b)
                let (a, b, va, vb, g) = if scale[i] <= scale[j] {
                    (i, j, vi, vj, gij)
                } else {
                    (j, i, vj, vi, gij.conj())
                };
                let rho = scale[a] / scale[b];
                let eta = (1.0 - rho * rho) / (2.0 * gabs);
                let tau = 1.0 / (eta + (rho * rho + eta * eta).sqrt());
                let t = tau * rho;
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let uc = (g / gabs).conj();
                let ca = -uc * (cs * tau);
                let cb = uc * cs;
                let da = cs * t * rho;
                for (x, y) in va.iter_mut().zip(vb.iter_mut()) {
                    let xa = *x;
                    let yb = *y;
                    *x = xa * cs + ca * yb;
                    *y = xa * da + cb * yb;
                }
                let sq_a = 1.0 + tau * tau - 2.0 * tau * gabs;
                let na = if sq_a < 0.25 {
                    robust_norm(va.iter())
                } else {
                    cs * sq_a.sqrt()
                };
                let nb = cs * (1.0 + t * t * rho * rho + 2.0 * t * rho * gabs).sqrt();
                scale[a] *= na;
                scale[b] *= nb;
                if na > 0.0 {
                    let inv = 1.0 / na;
                    va.iter_mut().for_each(|e| *e *= inv);
                }
                let inv = 1.0 / nb;
                vb.iter_mut().for_each(|e| *e *= inv);
            }
        }
        // undo drift of the unit vectors accumulated by the norm formulas
        for (s, v) in scale.iter_mut().zip(unit.iter_mut()) {
            let nv = robust_norm(v.iter());
            if nv > 0.0 {
                *s *= nv;
                v.iter_mut().for_each(|e| *e /= nv);
            }
        }
        if !rotated {
            return Some(scale);
        }
    }
    None
}
