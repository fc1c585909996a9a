use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{scale_transform, MonicMatrixPolynomial};
use crate::error::{Error, Result};
use crate::index::{fredholm_index, IndexReport};
use crate::witness::{companion_linearize, eigenvalues};

/// Target relative width of a critical-eps bracket.
pub const BRACKET_REL_WIDTH: f64 = 1e-6;

/// Bracket `[lo, hi]` around an `eps` at which a root of `q_eps` crosses the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalEps {
    pub eps: f64,
    pub lo: f64,
    pub hi: f64,
    /// The index just below `lo` differs from the index just above `hi`.
    pub confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub eps_values: Vec<f64>,
    pub indices: Vec<IndexReport>,
    pub critical_eps: Vec<CriticalEps>,
}

impl SweepResult {
    /// Maximal intervals of the grid range free of critical brackets.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        let (Some(&first), Some(&last)) = (self.eps_values.first(), self.eps_values.last()) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut start = first;
        for c in &self.critical_eps {
            out.push((start, c.lo));
            start = c.hi;
        }
        out.push((start, last));
        out
    }

    /// One row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("eps,fredholm,index_winding,k_roots_inside,min_circle_margin,agreement\n");
        for (eps, r) in self.eps_values.iter().zip(&self.indices) {
            let idx = r.index_winding.map(|i| i.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{eps:.16e},{},{idx},{},{:.16e},{}\n",
                r.fredholm, r.k_roots_inside, r.min_circle_margin, r.agreement
            ));
        }
        out
    }
}

/// Root moduli of `q_eps`, descending.
fn moduli(p: &MonicMatrixPolynomial, eps: f64) -> Result<Vec<f64>> {
    let q = scale_transform(p, Complex64::new(eps, 0.0));
    let mut m: Vec<f64> = eigenvalues(&companion_linearize(&q).data)?
        .iter()
        .map(|z| z.norm())
        .collect();
    m.sort_by(|a, b| b.total_cmp(a));
    Ok(m)
}

fn bisect(p: &MonicMatrixPolynomial, j: usize, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    while hi - lo > 0.5 * BRACKET_REL_WIDTH * lo {
        let mid = 0.5 * (lo + hi);
        if moduli(p, mid)?[j] < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

pub fn epsilon_sweep(p: &MonicMatrixPolynomial, eps_grid: &[f64]) -> Result<SweepResult> {
    const OP: &str = "epsilon_sweep";
    if eps_grid.is_empty() {
        return Err(Error::invalid(OP, "eps grid must be nonempty"));
    }
    if eps_grid.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::invalid(OP, "eps values must be positive and finite"));
    }
    if eps_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(OP, "eps grid must be strictly ascending"));
    }
    let indices = eps_grid
        .par_iter()
        .map(|&e| fredholm_index(p, Complex64::new(e, 0.0)))
        .collect::<Result<Vec<_>>>()?;

    let first = eps_grid[0];
    let last = *eps_grid.last().unwrap();
    let below = moduli(p, first)?;
    let above = moduli(p, last)?;
    let crossing: Vec<usize> = (0..below.len())
        .filter(|&j| below[j] < 1.0 && above[j] >= 1.0)
        .collect();
    let mut brackets = crossing
        .par_iter()
        .map(|&j| bisect(p, j, first, last))
        .collect::<Result<Vec<_>>>()?;
    brackets.sort_by(|a, b| a.0.total_cmp(&b.0));

    // roots of equal modulus cross together
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in brackets {
        match merged.last_mut() {
            Some(prev) if lo <= prev.1 => prev.1 = prev.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    let critical_eps = merged
        .into_par_iter()
        .map(|(lo, hi)| {
            let before = fredholm_index(p, Complex64::new(lo * (1.0 - BRACKET_REL_WIDTH), 0.0))?;
            let after = fredholm_index(p, Complex64::new(hi * (1.0 + BRACKET_REL_WIDTH), 0.0))?;
            let confirmed =
                before.fredholm && after.fredholm && before.index_winding != after.index_winding;
            Ok(CriticalEps {
                eps: 0.5 * (lo + hi),
                lo,
                hi,
                confirmed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepResult {
        eps_values: eps_grid.to_vec(),
        indices,
        critical_eps,
    })
}
