use rayon::prelude::*;
use serde::Serialize;

use super::hra::section_singular_values;
use crate::algebra::MonicMatrixPolynomial;
use crate::error::{Error, Result};
use crate::index::{count_roots_in_disc, FREDHOLM_MARGIN};

/// A track decays when its fitted per-step ratio is below this.
pub const DECAY_RATE_THRESHOLD: f64 = 0.95;

/// Smallest singular values of square sections `P_N` for a range of sizes.
///
/// `sigma_tails[s][t]` is the `t`-th smallest singular value at `sizes[s]`;
/// track `t` collects index `t` across sizes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayProfile {
    pub sizes: Vec<usize>,
    pub sigma_tails: Vec<Vec<f64>>,
    /// `exp(slope)` of the least-squares line through `(N, ln sigma)` per track.
    pub fitted_rates: Vec<f64>,
    pub decaying_tracks: usize,
}

impl DecayProfile {
    /// Rows `N,track,sigma`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,track,sigma\n");
        for (n, tail) in self.sizes.iter().zip(&self.sigma_tails) {
            for (t, s) in tail.iter().enumerate() {
                out.push_str(&format!("{n},{t},{s:.16e}\n"));
            }
        }
        out
    }
}

pub fn decay_profile(p: &MonicMatrixPolynomial, sizes: &[usize]) -> Result<DecayProfile> {
    const OP: &str = "decay_profile";
    if p.dim() != 1 {
        return Err(Error::invalid(
            OP,
            "only scalar coefficients (dim 1) are supported",
        ));
    }
    let n = p.degree();
    if sizes.len() < 2 {
        return Err(Error::invalid(OP, "need at least two section sizes"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(OP, "sizes must be strictly increasing"));
    }
    if sizes[0] < 4 * n {
        return Err(Error::invalid(
            OP,
            format!("sizes must be at least 4n = {}", 4 * n),
        ));
    }
    let roots = count_roots_in_disc(p, FREDHOLM_MARGIN)?;
    if !roots.reliable {
        return Err(Error::NotFredholm {
            op: OP,
            root: roots.nearest_circle_root,
            margin: roots.min_circle_margin,
        });
    }

    let tracks = n + 2;
    let sigma_tails = sizes
        .par_iter()
        .map(|&size| {
            let sv = section_singular_values(&roots.roots, size)?;
            Ok(sv.into_iter().take(tracks).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let fitted_rates: Vec<f64> = (0..tracks)
        .map(|t| {
            let pts: Vec<(f64, f64)> = sizes
                .iter()
                .zip(&sigma_tails)
                .map(|(&size, tail)| (size as f64, tail[t]))
                .collect();
            fitted_rate(&pts)
        })
        .collect();
    let decaying_tracks = fitted_rates
        .iter()
        .filter(|&&r| r < DECAY_RATE_THRESHOLD)
        .count();
    Ok(DecayProfile {
        sizes: sizes.to_vec(),
        sigma_tails,
        fitted_rates,
        decaying_tracks,
    })
}

/// `exp` of the least-squares slope of `ln sigma` against `N`. Values below
/// the normal range carry no relative accuracy and are left out; a track
/// with fewer than two usable values decays faster than anything measurable.
fn fitted_rate(pts: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = pts
        .iter()
        .copied()
        .filter(|p| p.1 >= f64::MIN_POSITIVE)
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let m = pts.len() as f64;
    let xbar = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let ybar = pts.iter().map(|p| p.1.ln()).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.1.ln() - ybar)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - xbar).powi(2)).sum();
    (sxy / sxx).exp()
}
