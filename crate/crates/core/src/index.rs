//! Fredholm index of `P = p(S_1)`.
//!
//! Two independent routes: the winding number of `theta -> det p(e^{i theta})`
//! around the origin, and the number of zeros of `det p` inside the unit disc
//! from the companion eigenvalues. For a Fredholm `P` the index is minus
//! either count; the report carries both and never reconciles them.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{scale_transform, MonicMatrixPolynomial};
use crate::error::{Error, Result};
use crate::witness::{companion_linearize, eigenvalues};

/// Roots with `||r| - 1|` below this make `P` numerically non-Fredholm.
pub const FREDHOLM_MARGIN: f64 = 1e-8;

const INITIAL_SAMPLES: usize = 64;
const MAX_SAMPLES: usize = 1 << 20;
/// Finest local spacing; resolves roots far closer to the circle than the margin.
const MIN_STEP: f64 = TAU / (1u64 << 40) as f64;
const VANISHING_RATIO: f64 = 1e-12;
const ROUNDING_SLACK: f64 = 0.01;

/// Samples of a closed curve `theta -> f(theta)`, `theta` in `[0, 2 pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolCurve {
    pub samples: Vec<(f64, Complex64)>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindingNumber {
    pub winding: i64,
    pub min_modulus: f64,
    pub curve: SymbolCurve,
}

impl WindingNumber {
    pub fn samples_used(&self) -> usize {
        self.curve.samples.len()
    }
}

/// Winding number of a continuous closed curve about the origin.
///
/// Starts from 64 uniform samples and bisects every segment whose principal
/// argument increment exceeds `pi/2` until none does.
pub fn winding_number(f: impl Fn(f64) -> Complex64) -> Result<WindingNumber> {
    let mut pts: Vec<(f64, Complex64)> = (0..INITIAL_SAMPLES)
        .map(|j| {
            let t = TAU * j as f64 / INITIAL_SAMPLES as f64;
            (t, f(t))
        })
        .collect();

    loop {
        let (min, max) = pts
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), (_, v)| {
                (lo.min(v.norm()), hi.max(v.norm()))
            });
        if !(min >= VANISHING_RATIO * max) || max == 0.0 {
            return Err(Error::VanishingSymbol { min, max });
        }

        let m = pts.len();
        let mut refined = Vec::with_capacity(2 * m);
        let mut split = false;
        for i in 0..m {
            let (ta, va) = pts[i];
            let (tb, vb) = if i + 1 < m {
                pts[i + 1]
            } else {
                (TAU, pts[0].1)
            };
            refined.push((ta, va));
            if increment(va, vb).abs() > FRAC_PI_2 {
                if tb - ta < MIN_STEP {
                    return Err(Error::NonConvergent { samples: m });
                }
                let t = 0.5 * (ta + tb);
                refined.push((t, f(t)));
                split = true;
            }
        }
        pts = refined;
        if !split {
            break;
        }
        if pts.len() > MAX_SAMPLES {
            return Err(Error::NonConvergent { samples: pts.len() });
        }
    }

    let m = pts.len();
    let total: f64 = (0..m)
        .map(|i| increment(pts[i].1, pts[(i + 1) % m].1))
        .sum();
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > ROUNDING_SLACK {
        return Err(Error::RoundingAmbiguous { turns });
    }
    let min_modulus = pts
        .iter()
        .map(|(_, v)| v.norm())
        .fold(f64::INFINITY, f64::min);
    Ok(WindingNumber {
        winding: rounded as i64,
        min_modulus,
        curve: SymbolCurve {
            samples: pts,
            closed: true,
        },
    })
}

/// Principal-branch argument of `b / a`.
fn increment(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// `det p(e^{i theta})`.
pub fn symbol_det(p: &MonicMatrixPolynomial, theta: f64) -> Complex64 {
    p.evaluate(Complex64::from_polar(1.0, theta)).determinant()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootCount {
    /// Eigenvalues of the companion strictly inside the unit disc, with multiplicity.
    pub k: usize,
    /// `min ||lambda| - 1|` over all eigenvalues.
    pub min_circle_margin: f64,
    /// The eigenvalue attaining `min_circle_margin`.
    pub nearest_circle_root: Complex64,
    /// `false` when `min_circle_margin` is below the requested margin.
    pub reliable: bool,
    pub roots: Vec<Complex64>,
}

pub fn count_roots_in_disc(p: &MonicMatrixPolynomial, margin: f64) -> Result<RootCount> {
    if !(margin >= 0.0) {
        return Err(Error::invalid(
            "count_roots_in_disc",
            "margin must be nonnegative",
        ));
    }
    let roots = eigenvalues(&companion_linearize(p).data)?;
    let k = roots.iter().filter(|r| r.norm() < 1.0).count();
    let (min_circle_margin, nearest_circle_root) = roots
        .iter()
        .map(|r| ((r.norm() - 1.0).abs(), *r))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("degree >= 1 gives at least one eigenvalue");
    Ok(RootCount {
        k,
        min_circle_margin,
        nearest_circle_root,
        reliable: min_circle_margin >= margin,
        roots,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexReport {
    pub fredholm: bool,
    /// Minus the winding number of the determinant symbol; absent when not Fredholm.
    pub index_winding: Option<i64>,
    pub k_roots_inside: usize,
    pub min_circle_margin: f64,
    /// `index_winding == -k_roots_inside`.
    pub agreement: bool,
    pub samples_used: usize,
}

impl IndexReport {
    pub fn index(&self) -> Option<i64> {
        self.index_winding
    }
}

/// Index of `p_eps(S_1)`, where `p_eps` is the rescaled polynomial; `eps = 1`
/// leaves `p` unchanged.
pub fn fredholm_index(p: &MonicMatrixPolynomial, eps: Complex64) -> Result<IndexReport> {
    let q = if eps == Complex64::new(1.0, 0.0) {
        p.clone()
    } else {
        scale_transform(p, eps)
    };
    let roots = count_roots_in_disc(&q, FREDHOLM_MARGIN)?;
    if !roots.reliable {
        return Ok(IndexReport {
            fredholm: false,
            index_winding: None,
            k_roots_inside: roots.k,
            min_circle_margin: roots.min_circle_margin,
            agreement: false,
            samples_used: 0,
        });
    }
    let w = winding_number(|t| symbol_det(&q, t))?;
    let index = -w.winding;
    Ok(IndexReport {
        fredholm: true,
        index_winding: Some(index),
        k_roots_inside: roots.k,
        min_circle_margin: roots.min_circle_margin,
        agreement: index == -(roots.k as i64),
        samples_used: w.samples_used(),
    })
}
