use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::MonicMatrixPolynomial;
use crate::error::{Error, Result};
use crate::index::fredholm_index;

/// How the coefficients `c_0, ..., c_n` of an element `sum c_i S_i` are drawn.
#[derive(Clone, Debug, PartialEq)]
pub enum CoefficientDistribution {
    /// Independent standard complex normal coefficients.
    Gaussian,
    /// Monic with `n` roots of modulus uniform on `[0, max_modulus]`,
    /// rejecting moduli within `exclusion` of 1, and uniform argument.
    Roots { max_modulus: f64, exclusion: f64 },
    /// The same coefficients every trial.
    Fixed(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub distribution: CoefficientDistribution,
}

impl SamplerConfig {
    pub fn gaussian(seed: u64) -> Self {
        SamplerConfig {
            seed,
            distribution: CoefficientDistribution::Gaussian,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexHistogram {
    pub trials: usize,
    pub counts: BTreeMap<i64, usize>,
    pub non_fredholm_count: usize,
}

impl IndexHistogram {
    pub fn observed_range(&self) -> Option<(i64, i64)> {
        Some((
            *self.counts.keys().next()?,
            *self.counts.keys().next_back()?,
        ))
    }
}

fn draw(rng: &mut ChaCha8Rng, n: usize, dist: &CoefficientDistribution) -> Vec<Complex64> {
    match dist {
        CoefficientDistribution::Gaussian => (0..=n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect(),
        CoefficientDistribution::Roots {
            max_modulus,
            exclusion,
        } => {
            let roots: Vec<Complex64> = (0..n)
                .map(|_| loop {
                    let m = rng.random::<f64>() * max_modulus;
                    if (m - 1.0).abs() >= *exclusion {
                        break Complex64::from_polar(m, rng.random::<f64>() * TAU);
                    }
                })
                .collect();
            crate::algebra::poly_from_roots(&roots)
        }
        CoefficientDistribution::Fixed(c) => c.clone(),
    }
}

enum Outcome {
    Index(i64),
    NonFredholm,
}

/// Index of `sum c_i S_i` after dividing by the top nonzero coefficient.
fn classify(coeffs: &[Complex64]) -> Result<Outcome> {
    let Some(top) = coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)) else {
        return Ok(Outcome::NonFredholm);
    };
    if top == 0 {
        // nonzero multiple of the identity
        return Ok(Outcome::Index(0));
    }
    let lead = coeffs[top];
    let lower: Vec<Complex64> = coeffs[..top].iter().map(|c| c / lead).collect();
    let p = MonicMatrixPolynomial::from_scalar_coeffs(&lower)?;
    let report = fredholm_index(&p, Complex64::new(1.0, 0.0))?;
    match report.index_winding {
        None => Ok(Outcome::NonFredholm),
        Some(i) if report.agreement => Ok(Outcome::Index(i)),
        Some(i) => Err(Error::IndexDisagreement {
            op: "subspace_index_sample",
            winding: i,
            roots: report.k_roots_inside,
        }),
    }
}

/// Histogram of Fredholm indices over random elements of `span{S_0, ..., S_n}`.
pub fn subspace_index_sample(
    n: usize,
    trials: usize,
    config: &SamplerConfig,
) -> Result<IndexHistogram> {
    const OP: &str = "subspace_index_sample";
    if trials == 0 {
        return Err(Error::invalid(OP, "trials must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid(OP, "degree must be at least 1"));
    }
    if let CoefficientDistribution::Roots {
        max_modulus,
        exclusion,
    } = config.distribution
    {
        if !(max_modulus > 0.0
            && exclusion >= 0.0
            && (exclusion < 1.0 || max_modulus > 1.0 + exclusion))
        {
            return Err(Error::invalid(OP, "root distribution has an empty support"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let draws: Vec<Vec<Complex64>> = (0..trials)
        .map(|_| draw(&mut rng, n, &config.distribution))
        .collect();
    let outcomes = draws
        .par_iter()
        .map(|c| classify(c))
        .collect::<Result<Vec<_>>>()?;

    let mut counts = BTreeMap::new();
    let mut non_fredholm_count = 0;
    for o in outcomes {
        match o {
            Outcome::Index(i) => *counts.entry(i).or_insert(0) += 1,
            Outcome::NonFredholm => non_fredholm_count += 1,
        }
    }
    Ok(IndexHistogram {
        trials,
        counts,
        non_fredholm_count,
    })
}
