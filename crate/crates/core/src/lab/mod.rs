//! Finite-section experiments: singular-value decay of square sections,
//! approximate cokernels, eps sweeps of the index, and random sampling of
//! indices over the span of the shifts.
//!
//! Independent grid points, section sizes and trials are evaluated in
//! parallel; results are always aggregated in input order.

mod decay;
mod hra;
mod kernel;
mod sampler;
mod sweep;

pub use decay::{decay_profile, DecayProfile, DECAY_RATE_THRESHOLD};
pub use kernel::{adjoint_kernel_basis, KernelVector};
pub use sampler::{subspace_index_sample, CoefficientDistribution, IndexHistogram, SamplerConfig};
pub use sweep::{epsilon_sweep, CriticalEps, SweepResult, BRACKET_REL_WIDTH};

/// Singular values, ascending, of the square section `T_N(p)` of the scalar
/// polynomial with the given roots, accurate to high relative precision
/// even far below `eps * ||T_N||`.
pub fn section_singular_values(
    roots: &[num_complex::Complex64],
    size: usize,
) -> crate::Result<Vec<f64>> {
    hra::section_singular_values(roots, size)
}
