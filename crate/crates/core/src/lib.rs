//! Fredholm indices of shift polynomials over matrix algebras.
//!
//! A monic polynomial `p(z) = z^n + a_{n-1} z^{n-1} + ... + a_0` with
//! coefficients in `M_d(C)` is singular somewhere in the plane. This crate
//! locates every such point, computes the Fredholm index of the operator
//! `p(S_1)` on sequence space in two independent ways, and runs the
//! finite-section experiments that exhibit the index numerically.

// `!(x > 0.0)` is how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod index;
pub mod lab;
pub mod shift;
pub mod witness;

mod linalg;
mod serde_util;

pub use algebra::{
    algebra_norm, evaluate, is_invertible, scale_transform, ComplexScalar, Invertibility,
    MatrixElement, MonicMatrixPolynomial, NonMonicPencil,
};
pub use error::{Error, Result};
pub use index::{
    count_roots_in_disc, fredholm_index, symbol_det, winding_number, IndexReport, RootCount,
    SymbolCurve, WindingNumber,
};
pub use lab::{
    adjoint_kernel_basis, decay_profile, epsilon_sweep, subspace_index_sample,
    CoefficientDistribution, CriticalEps, DecayProfile, IndexHistogram, KernelVector,
    SamplerConfig, SweepResult,
};
pub use num_complex::Complex64;
pub use shift::{
    apply_operator, apply_shift, assemble_truncation, injectivity_certificate, FiniteSequence,
    Shape, TruncationMatrix,
};
pub use witness::{
    companion_linearize, eigenvalues, find_witnesses, nonmonic_scan, CompanionMatrix, NonmonicScan,
    Witness, WitnessReport,
};
