use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: invalid argument: {reason}")]
    InvalidArgument { op: &'static str, reason: String },

    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{op}: non-finite value in input")]
    NonFinite { op: &'static str },

    #[error("malformed input document: {0}")]
    Format(String),

    #[error(
        "winding_number: symbol vanishes on the circle (min |f| = {min:e}, max |f| = {max:e})"
    )]
    VanishingSymbol { min: f64, max: f64 },

    #[error("winding_number: adaptive refinement exceeded {samples} samples")]
    NonConvergent { samples: usize },

    #[error("winding_number: accumulated argument {turns} turns is not within 0.01 of an integer")]
    RoundingAmbiguous { turns: f64 },

    #[error("{op}: iteration failed to converge on a {}x{} matrix", matrix.nrows(), matrix.ncols())]
    NonConvergence {
        op: &'static str,
        matrix: DMatrix<Complex64>,
    },

    #[error("find_witnesses: no verified singularity witness for a monic polynomial of degree {degree}, dim {dim}")]
    TheoremViolation { degree: usize, dim: usize },

    #[error(
        "{op}: operator is not Fredholm, root {}{:+}i lies within {margin:e} of the unit circle",
        root.re,
        root.im
    )]
    NotFredholm {
        op: &'static str,
        root: Complex64,
        margin: f64,
    },

    #[error("{op}: fredholm index disagreement (winding index {winding}, inside roots {roots})")]
    IndexDisagreement {
        op: &'static str,
        winding: i64,
        roots: usize,
    },

    #[error(
        "decay_profile: inside roots {a} and {b} are too close for a structured factorization"
    )]
    ClusteredRoots { a: Complex64, b: Complex64 },
}

impl Error {
    pub(crate) fn invalid(op: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            op,
            reason: reason.into(),
        }
    }

    /// Failures of a numerical kernel, as opposed to bad input or a
    /// Fredholmness precondition.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::VanishingSymbol { .. }
                | Error::NonConvergent { .. }
                | Error::RoundingAmbiguous { .. }
                | Error::NonConvergence { .. }
                | Error::TheoremViolation { .. }
                | Error::IndexDisagreement { .. }
                | Error::ClusteredRoots { .. }
        )
    }
}
