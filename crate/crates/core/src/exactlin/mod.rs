//! Exact rational and polynomial linear algebra.
//!
//! Dense matrices only. Rank, kernels and images go through fraction-free
//! (Bareiss) elimination on integer rows; incremental membership tests use
//! [`Subspace`], which keeps a reduced echelon basis.

mod matrix;
mod poly;
mod polymatrix;
mod rat;

pub use matrix::{image_basis, kernel_basis, primitive, quotient_dim, solve, span_rank, RatMatrix, Subspace};
pub use poly::{graded_cmp, Exponent, Poly, PolyParseError, Vars};
pub use polymatrix::PolyMatrix;
pub use rat::{ParseRatError, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("operands use different variable lists")]
    VariableMismatch,
    #[error("vector {index} of the subspace lies outside the ambient span")]
    SubspaceViolation { index: usize },
    #[error("matrix is singular")]
    Singular,
}
