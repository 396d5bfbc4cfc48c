//! Small dense linear algebra: matrices, Gram–Schmidt against an arbitrary
//! inner product, and a Jacobi eigensolver for Hermitian matrices.

mod eigen;
mod gram_schmidt;
mod matrix;

pub use eigen::{condition_number, hermitian_eigen, symmetric_eigen, HermitianEigen, MAX_SWEEPS};
pub(crate) use gram_schmidt::{check_spd, pivoted_gram_schmidt};
pub use gram_schmidt::{gram_schmidt, is_spd, orthonormality_residual};
pub use matrix::{axpy, dot, max_abs, unit_vector, Cholesky, ComplexMatrix, RealMatrix};

/// Default tolerance for every residual check.
pub const DEFAULT_TOL: f64 = 1e-9;
