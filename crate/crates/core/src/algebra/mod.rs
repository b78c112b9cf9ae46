//! Exact integer linear algebra: sparse and dense integer matrices, Smith
//! normal form, lattices and their subquotients, and finitely generated
//! abelian groups.

mod abelian;
mod dense;
mod lattice;
mod sparse;
mod snf;

pub use abelian::FgAbGroup;
pub use dense::IntMatrix;
pub use lattice::{kernel_basis, ColumnEchelon, Lattice, Subquotient};
pub use snf::{snf, snf_with_transforms, SmithDecomposition, SmithForm};
pub use sparse::{SparseIntMatrix, SparseVec};
pub(crate) use sparse::normalize as normalize_vec;

use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the exact-algebra layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precondition violated: composition of differentials is nonzero at entry ({row}, {col})")]
    NonzeroComposition { row: usize, col: usize },
    #[error("entry ({row}, {col}) out of bounds for a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("lattice containment fails; witness vector {witness:?} is not in the ambient lattice")]
    NotContained { witness: Vec<(usize, BigInt)> },
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// Homology `ker(d_out) / im(d_in)` at the middle term of
/// `C_{k+1} --d_in--> C_k --d_out--> C_{k-1}`.
pub fn homology_at(d_in: &SparseIntMatrix, d_out: &SparseIntMatrix) -> Result<FgAbGroup, AlgebraError> {
    if d_in.rows() != d_out.cols() {
        return Err(AlgebraError::DimensionMismatch(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let product = d_out.mul(d_in)?;
    if let Some((row, col, _)) = product.triplets().next() {
        return Err(AlgebraError::NonzeroComposition { row, col });
    }
    Ok(homology_unchecked(d_in, d_out))
}

/// Same as [`homology_at`] without the `d_out * d_in = 0` check. Callers
/// must guarantee composability.
pub(crate) fn homology_unchecked(d_in: &SparseIntMatrix, d_out: &SparseIntMatrix) -> FgAbGroup {
    let n = d_in.rows();
    let out = snf(d_out);
    let inn = snf(d_in);
    let free = n - out.rank() - inn.rank();
    FgAbGroup::new(free, inn.factors().iter().cloned())
}

/// The subquotient `U / V` of lattices generated by the columns of `u` and
/// `v` inside `Z^ambient_rank`.
pub fn subquotient(
    ambient_rank: usize,
    u: &SparseIntMatrix,
    v: &SparseIntMatrix,
) -> Result<FgAbGroup, AlgebraError> {
    if u.rows() != ambient_rank || v.rows() != ambient_rank {
        return Err(AlgebraError::DimensionMismatch(format!(
            "generators must live in Z^{ambient_rank}"
        )));
    }
    let sq = Subquotient::new(ambient_rank, &u.columns_vec(), &v.columns_vec())?;
    Ok(sq.group().clone())
}
