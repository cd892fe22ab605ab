//! Small dense complex linear algebra kernel (dimensions in the tens).

mod decomp;
mod matrix;

pub use decomp::{
    cholesky_pivots, condition_number, hermitian_eigen, inverse, null_space, rref, rref_columns,
    singular_values, solve_consistent, HermitianEigen, Rref,
};
pub use matrix::CMatrix;
