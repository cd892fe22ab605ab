//! Synthetic block instances with deformed reflection matrices.
//!
//! The spin-`j` block of the q-deformed family has dimension `2j + 1` and
//! `Q = diag(q^{-2j}, q^{-2j+2}, ..., q^{2j})`, the shape of the reflection
//! matrix of the quantum group `SU_q(2)`. Products, norms and units only
//! need `Q` positive definite, so these instances exercise every block
//! formula away from the classical case `Q = I`.

use crate::linalg::CMatrix;
use crate::model::{BlockSpec, InstanceSpec};
use crate::scalar::{Real, C};

/// Deformation parameters of the built-in synthetic family.
pub const SYNTHETIC_Q: [f64; 2] = [0.5, 0.9];

/// `diag(q^{-2j}, ..., q^{2j})` for a block of dimension `dim = 2j + 1`.
pub fn spin_q_matrix<T: Real>(dim: usize, q: T) -> CMatrix<T> {
    let top = dim as i32 - 1;
    let diag: Vec<T> = (0..dim as i32).map(|k| q.powi(2 * k - top)).collect();
    CMatrix::from_real_diag(&diag)
}

/// A Hermitian positive definite matrix with the spectrum of
/// `spin_q_matrix(2, q)` rotated by a complex unitary, so that no
/// coordinate simplification applies.
pub fn rotated_q_matrix<T: Real>(q: T) -> CMatrix<T> {
    let (a, b) = (q.recip(), q);
    // U = [[c, -s·e^{-iφ}], [s·e^{iφ}, c]] with c = cos θ, s = sin θ.
    let (c, s) = (T::lit(0.8), T::lit(0.6));
    let phase = C::new(T::lit(0.6), T::lit(0.8));
    let u = CMatrix::from_rows(&[
        vec![C::new(c, T::zero()), -phase.conj() * s],
        vec![phase * s, C::new(c, T::zero())],
    ])
    .expect("2x2 rows");
    let m = &(&u * &CMatrix::from_real_diag(&[a, b])) * &u.adjoint();
    // Symmetrize so that the result is Hermitian to the last bit.
    (&m + &m.adjoint()).scale_real(T::lit(0.5))
}

/// The instance with blocks
///
/// * `"0"`: the trivial block
/// * `"i2"`: dimension 2 with `Q = I`
/// * `"j1/2"`, `"j1"`, `"j3/2"`: spin blocks of dimension 2, 3, 4
/// * `"h2"`: dimension 2 with a non-diagonal `Q`
///
/// Every block is its own dual.
pub fn q_instance<T: Real>(q: T) -> InstanceSpec<T> {
    let spin = |label: &str, dim| BlockSpec::new(label, dim, spin_q_matrix(dim, q), label);
    InstanceSpec::new([
        BlockSpec::identity("0", 1),
        BlockSpec::identity("i2", 2),
        spin("j1/2", 2),
        spin("j1", 3),
        spin("j3/2", 4),
        BlockSpec::new("h2", 2, rotated_q_matrix(q), "h2"),
    ])
    .expect("synthetic instance is valid")
}

/// The built-in synthetic instances, named `q0.5` and `q0.9`.
pub fn synthetic_instances<T: Real>() -> Vec<(String, InstanceSpec<T>)> {
    SYNTHETIC_Q.iter().map(|&q| (format!("q{q}"), q_instance(T::lit(q)))).collect()
}
