//! Shared JSON shapes: complex numbers are `[re, im]` pairs, matrices are
//! row-major nested arrays of pairs.

use crate::linalg::CMatrix;
use crate::scalar::{Real, C};

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn complex_to_json<T: Real>(z: C<T>) -> JsonComplex {
    [z.re.to_f64_lossy(), z.im.to_f64_lossy()]
}

pub fn complex_from_json<T: Real>(z: &JsonComplex) -> Result<C<T>, String> {
    let conv = |x: f64| {
        if !x.is_finite() {
            return Err(format!("non-finite number {x}"));
        }
        T::from_f64(x)
            .filter(|y| y.is_finite())
            .ok_or_else(|| format!("number {x} not representable"))
    };
    Ok(C::new(conv(z[0])?, conv(z[1])?))
}

pub fn matrix_to_json<T: Real>(m: &CMatrix<T>) -> JsonMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| complex_to_json(*z)).collect())
        .collect()
}

pub fn matrix_from_json<T: Real>(rows: &JsonMatrix) -> Result<CMatrix<T>, String> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(complex_from_json).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    CMatrix::from_rows(&parsed).ok_or_else(|| "ragged matrix rows".to_owned())
}

pub fn vector_to_json<T: Real>(v: &[C<T>]) -> Vec<JsonComplex> {
    v.iter().map(|z| complex_to_json(*z)).collect()
}

pub fn vector_from_json<T: Real>(v: &[JsonComplex]) -> Result<Vec<C<T>>, String> {
    v.iter().map(complex_from_json).collect()
}
