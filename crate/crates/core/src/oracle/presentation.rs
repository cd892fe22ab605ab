use crate::linalg::CMatrix;
use crate::oracle::{OracleError, Tensor3};
use crate::scalar::{cone, czero, Real, C};

/// Element of `H` as coordinates in the presentation basis.
pub type Vector<T> = Vec<C<T>>;

/// A finite-dimensional Hopf *-algebra given by structure constants.
///
/// Linear maps (`antipode`, `star`) act on columns: `S(b_i) = Σ_j S[j][i] b_j`.
/// The involution is conjugate-linear, so `x* = star · conj(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfPresentation<T: Real> {
    pub basis: Vec<String>,
    pub unit: Vector<T>,
    pub m: Tensor3<T>,
    pub delta: Tensor3<T>,
    pub epsilon: Vector<T>,
    pub antipode: CMatrix<T>,
    pub star: CMatrix<T>,
}

impl<T: Real> HopfPresentation<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Checks that every tensor has the basis dimension.
    pub fn check_shapes(&self) -> Result<(), OracleError> {
        let n = self.dim();
        let square = |m: &CMatrix<T>| m.rows() == n && m.cols() == n;
        let ok = n > 0
            && self.unit.len() == n
            && self.epsilon.len() == n
            && self.m.dim() == n
            && self.delta.dim() == n
            && square(&self.antipode)
            && square(&self.star);
        if ok {
            Ok(())
        } else {
            Err(OracleError::Shape(n))
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vector<T> {
        let mut v = vec![czero(); self.dim()];
        v[i] = cone();
        v
    }

    pub fn mul(&self, x: &[C<T>], y: &[C<T>]) -> Vector<T> {
        let mut out = vec![czero(); self.dim()];
        for (i, &xi) in x.iter().enumerate() {
            if is_zero(xi) {
                continue;
            }
            for &(j, k, v) in self.m.row(i) {
                out[k] += xi * y[j] * v;
            }
        }
        out
    }

    /// `Δ(x)` as an `n × n` coefficient matrix of `b_j ⊗ b_k`.
    pub fn coproduct(&self, x: &[C<T>]) -> CMatrix<T> {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (i, &xi) in x.iter().enumerate() {
            if is_zero(xi) {
                continue;
            }
            for &(j, k, v) in self.delta.row(i) {
                out[(j, k)] += xi * v;
            }
        }
        out
    }

    pub fn counit(&self, x: &[C<T>]) -> C<T> {
        dot(&self.epsilon, x)
    }

    pub fn apply_antipode(&self, x: &[C<T>]) -> Vector<T> {
        self.antipode.mul_vec(x)
    }

    pub fn apply_star(&self, x: &[C<T>]) -> Vector<T> {
        let conj: Vec<C<T>> = x.iter().map(|z| z.conj()).collect();
        self.star.mul_vec(&conj)
    }

    /// Multiplication applied to a tensor: `Σ t_jk b_j b_k`.
    pub fn mul_tensor(&self, t: &CMatrix<T>) -> Vector<T> {
        let mut out = vec![czero(); self.dim()];
        for j in 0..t.rows() {
            for &(k, l, v) in self.m.row(j) {
                out[l] += t[(j, k)] * v;
            }
        }
        out
    }

    /// `(A ⊗ B) t` for column-convention linear maps: `A t Bᵀ`.
    pub fn map_tensor(a: &CMatrix<T>, b: &CMatrix<T>, t: &CMatrix<T>) -> CMatrix<T> {
        &(a * t) * &b.transpose()
    }

    /// Sparse product table `b_a b_c = Σ (k, v)`.
    pub fn product_table(&self) -> Vec<Vec<(usize, C<T>)>> {
        let n = self.dim();
        let mut table = vec![Vec::new(); n * n];
        for (a, c, k, v) in self.m.triplets() {
            table[a * n + c].push((k, v));
        }
        table
    }

    /// Product in `H ⊗ H`: `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn tensor_mul(&self, table: &[Vec<(usize, C<T>)>], x: &CMatrix<T>, y: &CMatrix<T>) -> CMatrix<T> {
        let n = self.dim();
        let nx = nonzeros(x);
        let ny = nonzeros(y);
        let mut out = CMatrix::zeros(n, n);
        for &(a, b, xv) in &nx {
            for &(c, d, yv) in &ny {
                let w = xv * yv;
                for &(k, v) in &table[a * n + c] {
                    for &(l, u) in &table[b * n + d] {
                        out[(k, l)] += w * v * u;
                    }
                }
            }
        }
        out
    }

    /// `(Δ ⊗ id)(t)` and `(id ⊗ Δ)(t)` as dense `n³` arrays indexed `(a·n + b)·n + c`.
    pub fn coassociativity_sides(&self, t: &CMatrix<T>) -> (Vec<C<T>>, Vec<C<T>>) {
        let n = self.dim();
        let mut left = vec![czero(); n * n * n];
        let mut right = vec![czero(); n * n * n];
        for (j, k, v) in nonzeros(t) {
            for &(a, b, w) in self.delta.row(j) {
                left[(a * n + b) * n + k] += v * w;
            }
            for &(b, c, w) in self.delta.row(k) {
                right[(j * n + b) * n + c] += v * w;
            }
        }
        (left, right)
    }
}

pub(crate) fn is_zero<T: Real>(z: C<T>) -> bool {
    z.re == T::zero() && z.im == T::zero()
}

pub(crate) fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + *x * *y)
}

pub(crate) fn nonzeros<T: Real>(m: &CMatrix<T>) -> Vec<(usize, usize, C<T>)> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if !is_zero(v) {
                out.push((i, j, v));
            }
        }
    }
    out
}

pub(crate) fn axpy<T: Real>(out: &mut [C<T>], a: C<T>, x: &[C<T>]) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += a * *v;
    }
}
