use crate::linalg::CMatrix;
use crate::scalar::{cone, czero, Real, C};

/// Inverse by Gauss-Jordan elimination with partial pivoting.
///
/// Returns `None` for non-square input or when a pivot falls below
/// `rel_tol * max|A|`.
pub fn inverse<T: Real>(a: &CMatrix<T>, rel_tol: T) -> Option<CMatrix<T>> {
    if !a.is_square() {
        return None;
    }
    let n = a.rows();
    let scale = a.max_abs();
    if scale == T::zero() {
        return None;
    }
    let mut m = a.clone();
    let mut inv = CMatrix::identity(n);
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, m[(r, col)].norm()))
            .fold((col, T::neg_infinity()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= rel_tol * scale {
            return None;
        }
        swap_rows(&mut m, col, piv);
        swap_rows(&mut inv, col, piv);
        let p = m[(col, col)];
        for j in 0..n {
            m[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[(r, col)];
            if f.norm() == T::zero() {
                continue;
            }
            for j in 0..n {
                let mv = m[(col, j)];
                let iv = inv[(col, j)];
                m[(r, j)] -= f * mv;
                inv[(r, j)] -= f * iv;
            }
        }
    }
    Some(inv)
}

fn swap_rows<T: Real>(m: &mut CMatrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols();
    let data = m.as_mut_slice();
    for j in 0..cols {
        data.swap(a * cols + j, b * cols + j);
    }
}

/// Pivots `d_k` of the Cholesky factorization `A = L L†`, taken before the
/// square root. Stops at the first non-positive pivot, which is still
/// reported. Assumes a Hermitian input (only the lower triangle is read).
pub fn cholesky_pivots<T: Real>(a: &CMatrix<T>) -> Vec<T> {
    let n = a.rows();
    let mut l = CMatrix::<T>::zeros(n, n);
    let mut pivots = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        pivots.push(d);
        if !(d > T::zero()) {
            break;
        }
        let ljj = d.sqrt();
        l[(j, j)] = C::new(ljj, T::zero());
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    pivots
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix<T>,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi iteration on a Hermitian matrix until the off-diagonal
/// Frobenius norm drops below `rel_tol * ‖A‖_F`.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>, rel_tol: T) -> HermitianEigen<T> {
    assert!(a.is_square(), "hermitian_eigen needs a square matrix");
    let n = a.rows();
    // Symmetrize so round-off in the input does not leak into the rotations.
    let mut m = CMatrix::from_fn(n, n, |i, j| {
        let half = T::lit(0.5);
        (a[(i, j)] + a[(j, i)].conj()) * half
    });
    let mut v = CMatrix::<T>::identity(n);
    let target = rel_tol * m.frobenius_norm();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= target || off == T::zero() {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(i, i)]
            .re
            .partial_cmp(&m[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    HermitianEigen {
        values,
        vectors,
        sweeps,
    }
}

fn off_diagonal_norm<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

// One complex Jacobi rotation zeroing m[p][q]. The 2x2 unitary is
// W = diag(1, e^{-iφ}) · R(θ), where the phase makes the pivot block real.
fn rotate<T: Real>(m: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let g = m[(p, q)];
    let h = g.norm();
    if h == T::zero() {
        return;
    }
    let a = m[(p, p)].re;
    let b = m[(q, q)].re;
    let phase = g / h;
    let two = T::lit(2.0);
    let tau = (b - a) / (two * h);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let cs = T::one() / (T::one() + t * t).sqrt();
    let sn = t * cs;
    let e = phase.conj();
    let w_pp = C::new(cs, T::zero());
    let w_pq = C::new(sn, T::zero());
    let w_qp = e * (-sn);
    let w_qq = e * cs;
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * w_pp + mkq * w_qp;
        m[(k, q)] = mkp * w_pq + mkq * w_qq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w_pp + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * w_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = w_pp.conj() * mpk + w_qp.conj() * mqk;
        m[(q, k)] = w_pq.conj() * mpk + w_qq.conj() * mqk;
    }
    m[(p, q)] = czero();
    m[(q, p)] = czero();
    m[(p, p)] = C::new(m[(p, p)].re, T::zero());
    m[(q, q)] = C::new(m[(q, q)].re, T::zero());
}

/// Singular values in descending order, from the Jacobi spectrum of `M†M`.
pub fn singular_values<T: Real>(m: &CMatrix<T>, rel_tol: T) -> Vec<T> {
    let gram = &m.adjoint() * m;
    let eig = hermitian_eigen(&gram, rel_tol);
    let mut s: Vec<T> = eig
        .values
        .iter()
        .map(|&x| x.max(T::zero()).sqrt())
        .collect();
    s.reverse();
    s
}

/// `σ_max / σ_min`; infinite when the matrix is singular.
pub fn condition_number<T: Real>(m: &CMatrix<T>, rel_tol: T) -> T {
    let s = singular_values(m, rel_tol);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > T::zero() => hi / lo,
        _ => T::infinity(),
    }
}

/// Reduced row echelon form with partial pivoting.
#[derive(Clone, Debug)]
pub struct Rref<T: Real> {
    pub reduced: CMatrix<T>,
    pub pivot_cols: Vec<usize>,
}

impl<T: Real> Rref<T> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Row-reduces the first `ncols` columns of `a` (the remaining columns are
/// carried along, which lets callers reduce augmented systems). Entries with
/// modulus at most `rel_tol * max|A|` are treated as zero.
pub fn rref_columns<T: Real>(a: &CMatrix<T>, ncols: usize, rel_tol: T) -> Rref<T> {
    let mut m = a.clone();
    let rows = m.rows();
    let total = m.cols();
    let scale = a.max_abs();
    let thresh = rel_tol * scale;
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows {
            break;
        }
        let (piv, best) = (r..rows)
            .map(|i| (i, m[(i, col)].norm()))
            .fold((r, T::neg_infinity()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= thresh || scale == T::zero() {
            for i in r..rows {
                m[(i, col)] = czero();
            }
            continue;
        }
        swap_rows(&mut m, r, piv);
        let p = m[(r, col)];
        for j in 0..total {
            m[(r, j)] /= p;
        }
        m[(r, col)] = cone();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m[(i, col)];
            if f.norm() == T::zero() {
                continue;
            }
            for j in 0..total {
                let rv = m[(r, j)];
                m[(i, j)] -= f * rv;
            }
            m[(i, col)] = czero();
        }
        pivot_cols.push(col);
        r += 1;
    }
    Rref {
        reduced: m,
        pivot_cols,
    }
}

pub fn rref<T: Real>(a: &CMatrix<T>, rel_tol: T) -> Rref<T> {
    rref_columns(a, a.cols(), rel_tol)
}

/// Basis of `{x : A x = 0}`, one vector per free column.
pub fn null_space<T: Real>(a: &CMatrix<T>, rel_tol: T) -> Vec<Vec<C<T>>> {
    let n = a.cols();
    let red = rref(a, rel_tol);
    let free: Vec<usize> = (0..n).filter(|c| !red.pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![czero(); n];
            x[f] = cone();
            for (r, &pc) in red.pivot_cols.iter().enumerate() {
                x[pc] = -red.reduced[(r, f)];
            }
            x
        })
        .collect()
}

/// One solution of `A x = b` (free variables set to zero), or `None` when
/// the reduced system is inconsistent beyond `rel_tol`.
pub fn solve_consistent<T: Real>(a: &CMatrix<T>, b: &[C<T>], rel_tol: T) -> Option<Vec<C<T>>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.cols();
    let aug = CMatrix::from_fn(a.rows(), n + 1, |i, j| if j < n { a[(i, j)] } else { b[i] });
    let red = rref_columns(&aug, n, rel_tol);
    let scale = a.max_abs().max(crate::scalar::max_abs(b));
    let rank = red.rank();
    for i in rank..a.rows() {
        if red.reduced[(i, n)].norm() > rel_tol.sqrt() * scale {
            return None;
        }
    }
    let mut x = vec![czero(); n];
    for (r, &pc) in red.pivot_cols.iter().enumerate() {
        x[pc] = red.reduced[(r, n)];
    }
    // Reject solutions that do not reproduce b (round-off in ill-conditioned pivots).
    let back = a.mul_vec(&x);
    let resid = crate::scalar::max_abs_diff(&back, b);
    if resid > rel_tol.sqrt() * scale.max(T::one()) {
        return None;
    }
    Some(x)
}
