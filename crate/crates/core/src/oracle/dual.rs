//! Dual structure on the convolution algebra: coproduct `Δ_*`, counit
//! `ε_* = ∫`, and the approximate antipode `S_{*K}`.

use crate::linalg::{inverse, solve_consistent, CMatrix};
use crate::model::{BlockLabel, TruncationWindow};
use crate::oracle::presentation::{axpy, nonzeros};
use crate::oracle::{solve_tolerance, ComodulePresentation, HopfOracle, OracleError, Vector};
use crate::scalar::{czero, Real, C};

impl<T: Real> HopfOracle<T> {
    /// `Δ_*(b_i)` from `∫(f¹g)∫(f²h) = ∫(fgh)`: with `G = ∫(b_k b_l)` and
    /// `T_kl = ∫(f b_k b_l)` the coefficients are `G⁻ᵀ T G⁻¹`.
    pub(crate) fn build_coproduct_star(&self) -> Option<Vec<CMatrix<T>>> {
        let n = self.dim();
        let g_inv = inverse(&self.gram, T::lit(1e-13).max(T::epsilon()))?;
        let g_inv_t = g_inv.transpose();
        let values = &self.integral.values;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut t = CMatrix::zeros(n, n);
            for k in 0..n {
                for &(ik, v) in &self.products[i * n + k] {
                    for l in 0..n {
                        let w = self.products[ik * n + l]
                            .iter()
                            .fold(czero(), |acc, &(r, u)| acc + u * values[r]);
                        t[(k, l)] += v * w;
                    }
                }
            }
            out.push(&(&g_inv_t * &t) * &g_inv);
        }
        Some(out)
    }

    /// `Δ_*(f)` as an `n × n` coefficient matrix.
    pub fn coproduct_star(&self, f: &[C<T>]) -> Result<CMatrix<T>, OracleError> {
        let basis = self.coproduct_star.as_ref().ok_or(OracleError::SingularGram)?;
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (i, &fi) in f.iter().enumerate() {
            if fi != czero() {
                let scaled = basis[i].scale(fi);
                out = &out + &scaled;
            }
        }
        Ok(out)
    }

    /// `ε_*(f) = ∫(f)`.
    pub fn counit_star(&self, f: &[C<T>]) -> C<T> {
        self.integral.apply(f)
    }

    /// Largest residuals of coassociativity and of both counit laws of `Δ_*`
    /// over the basis.
    pub fn coproduct_star_laws(&self) -> Result<(T, T), OracleError> {
        let n = self.dim();
        let mut coassoc = T::zero();
        let mut counit = T::zero();
        for i in 0..n {
            let d = self.coproduct_star(&self.p.basis_vector(i))?;
            let mut left = vec![czero(); n * n * n];
            let mut right = vec![czero(); n * n * n];
            for (a, b, v) in nonzeros(&d) {
                let da = self.coproduct_star(&self.p.basis_vector(a))?;
                let db = self.coproduct_star(&self.p.basis_vector(b))?;
                for (x, y, w) in nonzeros(&da) {
                    left[(x * n + y) * n + b] += v * w;
                }
                for (x, y, w) in nonzeros(&db) {
                    right[(a * n + x) * n + y] += v * w;
                }
            }
            coassoc = coassoc.max(crate::scalar::max_abs_diff(&left, &right));
            // (∫ ⊗ id) and (id ⊗ ∫).
            let vals = &self.integral.values;
            let mut l = vec![czero(); n];
            let mut r = vec![czero(); n];
            for (a, b, v) in nonzeros(&d) {
                l[b] += v * vals[a];
                r[a] += v * vals[b];
            }
            let e = self.p.basis_vector(i);
            counit = counit
                .max(crate::scalar::max_abs_diff(&l, &e))
                .max(crate::scalar::max_abs_diff(&r, &e));
        }
        Ok((coassoc, counit))
    }

    /// `‖Δ_*(f∗g) − Δ_*(f)∗Δ_*(g)‖_max`.
    pub fn coproduct_star_multiplicativity(&self, f: &[C<T>], g: &[C<T>]) -> Result<T, OracleError> {
        let lhs = self.coproduct_star(&self.conv_abstract(f, g))?;
        let rhs = self.conv_tensor(&self.coproduct_star(f)?, &self.coproduct_star(g)?);
        Ok(lhs.max_abs_diff(&rhs))
    }

    /// `S_*(h) = S(h₁) p(h₂) q(h₃)` on the whole algebra.
    pub fn antipode_star_full(&self, h: &[C<T>]) -> Vector<T> {
        let n = self.dim();
        let mut out = vec![czero(); n];
        for (i, &hi) in h.iter().enumerate() {
            if hi == czero() {
                continue;
            }
            for &(a, b, c, v) in &self.delta2[i] {
                let w = hi * v * self.pf[b] * self.q[c];
                for r in 0..n {
                    out[r] += w * self.p.antipode[(r, a)];
                }
            }
        }
        out
    }

    /// `S_{*K}(f)` for `f` in the span `H_K`; errors when `f` has a component
    /// outside `H_K`.
    pub fn antipode_star(&self, k: &WindowProjector<T>, f: &[C<T>]) -> Result<Vector<T>, OracleError> {
        let pf = k.apply(f);
        let scale = T::one().max(crate::scalar::max_abs(f));
        let off = crate::scalar::max_abs_diff(&pf, f);
        if off > T::lit(1e-9).max(T::epsilon().sqrt()) * scale {
            return Err(OracleError::OutsideWindow(off.to_f64_lossy()));
        }
        Ok(self.antipode_star_full(f))
    }

    /// `S_{*K} = S_* ∘ P_K`, the blockwise extension by zero.
    pub fn antipode_star_restricted(&self, k: &WindowProjector<T>, f: &[C<T>]) -> Vector<T> {
        self.antipode_star_full(&k.apply(f))
    }

    /// The unit of `H_K` under `∗`, found by a linear solve over a basis of
    /// `H_K` (both one-sided unit equations are imposed).
    pub fn subalgebra_unit(&self, k: &WindowProjector<T>) -> Result<Vector<T>, OracleError> {
        let n = self.dim();
        let basis = &k.span;
        let r = basis.len();
        if r == 0 {
            return Err(OracleError::EmptyWindow);
        }
        let mut system = CMatrix::zeros(2 * n * r, r);
        let mut rhs = vec![czero(); 2 * n * r];
        for (m, bm) in basis.iter().enumerate() {
            for (col, bc) in basis.iter().enumerate() {
                let left = self.conv_abstract(bc, bm);
                let right = self.conv_abstract(bm, bc);
                for row in 0..n {
                    system[(m * n + row, col)] = left[row];
                    system[((r + m) * n + row, col)] = right[row];
                }
            }
            for row in 0..n {
                rhs[m * n + row] = bm[row];
                rhs[(r + m) * n + row] = bm[row];
            }
        }
        let y = solve_consistent(&system, &rhs, solve_tolerance()).ok_or(OracleError::NoUnit)?;
        let mut e = vec![czero(); n];
        for (coef, b) in y.iter().zip(basis) {
            axpy(&mut e, *coef, b);
        }
        Ok(e)
    }

    /// Residual of `S_{*K}(f¹) ∗ f² = ∫(f)·e_K` over the basis, with `e_K`
    /// from [`HopfOracle::subalgebra_unit`].
    pub fn approximate_antipode_residual(&self, k: &WindowProjector<T>) -> Result<T, OracleError> {
        let e_k = self.subalgebra_unit(k)?;
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            let d = self.coproduct_star(&self.p.basis_vector(i))?;
            let mut lhs = vec![czero(); n];
            for (a, b, v) in nonzeros(&d) {
                let s = self.antipode_star_restricted(k, &self.p.basis_vector(a));
                let prod = self.conv_abstract(&s, &self.p.basis_vector(b));
                axpy(&mut lhs, v, &prod);
            }
            let scale = self.integral.values[i];
            let rhs: Vec<C<T>> = e_k.iter().map(|z| *z * scale).collect();
            worst = worst.max(crate::scalar::max_abs_diff(&lhs, &rhs));
        }
        Ok(worst)
    }

    /// Largest `|∫(h S(g)) − ∫(S_*(h) g)|` over basis pairs of `H_K`.
    pub fn antipode_star_duality(&self, k: &WindowProjector<T>) -> Result<T, OracleError> {
        let mut worst = T::zero();
        for h in &k.span {
            let sh = self.antipode_star(k, h)?;
            for g in &k.span {
                let lhs = self.pairing(h, g);
                let rhs = self.integral_pair(&sh, g);
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }
}

/// Projector onto `H_K = ⊕_{λ∈K} H_λ` along the other blocks, built from the
/// coefficient spaces of one simple comodule per block.
#[derive(Clone, Debug)]
pub struct WindowProjector<T: Real> {
    matrix: CMatrix<T>,
    /// Coefficient vectors spanning `H_K`.
    span: Vec<Vector<T>>,
}

impl<T: Real> WindowProjector<T> {
    /// `K` = everything: the identity.
    pub fn full(n: usize) -> Self {
        WindowProjector {
            matrix: CMatrix::identity(n),
            span: (0..n)
                .map(|i| {
                    let mut v = vec![czero(); n];
                    v[i] = crate::scalar::cone();
                    v
                })
                .collect(),
        }
    }

    /// `B · diag(1_K) · B⁻¹` with the coefficient vectors of all blocks as
    /// the columns of `B`; they must form a basis of `H`.
    pub fn from_blocks(
        n: usize,
        blocks: &[(BlockLabel, ComodulePresentation<T>)],
        window: &TruncationWindow,
    ) -> Result<Self, OracleError> {
        let mut cols = Vec::new();
        let mut keep = Vec::new();
        for (label, comodule) in blocks {
            for v in comodule.coefficient_vectors() {
                if v.len() != n {
                    return Err(OracleError::Shape(n));
                }
                cols.push(v.clone());
                keep.push(window.contains(label));
            }
        }
        if cols.len() != n {
            return Err(OracleError::IncompleteDecomposition(cols.len(), n));
        }
        let b = CMatrix::from_fn(n, n, |r, c| cols[c][r]);
        let b_inv = inverse(&b, T::lit(1e-12).max(T::epsilon())).ok_or(OracleError::IncompleteDecomposition(n, n))?;
        let mask = CMatrix::from_fn(n, n, |r, c| {
            if r == c && keep[r] {
                crate::scalar::cone()
            } else {
                czero()
            }
        });
        let span = cols.into_iter().zip(&keep).filter(|(_, &k)| k).map(|(v, _)| v).collect();
        Ok(WindowProjector {
            matrix: &(&b * &mask) * &b_inv,
            span,
        })
    }

    pub fn apply(&self, f: &[C<T>]) -> Vector<T> {
        self.matrix.mul_vec(f)
    }

    pub fn span(&self) -> &[Vector<T>] {
        &self.span
    }
}
