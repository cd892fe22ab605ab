//! Comodules given by coefficient matrices, the module/comodule functors,
//! reflection matrices and comodule morphisms.

use crate::linalg::{inverse, null_space, solve_consistent, CMatrix};
use crate::oracle::presentation::{axpy, dot};
use crate::oracle::{solve_tolerance, HopfOracle, HopfPresentation, OracleError, Vector};
use crate::scalar::{cone, czero, Real, C};

/// Right comodule `δ(x_i) = Σ_j x_j ⊗ a_i^j` stored through its coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ComodulePresentation<T: Real> {
    dim: usize,
    /// `a_i^j` at index `i·dim + j`, each an element of `H`.
    coeffs: Vec<Vector<T>>,
}

impl<T: Real> ComodulePresentation<T> {
    /// `coeff(i, j)` supplies `a_i^j`.
    pub fn from_fn(dim: usize, mut coeff: impl FnMut(usize, usize) -> Vector<T>) -> Self {
        let mut coeffs = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                coeffs.push(coeff(i, j));
            }
        }
        ComodulePresentation { dim, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `a_i^j`.
    pub fn coeff(&self, i: usize, j: usize) -> &[C<T>] {
        &self.coeffs[i * self.dim + j]
    }

    pub fn coefficient_vectors(&self) -> &[Vector<T>] {
        &self.coeffs
    }

    /// Block-diagonal direct sum; off-diagonal coefficients vanish.
    pub fn direct_sum(parts: &[&Self]) -> Self {
        let n = parts.iter().find_map(|p| p.coeffs.first().map(Vec::len)).unwrap_or(0);
        let dim = parts.iter().map(|p| p.dim).sum();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for p in parts {
            offsets.push(acc);
            acc += p.dim;
        }
        Self::from_fn(dim, |i, j| {
            for (p, &o) in parts.iter().zip(&offsets) {
                if (o..o + p.dim).contains(&i) && (o..o + p.dim).contains(&j) {
                    return p.coeff(i - o, j - o).to_vec();
                }
            }
            vec![czero(); n]
        })
    }

    /// Residuals of `Δ(a_i^j) = Σ_k a_k^j ⊗ a_i^k` and `ε(a_i^j) = δ_ij`.
    pub fn law_residuals(&self, p: &HopfPresentation<T>) -> (T, T) {
        let d = self.dim;
        let n = p.dim();
        let mut delta_res = T::zero();
        let mut eps_res = T::zero();
        for i in 0..d {
            for j in 0..d {
                let lhs = p.coproduct(self.coeff(i, j));
                let mut rhs = CMatrix::zeros(n, n);
                for k in 0..d {
                    let (x, y) = (self.coeff(k, j), self.coeff(i, k));
                    for (a, &xa) in x.iter().enumerate() {
                        if xa == czero() {
                            continue;
                        }
                        for (b, &yb) in y.iter().enumerate() {
                            rhs[(a, b)] += xa * yb;
                        }
                    }
                }
                delta_res = delta_res.max(lhs.max_abs_diff(&rhs));
                let target = if i == j { cone() } else { czero() };
                eps_res = eps_res.max((p.counit(self.coeff(i, j)) - target).norm());
            }
        }
        (delta_res, eps_res)
    }
}

/// A module over the convolution algebra, given by the action matrix of
/// every basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulePresentation<T: Real> {
    pub dim: usize,
    pub actions: Vec<CMatrix<T>>,
}

impl<T: Real> ModulePresentation<T> {
    pub fn action(&self, h: &[C<T>]) -> CMatrix<T> {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (hm, a) in h.iter().zip(&self.actions) {
            if *hm != czero() {
                out = &out + &a.scale(*hm);
            }
        }
        out
    }
}

/// Which form of the reconstructed coaction passed the comodule laws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoactionForm {
    /// `δ(v) = f₁∗v̄ ⊗ f₂`.
    Plain,
    /// `δ(v) = f₁∗v̄ ⊗ S(f₂)`.
    WithAntipode,
}

/// `Q_i^l = q(u_i^l)` together with the integral orthogonality residuals.
#[derive(Clone, Debug)]
pub struct ReflectionData<T: Real> {
    pub q: CMatrix<T>,
    /// `max |∫(u_i^j S(u_k^l)) − δ_kj Q_i^l / tr Q|`.
    pub int_residual: T,
    /// `max |∫(S(u_i^j) u_k^l) − δ_kj (Q⁻¹)_i^l / tr Q⁻¹|`.
    pub int2_residual: T,
    /// `q(Σ_i u_i^i) − d`, which is `tr Q − d`.
    pub trace_minus_dim: C<T>,
}

impl<T: Real> HopfOracle<T> {
    /// Action of `h` on the comodule: `h∗x_i = Σ_j x_j ∫(a_i^j S(h))`.
    pub fn action_matrix(&self, comodule: &ComodulePresentation<T>, h: &[C<T>]) -> CMatrix<T> {
        let sh = self.gram_s.mul_vec(h);
        let d = comodule.dim();
        CMatrix::from_fn(d, d, |j, i| dot(comodule.coeff(i, j), &sh))
    }

    /// `h∗v = v₀ ∫(v₁ S(h))`.
    pub fn coaction_to_action(&self, comodule: &ComodulePresentation<T>, h: &[C<T>], v: &[C<T>]) -> Vector<T> {
        self.action_matrix(comodule, h).mul_vec(v)
    }

    /// The induced module, one action matrix per basis element.
    pub fn module_of(&self, comodule: &ComodulePresentation<T>) -> ModulePresentation<T> {
        ModulePresentation {
            dim: comodule.dim(),
            actions: (0..self.dim())
                .map(|m| self.action_matrix(comodule, &self.p.basis_vector(m)))
                .collect(),
        }
    }

    /// Rebuilds the coaction of a cyclic module from a generator `v̄`: solve
    /// `f_i ∗ v̄ = x_i`, then `δ(x_i) = (f_i)₁∗v̄ ⊗ (f_i)₂`. The antipode form
    /// is tried when the plain one fails the comodule laws.
    pub fn action_to_coaction(
        &self,
        module: &ModulePresentation<T>,
        generator: &[C<T>],
    ) -> Result<(ComodulePresentation<T>, CoactionForm), OracleError> {
        let n = self.dim();
        let d = module.dim;
        if generator.len() != d || module.actions.len() != n {
            return Err(OracleError::Shape(n));
        }
        let orbit: Vec<Vector<T>> = module.actions.iter().map(|a| a.mul_vec(generator)).collect();
        let system = CMatrix::from_fn(d, n, |r, m| orbit[m][r]);
        let mut solutions = Vec::with_capacity(d);
        for i in 0..d {
            let mut target = vec![czero(); d];
            target[i] = cone();
            solutions.push(solve_consistent(&system, &target, solve_tolerance()).ok_or(OracleError::NotCyclic)?);
        }
        let build = |with_s: bool| {
            ComodulePresentation::from_fn(d, |i, j| {
                let delta = self.p.coproduct(&solutions[i]);
                let mut out = vec![czero(); n];
                for a in 0..n {
                    let w = orbit[a][j];
                    if w == czero() {
                        continue;
                    }
                    for c in 0..n {
                        let v = delta[(a, c)];
                        if v == czero() {
                            continue;
                        }
                        if with_s {
                            let col: Vec<C<T>> = (0..n).map(|r| self.p.antipode[(r, c)]).collect();
                            axpy(&mut out, v * w, &col);
                        } else {
                            out[c] += v * w;
                        }
                    }
                }
                out
            })
        };
        let tol = T::lit(1e-8).max(T::epsilon().sqrt());
        for (form, with_s) in [(CoactionForm::Plain, false), (CoactionForm::WithAntipode, true)] {
            let c = build(with_s);
            let (r1, r2) = c.law_residuals(&self.p);
            if r1 <= tol && r2 <= tol {
                return Ok((c, form));
            }
        }
        Err(OracleError::NotAComodule)
    }

    /// Reflection matrix of a comodule plus the orthogonality residuals.
    pub fn reflection_matrices(&self, comodule: &ComodulePresentation<T>) -> Result<ReflectionData<T>, OracleError> {
        let (r1, r2) = comodule.law_residuals(&self.p);
        let tol = T::lit(1e-8).max(T::epsilon().sqrt());
        if !(r1 <= tol && r2 <= tol) {
            return Err(OracleError::NotAComodule);
        }
        let d = comodule.dim();
        let q = CMatrix::from_fn(d, d, |i, l| dot(&self.q, comodule.coeff(i, l)));
        let tr = q.trace();
        let q_inv = inverse(&q, T::lit(1e-13).max(T::epsilon())).ok_or(OracleError::SingularReflection)?;
        let tr_inv = q_inv.trace();
        let mut int_residual = T::zero();
        let mut int2_residual = T::zero();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let (uij, ukl) = (comodule.coeff(i, j), comodule.coeff(k, l));
                        let lhs1 = self.pairing(uij, ukl);
                        let lhs2 = self.integral_pair(&self.p.apply_antipode(uij), ukl);
                        let (rhs1, rhs2) = if k == j {
                            (q[(i, l)] / tr, q_inv[(i, l)] / tr_inv)
                        } else {
                            (czero(), czero())
                        };
                        int_residual = int_residual.max((lhs1 - rhs1).norm());
                        int2_residual = int2_residual.max((lhs2 - rhs2).norm());
                    }
                }
            }
        }
        let trace_vec: Vector<T> = (0..self.dim())
            .map(|m| (0..d).fold(czero(), |acc, i| acc + comodule.coeff(i, i)[m]))
            .collect();
        let trace_minus_dim = dot(&self.q, &trace_vec) - C::new(T::from_usize(d).unwrap_or_else(T::zero), T::zero());
        Ok(ReflectionData {
            q,
            int_residual,
            int2_residual,
            trace_minus_dim,
        })
    }
}

/// Basis of comodule maps `T: V → W`, i.e. `δ_W ∘ T = (T ⊗ id) ∘ δ_V`.
pub fn comodule_hom_space<T: Real>(
    v: &ComodulePresentation<T>,
    w: &ComodulePresentation<T>,
) -> Vec<CMatrix<T>> {
    let (dv, dw) = (v.dim(), w.dim());
    let n = v
        .coefficient_vectors()
        .first()
        .or(w.coefficient_vectors().first())
        .map_or(0, Vec::len);
    let unknowns = dv * dw;
    if unknowns == 0 {
        return Vec::new();
    }
    // Unknown T[l][j] at index l·dv + j. Equation (i, l, m):
    // Σ_j T[l][j] a_i^j[m] − Σ_k T[k][i] b_k^l[m] = 0.
    let mut system = CMatrix::zeros(dv * dw * n.max(1), unknowns);
    for i in 0..dv {
        for l in 0..dw {
            for m in 0..n {
                let row = (i * dw + l) * n + m;
                for j in 0..dv {
                    system[(row, l * dv + j)] += v.coeff(i, j)[m];
                }
                for k in 0..dw {
                    system[(row, k * dv + i)] -= w.coeff(k, l)[m];
                }
            }
        }
    }
    null_space(&system, solve_tolerance())
        .into_iter()
        .map(|x| CMatrix::from_vec(dw, dv, x))
        .collect()
}
