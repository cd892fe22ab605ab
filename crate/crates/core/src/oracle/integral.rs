use crate::linalg::{condition_number, null_space, CMatrix};
use crate::oracle::presentation::{dot, is_zero};
use crate::oracle::{solve_tolerance, HopfPresentation, OracleError, Vector};
use crate::scalar::{czero, Real, C};

/// The normalized left integral `∫`, stored as its values on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralFunctional<T: Real> {
    pub values: Vector<T>,
}

impl<T: Real> IntegralFunctional<T> {
    pub fn apply(&self, x: &[C<T>]) -> C<T> {
        dot(&self.values, x)
    }

    /// Largest entry of `(id ⊗ ∫)Δ(b_i) − ∫(b_i)·1` over the basis.
    pub fn left_residual(&self, p: &HopfPresentation<T>) -> T {
        let n = p.dim();
        let mut worst = T::zero();
        for i in 0..n {
            let mut lhs: Vector<T> = vec![czero(); n];
            for &(j, k, v) in p.delta.row(i) {
                lhs[j] += v * self.values[k];
            }
            for j in 0..n {
                worst = worst.max((lhs[j] - self.values[i] * p.unit[j]).norm());
            }
        }
        worst
    }
}

/// Solves `(id ⊗ t)Δ(b_i) = t(b_i)·1` for the covector `t`. The solution
/// space must be a line; the result is normalized by `∫(1) = 1`.
pub fn compute_integral<T: Real>(p: &HopfPresentation<T>) -> Result<IntegralFunctional<T>, OracleError> {
    p.check_shapes()?;
    let n = p.dim();
    // Row (i, j): Σ_k Δ[i][j][k] t_k − unit_j t_i = 0.
    let mut system = CMatrix::zeros(n * n, n);
    for i in 0..n {
        for &(j, k, v) in p.delta.row(i) {
            system[(i * n + j, k)] += v;
        }
        for j in 0..n {
            system[(i * n + j, i)] -= p.unit[j];
        }
    }
    let sols = null_space(&system, solve_tolerance());
    match sols.len() {
        0 => Err(OracleError::NoIntegral),
        1 => {
            let t = &sols[0];
            let norm = dot(t, &p.unit);
            if norm.norm() <= solve_tolerance::<T>() * crate::scalar::max_abs(t) {
                return Err(OracleError::IntegralVanishesOnUnit);
            }
            Ok(IntegralFunctional {
                values: t.iter().map(|z| *z / norm).collect(),
            })
        }
        k => Err(OracleError::IntegralNotUnique(k)),
    }
}

/// Precomputed data attached to a presentation with its integral: Gram
/// matrices, the functionals `q`, `p`, `q⁻¹`, convolution constants and the
/// dual coproduct. Every derived operation is a contraction against these.
#[derive(Clone, Debug)]
pub struct HopfOracle<T: Real> {
    pub(crate) p: HopfPresentation<T>,
    pub(crate) integral: IntegralFunctional<T>,
    pub(crate) products: Vec<Vec<(usize, C<T>)>>,
    /// `∫(b_i b_j)`.
    pub(crate) gram: CMatrix<T>,
    /// `∫(b_i S(b_j))`.
    pub(crate) gram_s: CMatrix<T>,
    pub(crate) q: Vector<T>,
    pub(crate) pf: Vector<T>,
    pub(crate) q_inv: Option<Vector<T>>,
    /// `Δ²(b_i) = Σ v b_a ⊗ b_b ⊗ b_c`.
    pub(crate) delta2: Vec<Vec<(usize, usize, usize, C<T>)>>,
    /// `b_i ∗ b_j = Σ_k K[i·n + j] b_k` from `∫(b_j S(b_i₁)) b_i₂`.
    pub(crate) conv1: Vec<Vec<(usize, C<T>)>>,
    /// The same product from `(b_j)₁ ∫((b_j)₂ S(b_i))`.
    pub(crate) conv2: Vec<Vec<(usize, C<T>)>>,
    /// `Δ_*(b_i)`, absent when `∫(b_i b_j)` is singular.
    pub(crate) coproduct_star: Option<Vec<CMatrix<T>>>,
}

impl<T: Real> HopfOracle<T> {
    pub fn new(p: HopfPresentation<T>, integral: IntegralFunctional<T>) -> Result<Self, OracleError> {
        p.check_shapes()?;
        if integral.values.len() != p.dim() {
            return Err(OracleError::Shape(p.dim()));
        }
        let n = p.dim();
        let products = p.product_table();
        let int_of = |a: usize, c: usize| -> C<T> {
            products[a * n + c]
                .iter()
                .fold(czero(), |acc, &(k, v)| acc + v * integral.values[k])
        };
        let gram = CMatrix::from_fn(n, n, int_of);
        let gram_s = &gram * &p.antipode;
        let s2 = &p.antipode * &p.antipode;

        // q(b_i) = Σ v ∫(S²(b_a) S(b_c)), p(b_i) = Σ v ∫(S(b_c) b_a) over Δ(b_i).
        let bilinear = |x: &[C<T>], y: &[C<T>]| dot(x, &gram.mul_vec(y));
        let s_col = |m: &CMatrix<T>, a: usize| -> Vector<T> { (0..n).map(|r| m[(r, a)]).collect() };
        let mut q = vec![czero(); n];
        let mut pf = vec![czero(); n];
        for (i, (qi, pi)) in q.iter_mut().zip(pf.iter_mut()).enumerate() {
            for &(a, c, v) in p.delta.row(i) {
                *qi += v * bilinear(&s_col(&s2, a), &s_col(&p.antipode, c));
                *pi += v * bilinear(&s_col(&p.antipode, c), &p.basis_vector(a));
            }
        }
        let q_inv = convolution_inverse(&p, &q);

        let mut delta2 = vec![Vec::new(); n];
        for (i, out) in delta2.iter_mut().enumerate() {
            let mut acc: std::collections::BTreeMap<(usize, usize, usize), C<T>> = Default::default();
            for &(j, k, v) in p.delta.row(i) {
                for &(a, b, w) in p.delta.row(j) {
                    *acc.entry((a, b, k)).or_insert_with(czero) += v * w;
                }
            }
            *out = acc
                .into_iter()
                .filter(|(_, v)| !is_zero(*v))
                .map(|((a, b, c), v)| (a, b, c, v))
                .collect();
        }

        let mut conv1 = vec![Vec::new(); n * n];
        let mut conv2 = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut one = vec![czero(); n];
                for &(a, c, v) in p.delta.row(i) {
                    one[c] += v * gram_s[(j, a)];
                }
                let mut two = vec![czero(); n];
                for &(a, c, v) in p.delta.row(j) {
                    two[a] += v * gram_s[(c, i)];
                }
                conv1[i * n + j] = sparse(&one);
                conv2[i * n + j] = sparse(&two);
            }
        }

        let mut oracle = HopfOracle {
            p,
            integral,
            products,
            gram,
            gram_s,
            q,
            pf,
            q_inv,
            delta2,
            conv1,
            conv2,
            coproduct_star: None,
        };
        oracle.coproduct_star = oracle.build_coproduct_star();
        Ok(oracle)
    }

    pub fn presentation(&self) -> &HopfPresentation<T> {
        &self.p
    }

    pub fn integral(&self) -> &IntegralFunctional<T> {
        &self.integral
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    /// The matrix `∫(b_i S(b_j))` of the pairing `(g, h) ↦ ∫(g S(h))`.
    pub fn pairing_gram(&self) -> &CMatrix<T> {
        &self.gram_s
    }

    /// The matrix `∫(b_i b_j)`.
    pub fn product_gram(&self) -> &CMatrix<T> {
        &self.gram
    }

    /// Condition number of the pairing Gram matrix (infinite if singular).
    pub fn pairing_condition(&self) -> f64 {
        condition_number(&self.gram_s, T::lit(1e-14).max(T::epsilon())).to_f64_lossy()
    }

    pub fn q_functional(&self) -> &[C<T>] {
        &self.q
    }

    pub fn p_functional(&self) -> &[C<T>] {
        &self.pf
    }

    /// Convolution inverse of `q` in `H*`, if it exists.
    pub fn q_inverse(&self) -> Option<&[C<T>]> {
        self.q_inv.as_deref()
    }

    /// `∫(xy)`.
    pub fn integral_pair(&self, x: &[C<T>], y: &[C<T>]) -> C<T> {
        dot(x, &self.gram.mul_vec(y))
    }

    /// `∫(x S(y))`.
    pub fn pairing(&self, x: &[C<T>], y: &[C<T>]) -> C<T> {
        dot(x, &self.gram_s.mul_vec(y))
    }

    pub(crate) fn contract(&self, table: &[Vec<(usize, C<T>)>], g: &[C<T>], f: &[C<T>]) -> Vector<T> {
        let n = self.dim();
        let mut out = vec![czero(); n];
        for (i, &gi) in g.iter().enumerate() {
            if is_zero(gi) {
                continue;
            }
            for (j, &fj) in f.iter().enumerate() {
                if is_zero(fj) {
                    continue;
                }
                for &(k, v) in &table[i * n + j] {
                    out[k] += gi * fj * v;
                }
            }
        }
        out
    }

    /// `g ∗ f = ∫(f S(g₁)) g₂`.
    pub fn conv_abstract(&self, g: &[C<T>], f: &[C<T>]) -> Vector<T> {
        self.contract(&self.conv1, g, f)
    }

    /// `g ∗ f = f₁ ∫(f₂ S(g))`, the second defining form.
    pub fn conv_abstract_alt(&self, g: &[C<T>], f: &[C<T>]) -> Vector<T> {
        self.contract(&self.conv2, g, f)
    }

    /// `h ↦ (g ↦ ∫(g S(h)))`, the embedding of the convolution algebra in `H*`.
    pub fn embed_functional(&self, h: &[C<T>]) -> Vector<T> {
        self.gram_s.mul_vec(h)
    }

    /// Convolution on `H ⊗ H`, factorwise.
    pub fn conv_tensor(&self, x: &CMatrix<T>, y: &CMatrix<T>) -> CMatrix<T> {
        let n = self.dim();
        let nx = crate::oracle::presentation::nonzeros(x);
        let ny = crate::oracle::presentation::nonzeros(y);
        let mut out = CMatrix::zeros(n, n);
        for &(a, b, xv) in &nx {
            for &(c, d, yv) in &ny {
                let w = xv * yv;
                for &(k, v) in &self.conv1[a * n + c] {
                    for &(l, u) in &self.conv1[b * n + d] {
                        out[(k, l)] += w * v * u;
                    }
                }
            }
        }
        out
    }
}

/// `φψ(h) = φ(h₁)ψ(h₂)`, the product of `H*`.
pub fn dual_convolve<T: Real>(p: &HopfPresentation<T>, phi: &[C<T>], psi: &[C<T>]) -> Vector<T> {
    (0..p.dim())
        .map(|i| {
            p.delta
                .row(i)
                .iter()
                .fold(czero(), |acc, &(a, c, v)| acc + v * phi[a] * psi[c])
        })
        .collect()
}

/// Solves `q ⋆ r = ε` in `H*` and checks `r ⋆ q = ε` as well.
fn convolution_inverse<T: Real>(p: &HopfPresentation<T>, q: &[C<T>]) -> Option<Vector<T>> {
    let n = p.dim();
    let mut system = CMatrix::zeros(n, n);
    for i in 0..n {
        for &(a, c, v) in p.delta.row(i) {
            system[(i, c)] += v * q[a];
        }
    }
    let r = crate::linalg::solve_consistent(&system, &p.epsilon, solve_tolerance())?;
    let back = dual_convolve(p, &r, q);
    let scale = T::one().max(crate::scalar::max_abs(&r));
    (crate::scalar::max_abs_diff(&back, &p.epsilon) <= T::lit(1e-8).max(T::epsilon().sqrt()) * scale).then_some(r)
}

pub(crate) fn sparse<T: Real>(v: &[C<T>]) -> Vec<(usize, C<T>)> {
    v.iter()
        .enumerate()
        .filter(|(_, z)| !is_zero(**z))
        .map(|(k, z)| (k, *z))
        .collect()
}
