//! Brute-force engine for finite-dimensional Hopf *-algebras given by
//! structure constants. Every block formula of the convolution algebra is
//! cross-checked against contractions computed here.

mod comodule;
mod dual;
mod integral;
mod io;
mod presentation;
mod tensor;

use thiserror::Error;

use crate::linalg::CMatrix;
use crate::report::Report;
use crate::scalar::{cone, czero, Real};

pub use comodule::{comodule_hom_space, CoactionForm, ComodulePresentation, ModulePresentation, ReflectionData};
pub use dual::WindowProjector;
pub use integral::{compute_integral, dual_convolve, HopfOracle, IntegralFunctional};
pub use io::{load_hopf, save_hopf, HOPF_FORMAT};
pub use presentation::{HopfPresentation, Vector};
pub use tensor::Tensor3;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("presentation tensors do not match the basis dimension {0}")]
    Shape(usize),
    #[error("no integral: the invariance system has only the zero solution")]
    NoIntegral,
    #[error("integral is not unique: solution space has dimension {0}")]
    IntegralNotUnique(usize),
    #[error("integral vanishes on the unit and cannot be normalized")]
    IntegralVanishesOnUnit,
    #[error("Gram matrix of the integral pairing is singular")]
    SingularGram,
    #[error("reflection matrix is singular")]
    SingularReflection,
    #[error("coefficients do not satisfy the comodule laws")]
    NotAComodule,
    #[error("module is not cyclic for the supplied generator")]
    NotCyclic,
    #[error("element has a component of size {0:e} outside the window")]
    OutsideWindow(f64),
    #[error("window spans no coefficients")]
    EmptyWindow,
    #[error("block decomposition has {0} coefficient vectors for dimension {1}")]
    IncompleteDecomposition(usize, usize),
    #[error("truncated algebra has no unit")]
    NoUnit,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Relative tolerance for rank decisions in the oracle's linear solves.
pub(crate) fn solve_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(1024.0))
}

/// Residual of every Hopf *-algebra axiom, plus the Sweedler identity
/// `∫(g S(h₁)) h₂ = g₁ ∫(g₂ S(h))` on all basis pairs.
pub fn validate_hopf<T: Real>(p: &HopfPresentation<T>, tolerance: f64) -> Report {
    let mut report = Report::new("hopf axioms");
    if p.check_shapes().is_err() {
        report.holds("tensor shapes", false);
        return report;
    }
    let n = p.dim();
    let e = |i: usize| p.basis_vector(i);
    let f = |x: T| x.to_f64_lossy();
    let table = p.product_table();
    let basis: Vec<Vector<T>> = (0..n).map(e).collect();
    let products: Vec<Vec<Vector<T>>> = (0..n)
        .map(|i| (0..n).map(|j| p.mul(&basis[i], &basis[j])).collect())
        .collect();

    let mut assoc = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let l = p.mul(&products[i][j], &basis[k]);
                let r = p.mul(&basis[i], &products[j][k]);
                assoc = assoc.max(crate::scalar::max_abs_diff(&l, &r));
            }
        }
    }
    report.at_most("product associative", f(assoc), tolerance);

    let mut unit = T::zero();
    for b in &basis {
        unit = unit
            .max(crate::scalar::max_abs_diff(&p.mul(&p.unit, b), b))
            .max(crate::scalar::max_abs_diff(&p.mul(b, &p.unit), b));
    }
    report.at_most("unit law", f(unit), tolerance);

    let coproducts: Vec<CMatrix<T>> = basis.iter().map(|b| p.coproduct(b)).collect();
    let unit_tensor = CMatrix::from_fn(n, n, |a, b| p.unit[a] * p.unit[b]);
    let mut delta_alg = p.coproduct(&p.unit).max_abs_diff(&unit_tensor);
    let mut eps_alg = (p.counit(&p.unit) - cone()).norm();
    for i in 0..n {
        for j in 0..n {
            let lhs = p.coproduct(&products[i][j]);
            let rhs = p.tensor_mul(&table, &coproducts[i], &coproducts[j]);
            delta_alg = delta_alg.max(lhs.max_abs_diff(&rhs));
            eps_alg = eps_alg.max((p.counit(&products[i][j]) - p.epsilon[i] * p.epsilon[j]).norm());
        }
    }
    report.at_most("coproduct is an algebra map", f(delta_alg), tolerance);
    report.at_most("counit is an algebra map", f(eps_alg), tolerance);

    let mut counit = T::zero();
    let mut coassoc = T::zero();
    let mut antipode = T::zero();
    let s = &p.antipode;
    let id = CMatrix::identity(n);
    for i in 0..n {
        let d = &coproducts[i];
        let mut left = vec![czero(); n];
        let mut right = vec![czero(); n];
        for a in 0..n {
            for b in 0..n {
                left[b] += p.epsilon[a] * d[(a, b)];
                right[a] += d[(a, b)] * p.epsilon[b];
            }
        }
        counit = counit
            .max(crate::scalar::max_abs_diff(&left, &basis[i]))
            .max(crate::scalar::max_abs_diff(&right, &basis[i]));
        let (l, r) = p.coassociativity_sides(d);
        coassoc = coassoc.max(crate::scalar::max_abs_diff(&l, &r));
        let target: Vec<_> = p.unit.iter().map(|u| *u * p.epsilon[i]).collect();
        let sl = p.mul_tensor(&HopfPresentation::map_tensor(s, &id, d));
        let sr = p.mul_tensor(&HopfPresentation::map_tensor(&id, s, d));
        antipode = antipode
            .max(crate::scalar::max_abs_diff(&sl, &target))
            .max(crate::scalar::max_abs_diff(&sr, &target));
    }
    report.at_most("counit law", f(counit), tolerance);
    report.at_most("coassociativity", f(coassoc), tolerance);
    report.at_most("antipode law", f(antipode), tolerance);

    let mut star_inv = T::zero();
    let mut star_anti = T::zero();
    let mut star_delta = T::zero();
    for i in 0..n {
        star_inv = star_inv.max(crate::scalar::max_abs_diff(&p.apply_star(&p.apply_star(&basis[i])), &basis[i]));
        let si = p.apply_star(&basis[i]);
        for j in 0..n {
            let lhs = p.apply_star(&products[i][j]);
            let rhs = p.mul(&p.apply_star(&basis[j]), &si);
            star_anti = star_anti.max(crate::scalar::max_abs_diff(&lhs, &rhs));
        }
        // Δ(x*) = (* ⊗ *)Δ(x); the conjugate-linear map acts as star·conj.
        let lhs = p.coproduct(&si);
        let rhs = HopfPresentation::map_tensor(&p.star, &p.star, &coproducts[i].conj());
        star_delta = star_delta.max(lhs.max_abs_diff(&rhs));
    }
    report.at_most("star involutive", f(star_inv), tolerance);
    report.at_most("star anti-multiplicative", f(star_anti), tolerance);
    report.at_most("coproduct is a *-map", f(star_delta), tolerance);

    match compute_integral(p) {
        Ok(int) => {
            report.holds("integral exists and is unique", true);
            report.at_most("left integral axiom", f(int.left_residual(p)), tolerance);
            report.at_most("sweedler identity", f(sweedler_residual(p, &int)), tolerance);
        }
        Err(_) => {
            report.holds("integral exists and is unique", false);
        }
    }
    report
}

/// Largest residual of `∫(g S(h₁)) h₂ = g₁ ∫(g₂ S(h))` over basis pairs.
pub fn sweedler_residual<T: Real>(p: &HopfPresentation<T>, integral: &IntegralFunctional<T>) -> T {
    let n = p.dim();
    let gram_s = CMatrix::from_fn(n, n, |i, j| {
        let s_bj: Vec<_> = (0..n).map(|r| p.antipode[(r, j)]).collect();
        integral.apply(&p.mul(&p.basis_vector(i), &s_bj))
    });
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let mut lhs = vec![czero(); n];
            for &(a, c, v) in p.delta.row(j) {
                lhs[c] += v * gram_s[(i, a)];
            }
            let mut rhs = vec![czero(); n];
            for &(a, c, v) in p.delta.row(i) {
                rhs[a] += v * gram_s[(c, j)];
            }
            worst = worst.max(crate::scalar::max_abs_diff(&lhs, &rhs));
        }
    }
    worst
}

/// Largest residual of `S²(h) = q(h₁) h₂ q⁻¹(h₃)` over the basis; `None`
/// when `q` has no convolution inverse.
pub fn co_inner_residual<T: Real>(oracle: &HopfOracle<T>) -> Option<T> {
    let q_inv = oracle.q_inverse()?;
    let p = oracle.presentation();
    let n = p.dim();
    let s2 = &p.antipode * &p.antipode;
    let mut worst = T::zero();
    for i in 0..n {
        let mut rhs = vec![czero(); n];
        for &(a, b, c, v) in &oracle.delta2[i] {
            rhs[b] += v * oracle.q_functional()[a] * q_inv[c];
        }
        let lhs: Vec<_> = (0..n).map(|r| s2[(r, i)]).collect();
        worst = worst.max(crate::scalar::max_abs_diff(&lhs, &rhs));
    }
    Some(worst)
}
