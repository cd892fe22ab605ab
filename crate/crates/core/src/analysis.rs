//! Inner product, L² and C* norms, and the norm inequalities between them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::conv::{convolve, represent, star};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::model::{
    project, random_element, random_window, ConvElement, InstanceSpec, ModelError, TruncationWindow,
};
use crate::scalar::{czero, Real, C};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("operator norm needs a square matrix, got {0}x{1}")]
    NonSquare(usize, usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Convergence target of the Jacobi iteration inside [`operator_norm`].
pub const OPERATOR_NORM_TOLERANCE: f64 = 1e-13;

/// `⟨f, g⟩ = Σ_λ tr(F_λ Q_λ G_λ†) / tr Q_λ`.
pub fn inner_product<T: Real>(
    spec: &InstanceSpec<T>,
    f: &ConvElement<T>,
    g: &ConvElement<T>,
) -> Result<C<T>, ModelError> {
    f.check_membership(spec)?;
    g.check_membership(spec)?;
    let mut acc = czero();
    for (label, a) in f.blocks() {
        let Some(b) = g.get(label) else { continue };
        let block = spec.block_or_err(label)?;
        acc += (&(a * block.q()) * &b.adjoint()).trace() / block.q_trace();
    }
    Ok(acc)
}

pub fn l2_norm<T: Real>(spec: &InstanceSpec<T>, f: &ConvElement<T>) -> Result<T, ModelError> {
    Ok(inner_product(spec, f, f)?.re.max(T::zero()).sqrt())
}

/// Largest singular value: square root of the top Jacobi eigenvalue of `M†M`.
pub fn operator_norm<T: Real>(m: &CMatrix<T>) -> Result<T, AnalysisError> {
    if !m.is_square() {
        return Err(AnalysisError::NonSquare(m.rows(), m.cols()));
    }
    if m.rows() == 0 {
        return Ok(T::zero());
    }
    let tol = T::lit(OPERATOR_NORM_TOLERANCE).max(T::epsilon());
    let eig = hermitian_eigen(&(&m.adjoint() * m), tol);
    Ok(eig.values.last().copied().unwrap_or_else(T::zero).max(T::zero()).sqrt())
}

/// `sup_λ ‖π_λ(f)‖`; zero for the empty element.
pub fn cstar_norm<T: Real>(spec: &InstanceSpec<T>, f: &ConvElement<T>) -> Result<T, AnalysisError> {
    let mut best = T::zero();
    for label in f.support() {
        best = best.max(operator_norm(&represent(spec, label, f)?)?);
    }
    Ok(best)
}

/// `(‖f − f_K‖_{L²}, ‖f − f_K‖_{C*})`, exactly zero once `K ⊇ supp f`.
pub fn truncation_tail<T: Real>(
    spec: &InstanceSpec<T>,
    f: &ConvElement<T>,
    window: &TruncationWindow,
) -> Result<(T, T), AnalysisError> {
    let rest = ConvElement::from_blocks(
        f.blocks()
            .filter(|(l, _)| !window.contains(l))
            .map(|(l, m)| (l.clone(), m.clone())),
    );
    debug_assert_eq!(f.sub(&project(f, window)).max_abs_diff(&rest), T::zero());
    Ok((l2_norm(spec, &rest)?, cstar_norm(spec, &rest)?))
}

/// One sampled pair in a [`NormReport`].
#[derive(Clone, Debug, Serialize)]
pub struct NormSample {
    pub l2_f: f64,
    pub l2_g: f64,
    pub l2_fg: f64,
    pub cstar_f: f64,
    pub cstar_g: f64,
    pub cstar_fg: f64,
    /// `(‖f‖‖g‖ − ‖f∗g‖)_{L²}` scaled by `max(1, ‖f‖‖g‖)`.
    pub l2_submult_slack: f64,
    /// `(‖f‖_{L²} − ‖f‖_{C*})` scaled by `max(1, ‖f‖_{L²})`.
    pub l2_cstar_slack: f64,
    pub cstar_submult_slack: f64,
    /// `|‖f^⋆∗f‖ − ‖f‖²| / ‖f‖²` in the C* norm.
    pub cstar_identity_rel: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub samples: Vec<NormSample>,
    pub slack_threshold: f64,
    pub identity_threshold: f64,
}

/// Slack below which an inequality counts as violated.
pub const SLACK_THRESHOLD: f64 = -1e-12;
/// Relative tolerance on the C*-identity.
pub const CSTAR_IDENTITY_TOLERANCE: f64 = 1e-10;

impl NormReport {
    pub fn violations(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| {
                !(s.l2_submult_slack >= self.slack_threshold
                    && s.l2_cstar_slack >= self.slack_threshold
                    && s.cstar_submult_slack >= self.slack_threshold
                    && s.cstar_identity_rel <= self.identity_threshold)
            })
            .count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }

    pub fn min_slacks(&self) -> (f64, f64, f64) {
        let min = |f: fn(&NormSample) -> f64| self.samples.iter().map(f).fold(f64::INFINITY, f64::min);
        (
            min(|s| s.l2_submult_slack),
            min(|s| s.l2_cstar_slack),
            min(|s| s.cstar_submult_slack),
        )
    }

    pub fn max_identity_rel(&self) -> f64 {
        self.samples.iter().map(|s| s.cstar_identity_rel).fold(0.0, f64::max)
    }
}

impl fmt::Display for NormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.min_slacks();
        writeln!(f, "{:<34} {:>14}  {:>10}", "inequality", "min slack", "threshold")?;
        writeln!(f, "{:<34} {:>14.6e}  {:>10.1e}", "L2 submultiplicativity", a, self.slack_threshold)?;
        writeln!(f, "{:<34} {:>14.6e}  {:>10.1e}", "L2 >= C*", b, self.slack_threshold)?;
        writeln!(f, "{:<34} {:>14.6e}  {:>10.1e}", "C* submultiplicativity", c, self.slack_threshold)?;
        writeln!(
            f,
            "{:<34} {:>14.6e}  {:>10.1e}",
            "C*-identity (max rel error)",
            self.max_identity_rel(),
            self.identity_threshold
        )?;
        write!(f, "samples: {}  violations: {}", self.samples.len(), self.violations())
    }
}

/// Samples random pairs and records every norm inequality.
pub fn check_norm_inequalities<T: Real>(
    spec: &InstanceSpec<T>,
    seed: u64,
    n_samples: usize,
) -> Result<NormReport, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let kf = random_window(spec, &mut rng);
        let kg = random_window(spec, &mut rng);
        let f = random_element(spec, &kf, rng.gen())?;
        let g = random_element(spec, &kg, rng.gen())?;
        samples.push(measure_pair(spec, &f, &g)?);
    }
    Ok(NormReport {
        samples,
        slack_threshold: SLACK_THRESHOLD,
        identity_threshold: CSTAR_IDENTITY_TOLERANCE,
    })
}

/// Norm data for one pair `(f, g)`.
pub fn measure_pair<T: Real>(
    spec: &InstanceSpec<T>,
    f: &ConvElement<T>,
    g: &ConvElement<T>,
) -> Result<NormSample, AnalysisError> {
    let fg = convolve(spec, f, g)?;
    let l2 = |x: &ConvElement<T>| l2_norm(spec, x).map(Real::to_f64_lossy);
    let cs = |x: &ConvElement<T>| cstar_norm(spec, x).map(Real::to_f64_lossy);
    let (l2_f, l2_g, l2_fg) = (l2(f)?, l2(g)?, l2(&fg)?);
    let (cstar_f, cstar_g, cstar_fg) = (cs(f)?, cs(g)?, cs(&fg)?);
    let sf = convolve(spec, &star(spec, f)?, f)?;
    let id_lhs = cs(&sf)?;
    let id_rhs = cstar_f * cstar_f;
    let cstar_identity_rel = if id_rhs > 0.0 {
        (id_lhs - id_rhs).abs() / id_rhs
    } else {
        id_lhs
    };
    let rel = |bound: f64, value: f64| (bound - value) / bound.max(1.0);
    Ok(NormSample {
        l2_f,
        l2_g,
        l2_fg,
        cstar_f,
        cstar_g,
        cstar_fg,
        l2_submult_slack: rel(l2_f * l2_g, l2_fg),
        l2_cstar_slack: rel(l2_f, cstar_f),
        cstar_submult_slack: rel(cstar_f * cstar_g, cstar_fg),
        cstar_identity_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::approximate_unit;
    use crate::model::BlockSpec;
    use crate::scalar::c;
    use rand::Rng;

    fn spec() -> InstanceSpec<f64> {
        InstanceSpec::new([
            BlockSpec::identity("0", 1),
            BlockSpec::new("q2", 2, CMatrix::from_real_diag(&[2.0, 0.5]), "q2"),
            BlockSpec::new("q3", 3, CMatrix::from_real_diag(&[4.0, 1.0, 0.25]), "q3"),
            BlockSpec::identity("a", 1),
            BlockSpec::identity("b", 2),
        ])
        .unwrap()
    }

    #[test]
    fn trivial_unit_has_unit_norms() {
        let s = spec();
        let e0 = approximate_unit(&s, &TruncationWindow::trivial()).unwrap();
        assert_eq!(inner_product(&s, &e0, &e0).unwrap(), c(1., 0.));
        assert_eq!(l2_norm(&s, &e0).unwrap(), 1.0);
        assert_eq!(cstar_norm(&s, &e0).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_blocks_are_orthogonal() {
        let s = spec();
        let f = ConvElement::single("q2", CMatrix::identity(2));
        let g = ConvElement::single("q3", CMatrix::identity(3));
        assert_eq!(inner_product(&s, &f, &g).unwrap(), c(0., 0.));
    }

    #[test]
    fn squared_norm_adds_over_blocks() {
        let s = spec();
        let f = random_element(&s, &s.full_window(), 5).unwrap();
        let total = l2_norm(&s, &f).unwrap().powi(2);
        let parts: f64 = f
            .blocks()
            .map(|(l, m)| l2_norm(&s, &ConvElement::single(l.clone(), m.clone())).unwrap().powi(2))
            .sum();
        assert!((total - parts).abs() < 1e-13 * total);
    }

    #[test]
    fn block_unit_norm_is_trace_q_times_trace_q_inverse() {
        // ‖e_λ‖² = tr(E Q E†)/tr Q with E = tr Q · Q⁻¹, i.e. tr(Q)·tr(Q⁻¹).
        let s = spec();
        let e = ConvElement::single("q3", CMatrix::from_real_diag(&[0.25, 1.0, 4.0]).scale_real(5.25));
        let expected = 5.25 * 5.25;
        assert!((l2_norm(&s, &e).unwrap().powi(2) - expected).abs() < 1e-12);
        let e2 = ConvElement::single("q2", CMatrix::from_real_diag(&[0.5, 2.0]).scale_real(2.5));
        assert!((l2_norm(&s, &e2).unwrap().powi(2) - 6.25).abs() < 1e-12);
        assert!((cstar_norm(&s, &e2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inner_product_is_hermitian_and_positive() {
        let s = spec();
        let k = s.full_window();
        let f = random_element(&s, &k, 1).unwrap();
        let g = random_element(&s, &k, 2).unwrap();
        let fg = inner_product(&s, &f, &g).unwrap();
        let gf = inner_product(&s, &g, &f).unwrap();
        assert!((fg - gf.conj()).norm() < 1e-14);
        let ff = inner_product(&s, &f, &f).unwrap();
        assert!(ff.re > 0.0 && ff.im.abs() < 1e-14);
    }

    #[test]
    fn operator_norm_basics() {
        assert_eq!(operator_norm(&CMatrix::<f64>::from_real_diag(&[3.0, 1.0])).unwrap(), 3.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMatrix::<f64>::from_rows(&[vec![c(s, 0.), c(0., s)], vec![c(0., s), c(s, 0.)]]).unwrap();
        assert!((operator_norm(&u).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(
            operator_norm(&CMatrix::<f64>::zeros(2, 3)),
            Err(AnalysisError::NonSquare(2, 3))
        ));
    }

    #[test]
    fn operator_norm_against_random_rayleigh_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let m = CMatrix::from_fn(3, 3, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let norm = operator_norm(&m).unwrap();
        let mut best: f64 = 0.0;
        for _ in 0..100_000 {
            let x: Vec<C<f64>> = (0..3)
                .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let mx = m.mul_vec(&x).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            best = best.max(mx / nx);
        }
        // The sampled maximum is a lower bound; sampling a 6-dimensional
        // real sphere only gets within a few 1e-3 of the top.
        assert!(best <= norm + 1e-3);
        assert!(norm - best < 1e-2 * norm, "norm {norm} sampled {best}");
        assert!(norm <= m.frobenius_norm());
    }

    #[test]
    fn cstar_of_empty_is_zero() {
        assert_eq!(cstar_norm(&spec(), &ConvElement::zero()).unwrap(), 0.0);
    }

    #[test]
    fn tails() {
        let s = spec();
        let f = random_element(&s, &TruncationWindow::new(["0".into(), "a".into(), "q2".into()]).unwrap(), 4)
            .unwrap();
        assert_eq!(truncation_tail(&s, &f, &s.full_window()).unwrap(), (0.0, 0.0));
        let g = project(&f, &TruncationWindow::new(["0".into(), "q2".into()]).unwrap()).sub(&project(
            &f,
            &TruncationWindow::trivial(),
        ));
        let g = g.normalized();
        let (l2, cs) = truncation_tail(&s, &g, &TruncationWindow::trivial()).unwrap();
        assert_eq!(l2, l2_norm(&s, &g).unwrap());
        assert_eq!(cs, cstar_norm(&s, &g).unwrap());
    }

    #[test]
    fn one_dimensional_blocks_reduce_to_modulus() {
        let s = spec();
        let f = ConvElement::scalar(c(3., 4.));
        let g = ConvElement::scalar(c(1., -1.));
        let m = measure_pair(&s, &f, &g).unwrap();
        assert!((m.l2_fg - 5.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!(m.l2_submult_slack.abs() < 1e-15);
    }

    #[test]
    fn inequalities_hold_on_q_blocks() {
        let r = check_norm_inequalities(&spec(), 3, 200).unwrap();
        assert!(r.passed(), "{r}");
    }
}
