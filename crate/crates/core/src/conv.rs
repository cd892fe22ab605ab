//! The convolution algebra in block form.
//!
//! An element is a family of coefficient matrices `F_λ`. With reflection
//! matrix `Q_λ` the operations are
//!
//! * product: `(f ∗ g)_λ = F_λ Q_λ G_λ / tr Q_λ`
//! * involution: `star(f)_λ = Q_λ F_λ† Q_λ⁻¹`
//! * representation: `π_λ(f) = F_λ Q_λ / tr Q_λ`
//! * local unit: `E_λ = tr Q_λ · Q_λ⁻¹`
//!
//! `π` is multiplicative, sends `star` to the adjoint and `E_λ` to the
//! identity, so `f ↦ (π_λ(f))_λ` identifies the algebra with a direct sum of
//! full matrix algebras.

use std::collections::BTreeMap;

use crate::analysis::l2_norm;
use crate::linalg::{null_space, CMatrix};
use crate::model::{
    project, BlockLabel, ConvElement, Filtration, InstanceSpec, ModelError, ModuleVector, TruncationWindow,
};
use crate::report::Report;
use crate::scalar::{cone, czero, Real, C};

/// Convolution product `f ∗ g`. Blocks missing from either operand vanish.
pub fn convolve<T: Real>(
    spec: &InstanceSpec<T>,
    f: &ConvElement<T>,
    g: &ConvElement<T>,
) -> Result<ConvElement<T>, ModelError> {
    f.check_membership(spec)?;
    g.check_membership(spec)?;
    let mut out = ConvElement::zero();
    for (label, a) in f.blocks() {
        let Some(b) = g.get(label) else { continue };
        let block = spec.block_or_err(label)?;
        let m = (&(a * block.q()) * b).scale_real(T::one() / block.q_trace());
        out.insert(label.clone(), m);
    }
    Ok(out.normalized())
}

/// The involution `f ↦ f^⋆`, blockwise `F ↦ Q F† Q⁻¹`.
pub fn star<T: Real>(spec: &InstanceSpec<T>, f: &ConvElement<T>) -> Result<ConvElement<T>, ModelError> {
    f.check_membership(spec)?;
    let mut out = ConvElement::zero();
    for (label, m) in f.blocks() {
        let block = spec.block_or_err(label)?;
        let q_inv = block.q_inverse_or_err()?;
        out.insert(label.clone(), &(block.q() * &m.adjoint()) * q_inv);
    }
    Ok(out)
}

/// Matrix of `f` acting on the simple module of block `label`.
pub fn represent<T: Real>(
    spec: &InstanceSpec<T>,
    label: &BlockLabel,
    f: &ConvElement<T>,
) -> Result<CMatrix<T>, ModelError> {
    let block = spec.block_or_err(label)?;
    f.check_membership(spec)?;
    Ok(match f.get(label) {
        Some(m) => (m * block.q()).scale_real(T::one() / block.q_trace()),
        None => CMatrix::zeros(block.dim(), block.dim()),
    })
}

/// Inverse of [`represent`]: the element whose block matrices act as the
/// given operators. Blocks not listed are zero.
pub fn from_representation<T: Real>(
    spec: &InstanceSpec<T>,
    operators: impl IntoIterator<Item = (BlockLabel, CMatrix<T>)>,
) -> Result<ConvElement<T>, ModelError> {
    let mut out = ConvElement::zero();
    for (label, m) in operators {
        let block = spec.block_or_err(&label)?;
        if m.rows() != block.dim() || m.cols() != block.dim() {
            return Err(ModelError::Shape {
                label: label.as_str().to_owned(),
                expected: block.dim(),
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let f = (&m * block.q_inverse_or_err()?).scale_real(block.q_trace());
        out.insert(label, f);
    }
    Ok(out)
}

/// Action of `f` on a vector of a simple module.
pub fn act<T: Real>(
    spec: &InstanceSpec<T>,
    f: &ConvElement<T>,
    v: &ModuleVector<T>,
) -> Result<ModuleVector<T>, ModelError> {
    let m = represent(spec, &v.label, f)?;
    if v.coords.len() != m.cols() {
        return Err(ModelError::Shape {
            label: v.label.as_str().to_owned(),
            expected: m.cols(),
            rows: v.coords.len(),
            cols: 1,
        });
    }
    Ok(ModuleVector {
        label: v.label.clone(),
        coords: m.mul_vec(&v.coords),
    })
}

/// The unit `e_K` of the truncated algebra: `E_λ = tr Q_λ · Q_λ⁻¹` on `K`.
pub fn approximate_unit<T: Real>(
    spec: &InstanceSpec<T>,
    window: &TruncationWindow,
) -> Result<ConvElement<T>, ModelError> {
    let mut out = ConvElement::zero();
    for label in window.labels() {
        let block = spec.block_or_err(label)?;
        out.insert(label.clone(), block.q_inverse_or_err()?.scale_real(block.q_trace()));
    }
    Ok(out)
}

/// Counit of the dual structure: the trivial-block coefficient.
pub fn counit_star<T: Real>(f: &ConvElement<T>) -> C<T> {
    f.get(&BlockLabel::zero()).map_or(czero(), |m| m[(0, 0)])
}

/// Multiplicities of simple modules in a semisimple module.
pub type Multiplicities = BTreeMap<BlockLabel, usize>;

/// Basis of module maps between two direct sums of simple modules.
#[derive(Clone, Debug)]
pub struct IntertwinerBasis<T: Real> {
    pub source: Multiplicities,
    pub target: Multiplicities,
    pub maps: Vec<CMatrix<T>>,
    /// Largest `‖π_t(f) T − T π_s(f)‖_max` over generators and basis maps.
    pub residual: T,
}

impl<T: Real> IntertwinerBasis<T> {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }
}

/// `⊕_λ m_λ π_λ(f)` with blocks in label order.
pub fn direct_sum_representation<T: Real>(
    spec: &InstanceSpec<T>,
    mult: &Multiplicities,
    f: &ConvElement<T>,
) -> Result<CMatrix<T>, ModelError> {
    let mut parts = Vec::new();
    for (label, &m) in mult {
        let p = represent(spec, label, f)?;
        for _ in 0..m {
            parts.push(p.clone());
        }
    }
    let refs: Vec<&CMatrix<T>> = parts.iter().collect();
    Ok(CMatrix::direct_sum(&refs))
}

/// All `T` with `π_target(f) T = T π_source(f)` for every `f`, found by
/// solving the commutation equations for each coefficient matrix unit.
pub fn intertwiner_space<T: Real>(
    spec: &InstanceSpec<T>,
    source: &Multiplicities,
    target: &Multiplicities,
) -> Result<IntertwinerBasis<T>, ModelError> {
    let source: Multiplicities = source.iter().filter(|(_, &m)| m > 0).map(|(l, &m)| (l.clone(), m)).collect();
    let target: Multiplicities = target.iter().filter(|(_, &m)| m > 0).map(|(l, &m)| (l.clone(), m)).collect();
    let mut labels: Vec<&BlockLabel> = source.keys().chain(target.keys()).collect();
    labels.sort();
    labels.dedup();

    let mut generators = Vec::new();
    for label in labels {
        let d = spec.block_or_err(label)?.dim();
        for i in 0..d {
            for j in 0..d {
                let mut unit = CMatrix::zeros(d, d);
                unit[(i, j)] = cone();
                generators.push(ConvElement::single(label.clone(), unit));
            }
        }
    }
    let mut pairs = Vec::with_capacity(generators.len());
    for g in &generators {
        pairs.push((
            direct_sum_representation(spec, &source, g)?,
            direct_sum_representation(spec, &target, g)?,
        ));
    }
    let ds = pairs.first().map_or_else(|| dim_of(spec, &source), |p| p.0.rows());
    let dt = pairs.first().map_or_else(|| dim_of(spec, &target), |p| p.1.rows());
    let unknowns = ds * dt;
    if unknowns == 0 {
        return Ok(IntertwinerBasis {
            source,
            target,
            maps: Vec::new(),
            residual: T::zero(),
        });
    }

    // Unknown T[a][c] sits at index a*ds + c.
    let mut system = CMatrix::zeros(pairs.len() * unknowns, unknowns);
    for (g, (a_s, a_t)) in pairs.iter().enumerate() {
        for a in 0..dt {
            for b in 0..ds {
                let row = g * unknowns + a * ds + b;
                for c in 0..ds {
                    system[(row, a * ds + c)] += a_s[(c, b)];
                }
                for c in 0..dt {
                    system[(row, c * ds + b)] -= a_t[(a, c)];
                }
            }
        }
    }
    let basis = null_space(&system, T::lit(1e-10).max(T::epsilon() * T::lit(64.0)));
    let maps: Vec<CMatrix<T>> = basis.into_iter().map(|v| CMatrix::from_vec(dt, ds, v)).collect();
    let mut residual = T::zero();
    for m in &maps {
        for (a_s, a_t) in &pairs {
            residual = residual.max((a_t * m).max_abs_diff(&(m * a_s)));
        }
    }
    Ok(IntertwinerBasis {
        source,
        target,
        maps,
        residual,
    })
}

fn dim_of<T: Real>(spec: &InstanceSpec<T>, mult: &Multiplicities) -> usize {
    mult.iter()
        .map(|(l, m)| spec.block(l).map_or(0, |b| b.dim()) * m)
        .sum()
}

/// Verifies the approximate-unit axioms along a filtration for each sample.
///
/// Per window `K_n` and sample `f`: the truncation tail `‖f − f_K‖` (exact,
/// must be non-increasing and exactly zero once `K ⊇ supp f`), the two-sided
/// unit residuals `‖e_K ∗ f − f_K‖`, `‖f ∗ e_K − f_K‖`, the counit value
/// `ε_*(e_K) = 1`, idempotency `e_K ∗ e_K = e_K` and the factorization
/// witness `e_K = e_K ∗ star(e_K)`.
pub fn check_approximate_unit<T: Real>(
    spec: &InstanceSpec<T>,
    filtration: &Filtration,
    samples: &[ConvElement<T>],
    tolerance: f64,
) -> Report {
    let mut report = Report::new("approximate unit");
    let chain_ok = filtration
        .windows()
        .windows(2)
        .all(|w| w[0].is_subset(&w[1]) && w[0] != w[1]);
    report.holds("chain strictly increasing", chain_ok);

    let mut counit_err = 0.0f64;
    let mut idem_err = 0.0f64;
    let mut witness_err = 0.0f64;
    let mut unit_err = 0.0f64;
    let mut monotone = true;
    let mut exact_tail = true;
    let mut errors = false;

    for window in filtration.windows() {
        let Ok(e) = approximate_unit(spec, window) else {
            errors = true;
            continue;
        };
        counit_err = counit_err.max((counit_star(&e) - cone()).norm().to_f64_lossy());
        match (convolve(spec, &e, &e), star(spec, &e)) {
            (Ok(ee), Ok(es)) => {
                idem_err = idem_err.max(ee.max_abs_diff(&e).to_f64_lossy());
                match convolve(spec, &e, &es) {
                    Ok(w) => witness_err = witness_err.max(w.max_abs_diff(&e).to_f64_lossy()),
                    Err(_) => errors = true,
                }
            }
            _ => errors = true,
        }
    }

    for f in samples {
        let covering = TruncationWindow::covering(f);
        let mut previous: Option<f64> = None;
        for window in filtration.windows() {
            let proj = project(f, window);
            let tail = match l2_norm(spec, &f.sub(&proj)) {
                Ok(t) => t.to_f64_lossy(),
                Err(_) => {
                    errors = true;
                    continue;
                }
            };
            if let Some(p) = previous {
                if tail > p {
                    monotone = false;
                }
            }
            previous = Some(tail);
            if covering.is_subset(window) && tail != 0.0 {
                exact_tail = false;
            }
            let Ok(e) = approximate_unit(spec, window) else {
                errors = true;
                continue;
            };
            let scale = 1.0 + l2_norm(spec, f).map_or(f64::NAN, |x| x.to_f64_lossy());
            for r in [convolve(spec, &e, f), convolve(spec, f, &e)] {
                match r.and_then(|ef| l2_norm(spec, &ef.sub(&proj))) {
                    Ok(x) => unit_err = unit_err.max(x.to_f64_lossy() / scale),
                    Err(_) => errors = true,
                }
            }
        }
    }

    report.holds("all operations succeeded", !errors);
    report.at_most("counit(e_K) - 1", counit_err, tolerance);
    report.at_most("e_K * e_K - e_K", idem_err, tolerance);
    report.at_most("e_K * star(e_K) - e_K", witness_err, tolerance);
    report.at_most("e_K * f - f_K (two-sided, relative L2)", unit_err, tolerance);
    report.holds("truncation tail non-increasing", monotone);
    report.holds("truncation tail exactly 0 once K covers supp f", exact_tail);
    report
}
