use std::fmt;

use serde::Serialize;

use crate::linalg::cholesky_pivots;
use crate::model::{BlockLabel, InstanceSpec};
use crate::scalar::Real;

/// Smallest acceptable Cholesky pivot of `Q`, relative to `trace(Q)`.
pub const PD_TOLERANCE: f64 = 1e-10;
/// Largest acceptable `max|Q - Q†|`, relative to `max(1, max|Q|)`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Per-block outcome of [`validate_instance`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockCheck {
    pub label: String,
    pub dim: usize,
    pub hermiticity_residual: f64,
    /// Smallest Cholesky pivot divided by `trace(Q)` (or the raw pivot when
    /// the trace is not positive).
    pub min_pivot: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub dual_ok: bool,
    pub issues: Vec<String>,
}

impl BlockCheck {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub blocks: Vec<BlockCheck>,
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty() && self.blocks.iter().all(BlockCheck::passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:>4} {:>14} {:>14} {:>12} {:>5}  status",
            "label", "dim", "herm_resid", "min_pivot", "trace", "dual"
        )?;
        for b in &self.blocks {
            writeln!(
                f,
                "{:<12} {:>4} {:>14.6e} {:>14.6e} {:>12.6} {:>5}  {}",
                b.label,
                b.dim,
                b.hermiticity_residual,
                b.min_pivot,
                b.trace_re,
                if b.dual_ok { "ok" } else { "FAIL" },
                if b.passed() { "ok".to_owned() } else { b.issues.join("; ") }
            )?;
        }
        for i in &self.issues {
            writeln!(f, "instance: {i}")?;
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Checks every block invariant; never fails, the report carries failures.
pub fn validate_instance<T: Real>(spec: &InstanceSpec<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let zero = BlockLabel::zero();
    if spec.block(&zero).is_none() {
        report.issues.push("missing block \"0\"".to_owned());
    }
    for b in spec.blocks() {
        let q = b.q();
        let mut issues = Vec::new();
        let shape_ok = b.dim() > 0 && q.rows() == b.dim() && q.cols() == b.dim();
        if b.dim() == 0 {
            issues.push("dimension must be positive".to_owned());
        } else if !shape_ok {
            issues.push(format!(
                "Q is {}x{}, expected {}x{}",
                q.rows(),
                q.cols(),
                b.dim(),
                b.dim()
            ));
        }
        let any_nonfinite = q.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite());
        if any_nonfinite {
            issues.push("Q has non-finite entries".to_owned());
        }
        let trace = q.trace();
        let (herm, min_pivot) = if shape_ok && !any_nonfinite {
            let herm = q.hermiticity_residual().to_f64_lossy();
            let scale = q.max_abs().to_f64_lossy().max(1.0);
            if !(herm <= HERMITICITY_TOLERANCE * scale) {
                issues.push(format!("Q not Hermitian (residual {herm:.3e})"));
            }
            let pivots = cholesky_pivots(q);
            let raw = pivots.iter().copied().fold(T::infinity(), T::min).to_f64_lossy();
            let tr = trace.re.to_f64_lossy();
            let rel = if tr > 0.0 { raw / tr } else { raw };
            if !(rel > PD_TOLERANCE) || pivots.len() < b.dim() {
                issues.push(format!("Q not positive definite (min pivot {rel:.3e})"));
            }
            (herm, rel)
        } else {
            (f64::NAN, f64::NAN)
        };
        let tr_re = trace.re.to_f64_lossy();
        let tr_im = trace.im.to_f64_lossy();
        if !(tr_re > 0.0) || tr_im.abs() > HERMITICITY_TOLERANCE * tr_re.abs().max(1.0) {
            issues.push(format!("trace(Q) = {tr_re}{tr_im:+}i is not real positive"));
        }
        if b.label().is_zero() {
            let unit_ok = b.dim() == 1 && shape_ok && q[(0, 0)].re == T::one() && q[(0, 0)].im == T::zero();
            if !unit_ok {
                issues.push("block \"0\" must have dim 1 and Q = (1)".to_owned());
            }
        }
        let dual_ok = match spec.block(b.dual()) {
            None => {
                issues.push(format!("dual {:?} is not a label", b.dual().as_str()));
                false
            }
            Some(d) => {
                let mut ok = true;
                if d.dual() != b.label() {
                    issues.push(format!("dual of dual is {:?}", d.dual().as_str()));
                    ok = false;
                }
                if d.dim() != b.dim() {
                    issues.push(format!("dual block has dim {}", d.dim()));
                    ok = false;
                }
                if b.label().is_zero() && !b.dual().is_zero() {
                    issues.push("dual of \"0\" must be \"0\"".to_owned());
                    ok = false;
                }
                ok
            }
        };
        report.blocks.push(BlockCheck {
            label: b.label().as_str().to_owned(),
            dim: b.dim(),
            hermiticity_residual: herm,
            min_pivot,
            trace_re: tr_re,
            trace_im: tr_im,
            dual_ok,
            issues,
        });
    }
    report
}
