use crate::group::{GroupError, GroupTable};
use crate::linalg::CMatrix;
use crate::model::BlockLabel;
use crate::report::Report;
use crate::scalar::{czero, Real, C};

/// Residual required of built-in irrep fixtures.
pub const IRREP_TOLERANCE: f64 = 1e-12;

/// A unitary representation given by its matrix on every group element.
#[derive(Clone, Debug, PartialEq)]
pub struct Irrep<T: Real> {
    pub label: BlockLabel,
    pub matrices: Vec<CMatrix<T>>,
}

impl<T: Real> Irrep<T> {
    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, CMatrix::rows)
    }

    pub fn character(&self, x: usize) -> C<T> {
        self.matrices[x].trace()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrrepSet<T: Real> {
    pub irreps: Vec<Irrep<T>>,
}

impl<T: Real> IrrepSet<T> {
    pub fn get(&self, label: &BlockLabel) -> Option<&Irrep<T>> {
        self.irreps.iter().find(|r| &r.label == label)
    }

    pub fn dim_sum(&self) -> usize {
        self.irreps.iter().map(|r| r.dim() * r.dim()).sum()
    }

    /// Checks matrix shapes and completeness `Σ d² = |G|`.
    pub fn check_complete(&self, g: &GroupTable) -> Result<(), GroupError> {
        for r in &self.irreps {
            let d = r.dim();
            if d == 0 || r.matrices.len() != g.order() || r.matrices.iter().any(|m| m.rows() != d || m.cols() != d) {
                return Err(GroupError::IrrepShape(r.label.to_string()));
            }
        }
        let sum = self.dim_sum();
        if sum != g.order() {
            return Err(GroupError::IncompleteIrreps { sum, order: g.order() });
        }
        Ok(())
    }

    /// Label of the conjugate representation, matched by character.
    pub fn dual_label(&self, label: &BlockLabel) -> Option<BlockLabel> {
        let r = self.get(label)?;
        let tol = T::lit(1e-9).max(T::epsilon().sqrt());
        self.irreps
            .iter()
            .find(|s| {
                s.dim() == r.dim()
                    && (0..r.matrices.len()).all(|x| (s.character(x) - r.character(x).conj()).norm() <= tol)
            })
            .map(|s| s.label.clone())
    }
}

/// Homomorphism, unitarity, Schur orthogonality and completeness residuals.
pub fn validate_irreps<T: Real>(g: &GroupTable, irreps: &IrrepSet<T>, tolerance: f64) -> Report {
    let mut report = Report::new("irreducible representations");
    let n = g.order();
    let shapes_ok = irreps.irreps.iter().all(|r| {
        let d = r.dim();
        d > 0 && r.matrices.len() == n && r.matrices.iter().all(|m| m.rows() == d && m.cols() == d)
    });
    report.holds("matrix shapes", shapes_ok);
    if !shapes_ok {
        return report;
    }
    let trivial = irreps
        .get(&BlockLabel::zero())
        .is_some_and(|r| r.dim() == 1 && r.matrices.iter().all(|m| (m[(0, 0)] - C::new(T::one(), T::zero())).norm() == T::zero()));
    report.holds("trivial irrep labeled 0", trivial);
    let mut labels: Vec<&BlockLabel> = irreps.irreps.iter().map(|r| &r.label).collect();
    labels.sort();
    labels.dedup();
    report.holds("labels unique", labels.len() == irreps.irreps.len());

    let mut hom = T::zero();
    let mut unitary = T::zero();
    for r in &irreps.irreps {
        let id = CMatrix::identity(r.dim());
        for x in 0..n {
            unitary = unitary.max((&r.matrices[x] * &r.matrices[x].adjoint()).max_abs_diff(&id));
            for y in 0..n {
                hom = hom.max((&r.matrices[x] * &r.matrices[y]).max_abs_diff(&r.matrices[g.mul(x, y)]));
            }
        }
    }
    report.at_most("homomorphism", hom.to_f64_lossy(), tolerance);
    report.at_most("unitarity", unitary.to_f64_lossy(), tolerance);

    // (1/|G|) Σ_x ρ(x)_ij conj(ρ'(x)_kl) = δ_ρρ' δ_ik δ_jl / d.
    let inv_n = T::one() / T::from_usize(n).unwrap_or_else(T::one);
    let mut schur = T::zero();
    for (a, r) in irreps.irreps.iter().enumerate() {
        for (b, s) in irreps.irreps.iter().enumerate() {
            let (dr, ds) = (r.dim(), s.dim());
            for i in 0..dr {
                for j in 0..dr {
                    for k in 0..ds {
                        for l in 0..ds {
                            let sum = (0..n).fold(czero::<T>(), |acc, x| {
                                acc + r.matrices[x][(i, j)] * s.matrices[x][(k, l)].conj()
                            }) * inv_n;
                            let expect = if a == b && i == k && j == l {
                                T::one() / T::from_usize(dr).unwrap_or_else(T::one)
                            } else {
                                T::zero()
                            };
                            schur = schur.max((sum - C::new(expect, T::zero())).norm());
                        }
                    }
                }
            }
        }
    }
    report.at_most("schur orthogonality", schur.to_f64_lossy(), tolerance);
    report.at_most(
        "completeness |sum d^2 - |G||",
        (irreps.dim_sum() as f64 - n as f64).abs(),
        0.0,
    );
    report
}
