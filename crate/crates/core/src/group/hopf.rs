use crate::group::{GroupError, GroupTable, Irrep, IrrepSet};
use crate::linalg::CMatrix;
use crate::model::{BlockLabel, BlockSpec, InstanceSpec, ModelError};
use crate::oracle::{ComodulePresentation, HopfPresentation, IntegralFunctional, Tensor3};
use crate::scalar::{cone, czero, Real, C};

/// The function algebra `C(G)` in the basis `{δ_x}` with the normalized
/// counting measure as integral.
pub fn build_function_hopf<T: Real>(g: &GroupTable) -> (HopfPresentation<T>, IntegralFunctional<T>) {
    let n = g.order();
    let one = cone::<T>();
    let m = Tensor3::from_triplets(n, (0..n).map(|x| (x, x, x, one))).expect("indices in range");
    let delta = Tensor3::from_triplets(
        n,
        (0..n).flat_map(|x| (0..n).map(move |y| (g.mul(x, y), x, y, one))),
    )
    .expect("indices in range");
    let epsilon = (0..n).map(|x| if x == g.identity() { one } else { czero() }).collect();
    let antipode = CMatrix::from_fn(n, n, |r, col| if r == g.inv(col) { one } else { czero() });
    let p = HopfPresentation {
        basis: g.elements().to_vec(),
        unit: vec![one; n],
        m,
        delta,
        epsilon,
        antipode,
        star: CMatrix::identity(n),
    };
    let h = T::one() / T::from_usize(n).unwrap_or_else(T::one);
    let integral = IntegralFunctional {
        values: vec![C::new(h, T::zero()); n],
    };
    (p, integral)
}

/// Coefficients `u_i^j(x) = ρ(x)[j][i]` of an irrep as a comodule of `C(G)`.
pub fn comodule_of_irrep<T: Real>(irrep: &Irrep<T>) -> ComodulePresentation<T> {
    ComodulePresentation::from_fn(irrep.dim(), |i, j| irrep.matrices.iter().map(|m| m[(j, i)]).collect())
}

/// One comodule per irrep, keyed by label, for block projections.
pub fn group_decomposition<T: Real>(irreps: &IrrepSet<T>) -> Vec<(BlockLabel, ComodulePresentation<T>)> {
    irreps
        .irreps
        .iter()
        .map(|r| (r.label.clone(), comodule_of_irrep(r)))
        .collect()
}

/// One block per irrep with `Q = I`; the dual is the conjugate irrep.
pub fn instance_from_group<T: Real>(g: &GroupTable, irreps: &IrrepSet<T>) -> Result<InstanceSpec<T>, GroupError> {
    irreps.check_complete(g)?;
    let blocks = irreps
        .irreps
        .iter()
        .map(|r| {
            let dual = irreps
                .dual_label(&r.label)
                .ok_or_else(|| GroupError::UnknownLabel(format!("dual of {}", r.label)))?;
            Ok(BlockSpec::new(r.label.clone(), r.dim(), CMatrix::identity(r.dim()), dual))
        })
        .collect::<Result<Vec<_>, GroupError>>()?;
    InstanceSpec::new(blocks).map_err(|e| match e {
        ModelError::DuplicateLabel(l) => GroupError::InvalidTable(format!("duplicate irrep label {l:?}")),
        other => GroupError::InvalidTable(other.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_group;
    use crate::oracle::{compute_integral, validate_hopf, HopfOracle, WindowProjector};
    use crate::scalar::c;

    #[test]
    fn z2_presentation() {
        let (g, _) = builtin_group::<f64>("z2").unwrap();
        let (p, int) = build_function_hopf::<f64>(&g);
        // Δ(δ₀) = δ₀⊗δ₀ + δ₁⊗δ₁.
        let d0 = p.coproduct(&p.basis_vector(0));
        assert_eq!(d0[(0, 0)], c(1., 0.));
        assert_eq!(d0[(1, 1)], c(1., 0.));
        assert_eq!(d0[(0, 1)], c(0., 0.));
        let r = validate_hopf(&p, 1e-14);
        assert!(r.passed(), "{r}");
        assert!(r.checks.iter().all(|c| c.bound != crate::report::Bound::AtMost || c.value == 0.0));
        assert_eq!(compute_integral(&p).unwrap(), int);
    }

    #[test]
    fn haar_integral_on_s3() {
        let (g, _) = builtin_group::<f64>("s3").unwrap();
        let (p, _) = build_function_hopf::<f64>(&g);
        let int = compute_integral(&p).unwrap();
        assert!(int.values.iter().all(|v| (*v - c(1.0 / 6.0, 0.)).norm() < 1e-15));
    }

    #[test]
    fn irrep_coefficients_satisfy_comodule_laws() {
        for name in ["s3", "d4", "z6"] {
            let (g, irreps) = builtin_group::<f64>(name).unwrap();
            let (p, _) = build_function_hopf::<f64>(&g);
            for r in &irreps.irreps {
                let (d, e) = comodule_of_irrep(r).law_residuals(&p);
                assert!(d < 1e-15 && e < 1e-15, "{name}/{}", r.label);
            }
        }
    }

    #[test]
    fn group_instances() {
        let (g, irreps) = builtin_group::<f64>("z2").unwrap();
        assert_eq!(instance_from_group(&g, &irreps).unwrap().len(), 2);
        let (g, irreps) = builtin_group::<f64>("s3").unwrap();
        let spec = instance_from_group(&g, &irreps).unwrap();
        let dims: Vec<usize> = spec.blocks().map(|b| b.dim()).collect();
        assert_eq!(dims, vec![1, 1, 2]);
    }

    #[test]
    fn reflection_matrix_is_identity_on_groups() {
        let (g, irreps) = builtin_group::<f64>("s3").unwrap();
        let (p, int) = build_function_hopf(&g);
        let oracle = HopfOracle::new(p, int).unwrap();
        for r in &irreps.irreps {
            let data = oracle.reflection_matrices(&comodule_of_irrep(r)).unwrap();
            assert!(data.q.max_abs_diff(&CMatrix::identity(r.dim())) < 1e-15);
            assert!(data.int_residual < 1e-15 && data.int2_residual < 1e-15);
            assert!(data.trace_minus_dim.norm() < 1e-15);
        }
    }

    #[test]
    fn projector_on_full_window_is_identity() {
        let (g, irreps) = builtin_group::<f64>("d4").unwrap();
        let spec = instance_from_group(&g, &irreps).unwrap();
        let pk = WindowProjector::from_blocks(8, &group_decomposition(&irreps), &spec.full_window()).unwrap();
        let f: Vec<_> = (0..8).map(|i| c(i as f64, 1.0)).collect();
        assert!(crate::scalar::max_abs_diff(&pk.apply(&f), &f) < 1e-14);
    }
}
