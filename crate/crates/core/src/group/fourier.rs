use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::{GroupError, GroupTable, IrrepSet};
use crate::linalg::CMatrix;
use crate::model::{random_complex, ConvElement};
use crate::scalar::{czero, Real, C};

/// A complex function on a group, indexed like the table's elements.
pub type GroupFunction<T> = Vec<C<T>>;

/// `F_λ[i][j] = d_λ (1/|G|) Σ_x f(x) conj(ρ_λ(x)[j][i])`, the coefficients of
/// `f = Σ_λ tr(F_λ ρ_λ(·))` in the basis `u_i^j(x) = ρ(x)[j][i]`.
pub fn fourier<T: Real>(g: &GroupTable, irreps: &IrrepSet<T>, f: &[C<T>]) -> Result<ConvElement<T>, GroupError> {
    irreps.check_complete(g)?;
    let n = g.order();
    if f.len() != n {
        return Err(GroupError::InvalidTable(format!("function has {} values for order {n}", f.len())));
    }
    let mut out = ConvElement::zero();
    for r in &irreps.irreps {
        let d = r.dim();
        let scale = T::from_usize(d).unwrap_or_else(T::one) / T::from_usize(n).unwrap_or_else(T::one);
        let m = CMatrix::from_fn(d, d, |i, j| {
            (0..n).fold(czero::<T>(), |acc, x| acc + f[x] * r.matrices[x][(j, i)].conj()) * scale
        });
        out.insert(r.label.clone(), m);
    }
    Ok(out)
}

/// `f(x) = Σ_λ tr(F_λ ρ_λ(x))`.
pub fn inverse_fourier<T: Real>(
    g: &GroupTable,
    irreps: &IrrepSet<T>,
    e: &ConvElement<T>,
) -> Result<GroupFunction<T>, GroupError> {
    irreps.check_complete(g)?;
    let mut out = vec![czero(); g.order()];
    for (label, m) in e.blocks() {
        let r = irreps
            .get(label)
            .ok_or_else(|| GroupError::UnknownLabel(label.to_string()))?;
        if m.rows() != r.dim() || m.cols() != r.dim() {
            return Err(GroupError::IrrepShape(label.to_string()));
        }
        for (x, v) in out.iter_mut().enumerate() {
            *v += (m * &r.matrices[x]).trace();
        }
    }
    Ok(out)
}

/// `(a ∗ b)(x) = (1/|G|) Σ_y b(y) a(y⁻¹x)`.
pub fn group_convolution<T: Real>(g: &GroupTable, a: &[C<T>], b: &[C<T>]) -> GroupFunction<T> {
    let n = g.order();
    let inv_n = T::one() / T::from_usize(n).unwrap_or_else(T::one);
    (0..n)
        .map(|x| {
            (0..n).fold(czero::<T>(), |acc, y| acc + b[y] * a[g.mul(g.inv(y), x)]) * inv_n
        })
        .collect()
}

/// Matrix of `φ ↦ f ∗ φ` on functions: `M[x][y] = f(y⁻¹x)/|G|`.
pub fn left_convolution_matrix<T: Real>(g: &GroupTable, f: &[C<T>]) -> CMatrix<T> {
    let n = g.order();
    let inv_n = T::one() / T::from_usize(n).unwrap_or_else(T::one);
    CMatrix::from_fn(n, n, |x, y| f[g.mul(g.inv(y), x)] * inv_n)
}

/// Deterministic random function with values in the unit box.
pub fn random_function<T: Real>(g: &GroupTable, seed: u64) -> GroupFunction<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.order()).map(|_| random_complex(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{cstar_norm, inner_product, operator_norm};
    use crate::conv::{approximate_unit, convolve, counit_star};
    use crate::group::{builtin_group, instance_from_group};
    use crate::model::TruncationWindow;
    use crate::scalar::c;

    fn delta(n: usize, x: usize) -> Vec<C<f64>> {
        let mut v = vec![c(0., 0.); n];
        v[x] = c(1., 0.);
        v
    }

    #[test]
    fn constant_function_lands_in_block_zero() {
        let (g, irreps) = builtin_group::<f64>("s3").unwrap();
        let f = fourier(&g, &irreps, &[c(1., 0.); 6]).unwrap();
        for (label, m) in f.blocks() {
            let expect = if label.is_zero() { 1.0 } else { 0.0 };
            assert!((m[(0, 0)] - c(expect, 0.)).norm() < 1e-15);
            assert!(m.max_abs() - expect.abs() < 1e-15);
        }
    }

    #[test]
    fn coefficient_function_is_a_matrix_unit() {
        let (g, irreps) = builtin_group::<f64>("s3").unwrap();
        let r = irreps.get(&"std".into()).unwrap();
        // u_0^1(x) = ρ(x)[1][0].
        let u: Vec<_> = (0..6).map(|x| r.matrices[x][(1, 0)]).collect();
        let f = fourier(&g, &irreps, &u).unwrap();
        let m = f.get(&"std".into()).unwrap();
        let mut unit = CMatrix::zeros(2, 2);
        unit[(0, 1)] = c(1., 0.);
        assert!(m.max_abs_diff(&unit) < 1e-15);
    }

    #[test]
    fn round_trips() {
        for name in ["s3", "d4", "z6"] {
            let (g, irreps) = builtin_group::<f64>(name).unwrap();
            let f = random_function(&g, 9);
            let back = inverse_fourier(&g, &irreps, &fourier(&g, &irreps, &f).unwrap()).unwrap();
            assert!(crate::scalar::max_abs_diff(&back, &f) < 1e-12);
        }
    }

    #[test]
    fn delta_convolution() {
        let (g, irreps) = builtin_group::<f64>("s3").unwrap();
        let spec = instance_from_group(&g, &irreps).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                let conv = group_convolution(&g, &delta(6, x), &delta(6, y));
                let mut expect = vec![c(0., 0.); 6];
                expect[g.mul(y, x)] = c(1.0 / 6.0, 0.);
                assert!(crate::scalar::max_abs_diff(&conv, &expect) < 1e-16);
                let lhs = convolve(
                    &spec,
                    &fourier(&g, &irreps, &delta(6, x)).unwrap(),
                    &fourier(&g, &irreps, &delta(6, y)).unwrap(),
                )
                .unwrap();
                let rhs = fourier(&g, &irreps, &expect).unwrap();
                assert!(lhs.max_abs_diff(&rhs) < 1e-15);
            }
        }
    }

    #[test]
    fn constant_one_averages() {
        let (g, _) = builtin_group::<f64>("d4").unwrap();
        let f = random_function(&g, 3);
        let mean = f.iter().sum::<C<f64>>() / 8.0;
        let conv = group_convolution(&g, &[c(1., 0.); 8], &f);
        assert!(conv.iter().all(|z| (*z - mean).norm() < 1e-15));
    }

    #[test]
    fn parseval_counit_and_regular_norm() {
        let (g, irreps) = builtin_group::<f64>("d4").unwrap();
        let spec = instance_from_group(&g, &irreps).unwrap();
        let (f, h) = (random_function(&g, 1), random_function(&g, 2));
        let (ff, fh) = (fourier(&g, &irreps, &f).unwrap(), fourier(&g, &irreps, &h).unwrap());
        let direct: C<f64> = f.iter().zip(&h).map(|(a, b)| a * b.conj()).sum::<C<f64>>() / 8.0;
        assert!((inner_product(&spec, &ff, &fh).unwrap() - direct).norm() < 1e-14);
        assert!((counit_star(&ff) - f.iter().sum::<C<f64>>() / 8.0).norm() < 1e-15);
        let reg = operator_norm(&left_convolution_matrix(&g, &f)).unwrap();
        assert!((cstar_norm(&spec, &ff).unwrap() - reg).abs() < 1e-12);
    }

    #[test]
    fn character_sum_is_the_approximate_unit() {
        let (g, irreps) = builtin_group::<f64>("s3").unwrap();
        let spec = instance_from_group(&g, &irreps).unwrap();
        let k = TruncationWindow::new(["0".into(), "std".into()]).unwrap();
        let mut e = vec![c(0., 0.); 6];
        for r in irreps.irreps.iter().filter(|r| k.contains(&r.label)) {
            for (x, v) in e.iter_mut().enumerate() {
                *v += r.character(x) * r.dim() as f64;
            }
        }
        let fe = fourier(&g, &irreps, &e).unwrap().normalized();
        let unit = approximate_unit(&spec, &k).unwrap();
        assert!(fe.max_abs_diff(&unit) < 1e-14);
    }
}
