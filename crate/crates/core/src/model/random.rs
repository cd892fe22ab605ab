use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::CMatrix;
use crate::model::{BlockLabel, ConvElement, InstanceSpec, ModelError, TruncationWindow};
use crate::scalar::{Real, C};

/// Complex number with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_complex<T: Real>(rng: &mut impl Rng) -> C<T> {
    let re: f64 = rng.gen_range(-1.0..=1.0);
    let im: f64 = rng.gen_range(-1.0..=1.0);
    C::new(T::lit(re), T::lit(im))
}

/// A random window: `"0"` plus a uniformly sized random subset of the
/// other labels.
pub fn random_window<T: Real>(spec: &InstanceSpec<T>, rng: &mut impl Rng) -> TruncationWindow {
    let mut labels: Vec<BlockLabel> = spec.labels().filter(|l| !l.is_zero()).cloned().collect();
    labels.shuffle(rng);
    let keep = rng.gen_range(0..=labels.len());
    labels.truncate(keep);
    labels.push(BlockLabel::zero());
    TruncationWindow::new(labels).expect("window contains 0")
}

/// Deterministic random element supported on exactly the labels of `window`.
pub fn random_element<T: Real>(
    spec: &InstanceSpec<T>,
    window: &TruncationWindow,
    seed: u64,
) -> Result<ConvElement<T>, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ConvElement::zero();
    for label in window.labels() {
        let d = spec.block_or_err(label)?.dim();
        let m = CMatrix::from_fn(d, d, |_, _| random_complex(&mut rng));
        out.insert(label.clone(), m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BlockSpec;

    fn spec() -> InstanceSpec<f64> {
        InstanceSpec::new([
            BlockSpec::identity("0", 1),
            BlockSpec::identity("a", 2),
            BlockSpec::identity("b", 3),
        ])
        .unwrap()
    }

    #[test]
    fn same_seed_is_bitwise_identical() {
        let s = spec();
        let k = s.full_window();
        assert_eq!(random_element(&s, &k, 42).unwrap(), random_element(&s, &k, 42).unwrap());
    }

    #[test]
    fn trivial_window_gives_one_scalar() {
        let s = spec();
        let f = random_element(&s, &TruncationWindow::trivial(), 5).unwrap();
        assert_eq!(f.support().collect::<Vec<_>>(), vec![&BlockLabel::zero()]);
        assert_eq!(f.get(&BlockLabel::zero()).unwrap().rows(), 1);
    }

    #[test]
    fn seeds_1_and_2_differ() {
        // Frozen regression pair: the first drawn entry already differs.
        let s = spec();
        let k = s.full_window();
        let f1 = random_element(&s, &k, 1).unwrap();
        let f2 = random_element(&s, &k, 2).unwrap();
        assert_ne!(f1, f2);
        let z1 = f1.get(&BlockLabel::zero()).unwrap()[(0, 0)];
        let z2 = f2.get(&BlockLabel::zero()).unwrap()[(0, 0)];
        assert_ne!(z1, z2);
    }

    #[test]
    fn entries_in_unit_box() {
        let s = spec();
        let f = random_element(&s, &s.full_window(), 9).unwrap();
        for (_, m) in f.blocks() {
            assert!(m.as_slice().iter().all(|z| z.re.abs() <= 1.0 && z.im.abs() <= 1.0));
        }
    }

    #[test]
    fn unknown_label_is_error() {
        let s = spec();
        let k = TruncationWindow::new(["0".into(), "zz".into()]).unwrap();
        assert!(random_element(&s, &k, 0).is_err());
    }
}
