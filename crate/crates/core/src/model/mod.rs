//! Block model of the convolution algebra: labels, blocks with their
//! reflection matrices, instances, elements, truncation windows and
//! filtrations.

mod io;
mod random;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::linalg::{inverse, CMatrix};
use crate::scalar::{Real, C};

pub use io::{load_element, load_instance, parse_instance, save_element, save_instance, ELEMENT_FORMAT, INSTANCE_FORMAT};
pub use random::{random_complex, random_element, random_window};
pub use validate::{validate_instance, BlockCheck, ValidationReport, HERMITICITY_TOLERANCE, PD_TOLERANCE};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate block label {0:?}")]
    DuplicateLabel(String),
    #[error("validation failed:\n{0}")]
    Validation(ValidationReport),
    #[error("unknown block label {0:?}")]
    UnknownLabel(String),
    #[error("block {label:?}: expected {expected}x{expected} matrix, got {rows}x{cols}")]
    Shape {
        label: String,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("truncation window must contain block \"0\"")]
    WindowWithoutZero,
    #[error("filtration is not strictly increasing at step {0}")]
    NotIncreasing(usize),
    #[error("block {0:?} has a singular reflection matrix")]
    SingularQ(String),
}

/// Opaque block label; ordered lexicographically. `"0"` is the trivial block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockLabel(String);

impl BlockLabel {
    pub fn new(s: impl Into<String>) -> Self {
        BlockLabel(s.into())
    }

    pub fn zero() -> Self {
        BlockLabel("0".to_owned())
    }

    pub fn is_zero(&self) -> bool {
        self.0 == "0"
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for BlockLabel {
    fn from(s: &str) -> Self {
        BlockLabel::new(s)
    }
}

impl From<String> for BlockLabel {
    fn from(s: String) -> Self {
        BlockLabel(s)
    }
}

/// One simple block: dimension, reflection matrix `Q` and dual label.
#[derive(Clone, Debug)]
pub struct BlockSpec<T: Real> {
    label: BlockLabel,
    dim: usize,
    q: CMatrix<T>,
    dual: BlockLabel,
    q_trace: T,
    q_inv: Option<CMatrix<T>>,
}

impl<T: Real> BlockSpec<T> {
    /// Builds a block without validating it; see [`validate_instance`].
    pub fn new(label: impl Into<BlockLabel>, dim: usize, q: CMatrix<T>, dual: impl Into<BlockLabel>) -> Self {
        let q_trace = q.trace().re;
        let q_inv = if q.is_square() && q.rows() == dim && dim > 0 {
            inverse(&q, T::epsilon())
        } else {
            None
        };
        BlockSpec {
            label: label.into(),
            dim,
            q,
            dual: dual.into(),
            q_trace,
            q_inv,
        }
    }

    /// Block with `Q = I` and itself as dual.
    pub fn identity(label: impl Into<BlockLabel>, dim: usize) -> Self {
        let label = label.into();
        Self::new(label.clone(), dim, CMatrix::identity(dim), label)
    }

    pub fn label(&self) -> &BlockLabel {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q(&self) -> &CMatrix<T> {
        &self.q
    }

    pub fn dual(&self) -> &BlockLabel {
        &self.dual
    }

    /// Real part of `trace(Q)`.
    pub fn q_trace(&self) -> T {
        self.q_trace
    }

    pub fn q_inverse(&self) -> Option<&CMatrix<T>> {
        self.q_inv.as_ref()
    }

    pub(crate) fn q_inverse_or_err(&self) -> Result<&CMatrix<T>, ModelError> {
        self.q_inv
            .as_ref()
            .ok_or_else(|| ModelError::SingularQ(self.label.0.clone()))
    }
}

impl<T: Real> PartialEq for BlockSpec<T> {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.dim == other.dim && self.q == other.q && self.dual == other.dual
    }
}

/// The block model: a finite family of blocks keyed (and iterated) by label.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec<T: Real> {
    blocks: BTreeMap<BlockLabel, BlockSpec<T>>,
}

impl<T: Real> InstanceSpec<T> {
    /// Collects blocks, rejecting duplicate labels. No mathematical
    /// validation happens here.
    pub fn from_blocks(blocks: impl IntoIterator<Item = BlockSpec<T>>) -> Result<Self, ModelError> {
        let mut map = BTreeMap::new();
        for b in blocks {
            if map.contains_key(&b.label) {
                return Err(ModelError::DuplicateLabel(b.label.0));
            }
            map.insert(b.label.clone(), b);
        }
        Ok(InstanceSpec { blocks: map })
    }

    /// Collects and validates.
    pub fn new(blocks: impl IntoIterator<Item = BlockSpec<T>>) -> Result<Self, ModelError> {
        let spec = Self::from_blocks(blocks)?;
        let report = validate_instance(&spec);
        if report.passed() {
            Ok(spec)
        } else {
            Err(ModelError::Validation(report))
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = &BlockSpec<T>> {
        self.blocks.values()
    }

    pub fn labels(&self) -> impl Iterator<Item = &BlockLabel> {
        self.blocks.keys()
    }

    pub fn block(&self, label: &BlockLabel) -> Option<&BlockSpec<T>> {
        self.blocks.get(label)
    }

    pub fn block_or_err(&self, label: &BlockLabel) -> Result<&BlockSpec<T>, ModelError> {
        self.blocks
            .get(label)
            .ok_or_else(|| ModelError::UnknownLabel(label.0.clone()))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total dimension `Σ d_λ²` of the block algebra.
    pub fn algebra_dim(&self) -> usize {
        self.blocks.values().map(|b| b.dim * b.dim).sum()
    }

    /// Window holding every label of the instance.
    pub fn full_window(&self) -> TruncationWindow {
        TruncationWindow {
            labels: self.blocks.keys().cloned().chain(std::iter::once(BlockLabel::zero())).collect(),
        }
    }
}

/// An element of the convolution algebra: finitely many coefficient
/// matrices keyed by block label. Absent blocks are zero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConvElement<T: Real> {
    blocks: BTreeMap<BlockLabel, CMatrix<T>>,
}

impl<T: Real> ConvElement<T> {
    pub fn zero() -> Self {
        ConvElement {
            blocks: BTreeMap::new(),
        }
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = (BlockLabel, CMatrix<T>)>) -> Self {
        ConvElement {
            blocks: blocks.into_iter().collect(),
        }
    }

    /// Element supported on the trivial block with coefficient `z`.
    pub fn scalar(z: C<T>) -> Self {
        Self::from_blocks([(BlockLabel::zero(), CMatrix::scalar(z))])
    }

    pub fn single(label: impl Into<BlockLabel>, m: CMatrix<T>) -> Self {
        Self::from_blocks([(label.into(), m)])
    }

    pub fn insert(&mut self, label: BlockLabel, m: CMatrix<T>) -> Option<CMatrix<T>> {
        self.blocks.insert(label, m)
    }

    pub fn get(&self, label: &BlockLabel) -> Option<&CMatrix<T>> {
        self.blocks.get(label)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&BlockLabel, &CMatrix<T>)> {
        self.blocks.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BlockLabel> {
        self.blocks.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Drops blocks whose matrices are exactly zero.
    pub fn normalized(mut self) -> Self {
        self.blocks.retain(|_, m| !m.is_zero());
        self
    }

    /// Checks every key is a label of `spec` with a matching shape.
    pub fn check_membership(&self, spec: &InstanceSpec<T>) -> Result<(), ModelError> {
        for (label, m) in &self.blocks {
            let b = spec.block_or_err(label)?;
            if m.rows() != b.dim || m.cols() != b.dim {
                return Err(ModelError::Shape {
                    label: label.0.clone(),
                    expected: b.dim,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        Ok(())
    }

    /// Blockwise linear combination `a·self + b·other`.
    pub fn combine(&self, a: C<T>, other: &Self, b: C<T>) -> Self {
        let labels: BTreeSet<&BlockLabel> = self.blocks.keys().chain(other.blocks.keys()).collect();
        let mut out = BTreeMap::new();
        for l in labels {
            let m = match (self.blocks.get(l), other.blocks.get(l)) {
                (Some(x), Some(y)) => &x.scale(a) + &y.scale(b),
                (Some(x), None) => x.scale(a),
                (None, Some(y)) => y.scale(b),
                (None, None) => unreachable!(),
            };
            out.insert(l.clone(), m);
        }
        ConvElement { blocks: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let one = crate::scalar::cone();
        self.combine(one, other, -one)
    }

    pub fn scale(&self, s: C<T>) -> Self {
        ConvElement {
            blocks: self.blocks.iter().map(|(l, m)| (l.clone(), m.scale(s))).collect(),
        }
    }

    /// Largest entrywise difference, treating absent blocks as zero.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.sub(other)
            .blocks
            .values()
            .map(CMatrix::max_abs)
            .fold(T::zero(), T::max)
    }
}

/// Finite set of labels containing `"0"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationWindow {
    labels: BTreeSet<BlockLabel>,
}

impl TruncationWindow {
    pub fn new(labels: impl IntoIterator<Item = BlockLabel>) -> Result<Self, ModelError> {
        let labels: BTreeSet<BlockLabel> = labels.into_iter().collect();
        if !labels.contains(&BlockLabel::zero()) {
            return Err(ModelError::WindowWithoutZero);
        }
        Ok(TruncationWindow { labels })
    }

    /// The smallest window `{"0"}`.
    pub fn trivial() -> Self {
        TruncationWindow {
            labels: [BlockLabel::zero()].into_iter().collect(),
        }
    }

    /// Window covering the support of `f` (plus `"0"`).
    pub fn covering<T: Real>(f: &ConvElement<T>) -> Self {
        TruncationWindow {
            labels: f.support().cloned().chain(std::iter::once(BlockLabel::zero())).collect(),
        }
    }

    pub fn contains(&self, l: &BlockLabel) -> bool {
        self.labels.contains(l)
    }

    pub fn labels(&self) -> impl Iterator<Item = &BlockLabel> {
        self.labels.iter()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.labels.is_subset(&other.labels)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        TruncationWindow {
            labels: self.labels.intersection(&other.labels).cloned().collect(),
        }
    }

    /// Checks every label is a block of `spec`.
    pub fn check_in(&self, spec: &InstanceSpec<impl Real>) -> Result<(), ModelError> {
        for l in &self.labels {
            if spec.block(l).is_none() {
                return Err(ModelError::UnknownLabel(l.0.clone()));
            }
        }
        Ok(())
    }
}

/// Strictly increasing chain of windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    chain: Vec<TruncationWindow>,
}

impl Filtration {
    pub fn new(chain: Vec<TruncationWindow>) -> Result<Self, ModelError> {
        for (i, w) in chain.windows(2).enumerate() {
            if !(w[0].is_subset(&w[1]) && w[0] != w[1]) {
                return Err(ModelError::NotIncreasing(i + 1));
            }
        }
        Ok(Filtration { chain })
    }

    /// Chain adding one label at a time in label order.
    pub fn by_label<T: Real>(spec: &InstanceSpec<T>) -> Self {
        let mut chain = Vec::new();
        let mut acc = vec![BlockLabel::zero()];
        chain.push(TruncationWindow::trivial());
        for l in spec.labels().filter(|l| !l.is_zero()) {
            acc.push(l.clone());
            chain.push(TruncationWindow {
                labels: acc.iter().cloned().collect(),
            });
        }
        Filtration { chain }
    }

    pub fn windows(&self) -> &[TruncationWindow] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

/// A vector in the simple module of block `label`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVector<T: Real> {
    pub label: BlockLabel,
    pub coords: Vec<C<T>>,
}

impl<T: Real> ModuleVector<T> {
    pub fn new(label: impl Into<BlockLabel>, coords: Vec<C<T>>) -> Self {
        ModuleVector {
            label: label.into(),
            coords,
        }
    }
}

/// Restriction of `f` to the labels of `window`.
pub fn project<T: Real>(f: &ConvElement<T>, window: &TruncationWindow) -> ConvElement<T> {
    ConvElement {
        blocks: f
            .blocks
            .iter()
            .filter(|(l, _)| window.contains(l))
            .map(|(l, m)| (l.clone(), m.clone()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn sample() -> ConvElement<f64> {
        ConvElement::from_blocks([
            (BlockLabel::zero(), CMatrix::scalar(c(2.0, 1.0))),
            (
                "a".into(),
                CMatrix::from_rows(&[vec![c(1., 0.), c(0., 1.)], vec![c(3., 0.), c(-1., 0.)]]).unwrap(),
            ),
            ("b".into(), CMatrix::scalar(c(5.0, 0.0))),
        ])
    }

    #[test]
    fn project_on_support_is_identity() {
        let f = sample();
        assert_eq!(project(&f, &TruncationWindow::covering(&f)), f);
    }

    #[test]
    fn project_on_trivial_window_keeps_scalar_block() {
        let p = project(&sample(), &TruncationWindow::trivial());
        assert_eq!(p.support().collect::<Vec<_>>(), vec![&BlockLabel::zero()]);
    }

    #[test]
    fn project_composes_as_intersection() {
        let f = sample();
        let k = TruncationWindow::new(["0".into(), "a".into(), "b".into()]).unwrap();
        let k2 = TruncationWindow::new(["0".into(), "b".into()]).unwrap();
        assert_eq!(project(&project(&f, &k), &k2), project(&f, &k.intersection(&k2)));
    }

    #[test]
    fn window_requires_zero() {
        assert!(matches!(
            TruncationWindow::new(["a".into()]),
            Err(ModelError::WindowWithoutZero)
        ));
    }

    #[test]
    fn filtration_must_increase() {
        let k0 = TruncationWindow::trivial();
        let k1 = TruncationWindow::new(["0".into(), "a".into()]).unwrap();
        assert!(Filtration::new(vec![k0.clone(), k1.clone()]).is_ok());
        assert!(matches!(
            Filtration::new(vec![k1.clone(), k0]),
            Err(ModelError::NotIncreasing(1))
        ));
        assert!(Filtration::new(vec![k1.clone(), k1]).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = InstanceSpec::<f64>::from_blocks([BlockSpec::identity("0", 1), BlockSpec::identity("0", 1)]);
        assert!(matches!(r, Err(ModelError::DuplicateLabel(_))));
    }

    #[test]
    fn membership_checks_shape_and_label() {
        let spec = InstanceSpec::<f64>::new([BlockSpec::identity("0", 1), BlockSpec::identity("a", 2)]).unwrap();
        assert!(sample().check_membership(&spec).is_err());
        let bad = ConvElement::single("a", CMatrix::<f64>::identity(3));
        assert!(matches!(bad.check_membership(&spec), Err(ModelError::Shape { .. })));
    }
}
