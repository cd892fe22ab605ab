//! Block-matrix realization of the convolution algebra of a co-semisimple
//! Hopf *-algebra, with an independent structure-constant oracle.
//!
//! The convolution algebra decomposes into full matrix blocks, one per
//! simple comodule `λ`, each carrying a positive definite reflection matrix
//! `Q_λ`. [`conv`] implements the product, involution, representations and
//! approximate units in that block picture, and [`analysis`] the L² and C*
//! norms. [`oracle`] works from raw structure constants `(m, Δ, ε, S, *)`
//! and recomputes every block formula by tensor contraction; [`group`]
//! builds such presentations from finite groups and supplies the Fourier
//! transform that connects the two sides. [`suites`] wires all invariants
//! into pass/fail reports.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the scalar for the common cases.

pub mod analysis;
pub mod conv;
pub mod group;
pub mod json;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod synthetic;

pub use analysis::{cstar_norm, inner_product, l2_norm, operator_norm, AnalysisError};
pub use conv::{approximate_unit, convolve, counit_star, represent, star};
pub use group::{GroupError, GroupTable};
pub use linalg::CMatrix;
pub use model::{BlockLabel, ConvElement, InstanceSpec, ModelError, TruncationWindow};
pub use oracle::{HopfOracle, HopfPresentation, OracleError};
pub use report::Report;
pub use scalar::{Real, C};

pub type Matrix64 = CMatrix<f64>;
pub type Matrix32 = CMatrix<f32>;
pub type Instance64 = InstanceSpec<f64>;
pub type Instance32 = InstanceSpec<f32>;
pub type Element64 = ConvElement<f64>;
pub type Element32 = ConvElement<f32>;
pub type Presentation64 = HopfPresentation<f64>;
pub type Presentation32 = HopfPresentation<f32>;
