//! Similarity and distinguishability measures for multimode Gaussian states.
//!
//! States are described by their first and second moments in shot-noise
//! units (vacuum covariance = identity). The crate provides
//!
//! - [`symplectic`]: covariance validation, Williamson decomposition and the
//!   symplectic action of scalar functions;
//! - [`fidelity`]: the Gaussian s-overlap, Chernoff and Bhattacharyya terms,
//!   the closed-form fidelity between a mixed and a pure state, and the
//!   classical conversions (Helstrom, Bures, Fuchs–van de Graaf);
//! - [`fock`]: a brute-force truncated Fock-space oracle for one and two
//!   modes that recomputes the same quantities from density matrices.

// range checks are written as `!(x > 0.0)` on purpose so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fidelity;
pub mod fock;
mod linalg;
pub mod sampling;
pub mod symplectic;
pub mod tolerance;

pub use error::{Error, Result};
pub use symplectic::{CovarianceMatrix, GaussianState, WilliamsonDecomposition};
pub use tolerance::Tolerances;
