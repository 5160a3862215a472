//! Decides whether two small complex matrices look the same through every
//! polynomial: identical pseudospectra, polynomial isometry, super-identical
//! pseudospectra, and unitary similarity, each settled by finite trace and
//! norm criteria where a criterion exists and cross-checked by numeric
//! falsification oracles (resolvent-norm sampling and random-polynomial norm
//! comparison) everywhere.
//!
//! The library is organized around:
//!
//! * [`linalg`] - dense complex matrices and from-scratch small-dimension
//!   numerics (Jacobi eigenvalues, one-sided Jacobi singular values,
//!   closed-form spectra, numerical-range support values);
//! * [`polyfun`] - polynomial functional calculus, characteristic and
//!   minimal polynomials, spectra with index;
//! * [`pseudospectra`] - resolvent-norm and singular-value functions of `z`,
//!   grid scans, sampling comparators, index estimation;
//! * [`classify`] - the decision procedures and the report that bundles
//!   verdicts with certificates;
//! * [`gallery`] - curated matrix pairs with their expected classification
//!   facts, doubling as the regression corpus.

pub mod classify;
pub mod config;
pub mod error;
pub mod gallery;
pub mod linalg;
pub(crate) mod par;
pub mod polyfun;
pub mod pseudospectra;
pub(crate) mod wire;

pub use config::Config;
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use num_complex::Complex64;
