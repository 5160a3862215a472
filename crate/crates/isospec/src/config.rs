//! Shared tolerance policy.
//!
//! Every "equal" comparison of derived quantities in this crate goes through
//! a [`Config`] value instead of a hard-coded constant, so a caller can
//! re-adjudicate verdicts under a different policy.

use serde::Serialize;

/// Tolerances and oracle sampling defaults used throughout the crate.
#[derive(Debug, Clone, Serialize)]
pub struct Config {
    /// Base for absolute-plus-relative equality: two reals are equal when
    /// `|l - r| <= tol * (1 + scale)` with `scale` the magnitude of the data.
    pub tol: f64,
    /// Radius for grouping nearby eigenvalues into one spectral cluster.
    pub cluster_tol: f64,
    /// Below `confluence_tol * (1 + |a| + |b|)` a divided difference switches
    /// to the derivative form.
    pub confluence_tol: f64,
    /// Relative singular-value threshold declaring a set of vectorized matrix
    /// powers linearly dependent.
    pub rank_tol: f64,
    /// `s_min <= singular_floor * (1 + |z| + |T|_F)` is treated as an exact
    /// singularity (infinite resolvent norm).
    pub singular_floor: f64,
    /// Sample-point budget for the pseudospectra comparators.
    pub oracle_samples: usize,
    /// Polynomial budget for the norm-falsification oracle.
    pub oracle_polys: usize,
    /// Degree bound for random oracle polynomials.
    pub oracle_max_degree: usize,
    /// Seed for all oracle sampling attached to verdicts.
    pub oracle_seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-8,
            cluster_tol: 1e-6,
            confluence_tol: 1e-10,
            rank_tol: 1e-9,
            singular_floor: 1e-14,
            oracle_samples: 400,
            oracle_polys: 200,
            oracle_max_degree: 6,
            oracle_seed: 42,
        }
    }
}

impl Config {
    /// Tolerance for comparing quantities of the given magnitude.
    pub fn eq_tol(&self, scale: f64) -> f64 {
        self.tol * (1.0 + scale)
    }

    /// Absolute-plus-relative equality of two reals.
    pub fn approx_eq(&self, l: f64, r: f64) -> bool {
        (l - r).abs() <= self.eq_tol(l.abs().max(r.abs()))
    }

    /// Returns a copy with a different base tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Hermitian precondition: max entrywise asymmetry allowed, as a multiple of
/// the Frobenius norm.
pub const HERMITIAN_CHECK_REL: f64 = 1e-12;

/// Cyclic Jacobi stops once the off-diagonal norm falls below this multiple
/// of the Frobenius norm.
pub const JACOBI_OFF_REL: f64 = 1e-14;
