//! Resolvent-norm and singular-value functions of `z`, grid scans for
//! spectral portraits, sampling comparators that falsify or support
//! identical / super-identical pseudospectra, and resolvent-growth index
//! estimation.
//!
//! Per-point work is pure and runs in parallel when the `parallel` feature
//! is on; sample sets depend only on the inputs and seed, and reductions are
//! order-independent, so results are identical either way.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::par;

/// Rectangular sampling window for spectral portraits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<GridSpec> {
        if !(re_min < re_max && im_min < im_max) || !(re_min.is_finite() && re_max.is_finite()) {
            return Err(Error::UnsupportedShape(format!(
                "grid window [{re_min},{re_max}]x[{im_min},{im_max}] is empty or not finite"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::UnsupportedShape(format!(
                "grid needs at least 2 nodes per axis, got {nx}x{ny}"
            )));
        }
        Ok(GridSpec {
            re_min,
            re_max,
            im_min,
            im_max,
            nx,
            ny,
        })
    }

    /// Node at row `i` (imaginary axis, increasing) and column `j` (real
    /// axis, increasing); endpoints included.
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        let re = self.re_min + (self.re_max - self.re_min) * j as f64 / (self.nx - 1) as f64;
        let im = self.im_min + (self.im_max - self.im_min) * i as f64 / (self.ny - 1) as f64;
        Complex64::new(re, im)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Row-major field of smallest singular values over a grid.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.nx + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Verdict of a numeric sampling oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleVerdict {
    ConsistentAtTolerance,
    Falsified,
}

/// Outcome of a sampling comparison, with the worst witness found.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonResult {
    /// Largest relative gap seen over all samples.
    pub max_rel_gap: f64,
    /// Sample point achieving the gap (pseudospectra comparisons).
    #[serde(serialize_with = "crate::wire::opt_complex")]
    pub witness_z: Option<Complex64>,
    /// Index of the witness polynomial (norm-falsification oracle).
    pub witness_poly_index: Option<usize>,
    /// Number of samples evaluated.
    pub samples: usize,
    pub verdict: OracleVerdict,
}

impl ComparisonResult {
    pub(crate) fn from_gaps(
        gaps: impl IntoIterator<Item = (f64, Option<Complex64>, Option<usize>)>,
        samples: usize,
        cfg: &Config,
    ) -> ComparisonResult {
        let mut max_rel_gap = 0.0;
        let mut witness_z = None;
        let mut witness_poly_index = None;
        for (gap, z, idx) in gaps {
            if gap > max_rel_gap {
                max_rel_gap = gap;
                witness_z = z;
                witness_poly_index = idx;
            }
        }
        let verdict = if max_rel_gap > cfg.tol {
            OracleVerdict::Falsified
        } else {
            OracleVerdict::ConsistentAtTolerance
        };
        ComparisonResult {
            max_rel_gap,
            witness_z,
            witness_poly_index,
            samples,
            verdict,
        }
    }
}

/// `|(zI - T)^{-1}|`, which is `1 / s_min(zI - T)`; `+inf` once the smallest
/// singular value sinks to the singularity floor, so spectra map to infinity
/// without float overflow.
pub fn resolvent_norm(t: &Matrix, z: Complex64, cfg: &Config) -> f64 {
    let shifted = t.z_shift(z);
    let smin = *shifted
        .singular_values()
        .last()
        .expect("square matrix has singular values");
    if smin <= cfg.singular_floor * (1.0 + z.norm() + t.frobenius_norm()) {
        f64::INFINITY
    } else {
        1.0 / smin
    }
}

/// `s_k(zI - T)` with `k` counted from 1 (largest) to `dim` (smallest).
pub fn singular_value_function(t: &Matrix, z: Complex64, k: usize) -> Result<f64> {
    if k == 0 || k > t.dim() {
        return Err(Error::IndexOutOfRange { k, dim: t.dim() });
    }
    Ok(t.z_shift(z).singular_values()[k - 1])
}

/// Field of `s_min(zI - T)` over the grid, row-major with the imaginary
/// part increasing by row.
pub fn grid_scan(t: &Matrix, grid: &GridSpec) -> ScalarField {
    let nodes: Vec<Complex64> = (0..grid.ny)
        .flat_map(|i| (0..grid.nx).map(move |j| (i, j)))
        .map(|(i, j)| grid.node(i, j))
        .collect();
    let values = par::map_collect(&nodes, |&z| {
        *t.z_shift(z)
            .singular_values()
            .last()
            .expect("square matrix has singular values")
    });
    ScalarField { grid: *grid, values }
}

/// A sample point for the comparators.
fn sample_points(a: &Matrix, b: &Matrix, n_samples: usize, seed: u64) -> Vec<Complex64> {
    // Global half: quasi-uniform over a square of side 4 (1 + max norm)
    // centered at the joint spectral centroid (mean eigenvalue, computable
    // from traces at any dimension).
    let side = 4.0 * (1.0 + a.spectral_norm().max(b.spectral_norm()));
    let centroid = (a.trace() + b.trace()) / (a.dim() + b.dim()) as f64;

    // Circle half: shrinking rings around every eigenvalue of either matrix,
    // where index information concentrates. Available only at dim <= 3.
    let mut centers: Vec<Complex64> = Vec::new();
    for m in [a, b] {
        if m.dim() <= 3 {
            if let Ok(eigs) = linalg::eigenvalues_small(m) {
                for e in eigs {
                    if !centers.iter().any(|c| (*c - e).norm() <= 1e-9 * (1.0 + e.norm())) {
                        centers.push(e);
                    }
                }
            }
        }
    }
    centers.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    let circles: Vec<(Complex64, f64)> = centers
        .iter()
        .flat_map(|&c| [(c, 1e-1), (c, 1e-2)])
        .collect();

    let n_rings = if circles.is_empty() { 0 } else { n_samples / 2 };
    let n_global = n_samples - n_rings;

    let mut points = Vec::with_capacity(n_samples);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_global {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        points.push(centroid + Complex64::new(side * (u - 0.5), side * (v - 0.5)));
    }
    if n_rings > 0 {
        let per = n_rings / circles.len();
        let extra = n_rings % circles.len();
        for (c_idx, &(center, radius)) in circles.iter().enumerate() {
            let count = per + usize::from(c_idx < extra);
            for j in 0..count {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
                points.push(center + Complex64::from_polar(radius, theta));
            }
        }
    }
    points
}

fn smin(m: &Matrix, z: Complex64) -> f64 {
    *m.z_shift(z)
        .singular_values()
        .last()
        .expect("square matrix has singular values")
}

/// Relative gap between two singular values, floored so that a pair of
/// numerically singular values counts as equal.
fn rel_gap(x: f64, y: f64, floor: f64) -> f64 {
    let scale = x.max(y);
    if scale <= floor {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// Samples `s_min(zI - A)` against `s_min(zI - B)` and reports the largest
/// relative gap. Dimensions may differ; each shift is formed at its own
/// size. Falsifies identical pseudospectra when the gap exceeds `cfg.tol`.
pub fn compare_pseudospectra(
    a: &Matrix,
    b: &Matrix,
    n_samples: usize,
    seed: u64,
    cfg: &Config,
) -> ComparisonResult {
    let points = sample_points(a, b, n_samples, seed);
    let floor_scale = 1.0 + a.frobenius_norm().max(b.frobenius_norm());
    let gaps = par::map_collect(&points, |&z| {
        let floor = cfg.singular_floor * (floor_scale + z.norm());
        (rel_gap(smin(a, z), smin(b, z), floor), Some(z), None)
    });
    ComparisonResult::from_gaps(gaps, points.len(), cfg)
}

/// As [`compare_pseudospectra`] but the gap is the worst over all `d`
/// singular values of the shifts; falsifies super-identical pseudospectra.
pub fn compare_super_pseudospectra(
    a: &Matrix,
    b: &Matrix,
    n_samples: usize,
    seed: u64,
    cfg: &Config,
) -> Result<ComparisonResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            a: a.dim(),
            b: b.dim(),
        });
    }
    let points = sample_points(a, b, n_samples, seed);
    let floor_scale = 1.0 + a.frobenius_norm().max(b.frobenius_norm());
    let gaps = par::map_collect(&points, |&z| {
        let floor = cfg.singular_floor * (floor_scale + z.norm());
        let sa = a.z_shift(z).singular_values();
        let sb = b.z_shift(z).singular_values();
        let worst = sa
            .iter()
            .zip(&sb)
            .map(|(&x, &y)| rel_gap(x, y, floor))
            .fold(0.0, f64::max);
        (worst, Some(z), None)
    });
    Ok(ComparisonResult::from_gaps(gaps, points.len(), cfg))
}

/// Estimates the index of an eigenvalue from the resolvent growth rate:
/// the log-log slope of the worst resolvent norm over circles of radii
/// 1e-2, 1e-3, 1e-4, rounded to the nearest integer.
pub fn estimate_index(t: &Matrix, lambda: Complex64, cfg: &Config) -> Result<usize> {
    let d = t.dim();
    if d > 3 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "index estimation needs the spectrum, implemented for dim <= 3",
        });
    }
    let tau = cfg.cluster_tol * (1.0 + t.frobenius_norm());
    let eigs = linalg::eigenvalues_small(t)?;
    if !eigs.iter().any(|e| (e - lambda).norm() <= tau) {
        return Err(Error::NotAnEigenvalue { z: lambda, tol: tau });
    }

    // Work with m(r) = min over the circle of s_min(zI - T) = 1/M(r);
    // m(r) ~ c r^nu, so the slope of log m against log r is the index.
    const POINTS: usize = 16;
    let radii = [1e-2, 1e-3, 1e-4];
    let mut xs = [0.0; 3];
    let mut ys = [0.0; 3];
    for (k, &r) in radii.iter().enumerate() {
        let mut worst = f64::INFINITY;
        for j in 0..POINTS {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / POINTS as f64;
            let z = lambda + Complex64::from_polar(r, theta);
            worst = worst.min(smin(t, z));
        }
        xs[k] = r.ln();
        ys[k] = worst.max(f64::MIN_POSITIVE).ln();
    }
    let xbar = xs.iter().sum::<f64>() / 3.0;
    let ybar = ys.iter().sum::<f64>() / 3.0;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xbar) * (x - xbar)).sum::<f64>();
    Ok((slope.round() as i64).clamp(1, d as i64) as usize)
}
