//! One-sided (Hestenes) Jacobi SVD for complex rectangular matrices.
//!
//! Column orthogonalization never forms the normal matrix, so small singular
//! values come out with near-machine absolute accuracy relative to the
//! largest one. Resolvent norms around 1e12 and rank tests at 1e-9 both rely
//! on this.

use num_complex::Complex64;

const COS_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 64;

pub(crate) struct Svd {
    /// Nonincreasing singular values, one per input column.
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns, aligned with `singular_values`;
    /// present when requested.
    pub right_vectors: Option<Vec<Vec<Complex64>>>,
}

/// Orthogonalizes the columns in place; singular values are the resulting
/// column norms. `want_v` accumulates right rotations for null vectors.
pub(crate) fn one_sided_jacobi_svd(mut cols: Vec<Vec<Complex64>>, want_v: bool) -> Svd {
    let n = cols.len();
    let mut v: Option<Vec<Vec<Complex64>>> = want_v.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect()
    });

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let gm = gamma.norm();
                if gm <= COS_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / gm;
                let tau = (beta - alpha) / (2.0 * gm);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase_conj = phase.conj();

                rotate_pair(&mut cols, i, j, c, s, phase_conj);
                if let Some(v) = v.as_mut() {
                    rotate_pair(v, i, j, c, s, phase_conj);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).expect("finite norms"));

    Svd {
        singular_values: order.iter().map(|&k| norms[k]).collect(),
        right_vectors: v.map(|v| order.iter().map(|&k| v[k].clone()).collect()),
    }
}

/// Applies the plane rotation `[ci, cj] <- [c ci - s e^{-i phi} cj,
/// s ci + c e^{-i phi} cj]` that orthogonalizes the column pair (`i < j`).
fn rotate_pair(
    cols: &mut [Vec<Complex64>],
    i: usize,
    j: usize,
    c: f64,
    s: f64,
    phase_conj: Complex64,
) {
    let (lo, hi) = cols.split_at_mut(j);
    for (a, b) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
        let x = *a;
        let y = *b * phase_conj;
        *a = x * c - y * s;
        *b = x * s + y * c;
    }
}
