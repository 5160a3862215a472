//! Cyclic Jacobi diagonalization for Hermitian matrices.

use num_complex::Complex64;

use crate::config::JACOBI_OFF_REL;
use crate::linalg::Matrix;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix in nonincreasing order.
///
/// The caller guarantees hermiticity; rotations drive the off-diagonal norm
/// below `1e-14 * |H|_F`.
pub(crate) fn hermitian_eigenvalues_unchecked(h: &Matrix) -> Vec<f64> {
    let d = h.dim();
    let fro = h.frobenius_norm();
    let mut m = h.clone();
    if d > 1 && fro > 0.0 {
        let target = JACOBI_OFF_REL * fro;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&m) <= target {
                break;
            }
            for p in 0..d - 1 {
                for q in p + 1..d {
                    rotate(&mut m, p, q);
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..d).map(|i| m[(i, i)].re).collect();
    super::sort_desc(&mut eigs);
    eigs
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let d = m.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry.
///
/// The pivot is factored as `g = |g| e^{i phi}`; a diagonal phase reduces the
/// 2x2 block to real symmetric form and a classical rotation annihilates it.
/// The combined plane rotation is
/// `J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]` acting on columns (p, q),
/// with `J* M J` applied to the full matrix.
fn rotate(m: &mut Matrix, p: usize, q: usize) {
    let g = m[(p, q)];
    let gm = g.norm();
    if gm == 0.0 {
        return;
    }
    let phase = g / gm;
    let alpha = m[(p, p)].re;
    let beta = m[(q, q)].re;
    let tau = (beta - alpha) / (2.0 * gm);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let d = m.dim();
    let jpq = Complex64::new(s, 0.0);
    let jqq = phase.conj() * c;
    let jqp = -phase.conj() * s;
    let jpp = Complex64::new(c, 0.0);

    // M <- M J (column update).
    for i in 0..d {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * jpp + mq * jqp;
        m[(i, q)] = mp * jpq + mq * jqq;
    }
    // M <- J* M (row update).
    for j in 0..d {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = jpp.conj() * mp + jqp.conj() * mq;
        m[(q, j)] = jpq.conj() * mp + jqq.conj() * mq;
    }
    // The pivot is zero by construction; pin it to avoid residue buildup.
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
}
