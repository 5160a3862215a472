//! Shared helpers for the integration suites: proptest strategies and
//! independent numeric oracles (explicit Gaussian-elimination inversion,
//! norm sandwiches) that never touch the SVD path they are used to check.

#![allow(dead_code)]

use isospec::{Complex64, Matrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

prop_compose! {
    pub fn complex_in(radius: f64)(re in -1.0..1.0f64, im in -1.0..1.0f64) -> Complex64 {
        Complex64::new(re * radius, im * radius)
    }
}

prop_compose! {
    pub fn square_matrix(dim: usize, radius: f64)
        (entries in prop::collection::vec(complex_in(radius), dim * dim)) -> Matrix {
        Matrix::from_rows(
            &entries.chunks(dim).map(|row| row.to_vec()).collect::<Vec<_>>(),
        )
    }
}

prop_compose! {
    pub fn poly_coeffs(max_degree: usize)
        (coeffs in prop::collection::vec(complex_in(2.0), 2..=max_degree + 1)) -> Vec<Complex64> {
        coeffs
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::new(
        radius * (2.0 * rng.gen::<f64>() - 1.0),
        radius * (2.0 * rng.gen::<f64>() - 1.0),
    )
}

/// Explicit inverse by Gauss-Jordan elimination with partial pivoting;
/// `None` when a pivot collapses. Independent of every SVD code path.
pub fn gaussian_inverse(m: &Matrix) -> Option<Matrix> {
    let d = m.dim();
    let mut a: Vec<Vec<Complex64>> = (0..d)
        .map(|i| {
            let mut row: Vec<Complex64> = (0..d).map(|j| m[(i, j)]).collect();
            row.extend((0..d).map(|j| if i == j { r(1.0) } else { r(0.0) }));
            row
        })
        .collect();
    for col in 0..d {
        let pivot_row = (col..d)
            .max_by(|&p, &q| a[p][col].norm().partial_cmp(&a[q][col].norm()).unwrap())?;
        if a[pivot_row][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, pivot_row);
        let pivot = a[col][col];
        for x in a[col].iter_mut() {
            *x /= pivot;
        }
        let pivot_row = a[col].clone();
        for (row, entries) in a.iter_mut().enumerate() {
            if row != col {
                let factor = entries[col];
                if factor.norm() > 0.0 {
                    for (x, p) in entries.iter_mut().zip(&pivot_row) {
                        *x -= factor * p;
                    }
                }
            }
        }
    }
    Some(Matrix::from_rows(
        &(0..d).map(|i| a[i][d..].to_vec()).collect::<Vec<_>>(),
    ))
}

pub fn matvec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// SVD-free lower bound for the spectral norm: the best Rayleigh quotient
/// `|Mv| / |v|` over `tries` random directions.
pub fn norm_lower_bound<R: Rng>(m: &Matrix, tries: usize, rng: &mut R) -> f64 {
    let d = m.dim();
    let mut best = 0.0f64;
    for _ in 0..tries {
        let v: Vec<Complex64> = (0..d).map(|_| random_point(rng, 1.0)).collect();
        let denom = vec_norm(&v);
        if denom > 0.0 {
            best = best.max(vec_norm(&matvec(m, &v)) / denom);
        }
    }
    best
}

/// Closed-form squared singular values of `[[a, delta], [0, b]]`: the roots
/// of `s^4 - n s^2 + p^2` with `n` the squared Frobenius norm and
/// `p = |a b|`. Used as an oracle against the iterative path.
pub fn upper2_singular_values(a: Complex64, b: Complex64, delta: Complex64) -> (f64, f64) {
    let n = a.norm_sqr() + b.norm_sqr() + delta.norm_sqr();
    let p = (a * b).norm();
    let disc = (n * n - 4.0 * p * p).max(0.0).sqrt();
    let s1 = ((n + disc) / 2.0).sqrt();
    let s2 = ((n - disc) / 2.0).max(0.0).sqrt();
    (s1, s2.min(s1))
}
