//! Invariants of the matrix numerics, checked against closed forms and
//! unitary-invariance oracles.

mod common;

use common::*;
use isospec::linalg::{
    self, eigenvalues_small, numerical_range_support, random_unitary, trace_word,
    unitary_conjugate, TraceWord,
};
use isospec::Matrix;
use proptest::prelude::*;

#[test]
fn singular_values_invariant_under_unitary_conjugation() {
    let mut rng = seeded_rng(101);
    for dim in 1..=4 {
        for _ in 0..40 {
            let t = linalg::random_matrix(dim, &mut rng);
            let u = random_unitary(dim, &mut rng);
            let s0 = t.singular_values();
            let s1 = unitary_conjugate(&t, &u).singular_values();
            let tol = 1e-10 * (1.0 + t.frobenius_norm());
            for (a, b) in s0.iter().zip(&s1) {
                assert!((a - b).abs() <= tol, "dim {dim}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn frobenius_matches_singular_value_sum() {
    let mut rng = seeded_rng(102);
    for dim in 1..=5 {
        for _ in 0..40 {
            let t = linalg::random_matrix(dim, &mut rng);
            let fro2 = t.frobenius_norm().powi(2);
            let sum2: f64 = t.singular_values().iter().map(|s| s * s).sum();
            assert!((fro2 - sum2).abs() <= 1e-10 * (1.0 + fro2));
        }
    }
}

#[test]
fn determinant_equals_singular_value_product() {
    // |det(zI - T)| = product of singular values of the shift, with the
    // determinant evaluated through the eigenvalues.
    let mut rng = seeded_rng(103);
    for _ in 0..60 {
        let t = linalg::random_matrix(3, &mut rng);
        let z = random_point(&mut rng, 3.0);
        let shift = t.z_shift(z);
        let s_prod: f64 = shift.singular_values().iter().product();
        let eig_prod: f64 = eigenvalues_small(&t)
            .unwrap()
            .iter()
            .map(|lambda| (z - lambda).norm())
            .product();
        assert!(
            (s_prod - eig_prod).abs() <= 1e-8 * (1.0 + eig_prod),
            "{s_prod} vs {eig_prod}"
        );
    }
}

#[test]
fn trace_word_xstarx_is_squared_frobenius() {
    let mut rng = seeded_rng(104);
    let w = TraceWord::parse("X*X").unwrap();
    for dim in 1..=4 {
        for _ in 0..30 {
            let t = linalg::random_matrix(dim, &mut rng);
            let tr = trace_word(&t, &w);
            let fro2 = t.frobenius_norm().powi(2);
            assert!((tr.re - fro2).abs() <= 1e-12 * (1.0 + fro2));
            assert!(tr.im.abs() <= 1e-12 * (1.0 + fro2));
        }
    }
}

#[test]
fn numerical_range_contains_spectrum() {
    let mut rng = seeded_rng(105);
    for dim in 1..=3 {
        for _ in 0..60 {
            let t = linalg::random_matrix(dim, &mut rng);
            let support = numerical_range_support(&t, 0.0);
            let max_re = eigenvalues_small(&t)
                .unwrap()
                .iter()
                .map(|e| e.re)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                support >= max_re - 1e-10 * (1.0 + t.frobenius_norm()),
                "support {support} below max Re eigenvalue {max_re}"
            );
        }
    }
}

#[test]
fn coupling_monotonicity_in_upper2_family() {
    // s1 strictly increases and s2 strictly decreases as |delta| grows.
    let a = c(1.3, -0.4);
    let b = c(-0.8, 0.9);
    let mut last: Option<(f64, f64)> = None;
    for delta in [0.0, 1.0, 2.0, 4.0] {
        let t = Matrix::upper2(a, b, r(delta));
        let s = t.singular_values();
        if let Some((s1_prev, s2_prev)) = last {
            assert!(s[0] > s1_prev, "s1 not increasing at delta {delta}");
            assert!(s[1] < s2_prev, "s2 not decreasing at delta {delta}");
        }
        last = Some((s[0], s[1]));
    }
}

proptest! {
    #[test]
    fn interchange_symmetry(a in complex_in(2.0), b in complex_in(2.0), d in complex_in(2.0)) {
        let s_ab = Matrix::upper2(a, b, d).singular_values();
        let s_ba = Matrix::upper2(b, a, d).singular_values();
        let tol = 1e-10 * (1.0 + a.norm() + b.norm() + d.norm());
        prop_assert!((s_ab[0] - s_ba[0]).abs() <= tol);
        prop_assert!((s_ab[1] - s_ba[1]).abs() <= tol);
    }

    #[test]
    fn upper2_closed_form_singular_values(
        a in complex_in(2.0),
        b in complex_in(2.0),
        d in complex_in(2.0),
    ) {
        let s = Matrix::upper2(a, b, d).singular_values();
        let (s1, s2) = upper2_singular_values(a, b, d);
        let tol = 1e-9 * (1.0 + s1);
        prop_assert!((s[0] - s1).abs() <= tol, "s1 {} vs closed form {s1}", s[0]);
        prop_assert!((s[1] - s2).abs() <= tol, "s2 {} vs closed form {s2}", s[1]);
    }

    #[test]
    fn hermitian_eigenvalues_match_field_extremes(m in square_matrix(3, 2.0)) {
        // The numerical-range support at angle 0 is the top eigenvalue of
        // the Hermitian part.
        let h = m.hermitian_part();
        let eigs = isospec::linalg::hermitian_eigenvalues(&h).unwrap();
        let support = numerical_range_support(&m, 0.0);
        prop_assert!((eigs[0] - support).abs() <= 1e-10 * (1.0 + m.frobenius_norm()));
    }
}

#[test]
fn explicit_inverse_oracle_sandwiches_resolvent() {
    // 1 / s_min agrees with the spectral norm of the explicitly inverted
    // shift, and sits inside the SVD-free Rayleigh/Frobenius sandwich.
    let cfg = isospec::Config::default();
    let mut rng = seeded_rng(106);
    let mut checked = 0;
    while checked < 100 {
        let dim = 2 + (checked % 2);
        let t = linalg::random_matrix(dim, &mut rng);
        let z = random_point(&mut rng, 2.0);
        let shift = t.z_shift(z);
        let Some(inv) = gaussian_inverse(&shift) else {
            continue;
        };
        checked += 1;
        let resolvent = isospec::pseudospectra::resolvent_norm(&t, z, &cfg);
        let oracle = inv.spectral_norm();
        assert!(
            (resolvent - oracle).abs() <= 1e-8 * (1.0 + oracle),
            "resolvent {resolvent} vs inverse norm {oracle}"
        );
        let lower = norm_lower_bound(&inv, 50, &mut rng);
        let upper = inv.frobenius_norm();
        assert!(resolvent >= lower * (1.0 - 1e-9));
        assert!(resolvent <= upper * (1.0 + 1e-9));
    }
}

#[test]
fn grid_scan_matches_sequential_reference_bitwise() {
    let t = Matrix::upper3(c(0.5, 0.5), r(1.0), r(-1.0), c(0.0, 2.0));
    let grid = isospec::pseudospectra::GridSpec::new(-2.0, 2.0, -2.0, 2.0, 31, 29).unwrap();
    let field = isospec::pseudospectra::grid_scan(&t, &grid);
    let mut k = 0;
    for i in 0..grid.ny {
        for j in 0..grid.nx {
            let z = grid.node(i, j);
            let expected = *t.z_shift(z).singular_values().last().unwrap();
            assert_eq!(
                field.values()[k].to_bits(),
                expected.to_bits(),
                "node ({i},{j})"
            );
            k += 1;
        }
    }
}
