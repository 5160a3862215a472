//! Curated matrix pairs, each bundled with the classification facts it is
//! known to exhibit. The corpus doubles as the regression suite: every
//! expected fact must be reproduced by [`classify::full_report`].

use num_complex::Complex64;
use serde::Serialize;

use crate::classify::{Answer, Relation};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A named pair with its expected classification facts.
#[derive(Debug, Clone, Serialize)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub a: Matrix,
    pub b: Matrix,
    /// Exactly the facts this pair is known to certify.
    pub expected: Vec<(Relation, Answer)>,
    /// What makes the pair interesting, self-contained.
    pub provenance: &'static str,
}

const NAMES: [&str; 5] = [
    "rank-mismatch-diagonal",
    "same-minpoly-z2",
    "frobenius-gap-4x4",
    "nilpotent-cubic-transpose",
    "similar-not-ip-2x2",
];

/// All example names, stable order.
pub fn list_examples() -> Vec<&'static str> {
    NAMES.to_vec()
}

/// Looks up a gallery pair by name.
pub fn example(name: &str) -> Result<GalleryEntry> {
    let r = |x: f64| Complex64::new(x, 0.0);
    match name {
        "rank-mismatch-diagonal" => Ok(GalleryEntry {
            name: "rank-mismatch-diagonal",
            a: Matrix::diagonal(&[r(1.0), r(0.0), r(0.0)]),
            b: Matrix::diagonal(&[r(1.0), r(1.0), r(0.0)]),
            expected: vec![
                (Relation::Isometric, Answer::Yes),
                (Relation::SuperIdentical, Answer::No),
                (Relation::UnitarilySimilar, Answer::No),
            ],
            provenance: "diagonal projections of ranks 1 and 2: every polynomial image has \
                         norm max(|p(1)|, |p(0)|) on both sides, yet no trace invariant and \
                         no unitary map survives the rank gap",
        }),
        "same-minpoly-z2" => Ok(GalleryEntry {
            name: "same-minpoly-z2",
            a: Matrix::from_real_rows(&[
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0],
            ]),
            b: Matrix::from_real_rows(&[
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![2.0, 0.0, 0.0],
            ]),
            expected: vec![(Relation::Identical, Answer::No)],
            provenance: "both have minimal polynomial z^2, but the spectral norms are 1 and \
                         sqrt 5, so already the identity polynomial separates them",
        }),
        "frobenius-gap-4x4" => Ok(GalleryEntry {
            name: "frobenius-gap-4x4",
            a: Matrix::direct_sum(
                &Matrix::upper2(r(1.0), r(0.0), r(4.0)),
                &Matrix::upper2(r(1.0), r(0.0), r(3.0)),
            ),
            b: Matrix::direct_sum(
                &Matrix::upper2(r(1.0), r(0.0), r(4.0)),
                &Matrix::upper2(r(1.0), r(0.0), r(2.0)),
            ),
            expected: vec![(Relation::Identical, Answer::Yes)],
            provenance: "block pairs with couplings (4, 3) and (4, 2): identical pseudospectra \
                         and equal quadratic minimal polynomials with spectral norm sqrt 17 on \
                         both sides, while the centered Frobenius norms differ for either \
                         centering eigenvalue - the defect criterion does not extend past 3x3",
        }),
        "nilpotent-cubic-transpose" => {
            let a = Matrix::from_real_rows(&[
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 2.0],
                vec![0.0, 0.0, 0.0],
            ]);
            let b = a.transpose();
            Ok(GalleryEntry {
                name: "nilpotent-cubic-transpose",
                a,
                b,
                expected: vec![
                    (Relation::SuperIdentical, Answer::Yes),
                    (Relation::UnitarilySimilar, Answer::No),
                ],
                provenance: "a nilpotent of index 3 against its transpose: transposition \
                             preserves every singular value function, but the trace of \
                             X X* X X X* X* tells the two apart",
            })
        }
        "similar-not-ip-2x2" => Ok(GalleryEntry {
            name: "similar-not-ip-2x2",
            a: Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]),
            b: Matrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]),
            expected: vec![(Relation::Identical, Answer::No)],
            provenance: "similar via conjugation by diag(2, 1), yet the spectral norms are 1 \
                         and 2: similarity alone does not preserve pseudospectra",
        }),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}
