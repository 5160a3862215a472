//! Dense complex small-matrix arithmetic and the from-scratch numerics that
//! everything else is built on: traces of words in a matrix and its adjoint,
//! norms, Hermitian eigenvalues, singular values, closed-form eigenvalues up
//! to dimension 3, and numerical-range support values.

mod jacobi;
pub(crate) mod roots;
mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::HERMITIAN_CHECK_REL;
use crate::error::{Error, Result};

pub(crate) use svd::one_sided_jacobi_svd;

/// Dense square complex matrix, row-major storage.
///
/// All stored entries are finite; constructors reject NaN and infinity.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

/// Wire form: `{"d": n, "entries": [[[re,im], ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    d: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        let entries = (0..m.dim)
            .map(|i| (0..m.dim).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        MatrixRepr { d: m.dim, entries }
    }
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = String;

    fn try_from(r: MatrixRepr) -> std::result::Result<Self, String> {
        if r.d == 0 {
            return Err("field `d` must be a positive integer".into());
        }
        if r.entries.len() != r.d {
            return Err(format!(
                "field `entries` has {} rows, expected d = {}",
                r.entries.len(),
                r.d
            ));
        }
        let mut data = Vec::with_capacity(r.d * r.d);
        for (i, row) in r.entries.iter().enumerate() {
            if row.len() != r.d {
                return Err(format!(
                    "row {} of `entries` has {} columns, expected d = {}",
                    i,
                    row.len(),
                    r.d
                ));
            }
            for (j, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(format!("entry ({i},{j}) is not finite"));
                }
                data.push(Complex64::new(re, im));
            }
        }
        Ok(Matrix { dim: r.d, data })
    }
}

impl Matrix {
    /// Zero matrix of dimension `dim`.
    pub fn zeros(dim: usize) -> Matrix {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Matrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Matrix {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row slices. Panics on ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Matrix {
        let dim = rows.len();
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must all have length {dim}");
            for &z in row {
                assert!(
                    z.re.is_finite() && z.im.is_finite(),
                    "matrix entries must be finite"
                );
                data.push(z);
            }
        }
        Matrix { dim, data }
    }

    /// Builds a matrix from real row slices.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Matrix {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Matrix::from_rows(&complex)
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[Complex64]) -> Matrix {
        let mut m = Matrix::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// The 2x2 upper-triangular family `[[a, delta], [0, b]]`.
    pub fn upper2(a: Complex64, b: Complex64, delta: Complex64) -> Matrix {
        Matrix::from_rows(&[vec![a, delta], vec![Complex64::new(0.0, 0.0), b]])
    }

    /// The 3x3 family `diag(g) (+) upper2(a, b, delta)`.
    pub fn upper3(g: Complex64, a: Complex64, b: Complex64, delta: Complex64) -> Matrix {
        Matrix::direct_sum(&Matrix::diagonal(&[g]), &Matrix::upper2(a, b, delta))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(a: &Matrix, b: &Matrix) -> Matrix {
        let dim = a.dim + b.dim;
        let mut m = Matrix::zeros(dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                m[(i, j)] = a[(i, j)];
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                m[(a.dim + i, a.dim + j)] = b[(i, j)];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Square root of the sum of squared entry moduli.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `self * rhs`. Panics on dimension mismatch.
    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let d = self.dim;
        let mut m = Matrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    m[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        m
    }

    pub fn scale(&self, c: Complex64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// `z I - self`, the matrix whose smallest singular value is the
    /// reciprocal resolvent norm at `z`.
    pub fn z_shift(&self, z: Complex64) -> Matrix {
        let mut m = self.scale(Complex64::new(-1.0, 0.0));
        for i in 0..self.dim {
            m[(i, i)] += z;
        }
        m
    }

    /// `self - c I`.
    pub fn sub_scalar(&self, c: Complex64) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] -= c;
        }
        m
    }

    /// Hermitian part `(self + self*) / 2`.
    pub fn hermitian_part(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    /// `self^k` by repeated multiplication (`k = 0` gives the identity).
    pub fn pow(&self, k: usize) -> Matrix {
        let mut acc = Matrix::identity(self.dim);
        for _ in 0..k {
            acc = acc.matmul(self);
        }
        acc
    }

    /// Column-stacked entries, row-major, for rank tests on matrix families.
    pub(crate) fn vectorized(&self) -> Vec<Complex64> {
        self.data.clone()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values()[0]
    }

    /// Singular values in nonincreasing order, computed by one-sided Jacobi
    /// orthogonalization of the columns.
    pub fn singular_values(&self) -> Vec<f64> {
        let cols: Vec<Vec<Complex64>> = (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)]).collect())
            .collect();
        one_sided_jacobi_svd(cols, false).singular_values
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// One factor of a trace word: the matrix itself or its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    X,
    XAdj,
}

/// Nonempty word over `{X, X*}` denoting a product of a matrix and its
/// adjoint; its trace is a unitary-similarity invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceWord(Vec<Letter>);

impl TraceWord {
    pub fn new(letters: Vec<Letter>) -> TraceWord {
        assert!(!letters.is_empty(), "trace word must be nonempty");
        TraceWord(letters)
    }

    /// Parses words like `"X*X"` or `"XX*XXX*X*"`: each `X` optionally
    /// followed by `*`.
    pub fn parse(s: &str) -> Option<TraceWord> {
        let mut letters = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            if c != 'X' {
                return None;
            }
            if chars.peek() == Some(&'*') {
                chars.next();
                letters.push(Letter::XAdj);
            } else {
                letters.push(Letter::X);
            }
        }
        if letters.is_empty() {
            None
        } else {
            Some(TraceWord(letters))
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            match l {
                Letter::X => write!(f, "X")?,
                Letter::XAdj => write!(f, "X*")?,
            }
        }
        Ok(())
    }
}

/// Trace of the product obtained by substituting `t` for `X` and `t*` for
/// `X*` in `w`, left to right.
pub fn trace_word(t: &Matrix, w: &TraceWord) -> Complex64 {
    let adj = t.adjoint();
    let mut iter = w.letters().iter();
    let first = match iter.next().expect("trace word is nonempty") {
        Letter::X => t.clone(),
        Letter::XAdj => adj.clone(),
    };
    let product = iter.fold(first, |acc, l| match l {
        Letter::X => acc.matmul(t),
        Letter::XAdj => acc.matmul(&adj),
    });
    product.trace()
}

/// Eigenvalues of a Hermitian matrix, nonincreasing, by cyclic Jacobi
/// rotations.
///
/// Errors with [`Error::NotHermitian`] when the max entrywise asymmetry
/// exceeds `1e-12 * |H|_F`.
pub fn hermitian_eigenvalues(h: &Matrix) -> Result<Vec<f64>> {
    let fro = h.frobenius_norm();
    let limit = HERMITIAN_CHECK_REL * fro;
    let mut deviation: f64 = 0.0;
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            deviation = deviation.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    if deviation > limit {
        return Err(Error::NotHermitian { deviation, limit });
    }
    Ok(jacobi::hermitian_eigenvalues_unchecked(&h.hermitian_part()))
}

/// Eigenvalues with algebraic multiplicity for `dim <= 3`, as a flat list of
/// roots of the characteristic polynomial (repeats included).
///
/// Closed-form quadratic at `d = 2`; Cardano/trigonometric cubic with Newton
/// polishing at `d = 3`.
pub fn eigenvalues_small(t: &Matrix) -> Result<Vec<Complex64>> {
    let d = t.dim();
    match d {
        1 => Ok(vec![t[(0, 0)]]),
        2 => {
            let tr = t.trace();
            let det = t[(0, 0)] * t[(1, 1)] - t[(0, 1)] * t[(1, 0)];
            Ok(roots::quadratic_roots(tr, det).to_vec())
        }
        3 => {
            // Coefficients of z^3 - e1 z^2 + e2 z - e3 from power sums.
            let p1 = t.trace();
            let t2 = t.matmul(t);
            let p2 = t2.trace();
            let p3 = t2.matmul(t).trace();
            let e1 = p1;
            let e2 = (p1 * p1 - p2) * 0.5;
            let e3 = (p1 * p1 * p1 - p1 * p2 * 3.0 + p3 * 2.0) / 6.0;
            Ok(roots::cubic_roots(-e1, e2, -e3).to_vec())
        }
        _ => Err(Error::UnsupportedDimension {
            dim: d,
            reason: "closed-form eigenvalues are implemented for dim <= 3",
        }),
    }
}

/// Support value of the numerical range in direction `theta`: the largest
/// eigenvalue of `Re(e^{-i theta} T)`.
///
/// `theta = 0` gives the max real part over the numerical range, `theta = pi`
/// gives minus the min real part.
pub fn numerical_range_support(t: &Matrix, theta: f64) -> f64 {
    let rotated = t.scale(Complex64::from_polar(1.0, -theta));
    let re = rotated.hermitian_part();
    let eigs = jacobi::hermitian_eigenvalues_unchecked(&re);
    eigs[0]
}

/// Sorts a real slice in nonincreasing order.
pub(crate) fn sort_desc(v: &mut [f64]) {
    v.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
}

/// Matches two unordered pairs that are known to share sum and product: the
/// solutions of `x^2 - s x + p = 0`, returned in nonincreasing order.
///
/// Two pairs with equal sums and equal products coincide up to order, so
/// matching the sorted pairs decides equality of `{x1, y1}` and `{x2, y2}`.
pub fn sorted_pair_from_sum_product(sum: f64, product: f64) -> (f64, f64) {
    let half = sum * 0.5;
    let disc = (half * half - product).max(0.0).sqrt();
    (half + disc, half - disc)
}

/// Matrix with i.i.d. complex standard normal entries, for sampling-based
/// oracles and randomized cross-validation.
pub fn random_matrix<R: rand::Rng>(dim: usize, rng: &mut R) -> Matrix {
    use rand_distr::StandardNormal;
    Matrix::from_rows(
        &(0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re, im)
                    })
                    .collect()
            })
            .collect::<Vec<_>>(),
    )
}

/// Random unitary matrix from QR-style orthonormalization of a Gaussian
/// complex matrix. Used to build unitarily similar test pairs.
pub fn random_unitary<R: rand::Rng>(dim: usize, rng: &mut R) -> Matrix {
    use rand_distr::StandardNormal;
    // Gram-Schmidt on random Gaussian columns; a.s. nonsingular.
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            let (done, rest) = cols.split_at_mut(j);
            for (x, base) in rest[0].iter_mut().zip(&done[k]) {
                *x -= proj * base;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut m = Matrix::zeros(dim);
    for j in 0..dim {
        for i in 0..dim {
            m[(i, j)] = cols[j][i];
        }
    }
    m
}

/// `U T U*` for unitary `U`.
pub fn unitary_conjugate(t: &Matrix, u: &Matrix) -> Matrix {
    u.matmul(t).matmul(&u.adjoint())
}
