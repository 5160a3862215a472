//! Polynomial functional calculus: evaluation at scalars and matrices,
//! divided differences, characteristic and minimal polynomials, spectra with
//! index, and seeded random polynomial sampling for the falsification
//! oracles.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Complex-coefficient polynomial, coefficients ascending by degree
/// (`coeffs[k]` multiplies `z^k`). Always nonempty; construction trims
/// trailing exact zeros.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

/// Wire form: `{"coeffs": [[re,im], ...]}` ascending by degree.
#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<[f64; 2]>,
}

impl From<Polynomial> for PolyRepr {
    fn from(p: Polynomial) -> Self {
        PolyRepr {
            coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<PolyRepr> for Polynomial {
    type Error = String;

    fn try_from(r: PolyRepr) -> std::result::Result<Self, String> {
        if r.coeffs.is_empty() {
            return Err("field `coeffs` must be nonempty".into());
        }
        for (k, &[re, im]) in r.coeffs.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(format!("coefficient {k} is not finite"));
            }
        }
        Ok(Polynomial::new(
            r.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        ))
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Polynomial {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Polynomial {
        Polynomial::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Polynomial {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Horner evaluation at a scalar.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Horner evaluation at a matrix; the constant term contributes a
    /// multiple of the identity.
    pub fn eval_matrix(&self, t: &Matrix) -> Matrix {
        let id = Matrix::identity(t.dim());
        let mut acc = id.scale(*self.coeffs.last().unwrap());
        for &c in self.coeffs.iter().rev().skip(1) {
            acc = &acc.matmul(t) + &id.scale(c);
        }
        acc
    }

    /// Coefficient-wise derivative.
    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Rescales so the leading coefficient is exactly 1.
    pub fn monic(&self) -> Polynomial {
        let lead = self.leading();
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().map(|&c| c / lead).collect();
        *coeffs.last_mut().unwrap() = Complex64::new(1.0, 0.0);
        Polynomial { coeffs }
    }

    /// Quotient and remainder of division by `den`.
    pub fn div_rem(&self, den: &Polynomial) -> (Polynomial, Polynomial) {
        let dlead = den.leading();
        assert!(dlead.norm() > 0.0, "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = den.degree();
        if self.degree() < dd {
            return (
                Polynomial::new(vec![Complex64::new(0.0, 0.0)]),
                self.clone(),
            );
        }
        let mut quot = vec![Complex64::new(0.0, 0.0); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / dlead;
            quot[k] = q;
            for j in 0..=dd {
                let sub = q * den.coeffs[j];
                rem[k + j] -= sub;
            }
        }
        rem.truncate(dd.max(1));
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Roots with multiplicity for degree <= 3.
    pub fn roots_small(&self) -> Result<Vec<Complex64>> {
        let m = self.monic();
        let c = &m.coeffs;
        match m.degree() {
            0 => Ok(vec![]),
            1 => Ok(vec![-c[0]]),
            2 => Ok(linalg::roots::quadratic_roots(-c[1], c[0]).to_vec()),
            3 => Ok(linalg::roots::cubic_roots(c[2], c[1], c[0]).to_vec()),
            d => Err(Error::UnsupportedDimension {
                dim: d,
                reason: "closed-form roots are implemented for degree <= 3",
            }),
        }
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("({:.4}{:+.4}i) z^{k}", c.re, c.im))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Eigenvalue with algebraic multiplicity and index (the multiplicity of the
/// eigenvalue in the minimal polynomial, which governs the resolvent blow-up
/// rate).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    #[serde(serialize_with = "crate::wire::complex")]
    pub value: Complex64,
    pub algebraic_multiplicity: usize,
    pub index: usize,
}

/// Divided difference `(p(a) - p(b)) / (a - b)`, switching to `p'(a)` when
/// the nodes are confluent at the configured threshold.
pub fn divided_difference(p: &Polynomial, a: Complex64, b: Complex64, cfg: &Config) -> Complex64 {
    if (a - b).norm() > cfg.confluence_tol * (1.0 + a.norm() + b.norm()) {
        (p.eval(a) - p.eval(b)) / (a - b)
    } else {
        p.derivative().eval(a)
    }
}

/// Monic characteristic polynomial by the Faddeev-LeVerrier trace recursion.
pub fn characteristic_polynomial(t: &Matrix) -> Polynomial {
    let d = t.dim();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    coeffs[d] = Complex64::new(1.0, 0.0);
    let mut m = Matrix::zeros(d);
    for k in 1..=d {
        // M_k = T M_{k-1} + c_{d-k+1} I
        m = &t.matmul(&m) + &Matrix::identity(d).scale(coeffs[d - k + 1]);
        let tm = t.matmul(&m);
        coeffs[d - k] = -tm.trace() / k as f64;
    }
    Polynomial { coeffs }
}

/// Monic minimal polynomial: the smallest `k` for which the vectorized
/// powers `I, T, ..., T^k` are linearly dependent, detected by the smallest
/// singular value of the stacked-power matrix dropping below
/// `rank_tol * largest`; coefficients come from the corresponding right
/// null vector.
pub fn minimal_polynomial(t: &Matrix, cfg: &Config) -> Polynomial {
    let d = t.dim();
    let mut power_cols: Vec<Vec<Complex64>> = vec![Matrix::identity(d).vectorized()];
    let mut power = Matrix::identity(d);
    for _ in 0..d {
        power = power.matmul(t);
        power_cols.push(power.vectorized());
    }
    for k in 1..=d {
        let cols = power_cols[..=k].to_vec();
        let svd = linalg::one_sided_jacobi_svd(cols, true);
        let dependent = svd.singular_values[k] <= cfg.rank_tol * svd.singular_values[0];
        // Cayley-Hamilton guarantees dependence at k = d.
        if dependent || k == d {
            let null = &svd.right_vectors.as_ref().unwrap()[k];
            let lead = null[k];
            let coeffs: Vec<Complex64> = null.iter().map(|&c| c / lead).collect();
            return Polynomial::new(coeffs).monic();
        }
    }
    unreachable!("loop returns at k = d");
}

/// Spectrum with multiplicities and indices for `dim <= 3`.
///
/// Eigenvalues are clustered at `cluster_tol * (1 + |T|_F)`; the index of a
/// cluster is the number of minimal-polynomial roots it absorbs. Errors with
/// [`Error::ClusterAmbiguity`] when two clusters sit closer than twice the
/// clustering radius.
pub fn spectrum_with_index(t: &Matrix, cfg: &Config) -> Result<Vec<SpectrumEntry>> {
    let d = t.dim();
    if d > 3 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "spectra with index are implemented for dim <= 3",
        });
    }
    let tau = cfg.cluster_tol * (1.0 + t.frobenius_norm());
    let eigs = linalg::eigenvalues_small(t)?;
    let clusters = cluster_points(&eigs, tau);
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let gap = (clusters[i].0 - clusters[j].0).norm();
            if gap < 2.0 * tau {
                return Err(Error::ClusterAmbiguity {
                    first: clusters[i].0,
                    second: clusters[j].0,
                    tol: tau,
                });
            }
        }
    }
    let min_poly = minimal_polynomial(t, cfg);
    let roots = min_poly.roots_small()?;
    let mut indices = vec![0usize; clusters.len()];
    for r in &roots {
        let nearest = (0..clusters.len())
            .min_by(|&i, &j| {
                (clusters[i].0 - r)
                    .norm()
                    .partial_cmp(&(clusters[j].0 - r).norm())
                    .unwrap()
            })
            .expect("at least one cluster");
        indices[nearest] += 1;
    }
    let mut entries: Vec<SpectrumEntry> = clusters
        .into_iter()
        .zip(indices)
        .map(|((value, mult), idx)| SpectrumEntry {
            value,
            algebraic_multiplicity: mult,
            // Every eigenvalue is a minimal-polynomial root; a zero count can
            // only come from borderline rounding, so floor at 1.
            index: idx.max(1),
        })
        .collect();
    entries.sort_by(|a, b| {
        b.algebraic_multiplicity
            .cmp(&a.algebraic_multiplicity)
            .then(b.value.re.partial_cmp(&a.value.re).unwrap())
            .then(b.value.im.partial_cmp(&a.value.im).unwrap())
    });
    Ok(entries)
}

/// Greedy clustering of a handful of points; centers are cluster means.
fn cluster_points(points: &[Complex64], tau: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Vec<Complex64>, Complex64)> = Vec::new();
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    for &p in &sorted {
        match clusters
            .iter_mut()
            .find(|(_, center)| (*center - p).norm() <= tau)
        {
            Some((members, center)) => {
                members.push(p);
                let n = members.len() as f64;
                *center = members.iter().sum::<Complex64>() / n;
            }
            None => clusters.push((vec![p], p)),
        }
    }
    clusters
        .into_iter()
        .map(|(members, center)| (center, members.len()))
        .collect()
}

/// Random polynomial with degree uniform in `[1, max_degree]` and i.i.d.
/// complex standard normal coefficients, reproducible per seed.
pub fn random_polynomial(max_degree: usize, seed: u64) -> Polynomial {
    assert!(max_degree >= 1, "max_degree must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_polynomial_with(max_degree, &mut rng)
}

/// Same sampling as [`random_polynomial`] but drawing from a caller-owned
/// generator, for batch oracles.
pub fn random_polynomial_with<R: Rng>(max_degree: usize, rng: &mut R) -> Polynomial {
    let degree = rng.gen_range(1..=max_degree);
    let coeffs = (0..=degree)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    Polynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn eval_scalar_examples() {
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        assert!((sq.eval(c(1.0, 1.0)) - c(0.0, 2.0)).norm() < 1e-15);

        let one = Polynomial::from_real(&[1.0]);
        assert_eq!(one.eval(c(-3.0, 7.0)), r(1.0));

        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(p.eval(r(2.0)), r(5.0));
    }

    #[test]
    fn eval_matrix_examples() {
        let n = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        assert!(sq.eval_matrix(&n).frobenius_norm() < 1e-15);

        let idp = Polynomial::from_real(&[0.0, 1.0]);
        assert_eq!(idp.eval_matrix(&n), n);

        // p(upper2(a, b, delta)) = upper2(p(a), p(b), delta * D_p(a, b)).
        let p = Polynomial::new(vec![c(1.0, -2.0), c(0.5, 0.0), c(0.0, 1.0), c(2.0, 0.3)]);
        let (a, b, delta) = (c(0.4, 1.1), c(-0.7, 0.2), c(1.3, -0.8));
        let lhs = p.eval_matrix(&Matrix::upper2(a, b, delta));
        let rhs = Matrix::upper2(
            p.eval(a),
            p.eval(b),
            delta * divided_difference(&p, a, b, &cfg()),
        );
        assert!((&lhs - &rhs).frobenius_norm() < 1e-13);
    }

    #[test]
    fn divided_difference_examples() {
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        assert!((divided_difference(&sq, r(3.0), r(1.0), &cfg()) - r(4.0)).norm() < 1e-14);
        assert!((divided_difference(&sq, r(5.0), r(5.0), &cfg()) - r(10.0)).norm() < 1e-14);

        let p = Polynomial::from_real(&[0.0, -1.0, 0.0, 1.0]);
        assert!(divided_difference(&p, r(1.0), r(-1.0), &cfg()).norm() < 1e-14);
    }

    #[test]
    fn characteristic_polynomial_examples() {
        let a = Matrix::diagonal(&[r(1.0), r(0.0), r(0.0)]);
        let chi = characteristic_polynomial(&a);
        let want = [r(0.0), r(0.0), r(-1.0), r(1.0)];
        for (got, want) in chi.coeffs().iter().zip(want) {
            assert!((got - want).norm() < 1e-12);
        }

        let b = Matrix::diagonal(&[r(1.0), r(1.0), r(0.0)]);
        let chi = characteristic_polynomial(&b);
        let want = [r(0.0), r(1.0), r(-2.0), r(1.0)];
        for (got, want) in chi.coeffs().iter().zip(want) {
            assert!((got - want).norm() < 1e-12);
        }

        let chi = characteristic_polynomial(&Matrix::identity(2));
        let want = [r(1.0), r(-2.0), r(1.0)];
        for (got, want) in chi.coeffs().iter().zip(want) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn minimal_polynomial_examples() {
        // Rank-one nilpotent: minimal polynomial z^2.
        let a = Matrix::from_real_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let m = minimal_polynomial(&a, &cfg());
        assert_eq!(m.degree(), 2);
        assert!(m.coeffs()[0].norm() < 1e-10 && m.coeffs()[1].norm() < 1e-10);

        let m = minimal_polynomial(&Matrix::identity(3), &cfg());
        assert_eq!(m.degree(), 1);
        assert!((m.coeffs()[0] - r(-1.0)).norm() < 1e-12);

        // diag(1,0,0): minimal polynomial z^2 - z, and A^2 - A = 0 exactly.
        let d = Matrix::diagonal(&[r(1.0), r(0.0), r(0.0)]);
        let m = minimal_polynomial(&d, &cfg());
        assert_eq!(m.degree(), 2);
        assert!((m.coeffs()[1] - r(-1.0)).norm() < 1e-12);
        assert!(m.coeffs()[0].norm() < 1e-12);
        assert!(m.eval_matrix(&d).frobenius_norm() < 1e-12);
    }

    #[test]
    fn minimal_polynomial_residual_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for dim in 1..=4 {
            for _ in 0..25 {
                let t = Matrix::from_rows(
                    &(0..dim)
                        .map(|_| {
                            (0..dim)
                                .map(|_| {
                                    c(2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0)
                                })
                                .collect()
                        })
                        .collect::<Vec<_>>(),
                );
                let m = minimal_polynomial(&t, &cfg());
                let residual = m.eval_matrix(&t).frobenius_norm();
                let bound = 1e-7 * (1.0 + t.frobenius_norm()).powi(m.degree() as i32);
                assert!(residual <= bound, "residual {residual:e} > bound {bound:e}");
            }
        }
    }

    #[test]
    fn spectrum_with_index_examples() {
        let a = Matrix::from_real_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let s = spectrum_with_index(&a, &cfg()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].value.norm() < 1e-10);
        assert_eq!(s[0].algebraic_multiplicity, 3);
        assert_eq!(s[0].index, 2);

        let d = Matrix::diagonal(&[r(1.0), r(1.0), r(0.0)]);
        let s = spectrum_with_index(&d, &cfg()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].algebraic_multiplicity, s[0].index), (2, 1));
        assert!((s[0].value - r(1.0)).norm() < 1e-10);
        assert_eq!((s[1].algebraic_multiplicity, s[1].index), (1, 1));

        // Double eigenvalue split across blocks: index stays 1.
        let t = Matrix::upper3(r(2.0), r(2.0), r(-1.0), r(3.0));
        let s = spectrum_with_index(&t, &cfg()).unwrap();
        assert_eq!((s[0].algebraic_multiplicity, s[0].index), (2, 1));
        assert!((s[0].value - r(2.0)).norm() < 1e-9);
        assert_eq!((s[1].algebraic_multiplicity, s[1].index), (1, 1));
        assert!((s[1].value - r(-1.0)).norm() < 1e-9);
    }

    #[test]
    fn spectrum_cluster_ambiguity() {
        let t = Matrix::diagonal(&[r(0.0), r(3e-6), r(1.0)]);
        match spectrum_with_index(&t, &cfg()) {
            Err(Error::ClusterAmbiguity { .. }) => {}
            other => panic!("expected ClusterAmbiguity, got {other:?}"),
        }
    }

    #[test]
    fn random_polynomial_determinism() {
        let p1 = random_polynomial(4, 1234);
        let p2 = random_polynomial(4, 1234);
        assert_eq!(p1, p2);

        let affine = random_polynomial(1, 99);
        assert_eq!(affine.degree(), 1);

        let mut seen = std::collections::HashSet::new();
        for seed in 0..100 {
            let p = random_polynomial(4, seed);
            let key = format!("{:?}", p.coeffs());
            assert!(seen.insert(key), "seed {seed} repeated another draw");
        }
    }

    #[test]
    fn div_rem_reconstructs() {
        let p = Polynomial::from_roots(&[r(1.0), r(2.0), c(0.0, 1.0)]);
        let d = Polynomial::from_roots(&[r(2.0)]);
        let (q, rem) = p.div_rem(&d);
        assert!(rem.max_coeff_norm() < 1e-13);
        assert_eq!(q.degree(), 2);
        // q * d + rem = p
        let back = Polynomial::from_roots(&[r(1.0), c(0.0, 1.0)]);
        for (a, b) in q.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn cayley_hamilton_small_dims() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for dim in 1..=3 {
            for _ in 0..50 {
                let t = Matrix::from_rows(
                    &(0..dim)
                        .map(|_| {
                            (0..dim)
                                .map(|_| {
                                    c(2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0)
                                })
                                .collect()
                        })
                        .collect::<Vec<_>>(),
                );
                let chi = characteristic_polynomial(&t);
                let res = chi.eval_matrix(&t).frobenius_norm();
                let bound = 1e-8 * (1.0 + t.frobenius_norm()).powi(dim);
                assert!(res <= bound, "chi(T) residual {res:e} > {bound:e}");
            }
        }
    }

    #[test]
    fn polynomial_json_schema() {
        let p = Polynomial::new(vec![c(1.0, 2.0), c(0.0, -0.5)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"coeffs":[[1.0,2.0],[0.0,-0.5]]}"#);
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);
        assert!(serde_json::from_str::<Polynomial>(r#"{"coeffs":[]}"#).is_err());
    }
}
