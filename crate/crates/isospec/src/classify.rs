//! Decision procedures for the four relations between a pair of matrices:
//! identical pseudospectra, polynomial isometry, super-identical
//! pseudospectra, and unitary similarity.
//!
//! Where a finite criterion exists (trace invariants at dimension 2, the
//! six-trace test and the Frobenius-defect test at dimension 3, the
//! spectral-norm test under equal quadratic minimal polynomials at any
//! size), verdicts are Yes/No with a certificate of every compared number.
//! Everywhere else the answer is Undecided and carries numeric oracle
//! evidence instead - no Yes is ever emitted outside a proven criterion.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, trace_word, Matrix, TraceWord};
use crate::par;
use crate::polyfun::{self, Polynomial, SpectrumEntry};
use crate::pseudospectra::{self, ComparisonResult};

/// Margin reported when a comparison fails structurally (e.g. degrees
/// differ), kept finite so reports stay JSON-clean.
const BIG_MARGIN: f64 = 1e30;

/// The four relations a report decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Identical,
    Isometric,
    SuperIdentical,
    UnitarilySimilar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
    Undecided,
}

/// The branch that produced a verdict, named by what it compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// tr X*X, tr X, tr X^2 agree (complete invariant set at dimension 2).
    TraceTriple,
    /// The six trace invariants agree (dimension 3, equal characteristic
    /// polynomials).
    SixTraces,
    /// Minimal polynomials differ, which already rules the relation out.
    MinimalPolynomialMismatch,
    /// `|A - g_A I|_F` vs `|B - g_B I|_F` with `g` the double eigenvalue
    /// (equal quadratic minimal polynomials, split multiplicities).
    FrobeniusDefect,
    /// `|A|` vs `|B|` under equal quadratic minimal polynomials (any size).
    SpectralNormQuadraticMinPoly,
    /// Both matrices are the same scalar multiple of an identity.
    ScalarMatrices,
    /// Identical pseudospectra plus equal characteristic polynomials
    /// (unitary similarity under equal quadratic minimal polynomials).
    IdenticalWithEqualCharacteristic,
    /// The trace of X X* X X X* X* differs, a unitary-similarity witness.
    TraceWordWitness,
    /// No finite criterion applies; see the attached oracle evidence.
    NoneApplicable,
}

/// One compared quantity inside a verdict certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CertEntry {
    pub label: String,
    #[serde(serialize_with = "crate::wire::complex")]
    pub left: Complex64,
    #[serde(serialize_with = "crate::wire::complex")]
    pub right: Complex64,
    pub gap: f64,
}

/// Decision outcome with its certificate.
///
/// `margin` is the largest gap-to-threshold ratio over the decisive
/// comparisons: at most 1 for Yes, above 1 for No. Undecided verdicts attach
/// the numeric oracle evidence instead.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    pub criterion: Criterion,
    pub certificate: Vec<CertEntry>,
    pub tolerance_used: f64,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_pseudospectra: Option<ComparisonResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_polynomials: Option<ComparisonResult>,
}

impl Verdict {
    fn decided(answer: Answer, criterion: Criterion, checks: Checks, cfg: &Config) -> Verdict {
        Verdict {
            answer,
            criterion,
            certificate: checks.entries,
            tolerance_used: cfg.tol,
            margin: checks.margin,
            oracle_pseudospectra: None,
            oracle_polynomials: None,
        }
    }

    fn undecided(
        checks: Checks,
        cfg: &Config,
        pseudo: Option<ComparisonResult>,
        polys: Option<ComparisonResult>,
    ) -> Verdict {
        Verdict {
            answer: Answer::Undecided,
            criterion: Criterion::NoneApplicable,
            certificate: checks.entries,
            tolerance_used: cfg.tol,
            margin: checks.margin,
            oracle_pseudospectra: pseudo,
            oracle_polynomials: polys,
        }
    }

    fn relabeled(mut self, criterion: Criterion) -> Verdict {
        self.criterion = criterion;
        self
    }
}

/// Accumulates certificate entries; `check_*` rows drive the margin,
/// `note_*` rows are recorded for re-adjudication only.
#[derive(Default)]
struct Checks {
    entries: Vec<CertEntry>,
    margin: f64,
}

impl Checks {
    fn new() -> Checks {
        Checks::default()
    }

    fn note(&mut self, label: impl Into<String>, left: Complex64, right: Complex64) {
        self.entries.push(CertEntry {
            label: label.into(),
            left,
            right,
            gap: (left - right).norm(),
        });
    }

    fn check(
        &mut self,
        label: impl Into<String>,
        left: Complex64,
        right: Complex64,
        threshold: f64,
    ) -> bool {
        let gap = (left - right).norm();
        self.entries.push(CertEntry {
            label: label.into(),
            left,
            right,
            gap,
        });
        let ratio = if threshold > 0.0 {
            (gap / threshold).min(BIG_MARGIN)
        } else if gap == 0.0 {
            0.0
        } else {
            BIG_MARGIN
        };
        self.margin = self.margin.max(ratio);
        gap <= threshold
    }

    fn check_real(
        &mut self,
        label: impl Into<String>,
        left: f64,
        right: f64,
        threshold: f64,
    ) -> bool {
        self.check(
            label,
            Complex64::new(left, 0.0),
            Complex64::new(right, 0.0),
            threshold,
        )
    }

    fn fail(&mut self, label: impl Into<String>, left: Complex64, right: Complex64) {
        self.note(label, left, right);
        self.margin = BIG_MARGIN;
    }

    /// Keeps the entries of `other` as context without letting its margin
    /// decide this verdict.
    fn absorb_notes(&mut self, other: Checks) {
        self.entries.extend(other.entries);
    }

    fn absorb(&mut self, other: Checks) {
        self.entries.extend(other.entries);
        self.margin = self.margin.max(other.margin);
    }
}

fn max_fro(a: &Matrix, b: &Matrix) -> f64 {
    a.frobenius_norm().max(b.frobenius_norm())
}

/// Threshold for quantities that scale like the matrix norm to the `degree`.
fn homogeneous_tol(cfg: &Config, scale: f64, degree: usize) -> f64 {
    cfg.tol * (1.0 + scale).powi(degree as i32)
}

/// Trace invariants: the complete decision set of traces at dimension 2
/// (`tr X*X, tr X, tr X^2`) or dimension 3 (those plus the mixed words).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceInvariants {
    pub dim: usize,
    /// `(word, value)` in a fixed order.
    pub values: Vec<TraceValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceValue {
    pub word: String,
    #[serde(serialize_with = "crate::wire::complex")]
    pub value: Complex64,
}

const WORDS_2: [&str; 3] = ["X*X", "X", "XX"];
const WORDS_3: [&str; 6] = ["X*X", "X*XX", "X*X*XX", "X", "XX", "XXX"];
const UNITARY_WITNESS_WORD: &str = "XX*XXX*X*";

/// The decision traces for `dim` 2 or 3.
pub fn trace_invariants(t: &Matrix) -> Result<TraceInvariants> {
    let words: &[&str] = match t.dim() {
        2 => &WORDS_2,
        3 => &WORDS_3,
        d => {
            return Err(Error::UnsupportedDimension {
                dim: d,
                reason: "trace invariants are defined for dims 2 and 3",
            })
        }
    };
    Ok(TraceInvariants {
        dim: t.dim(),
        values: words
            .iter()
            .map(|w| TraceValue {
                word: (*w).to_string(),
                value: trace_word(t, &TraceWord::parse(w).expect("fixed word")),
            })
            .collect(),
    })
}

fn ensure_same_small_dims(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            a: a.dim(),
            b: b.dim(),
        });
    }
    if !(2..=3).contains(&a.dim()) {
        return Err(Error::UnsupportedDimension {
            dim: a.dim(),
            reason: "the finite decision trees cover dims 2 and 3",
        });
    }
    Ok(())
}

/// Compares all words in `words` as decisive checks.
fn word_comparison(a: &Matrix, b: &Matrix, words: &[&str], cfg: &Config) -> (bool, Checks) {
    let scale = max_fro(a, b);
    let mut checks = Checks::new();
    let mut equal = true;
    for w in words {
        let tw = TraceWord::parse(w).expect("fixed word");
        let thr = homogeneous_tol(cfg, scale, tw.len());
        equal &= checks.check(format!("tr {w}"), trace_word(a, &tw), trace_word(b, &tw), thr);
    }
    (equal, checks)
}

/// Minimal-polynomial equality.
///
/// Two routes, either suffices: matching root multisets at the cluster
/// tolerance (degree <= 3), or matching coefficient vectors. Roots of a
/// multiple eigenvalue scatter like the cube root of machine precision,
/// beyond the cluster radius, while the coefficients stay tight; for
/// well-separated roots it is the other way around. The margin is the
/// smaller of the two route margins.
fn min_polys_equal(
    m_a: &Polynomial,
    m_b: &Polynomial,
    scale: f64,
    cfg: &Config,
) -> (bool, Checks) {
    let mut checks = Checks::new();
    if m_a.degree() != m_b.degree() {
        checks.fail(
            "min poly degree",
            Complex64::new(m_a.degree() as f64, 0.0),
            Complex64::new(m_b.degree() as f64, 0.0),
        );
        return (false, checks);
    }
    let d = m_a.degree();
    let mut coeff_checks = Checks::new();
    let mut coeffs_ok = true;
    for j in 0..=d {
        let thr = homogeneous_tol(cfg, scale, d - j);
        coeffs_ok &= coeff_checks.check(
            format!("min poly coeff z^{j}"),
            m_a.coeffs()[j],
            m_b.coeffs()[j],
            thr,
        );
    }
    if d > 3 {
        return (coeffs_ok, coeff_checks);
    }
    let thr = cfg.cluster_tol * (1.0 + scale);
    let ra = m_a.roots_small().expect("degree <= 3");
    let rb = m_b.roots_small().expect("degree <= 3");
    let mut root_checks = Checks::new();
    let mut roots_ok = true;
    for (k, (x, y)) in match_points(&ra, &rb).into_iter().enumerate() {
        roots_ok &= root_checks.check(format!("min poly root {k}"), x, y, thr);
    }
    checks.margin = root_checks.margin.min(coeff_checks.margin);
    checks.entries.extend(root_checks.entries);
    checks.entries.extend(coeff_checks.entries);
    (roots_ok || coeffs_ok, checks)
}

/// Characteristic-polynomial equality, coefficient-wise, with the threshold
/// growing with the homogeneity degree of each coefficient.
fn char_polys_equal(
    chi_a: &Polynomial,
    chi_b: &Polynomial,
    scale: f64,
    cfg: &Config,
) -> (bool, Checks) {
    let mut checks = Checks::new();
    let d = chi_a.degree();
    let mut equal = true;
    for j in 0..=d {
        let thr = homogeneous_tol(cfg, scale, d - j);
        equal &= checks.check(
            format!("char poly coeff z^{j}"),
            chi_a.coeffs()[j],
            chi_b.coeffs()[j],
            thr,
        );
    }
    (equal, checks)
}

/// Greedy nearest matching of two equally sized point multisets.
fn match_points(xs: &[Complex64], ys: &[Complex64]) -> Vec<(Complex64, Complex64)> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| {
        xs[i]
            .re
            .partial_cmp(&xs[j].re)
            .unwrap()
            .then(xs[i].im.partial_cmp(&xs[j].im).unwrap())
    });
    let mut used = vec![false; ys.len()];
    let mut pairs = Vec::with_capacity(xs.len());
    for &i in &order {
        let (best, _) = ys
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .min_by(|(_, p), (_, q)| {
                (*p - xs[i])
                    .norm()
                    .partial_cmp(&(*q - xs[i]).norm())
                    .unwrap()
            })
            .expect("equal multiset sizes");
        used[best] = true;
        pairs.push((xs[i], ys[best]));
    }
    pairs
}

/// The eigenvalue of largest algebraic multiplicity, required to be an
/// unambiguous double at dimension 3.
fn double_eigenvalue(spectrum: &[SpectrumEntry], tau: f64) -> Result<Complex64> {
    let top = &spectrum[0];
    if top.algebraic_multiplicity >= 2 {
        return Ok(top.value);
    }
    // Exact arithmetic cannot reach this point: equal quadratic minimal
    // polynomials with unequal characteristic polynomials force a double
    // eigenvalue. Report the closest clusters as ambiguous.
    let mut best: Option<(Complex64, Complex64, f64)> = None;
    for i in 0..spectrum.len() {
        for j in i + 1..spectrum.len() {
            let gap = (spectrum[i].value - spectrum[j].value).norm();
            if best.is_none() || best.is_some_and(|(_, _, g)| gap < g) {
                best = Some((spectrum[i].value, spectrum[j].value, gap));
            }
        }
    }
    let (first, second, _) = best.expect("dimension 3 spectrum has at least two clusters here");
    Err(Error::ClusterAmbiguity {
        first,
        second,
        tol: tau,
    })
}

/// Decides identical pseudospectra for equal dimensions 2 or 3.
///
/// Dimension 2 is the three-trace test. Dimension 3 walks: minimal
/// polynomials must match as root multisets; under equal characteristic
/// polynomials the answer is the six-trace test; otherwise the pair has a
/// common quadratic minimal polynomial with swapped multiplicities and the
/// answer is the Frobenius-defect test against each double eigenvalue.
pub fn decide_identical_pseudospectra(a: &Matrix, b: &Matrix, cfg: &Config) -> Result<Verdict> {
    ensure_same_small_dims(a, b)?;
    if a.dim() == 2 {
        let (equal, checks) = word_comparison(a, b, &WORDS_2, cfg);
        let answer = if equal { Answer::Yes } else { Answer::No };
        return Ok(Verdict::decided(answer, Criterion::TraceTriple, checks, cfg));
    }

    let scale = max_fro(a, b);
    let m_a = polyfun::minimal_polynomial(a, cfg);
    let m_b = polyfun::minimal_polynomial(b, cfg);
    let (mp_equal, mp_checks) = min_polys_equal(&m_a, &m_b, scale, cfg);
    if !mp_equal {
        return Ok(Verdict::decided(
            Answer::No,
            Criterion::MinimalPolynomialMismatch,
            mp_checks,
            cfg,
        ));
    }

    let chi_a = polyfun::characteristic_polynomial(a);
    let chi_b = polyfun::characteristic_polynomial(b);
    let (chi_equal, chi_checks) = char_polys_equal(&chi_a, &chi_b, scale, cfg);

    if chi_equal {
        let (equal, mut checks) = word_comparison(a, b, &WORDS_3, cfg);
        checks.absorb_notes(mp_checks);
        checks.absorb_notes(chi_checks);
        let answer = if equal { Answer::Yes } else { Answer::No };
        return Ok(Verdict::decided(answer, Criterion::SixTraces, checks, cfg));
    }

    // Equal quadratic minimal polynomial, unequal characteristic
    // polynomials: the multiplicities are swapped and the coupling strength
    // is read off the Frobenius norm after centering at the double
    // eigenvalue.
    let tau = cfg.cluster_tol * (1.0 + scale);
    if m_a.degree() != 2 {
        let roots = m_a.roots_small().unwrap_or_default();
        let (first, second) = match roots.len() {
            0 | 1 => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            _ => (roots[0], roots[1]),
        };
        return Err(Error::ClusterAmbiguity { first, second, tol: tau });
    }
    let roots = m_a.roots_small().expect("quadratic");
    if (roots[0] - roots[1]).norm() <= 2.0 * tau {
        return Err(Error::ClusterAmbiguity {
            first: roots[0],
            second: roots[1],
            tol: tau,
        });
    }
    let spec_a = polyfun::spectrum_with_index(a, cfg)?;
    let spec_b = polyfun::spectrum_with_index(b, cfg)?;
    let gamma_a = double_eigenvalue(&spec_a, tau)?;
    let gamma_b = double_eigenvalue(&spec_b, tau)?;

    let mut checks = Checks::new();
    checks.note("double eigenvalue", gamma_a, gamma_b);
    let defect_a = a.sub_scalar(gamma_a).frobenius_norm();
    let defect_b = b.sub_scalar(gamma_b).frobenius_norm();
    let equal = checks.check_real(
        "|A - gI|_F vs |B - gI|_F",
        defect_a,
        defect_b,
        homogeneous_tol(cfg, scale, 1),
    );
    checks.absorb_notes(mp_checks);
    checks.absorb_notes(chi_checks);
    let answer = if equal { Answer::Yes } else { Answer::No };
    Ok(Verdict::decided(answer, Criterion::FrobeniusDefect, checks, cfg))
}

/// Decides super-identical pseudospectra for equal dimensions 2 or 3: at
/// dimension 2 it coincides with identical pseudospectra, at dimension 3 it
/// is the six-trace test.
pub fn decide_super_identical(a: &Matrix, b: &Matrix, cfg: &Config) -> Result<Verdict> {
    ensure_same_small_dims(a, b)?;
    if a.dim() == 2 {
        return decide_identical_pseudospectra(a, b, cfg);
    }
    let (equal, checks) = word_comparison(a, b, &WORDS_3, cfg);
    let answer = if equal { Answer::Yes } else { Answer::No };
    Ok(Verdict::decided(answer, Criterion::SixTraces, checks, cfg))
}

/// The size-agnostic screen through minimal polynomials: mismatch rules the
/// relation out; equal quadratic minimal polynomials reduce identical
/// pseudospectra and polynomial isometry to a spectral-norm comparison;
/// equal linear ones mean equal scalar matrices. Anything else is Undecided
/// with oracle evidence attached.
fn quadratic_minpoly_screen(a: &Matrix, b: &Matrix, cfg: &Config) -> Verdict {
    let scale = max_fro(a, b);
    let m_a = polyfun::minimal_polynomial(a, cfg);
    let m_b = polyfun::minimal_polynomial(b, cfg);
    let (mp_equal, mp_checks) = min_polys_equal(&m_a, &m_b, scale, cfg);
    if !mp_equal {
        return Verdict::decided(
            Answer::No,
            Criterion::MinimalPolynomialMismatch,
            mp_checks,
            cfg,
        );
    }
    match m_a.degree() {
        1 => {
            // Equal linear minimal polynomials: both matrices are the same
            // scalar; every polynomial image has equal norms.
            Verdict::decided(Answer::Yes, Criterion::ScalarMatrices, mp_checks, cfg)
        }
        2 => {
            let mut checks = Checks::new();
            let equal = checks.check_real(
                "spectral norm",
                a.spectral_norm(),
                b.spectral_norm(),
                homogeneous_tol(cfg, scale, 1),
            );
            checks.absorb_notes(mp_checks);
            let answer = if equal { Answer::Yes } else { Answer::No };
            Verdict::decided(answer, Criterion::SpectralNormQuadraticMinPoly, checks, cfg)
        }
        _ => Verdict::undecided(
            mp_checks,
            cfg,
            Some(pseudospectra::compare_pseudospectra(
                a,
                b,
                cfg.oracle_samples,
                cfg.oracle_seed,
                cfg,
            )),
            Some(falsify_by_polynomials(
                a,
                b,
                cfg.oracle_polys,
                cfg.oracle_max_degree,
                cfg.oracle_seed,
                cfg,
            )),
        ),
    }
}

/// Decides polynomial isometry. Equal dimensions 2 or 3 delegate to the
/// identical-pseudospectra tree (the two relations coincide there); other
/// shapes go through the minimal-polynomial screen, which never errors.
pub fn decide_polynomially_isometric(a: &Matrix, b: &Matrix, cfg: &Config) -> Verdict {
    if a.dim() == b.dim() && (2..=3).contains(&a.dim()) {
        if let Ok(v) = decide_identical_pseudospectra(a, b, cfg) {
            return v;
        }
        // Cluster ambiguity in the tree: fall through to the screen, which
        // needs no eigenvalue separation.
    }
    quadratic_minpoly_screen(a, b, cfg)
}

/// Decides unitary similarity for equal dimensions 2 or 3.
///
/// Dimension 2 coincides with identical pseudospectra. Dimension 3 with
/// equal quadratic minimal polynomials: yes exactly when the pair has
/// identical pseudospectra and equal characteristic polynomials. Otherwise
/// the trace of the length-six word X X* X X X* X* is compared: a gap is a
/// certified No, agreement leaves the question undecided with
/// super-identical oracle evidence attached.
pub fn decide_unitarily_similar(a: &Matrix, b: &Matrix, cfg: &Config) -> Result<Verdict> {
    ensure_same_small_dims(a, b)?;
    if a.dim() == 2 {
        return decide_identical_pseudospectra(a, b, cfg);
    }
    let scale = max_fro(a, b);
    let m_a = polyfun::minimal_polynomial(a, cfg);
    let m_b = polyfun::minimal_polynomial(b, cfg);
    let quadratic_equal = m_a.degree() == 2 && {
        let (eq, _) = min_polys_equal(&m_a, &m_b, scale, cfg);
        eq
    };

    if quadratic_equal {
        let identical = decide_identical_pseudospectra(a, b, cfg)?;
        let chi_a = polyfun::characteristic_polynomial(a);
        let chi_b = polyfun::characteristic_polynomial(b);
        let (chi_equal, chi_checks) = char_polys_equal(&chi_a, &chi_b, scale, cfg);
        let mut checks = Checks::new();
        checks.absorb(chi_checks);
        let answer = match (identical.answer, chi_equal) {
            (Answer::Yes, true) => Answer::Yes,
            _ => Answer::No,
        };
        let mut v = Verdict::decided(
            answer,
            Criterion::IdenticalWithEqualCharacteristic,
            checks,
            cfg,
        );
        // Carry the inner identical-pseudospectra evidence along.
        v.margin = v.margin.max(identical.margin);
        v.certificate.extend(identical.certificate);
        return Ok(v);
    }

    let word = TraceWord::parse(UNITARY_WITNESS_WORD).expect("fixed word");
    let thr = homogeneous_tol(cfg, scale, word.len());
    let mut checks = Checks::new();
    let equal = checks.check(
        format!("tr {UNITARY_WITNESS_WORD}"),
        trace_word(a, &word),
        trace_word(b, &word),
        thr,
    );
    if !equal {
        return Ok(Verdict::decided(
            Answer::No,
            Criterion::TraceWordWitness,
            checks,
            cfg,
        ));
    }
    let oracle =
        pseudospectra::compare_super_pseudospectra(a, b, cfg.oracle_samples, cfg.oracle_seed, cfg)
            .expect("equal dimensions");
    Ok(Verdict::undecided(checks, cfg, Some(oracle), None))
}

/// Strength of the off-diagonal coupling that the spectrum does not see:
/// for a 2x2 with eigenvalues `a, b`, `sqrt(|T|_F^2 - |a|^2 - |b|^2)`; for a
/// 3x3 with quadratic minimal polynomial (double `g`, simple `m`),
/// `sqrt(|T|_F^2 - 2|g|^2 - |m|^2)`. Invariant under unitary similarity.
pub fn coupling_delta(t: &Matrix, cfg: &Config) -> Result<f64> {
    let fro2 = t.frobenius_norm().powi(2);
    match t.dim() {
        2 => {
            let eigs = linalg::eigenvalues_small(t)?;
            Ok((fro2 - eigs[0].norm_sqr() - eigs[1].norm_sqr()).max(0.0).sqrt())
        }
        3 => {
            let m = polyfun::minimal_polynomial(t, cfg);
            if m.degree() != 2 {
                return Err(Error::UnsupportedShape(format!(
                    "coupling strength at dimension 3 needs a quadratic minimal polynomial, \
                     got degree {}",
                    m.degree()
                )));
            }
            let spectrum = polyfun::spectrum_with_index(t, cfg)?;
            if spectrum.len() != 2 || spectrum[0].algebraic_multiplicity != 2 {
                return Err(Error::UnsupportedShape(
                    "expected one double and one simple eigenvalue".into(),
                ));
            }
            let g = spectrum[0].value;
            let mu = spectrum[1].value;
            Ok((fro2 - 2.0 * g.norm_sqr() - mu.norm_sqr()).max(0.0).sqrt())
        }
        d => Err(Error::UnsupportedShape(format!(
            "coupling strength is defined for dims 2 and 3, got {d}"
        ))),
    }
}

/// Draws `n_polys` seeded random polynomials and reports the worst relative
/// gap between `|p(A)|` and `|p(B)|`; sizes may differ.
pub fn falsify_by_polynomials(
    a: &Matrix,
    b: &Matrix,
    n_polys: usize,
    max_degree: usize,
    seed: u64,
    cfg: &Config,
) -> ComparisonResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<Polynomial> = (0..n_polys)
        .map(|_| polyfun::random_polynomial_with(max_degree, &mut rng))
        .collect();
    let gaps = par::map_collect(&polys, |p| {
        let na = p.eval_matrix(a).spectral_norm();
        let nb = p.eval_matrix(b).spectral_norm();
        let scale = na.max(nb);
        if scale <= cfg.singular_floor {
            0.0
        } else {
            (na - nb).abs() / scale
        }
    });
    ComparisonResult::from_gaps(
        gaps.into_iter()
            .enumerate()
            .map(|(k, gap)| (gap, None, Some(k))),
        n_polys,
        cfg,
    )
}

/// Necessary-condition screen: matrices with identical pseudospectra share
/// the extreme eigenvalues of their Hermitian parts. Returns the outcome and
/// the compared extremes.
pub fn real_part_spectrum_check(a: &Matrix, b: &Matrix, cfg: &Config) -> (bool, Vec<CertEntry>) {
    let scale = max_fro(a, b);
    let thr = homogeneous_tol(cfg, scale, 1);
    let mut checks = Checks::new();
    let mut ok = true;
    ok &= checks.check_real(
        "max eigenvalue of Re",
        linalg::numerical_range_support(a, 0.0),
        linalg::numerical_range_support(b, 0.0),
        thr,
    );
    ok &= checks.check_real(
        "min eigenvalue of Re",
        -linalg::numerical_range_support(a, std::f64::consts::PI),
        -linalg::numerical_range_support(b, std::f64::consts::PI),
        thr,
    );
    (ok, checks.entries)
}

/// The four verdicts of a report, keyed like the JSON schema.
#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub identical: Verdict,
    pub isometric: Verdict,
    pub super_identical: Verdict,
    pub unitarily_similar: Verdict,
}

impl Verdicts {
    pub fn get(&self, relation: Relation) -> &Verdict {
        match relation {
            Relation::Identical => &self.identical,
            Relation::Isometric => &self.isometric,
            Relation::SuperIdentical => &self.super_identical,
            Relation::UnitarilySimilar => &self.unitarily_similar,
        }
    }
}

/// Everything the classifier knows about a pair: shared invariants, the
/// four verdicts, and the numeric oracle evidence.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub minimal_poly_a: Polynomial,
    pub minimal_poly_b: Polynomial,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characteristic_poly_a: Option<Polynomial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characteristic_poly_b: Option<Polynomial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum_a: Option<Vec<SpectrumEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum_b: Option<Vec<SpectrumEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_invariants_a: Option<TraceInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_invariants_b: Option<TraceInvariants>,
    pub verdicts: Verdicts,
    pub oracle_pseudospectra: ComparisonResult,
    pub oracle_polynomials: ComparisonResult,
}

impl ClassificationReport {
    /// Yes-implications that must hold in every report: unitary similarity
    /// implies super-identical implies identical pseudospectra implies
    /// polynomial isometry (and back at these sizes), and identical
    /// pseudospectra implies equal minimal-polynomial degrees.
    pub fn implications_hold(&self) -> bool {
        let v = &self.verdicts;
        let implies = |x: &Verdict, y: &Verdict| x.answer != Answer::Yes || y.answer == Answer::Yes;
        implies(&v.unitarily_similar, &v.super_identical)
            && implies(&v.super_identical, &v.identical)
            && implies(&v.identical, &v.isometric)
            && implies(&v.isometric, &v.identical)
            && (v.identical.answer != Answer::Yes
                || self.minimal_poly_a.degree() == self.minimal_poly_b.degree())
    }
}

/// Assembles all decisions, invariants, spectra, and both oracle results.
///
/// Pairs of equal dimension 2 or 3 get the full decision trees; any other
/// shape gets the reduced report driven by the minimal-polynomial screen,
/// with undecidable relations left Undecided.
pub fn full_report(a: &Matrix, b: &Matrix, cfg: &Config) -> Result<ClassificationReport> {
    let small_equal = a.dim() == b.dim() && (2..=3).contains(&a.dim());

    let verdicts = if small_equal {
        let identical = decide_identical_pseudospectra(a, b, cfg)?;
        let isometric = identical.clone();
        let super_identical = decide_super_identical(a, b, cfg)?;
        let unitarily_similar = decide_unitarily_similar(a, b, cfg)?;
        Verdicts {
            identical,
            isometric,
            super_identical,
            unitarily_similar,
        }
    } else {
        let screen = quadratic_minpoly_screen(a, b, cfg);
        // Identical pseudospectra would force equal minimal polynomials at
        // any size, so a mismatch rules out the stronger relations too.
        let ruled_out = screen.answer == Answer::No
            && screen.criterion == Criterion::MinimalPolynomialMismatch;
        let undecided_with = |pseudo: Option<ComparisonResult>| {
            Verdict::undecided(Checks::new(), cfg, pseudo, None)
        };
        let super_identical = if ruled_out {
            screen.clone().relabeled(Criterion::MinimalPolynomialMismatch)
        } else if a.dim() == b.dim() {
            undecided_with(Some(
                pseudospectra::compare_super_pseudospectra(
                    a,
                    b,
                    cfg.oracle_samples,
                    cfg.oracle_seed,
                    cfg,
                )
                .expect("equal dimensions"),
            ))
        } else {
            undecided_with(Some(pseudospectra::compare_pseudospectra(
                a,
                b,
                cfg.oracle_samples,
                cfg.oracle_seed,
                cfg,
            )))
        };
        let unitarily_similar = if ruled_out {
            screen.clone().relabeled(Criterion::MinimalPolynomialMismatch)
        } else {
            super_identical.clone()
        };
        Verdicts {
            identical: screen.clone(),
            isometric: screen,
            super_identical,
            unitarily_similar,
        }
    };

    let small = |m: &Matrix| m.dim() <= 3;
    let spectrum_a = small(a).then(|| polyfun::spectrum_with_index(a, cfg)).transpose()?;
    let spectrum_b = small(b).then(|| polyfun::spectrum_with_index(b, cfg)).transpose()?;

    let report = ClassificationReport {
        dim_a: a.dim(),
        dim_b: b.dim(),
        minimal_poly_a: polyfun::minimal_polynomial(a, cfg),
        minimal_poly_b: polyfun::minimal_polynomial(b, cfg),
        characteristic_poly_a: small(a).then(|| polyfun::characteristic_polynomial(a)),
        characteristic_poly_b: small(b).then(|| polyfun::characteristic_polynomial(b)),
        spectrum_a,
        spectrum_b,
        trace_invariants_a: trace_invariants(a).ok(),
        trace_invariants_b: trace_invariants(b).ok(),
        verdicts,
        oracle_pseudospectra: pseudospectra::compare_pseudospectra(
            a,
            b,
            cfg.oracle_samples,
            cfg.oracle_seed,
            cfg,
        ),
        oracle_polynomials: falsify_by_polynomials(
            a,
            b,
            cfg.oracle_polys,
            cfg.oracle_max_degree,
            cfg.oracle_seed,
            cfg,
        ),
    };
    debug_assert!(report.implications_hold(), "inconsistent report: {report:?}");
    Ok(report)
}
