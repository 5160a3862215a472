//! Closed-form roots of monic quadratics and cubics with complex
//! coefficients.
//!
//! The cubic takes the trigonometric branch when a real cubic has three real
//! roots, Cardano otherwise, then Newton-polishes against the original
//! polynomial and deflates.

use num_complex::Complex64;

/// Roots of `z^2 - sum z + product` (i.e. of a monic quadratic given by the
/// root sum and product), cancellation-safe.
pub(crate) fn quadratic_roots(sum: Complex64, product: Complex64) -> [Complex64; 2] {
    let disc = sum * sum - product * 4.0;
    let mut s = disc.sqrt();
    // Pick the sqrt branch that avoids cancellation in sum + s.
    if (sum + s).norm() < (sum - s).norm() {
        s = -s;
    }
    let r1 = (sum + s) * 0.5;
    let r2 = if r1.norm() > 0.0 { product / r1 } else { (sum - s) * 0.5 };
    [r1, r2]
}

/// Roots of the monic cubic `z^3 + a z^2 + b z + c`, with multiplicity.
pub(crate) fn cubic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 3] {
    let scale = 1.0 + a.norm().max(b.norm()).max(c.norm());

    // Depressed form t^3 + p t + q with z = t - a/3.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c;

    let real_coeffs = a.im.abs() + b.im.abs() + c.im.abs() <= 1e-14 * scale;
    let mut roots: [Complex64; 3];

    if real_coeffs {
        let (pr, qr) = (p.re, q.re);
        let disc = -4.0 * pr * pr * pr - 27.0 * qr * qr;
        if disc > 0.0 {
            // Three distinct real roots: trigonometric form.
            let m = 2.0 * (-pr / 3.0).sqrt();
            let arg = (3.0 * qr / (2.0 * pr) * (-3.0 / pr).sqrt()).clamp(-1.0, 1.0);
            let theta = arg.acos();
            roots = [0, 1, 2].map(|k| {
                let t = m * ((theta - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos();
                Complex64::new(t, 0.0) - shift
            });
        } else {
            roots = cardano(p, q, shift);
        }
    } else {
        roots = cardano(p, q, shift);
    }

    // Polish the most accurate root, deflate, then polish the quadratic pair
    // against the original cubic.
    let eval = |z: Complex64| ((z + a) * z + b) * z + c;
    let mut best = 0;
    for k in 1..3 {
        if eval(roots[k]).norm() < eval(roots[best]).norm() {
            best = k;
        }
    }
    let r1 = newton_polish(roots[best], a, b, c);
    // Synthetic division by (z - r1): z^2 + a2 z + b2.
    let a2 = a + r1;
    let b2 = b + r1 * a2;
    let pair = quadratic_roots(-a2, b2);
    roots = [
        r1,
        newton_polish(pair[0], a, b, c),
        newton_polish(pair[1], a, b, c),
    ];
    roots
}

fn cardano(p: Complex64, q: Complex64, shift: Complex64) -> [Complex64; 3] {
    let inner = (q * q * 0.25 + p * p * p / 27.0).sqrt();
    // Choose the branch maximizing |u^3| to avoid cancellation.
    let cand1 = -q * 0.5 + inner;
    let cand2 = -q * 0.5 - inner;
    let u3 = if cand1.norm() >= cand2.norm() { cand1 } else { cand2 };
    if u3.norm() == 0.0 {
        // p = q = 0: triple root of the depressed cubic.
        return [-shift; 3];
    }
    let u = u3.cbrt();
    let omega = Complex64::new(-0.5, 0.75f64.sqrt());
    [0u32, 1, 2].map(|k| {
        let uk = u * omega.powu(k);
        uk - p / (uk * 3.0) - shift
    })
}

/// A few Newton steps on the monic cubic; linear convergence at multiple
/// roots is still enough to reach ~1e-12 from Cardano-quality guesses.
fn newton_polish(mut z: Complex64, a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    for _ in 0..24 {
        let f = ((z + a) * z + b) * z + c;
        let df = (z * 3.0 + a * 2.0) * z + b;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}
