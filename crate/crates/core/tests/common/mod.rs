//! Independent test oracles: characteristic-polynomial root bisection for
//! small Hermitian eigenproblems, and adaptive Simpson quadrature for
//! distribution checks. Deliberately reimplemented from first principles so
//! they share no code path with the library.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sriplab_core::matrix::CMatrix;

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        m.set(i, i, Complex64::new(d, 0.0));
        for j in (i + 1)..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(re, im);
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mat_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.n();
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += a.get(i, k) * b.get(k, j);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Coefficients of det(xI - M), ascending degree, via the
/// Faddeev-LeVerrier recursion. Real output: Hermitian matrices have real
/// characteristic polynomials.
pub fn char_poly(m: &CMatrix) -> Vec<f64> {
    let n = m.n();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut a = m.clone();
    for k in 1..=n {
        let c = -a.trace().re / k as f64;
        coeffs[n - k] = c;
        if k < n {
            let mut shifted = a.clone();
            for i in 0..n {
                shifted.set(i, i, shifted.get(i, i) + c);
            }
            a = mat_mul(m, &shifted);
        }
    }
    coeffs
}

fn poly_eval(poly: &[f64], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_derivative(poly: &[f64]) -> Vec<f64> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

fn cauchy_bound(poly: &[f64]) -> f64 {
    let lead = *poly.last().expect("nonempty polynomial");
    1.0 + poly[..poly.len() - 1]
        .iter()
        .map(|c| (c / lead).abs())
        .fold(0.0f64, f64::max)
}

fn bisect_root(poly: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = poly_eval(poly, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = poly_eval(poly, mid);
        if fmid == 0.0 {
            return mid;
        }
        if (flo < 0.0) == (fmid < 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if hi - lo < f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// All real roots of a polynomial whose roots are known to be real (the
/// characteristic polynomial of a Hermitian matrix): roots of the derivative
/// split the line into monotone pieces, each bisected for a sign change.
pub fn poly_real_roots(poly: &[f64]) -> Vec<f64> {
    let n = poly.len() - 1;
    assert!(n >= 1, "constant polynomial has no roots");
    if n == 1 {
        return vec![-poly[0] / poly[1]];
    }
    let mut breakpoints = poly_real_roots(&poly_derivative(poly));
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let bound = cauchy_bound(poly);
    let mut pts = vec![-bound];
    pts.extend(breakpoints.into_iter().filter(|x| x.abs() < bound));
    pts.push(bound);

    let mut roots = Vec::with_capacity(n);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (poly_eval(poly, a), poly_eval(poly, b));
        if fa == 0.0 {
            if roots.last().map_or(true, |&r| r != a) {
                roots.push(a);
            }
        } else if fa * fb < 0.0 {
            roots.push(bisect_root(poly, a, b));
        }
    }
    if poly_eval(poly, bound) == 0.0 {
        roots.push(bound);
    }
    roots
}

/// Adaptive Simpson quadrature with the classical Richardson error estimate.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 60)
}
