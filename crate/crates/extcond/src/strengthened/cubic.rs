//! Exact maximization of low-degree univariate polynomials on an interval.

/// Real roots of `a x² + b x + c`, using the cancellation-free form of the
/// quadratic formula. Degenerate leading coefficients fall back to the
/// linear and constant cases.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let mut roots = Vec::with_capacity(2);
    if q != 0.0 {
        roots.push(q / a);
        roots.push(c / q);
    } else {
        // b = 0 and c = 0: double root at zero.
        roots.push(0.0);
    }
    roots
}

/// Evaluates `Σ_k coeffs[k] x^k` by Horner's rule.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Maximum of the cubic `a₀ + a₁x + a₂x² + a₃x³` over `[lo, hi]`, returned as
/// `(argmax, max)`. Candidates are both endpoints and the real critical
/// points inside the interval; no iteration is involved.
pub fn maximize_cubic(coeffs: [f64; 4], lo: f64, hi: f64) -> (f64, f64) {
    let [_, a1, a2, a3] = coeffs;
    let mut best = (lo, eval_poly(&coeffs, lo));
    let mut consider = |x: f64| {
        let v = eval_poly(&coeffs, x);
        if v > best.1 {
            best = (x, v);
        }
    };
    consider(hi);
    for r in quadratic_roots(3.0 * a3, 2.0 * a2, a1) {
        if r > lo && r < hi {
            consider(r);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_stable_for_tiny_constant() {
        let r = quadratic_roots(1.0, -1e8, 1.0);
        let small = r.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((small - 1e-8).abs() < 1e-20);
    }

    #[test]
    fn linear_and_empty_fallbacks() {
        assert_eq!(quadratic_roots(0.0, 2.0, -4.0), vec![2.0]);
        assert!(quadratic_roots(0.0, 0.0, 1.0).is_empty());
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
    }

    #[test]
    fn cubic_interior_and_endpoint_maxima() {
        // −(x − 0.3)² + 1 expanded: interior max at 0.3.
        let (x, v) = maximize_cubic([0.91, 0.6, -1.0, 0.0], 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-15 && (v - 1.0).abs() < 1e-15);
        // x³ on [−1, 2]: endpoint max at 2.
        let (x, v) = maximize_cubic([0.0, 0.0, 0.0, 1.0], -1.0, 2.0);
        assert_eq!((x, v), (2.0, 8.0));
        // x³ − x on [−1, 0.9]: local max at −1/√3.
        let (x, v) = maximize_cubic([0.0, -1.0, 0.0, 1.0], -1.0, 0.9);
        assert!((x + 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((v - 2.0 / (3.0 * 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn cubic_matches_dense_grid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let c = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let (_, exact) = maximize_cubic(c, 0.0, 0.7);
            let grid = (0..=20000).map(|k| eval_poly(&c, 0.7 * k as f64 / 20000.0)).fold(f64::NEG_INFINITY, f64::max);
            assert!(exact >= grid - 1e-14);
            assert!(exact <= grid + 1e-8);
        }
    }
}
