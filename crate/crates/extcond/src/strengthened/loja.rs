//! Strengthened quadratic Łojasiewicz condition for `L`-smooth functions.

use super::cubic::{eval_poly, maximize_cubic};
use crate::conditions::loja_pair_a;
use crate::dataset::{norm2, ClassSpec, FuncDataset, MarginTracker, Tolerance, Verdict, Witness};
use crate::error::Result;

/// Scalars describing one ordered pair `(i, j)`.
///
/// With `A` the classical two-sided smoothness gap,
/// `B = (L+μ)(f_i − f⋆ − ‖g_i‖²/2L)` and `C = (L−μ)(f_j − f⋆ + ‖g_j‖²/2L)`,
/// the pair condition is `P(α) ≤ 0` on `[0, 2μ/(2L+μ)]` for the cubic
/// `P(α) = 2μA + (B − C − (L+3μ)A)α + ((L+μ)A − 2B)α² + Bα³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LojaPairCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LojaPairCoefficients {
    pub fn from_pair(ds: &FuncDataset, i: usize, j: usize, mu: f64, l: f64, f_star: f64) -> Self {
        let (si, sj) = (ds.sample(i), ds.sample(j));
        Self {
            a: loja_pair_a(ds, i, j, l),
            b: (l + mu) * (si.f - f_star - norm2(&si.g) / (2.0 * l)),
            c: (l - mu) * (sj.f - f_star + norm2(&sj.g) / (2.0 * l)),
        }
    }

    /// `[a₀, a₁, a₂, a₃]`.
    pub fn cubic(&self, mu: f64, l: f64) -> [f64; 4] {
        let Self { a, b, c } = *self;
        [2.0 * mu * a, b - c - (l + 3.0 * mu) * a, (l + mu) * a - 2.0 * b, b]
    }

    /// Right end of the multiplier interval, `2μ/(2L+μ)`.
    pub fn alpha_max(mu: f64, l: f64) -> f64 {
        2.0 * mu / (2.0 * l + mu)
    }

    /// Exact maximum of `P` over the interval, returned as `(α, P(α)/(2μ))`
    /// so that `α = 0` reproduces `A`. With `μ = 0` the interval collapses to
    /// `{0}` and the classical gap `A` is returned.
    pub fn maximize(&self, mu: f64, l: f64) -> (f64, f64) {
        if mu == 0.0 {
            return (0.0, self.a);
        }
        let (alpha, value) = maximize_cubic(self.cubic(mu, l), 0.0, Self::alpha_max(mu, l));
        (alpha, value / (2.0 * mu))
    }

    /// The inequality's own left-hand side at a fixed `α` inside the interval:
    /// `A + α((1−α)²B − C)/((1−α)(2μ − (L+μ)α))`.
    pub fn margin_at(&self, alpha: f64, mu: f64, l: f64) -> f64 {
        let den = (1.0 - alpha) * (2.0 * mu - (l + mu) * alpha);
        self.a + alpha * ((1.0 - alpha).powi(2) * self.b - self.c) / den
    }

    pub fn cubic_at(&self, alpha: f64, mu: f64, l: f64) -> f64 {
        eval_poly(&self.cubic(mu, l), alpha)
    }
}

/// Every line of the strengthened condition except the pair cubics: the
/// per-point lines `f_i ≤ f⋆ + ‖g_i‖²/2μ`, `f_i ≥ f⋆ + ‖g_i‖²/2L` and
/// `f_i ≥ f⋆`, and the classical two-sided smoothness gap on every ordered pair.
fn base_lines(ds: &FuncDataset, mu: f64, l: f64, f_star: f64) -> MarginTracker {
    let mut track = MarginTracker::new();
    for (i, s) in ds.samples().iter().enumerate() {
        if mu > 0.0 {
            track.offer(s.f - f_star - norm2(&s.g) / (2.0 * mu), || Witness::new("gradient-dominance", vec![i]));
        }
        track.offer(f_star - s.f, || Witness::new("above-minimum", vec![i]));
        track.offer(f_star + norm2(&s.g) / (2.0 * l) - s.f, || Witness::new("descent-lower-bound", vec![i]));
    }
    for i in 0..ds.len() {
        for j in (0..ds.len()).filter(|&j| j != i) {
            let a = LojaPairCoefficients::from_pair(ds, i, j, mu, l, f_star).a;
            track.offer(a, || Witness::new("two-sided-smoothness", vec![i, j]));
        }
    }
    track
}

fn loja_scale(ds: &FuncDataset, l: f64, f_star: f64) -> f64 {
    ds.scale(l).max(1.0 + f_star.abs())
}

/// The strengthened condition without its pair cubics, which the interval
/// certificates replace.
pub(crate) fn check_loja_base(ds: &FuncDataset, mu: f64, l: f64, f_star: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::Lojasiewicz { mu, l, f_star }.validate_params()?;
    Ok(base_lines(ds, mu, l, f_star).finish(loja_scale(ds, l, f_star), tol))
}

/// The lines of [`check_loja_base`] plus the cubic pair condition on every
/// ordered pair of distinct samples (a minimizer record, if present, is
/// treated like any other sample).
pub fn check_loja_strengthened(ds: &FuncDataset, mu: f64, l: f64, f_star: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::Lojasiewicz { mu, l, f_star }.validate_params()?;
    let mut track = base_lines(ds, mu, l, f_star);
    for i in 0..ds.len() {
        for j in (0..ds.len()).filter(|&j| j != i) {
            let (alpha, value) = LojaPairCoefficients::from_pair(ds, i, j, mu, l, f_star).maximize(mu, l);
            track.offer(value, || Witness::new("strengthened-pair", vec![i, j]).with("alpha", alpha));
        }
    }
    Ok(track.finish(loja_scale(ds, l, f_star), tol))
}
