//! The `α`-family of smooth convex conditions interpolating between the
//! gradient-Lipschitz form (`α = 0`) and the cocoercivity form (`α = 1`).

use crate::conditions::{alpha_lhs, gradient_lipschitz_lhs};
use crate::dataset::{ClassSpec, FuncDataset, MarginTracker, Tolerance, Verdict, Witness};
use crate::error::Result;

/// `α_k = 1 − 2^{−k}`, the k-th iterate of `α ↦ (α + 1)/2` from `α₀ = 0`.
/// Exact in binary for `k ≤ 52`; saturates at `1` beyond.
pub fn alpha_iterate(k: u32) -> f64 {
    if k > 1074 {
        return 1.0;
    }
    1.0 - 0.5f64.powi(k as i32)
}

/// Imposes, on every ordered pair, `f_i ≥ f_j + ⟨g_j, x_i − x_j⟩ + (α/2L)‖g_i − g_j‖²`
/// together with `‖g_i − g_j‖ ≤ L‖x_i − x_j‖`.
pub fn check_smooth_convex_alpha(ds: &FuncDataset, l: f64, alpha: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::SmoothConvexAlpha { l, alpha }.validate_params()?;
    let mut track = MarginTracker::new();
    for i in 0..ds.len() {
        for j in 0..ds.len() {
            if i == j {
                continue;
            }
            track.offer(alpha_lhs(ds, i, j, l, alpha), || {
                Witness::new("alpha-convexity", vec![i, j]).with("alpha", alpha)
            });
            if i < j {
                track.offer(gradient_lipschitz_lhs(ds, i, j, l), || {
                    Witness::new("gradient-lipschitz", vec![i, j])
                });
            }
        }
    }
    Ok(track.finish(ds.scale(l), tol))
}
