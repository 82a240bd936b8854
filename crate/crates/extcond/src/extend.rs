//! Explicit extension values at a new point, and the analytic worst-case
//! candidate points used as warm starts and diagnostics by the engine.

use serde::Serialize;

use crate::dataset::{dist2, dot, sub, FuncSample, Tolerance};
use crate::error::{Error, Result};

/// Extension `(f, g)` of a uniformly convex pair to a new point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformExtension {
    /// Index (0 or 1) of the record whose lower model is largest at the new point.
    pub i_star: usize,
    pub f: f64,
    pub g: Vec<f64>,
    /// Extra slope added along `x − x_{i⋆}`.
    #[serde(rename = "K")]
    pub k: f64,
    /// Worst signed margin over the four defining inequalities.
    pub worst_margin: f64,
    pub scale: f64,
}

const MAX_DOUBLINGS: i32 = 60;

fn power_distance(a: &[f64], b: &[f64], q: f64) -> f64 {
    dist2(a, b).sqrt().powf(q)
}

/// `f_a + ⟨g_a, x − x_a⟩ + (μ/q)‖x − x_a‖^q`.
fn lower_model(a: &FuncSample, x: &[f64], mu: f64, q: f64) -> f64 {
    a.f + dot(&a.g, &sub(x, &a.x)) + mu / q * power_distance(x, &a.x, q)
}

/// Signed margins of the extension against one record: the record's lower
/// model at `x` must stay below `f`, and the new model at `x_a` below `f_a`.
fn goal_margins(a: &FuncSample, x: &[f64], f: f64, g: &[f64], mu: f64, q: f64) -> [f64; 2] {
    let below = lower_model(a, x, mu, q) - f;
    let above = f + dot(g, &sub(&a.x, x)) + mu / q * power_distance(x, &a.x, q) - a.f;
    [below, above]
}

fn magnitude(a: &FuncSample, x: &[f64], g: &[f64], f: f64, mu: f64, q: f64) -> f64 {
    let reach = dist2(x, &a.x).sqrt();
    let slope = dot(&a.g, &a.g).sqrt().max(dot(g, g).sqrt());
    a.f.abs().max(f.abs()).max(slope * reach).max(mu / q * reach.powf(q))
}

/// Builds `(f, g)` at `x` such that the pair together with `(x, f, g)` still
/// satisfies uniform convexity of power `q` with modulus `μ`.
///
/// The slope boost `K` is zero when `⟨x − x_{i⋆}, x − x_j⟩ ≤ 0` and otherwise
/// the first power of two in `1, 2, …, 2^60` that restores the inequality at
/// `x_j`. Every result is verified by substitution before it is returned.
pub fn extend_uniformly_convex(
    pair: [&FuncSample; 2],
    x: &[f64],
    mu: f64,
    q: f64,
    tol: &Tolerance,
) -> Result<UniformExtension> {
    if !(mu.is_finite() && mu >= 0.0) || !(q.is_finite() && q >= 2.0) {
        return Err(Error::Parameter(format!("uniform convexity needs mu >= 0 and q >= 2, got mu = {mu}, q = {q}")));
    }
    let d = x.len();
    for (row, s) in pair.iter().enumerate() {
        for (field, v) in [("x", &s.x), ("g", &s.g)] {
            if v.len() != d {
                return Err(Error::DimensionMismatch { row, field: field.into(), expected: d, found: v.len() });
            }
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("extension point is not finite".into()));
    }

    let [a, b] = pair;
    let base_scale = 1.0 + a.f.abs().max(b.f.abs()) + mu * power_distance(&a.x, &b.x, q);
    for (i, j) in [(0, 1), (1, 0)] {
        let (p, r) = (pair[i], pair[j]);
        let margin = lower_model(r, &p.x, mu, q) - p.f;
        if !tol.accepts(margin, base_scale) {
            return Err(Error::Validation(format!(
                "pair violates uniform convexity at ({j}, {i}) by {margin:e}"
            )));
        }
    }

    let models = [lower_model(a, x, mu, q), lower_model(b, x, mu, q)];
    let i_star = usize::from(models[1] > models[0]);
    let (anchor, other) = (pair[i_star], pair[1 - i_star]);
    let f = models[i_star];
    let to_anchor = sub(x, &anchor.x);
    let curvature = mu * dist2(x, &anchor.x).sqrt().powf(q - 2.0);
    let slope_at = |k: f64| -> Vec<f64> {
        anchor.g.iter().zip(&to_anchor).map(|(g, u)| g + (curvature + k) * u).collect()
    };
    let assess = |k: f64| {
        let g = slope_at(k);
        let scale = 1.0 + magnitude(a, x, &g, f, mu, q).max(magnitude(b, x, &g, f, mu, q));
        let worst = pair
            .iter()
            .flat_map(|s| goal_margins(s, x, f, &g, mu, q))
            .fold(f64::NEG_INFINITY, f64::max);
        (g, worst, scale)
    };

    let alignment = dot(&to_anchor, &sub(x, &other.x));
    let mut k = 0.0;
    let (mut g, mut worst, mut scale) = assess(k);
    if alignment > 0.0 {
        let mut exponent = 0;
        loop {
            k = 2f64.powi(exponent);
            (g, worst, scale) = assess(k);
            if tol.accepts(worst, scale) {
                break;
            }
            exponent += 1;
            if exponent > MAX_DOUBLINGS {
                return Err(Error::Extension(format!(
                    "no slope boost up to 2^{MAX_DOUBLINGS} satisfies the extension inequalities"
                )));
            }
        }
    }
    if !tol.accepts(worst, scale) {
        return Err(Error::Extension(format!("extension fails its own check by {worst:e}")));
    }
    Ok(UniformExtension { i_star, f, g, k, worst_margin: worst, scale })
}

/// Candidate point `x_i + (g_j − g_i)/L` where the strengthened smooth convex
/// condition is hardest to extend for the ordered pair `(i, j)`.
pub fn worst_z_smooth_convex(pair: [&FuncSample; 2], l: f64) -> Vec<f64> {
    let [a, b] = pair;
    a.x.iter().zip(b.g.iter().zip(&a.g)).map(|(x, (gj, gi))| x + (gj - gi) / l).collect()
}

/// Dual branch of the smooth Łojasiewicz extension problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LojaBranch {
    /// Only the lower bound at the new point is active: tests `f_i` against
    /// `f⋆ + ‖g_i‖²/(2L)`.
    Stationary,
    /// The two pairwise inequalities between `i` and `j` are active, together
    /// with the gradient-dominance bound weighted by `α/2`.
    Pair { alpha: f64 },
}

/// Candidate point and gradient at which the dual branch is attained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LojaWorstPoint {
    pub z: Vec<f64>,
    pub g_z: Vec<f64>,
}

/// Candidate `(z, g_z)` for the ordered pair `(i, j)` under the selected
/// branch. Coordinates are taken relative to a minimizer at the origin, so
/// the data should already be shifted if the minimizer is elsewhere.
pub fn worst_z_loja(pair: [&FuncSample; 2], mu: f64, l: f64, branch: LojaBranch) -> Result<LojaWorstPoint> {
    if !(mu > 0.0 && l >= mu && l.is_finite()) {
        return Err(Error::Parameter(format!("Lojasiewicz pair needs 0 < mu <= L, got mu = {mu}, L = {l}")));
    }
    let [a, b] = pair;
    match branch {
        LojaBranch::Stationary => Ok(LojaWorstPoint {
            z: a.x.iter().zip(&a.g).map(|(x, g)| x - g / l).collect(),
            g_z: vec![0.0; a.x.len()],
        }),
        LojaBranch::Pair { alpha } => {
            let alpha_max = 2.0 * mu / (2.0 * l + mu);
            if !(0.0..=alpha_max).contains(&alpha) {
                return Err(Error::Parameter(format!("alpha = {alpha} outside [0, {alpha_max}]")));
            }
            // Stationarity of the dual function in (g_z, z), one coordinate at a time.
            let w = alpha / 2.0;
            let keep = 1.0 - 2.0 * w;
            let a11 = (1.0 - w) / (2.0 * l) - w / mu;
            let a12 = w / 2.0;
            let a22 = -l * (1.0 - w) / 2.0;
            let det = a11 * a22 - a12 * a12;
            let mut z = Vec::with_capacity(a.x.len());
            let mut g_z = Vec::with_capacity(a.x.len());
            for c in 0..a.x.len() {
                let (xi, gi, xj, gj) = (a.x[c], a.g[c], b.x[c], b.g[c]);
                let r1 = xj / 4.0 + gj / (4.0 * l) - keep * (xi / 4.0 - gi / (4.0 * l));
                let r2 = -gj / 4.0 - l * xj / 4.0 + keep * (gi / 4.0 - l * xi / 4.0);
                g_z.push((r1 * a22 - a12 * r2) / det);
                z.push((a11 * r2 - a12 * r1) / det);
            }
            Ok(LojaWorstPoint { z, g_z })
        }
    }
}
