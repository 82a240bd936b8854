//! Classical (pre-strengthening) interpolation conditions.
//!
//! Every check returns the largest signed left-hand side over all imposed
//! inequalities. Lipschitz-type lines are reported in squared form divided by
//! `2L`, so that all margins of a class share the units of function values
//! (or of `⟨t, x⟩` for operators).

use crate::dataset::{
    dist2, dot_diff, norm2, ClassSpec, FuncDataset, MarginTracker, OpDataset, SmoothConvexVariant, Tolerance,
    Verdict, Witness,
};
use crate::error::Result;

/// Convexity line `f_j − f_i + ⟨g_j, x_i − x_j⟩` (nonpositive iff `f_i` lies above
/// the tangent at `x_j`).
pub(crate) fn convexity_lhs(ds: &FuncDataset, i: usize, j: usize) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    b.f - a.f + tangent_gap(&b.g, &a.x, &b.x)
}

/// `⟨g, x − y⟩`.
fn tangent_gap(g: &[f64], x: &[f64], y: &[f64]) -> f64 {
    g.iter().zip(x.iter().zip(y)).map(|(g, (x, y))| g * (x - y)).sum()
}

/// `(‖g_i − g_j‖² − L²‖x_i − x_j‖²)/(2L)`.
pub(crate) fn gradient_lipschitz_lhs(ds: &FuncDataset, i: usize, j: usize, l: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    (dist2(&a.g, &b.g) - l * l * dist2(&a.x, &b.x)) / (2.0 * l)
}

/// Quadratic upper bound `f_i − f_j − ⟨g_j, x_i − x_j⟩ − (L/2)‖x_i − x_j‖²`.
pub(crate) fn upper_bound_lhs(ds: &FuncDataset, i: usize, j: usize, l: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    a.f - b.f - tangent_gap(&b.g, &a.x, &b.x) - 0.5 * l * dist2(&a.x, &b.x)
}

/// `f_j − f_i + ⟨g_j, x_i − x_j⟩ + (α/2L)‖g_i − g_j‖²`; `α = 1` is the
/// cocoercivity-form inequality.
pub(crate) fn alpha_lhs(ds: &FuncDataset, i: usize, j: usize, l: f64, alpha: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    b.f - a.f + tangent_gap(&b.g, &a.x, &b.x) + alpha * dist2(&a.g, &b.g) / (2.0 * l)
}

fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

fn unordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Smooth convex interpolation in one of its three classical forms.
pub fn check_smooth_convex(ds: &FuncDataset, l: f64, variant: SmoothConvexVariant, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::SmoothConvex { l, variant }.validate_params()?;
    let mut track = MarginTracker::new();
    for (i, j) in ordered_pairs(ds.len()) {
        match variant {
            SmoothConvexVariant::P => {
                track.offer(convexity_lhs(ds, i, j), || Witness::new("convexity", vec![i, j]));
                if i < j {
                    track.offer(gradient_lipschitz_lhs(ds, i, j, l), || {
                        Witness::new("gradient-lipschitz", vec![i, j])
                    });
                }
            }
            SmoothConvexVariant::Pprime => {
                track.offer(convexity_lhs(ds, i, j), || Witness::new("convexity", vec![i, j]));
                track.offer(upper_bound_lhs(ds, i, j, l), || Witness::new("quadratic-upper-bound", vec![i, j]));
            }
            SmoothConvexVariant::Pdoubleprime => {
                track.offer(alpha_lhs(ds, i, j, l, 1.0), || Witness::new("cocoercive-form", vec![i, j]));
            }
        }
    }
    Ok(track.finish(ds.scale(l), tol))
}

/// Third line of the Łojasiewicz condition:
/// `A = −f_i + f_j + ½⟨g_i + g_j, x_i − x_j⟩ + ‖g_i − g_j‖²/(4L) − (L/4)‖x_i − x_j‖²`.
pub(crate) fn loja_pair_a(ds: &FuncDataset, i: usize, j: usize, l: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    let sum_g: Vec<f64> = a.g.iter().zip(&b.g).map(|(p, q)| p + q).collect();
    -a.f + b.f + 0.5 * tangent_gap(&sum_g, &a.x, &b.x) + dist2(&a.g, &b.g) / (4.0 * l) - 0.25 * l * dist2(&a.x, &b.x)
}

/// Quadratic Łojasiewicz condition for `L`-smooth functions with minimum value `f_star`.
pub fn check_lojasiewicz(ds: &FuncDataset, mu: f64, l: f64, f_star: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::Lojasiewicz { mu, l, f_star }.validate_params()?;
    let mut track = MarginTracker::new();
    for (i, s) in ds.samples().iter().enumerate() {
        if mu > 0.0 {
            track.offer(s.f - f_star - norm2(&s.g) / (2.0 * mu), || Witness::new("gradient-dominance", vec![i]));
        }
        track.offer(f_star - s.f, || Witness::new("above-minimum", vec![i]));
    }
    for (i, j) in ordered_pairs(ds.len()) {
        track.offer(loja_pair_a(ds, i, j, l), || Witness::new("two-sided-smoothness", vec![i, j]));
    }
    Ok(track.finish(ds.scale(l).max(1.0 + f_star.abs()), tol))
}

/// `A_ijm = −f_i + f_j + ⟨g_j, x_i − x_j⟩ + ‖g_i^(m) − g_j^(m)‖²/(2L_m)`.
pub(crate) fn block_pair_a(ds: &FuncDataset, i: usize, j: usize, block: &[usize], l_m: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    let block_gap: f64 = block.iter().map(|&c| (a.g[c] - b.g[c]).powi(2)).sum();
    b.f - a.f + tangent_gap(&b.g, &a.x, &b.x) + block_gap / (2.0 * l_m)
}

pub(crate) fn block_scale(ds: &FuncDataset, lvec: &[f64]) -> f64 {
    ds.scale(lvec.iter().cloned().fold(0.0, f64::max))
}

/// Convex blockwise smoothness with zero-based coordinate blocks.
pub fn check_blockwise(ds: &FuncDataset, partition: &[Vec<usize>], lvec: &[f64], tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::BlockwiseSmooth {
        partition: partition.to_vec(),
        lvec: lvec.to_vec(),
    }
    .validate_params()?;
    ClassSpec::validate_partition(partition, ds.d())?;
    let mut track = MarginTracker::new();
    for (i, j) in ordered_pairs(ds.len()) {
        for (m, (block, &l_m)) in partition.iter().zip(lvec).enumerate() {
            track.offer(block_pair_a(ds, i, j, block, l_m), || {
                Witness::new("blockwise-smoothness", vec![i, j]).with("block", m as f64)
            });
        }
    }
    Ok(track.finish(block_scale(ds, lvec), tol))
}

/// Strong monotonicity line `−⟨t_i − t_j, x_i − x_j⟩ + μ‖x_i − x_j‖²`.
pub(crate) fn op_monotone_lhs(ds: &OpDataset, i: usize, j: usize, mu: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    -dot_diff(&a.t, &b.t, &a.x, &b.x) + mu * dist2(&a.x, &b.x)
}

/// Lipschitz line in squared form `(‖t_i − t_j‖² − L²‖x_i − x_j‖²)/(2L)`.
pub(crate) fn op_lipschitz_lhs(ds: &OpDataset, i: usize, j: usize, l: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    (dist2(&a.t, &b.t) - l * l * dist2(&a.x, &b.x)) / (2.0 * l)
}

/// Cocoercivity line `−⟨t_i − t_j, x_i − x_j⟩ + β‖t_i − t_j‖²`.
pub(crate) fn op_cocoercive_lhs(ds: &OpDataset, i: usize, j: usize, beta: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    -dot_diff(&a.t, &b.t, &a.x, &b.x) + beta * dist2(&a.t, &b.t)
}

/// Maximally monotone `μ`-strongly monotone `L`-Lipschitz operators.
pub fn check_operator_monotone_lipschitz(ds: &OpDataset, mu: f64, l: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::MonotoneLipschitzOp { mu, l }.validate_params()?;
    let mut track = MarginTracker::new();
    for (i, j) in unordered_pairs(ds.len()) {
        track.offer(op_monotone_lhs(ds, i, j, mu), || Witness::new("monotonicity", vec![i, j]));
        track.offer(op_lipschitz_lhs(ds, i, j, l), || Witness::new("lipschitz", vec![i, j]));
    }
    Ok(track.finish(ds.scale(l), tol))
}

pub(crate) fn cocoercive_weight(mu: f64, beta: f64) -> f64 {
    mu.max(1.0 / beta).max(1.0)
}

/// `μ`-strongly monotone `β`-cocoercive operators.
pub fn check_operator_cocoercive(ds: &OpDataset, mu: f64, beta: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::CocoerciveOp { mu, beta }.validate_params()?;
    let mut track = MarginTracker::new();
    for (i, j) in unordered_pairs(ds.len()) {
        track.offer(op_monotone_lhs(ds, i, j, mu), || Witness::new("monotonicity", vec![i, j]));
        track.offer(op_cocoercive_lhs(ds, i, j, beta), || Witness::new("cocoercivity", vec![i, j]));
    }
    Ok(track.finish(ds.scale(cocoercive_weight(mu, beta)), tol))
}

/// `f_j − f_i + ⟨g_j, x_i − x_j⟩ + (μ/q)‖x_i − x_j‖^q`.
pub(crate) fn unif_convex_lhs(ds: &FuncDataset, i: usize, j: usize, mu: f64, q: f64) -> f64 {
    let (a, b) = (ds.sample(i), ds.sample(j));
    b.f - a.f + tangent_gap(&b.g, &a.x, &b.x) + mu / q * dist2(&a.x, &b.x).sqrt().powf(q)
}

pub(crate) fn unif_scale(ds: &FuncDataset, mu: f64, q: f64) -> f64 {
    let spread = ds
        .samples()
        .iter()
        .map(|s| norm2(&s.x).sqrt())
        .fold(0.0, f64::max);
    ds.scale(0.0).max(1.0 + mu * (2.0 * spread).powf(q))
}

/// Uniformly convex functions of power `q` with modulus `μ`.
pub fn check_uniformly_convex(ds: &FuncDataset, mu: f64, q: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::UniformlyConvex { mu, q }.validate_params()?;
    let mut track = MarginTracker::new();
    for (i, j) in ordered_pairs(ds.len()) {
        track.offer(unif_convex_lhs(ds, i, j, mu, q), || Witness::new("uniform-convexity", vec![i, j]));
    }
    Ok(track.finish(unif_scale(ds, mu, q), tol))
}

/// `L`-Lipschitz operators.
pub fn check_operator_lipschitz(ds: &OpDataset, l: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::LipschitzOp { l }.validate_params()?;
    let mut track = MarginTracker::new();
    for (i, j) in unordered_pairs(ds.len()) {
        track.offer(op_lipschitz_lhs(ds, i, j, l), || Witness::new("lipschitz", vec![i, j]));
    }
    Ok(track.finish(ds.scale(l), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FuncSample, OpSample};

    fn fd(rows: &[(&[f64], f64, &[f64])]) -> FuncDataset {
        FuncDataset::new(rows.iter().map(|(x, f, g)| FuncSample::new(x.to_vec(), *f, g.to_vec())).collect()).unwrap()
    }

    fn od(rows: &[(&[f64], &[f64])]) -> OpDataset {
        OpDataset::new(rows.iter().map(|(x, t)| OpSample::new(x.to_vec(), t.to_vec())).collect()).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn single_point_is_vacuous() {
        let ds = fd(&[(&[0.0], 0.0, &[0.0])]);
        for v in [SmoothConvexVariant::P, SmoothConvexVariant::Pprime, SmoothConvexVariant::Pdoubleprime] {
            let verdict = check_smooth_convex(&ds, 1.0, v, &tol()).unwrap();
            assert!(verdict.satisfied);
            assert_eq!(verdict.worst_margin, f64::NEG_INFINITY);
        }
    }

    #[test]
    fn cocoercive_form_hand_values() {
        // ordered (i=1, j=0): f_0 − f_1 + g_0 (x_1 − x_0) + (g_1 − g_0)²/2 = 0 − 1 + 0 + 0.5 = −0.5
        // ordered (i=0, j=1): f_1 − f_0 + g_1 (x_0 − x_1) + 0.5 = 1 − 1 + 0.5 = 0.5
        let ds = fd(&[(&[0.0], 0.0, &[0.0]), (&[1.0], 1.0, &[1.0])]);
        let v = check_smooth_convex(&ds, 1.0, SmoothConvexVariant::Pdoubleprime, &tol()).unwrap();
        assert!(!v.satisfied);
        assert!((v.worst_margin - 0.5).abs() < 1e-15);
        assert_eq!(v.witness.unwrap().indices, vec![0, 1]);

        // Boundary dataset: both ordered pairs at exactly zero.
        let ds = fd(&[(&[0.0], 0.0, &[0.0]), (&[1.0], 0.5, &[1.0])]);
        let v = check_smooth_convex(&ds, 1.0, SmoothConvexVariant::Pdoubleprime, &tol()).unwrap();
        assert!(v.satisfied);
        assert_eq!(v.worst_margin, 0.0);

        let ds = fd(&[(&[0.0], 0.0, &[0.0]), (&[1.0], 0.9, &[1.0])]);
        let v = check_smooth_convex(&ds, 1.0, SmoothConvexVariant::Pdoubleprime, &tol()).unwrap();
        assert!(!v.satisfied);
        assert!((v.worst_margin - 0.4).abs() < 1e-12);
    }

    #[test]
    fn loja_figure2_base_and_minimizer() {
        let ds = fd(&[(&[0.0], 0.0, &[0.0]), (&[1.0], 0.25, &[0.5])]);
        assert!(check_lojasiewicz(&ds, 0.5, 1.0, 0.0, &tol()).unwrap().satisfied);
        let below = fd(&[(&[1.0], -0.1, &[0.0])]);
        let v = check_lojasiewicz(&below, 0.5, 1.0, 0.0, &tol()).unwrap();
        assert!(!v.satisfied);
        assert_eq!(v.witness.unwrap().constraint, "above-minimum");
        let star = fd(&[(&[0.3], 0.0, &[0.0])]);
        assert!(check_lojasiewicz(&star, 0.5, 1.0, 0.0, &tol()).unwrap().satisfied);
    }

    fn example33(f3: f64) -> FuncDataset {
        fd(&[
            (&[-1.0, 0.0], 0.5, &[-1.0, 0.0]),
            (&[1.0, 0.0], 0.5, &[1.0, 0.0]),
            (&[0.0, 0.0], f3, &[0.0, -1.0]),
        ])
    }

    #[test]
    fn blockwise_example33() {
        let part = vec![vec![0], vec![1]];
        let v = check_blockwise(&example33(0.0), &part, &[1.0, 1.0], &tol()).unwrap();
        assert!(v.satisfied, "{v:?}");
        let v = check_blockwise(&example33(-1.0), &part, &[1.0, 1.0], &tol()).unwrap();
        assert!(!v.satisfied);
        // A_{3,1} on the second block: −f_3 + f_1 + ⟨g_1, x_3 − x_1⟩ + (g_3 − g_1)_2²/2
        // = 1 + 0.5 − 1 + 0.5 = 1.
        assert!((v.worst_margin - 1.0).abs() < 1e-15);
        let single = fd(&[(&[0.0, 0.0], 0.0, &[0.0, 0.0])]);
        assert!(check_blockwise(&single, &part, &[1.0, 1.0], &tol()).unwrap().satisfied);
    }

    #[test]
    fn operator_examples() {
        let ex38 = od(&[(&[0.0, 0.0], &[0.0, 0.0]), (&[1.0, 0.0], &[0.0, 0.0]), (&[0.5, 0.0], &[0.0, -0.5])]);
        let v = check_operator_monotone_lipschitz(&ex38, 0.0, 1.0, &tol()).unwrap();
        assert!(v.satisfied);
        assert_eq!(v.worst_margin, 0.0);

        let flat = od(&[(&[0.0], &[1.0]), (&[1.0], &[1.0])]);
        assert!(!check_operator_monotone_lipschitz(&flat, 0.1, 1.0, &tol()).unwrap().satisfied);

        let fig6 = od(&[(&[0.0, 0.0], &[0.0, 0.0]), (&[1.0, -0.5], &[1.0, 0.0])]);
        assert!(check_operator_cocoercive(&fig6, 0.5, 1.0, &tol()).unwrap().satisfied);
        let scaled = od(&[(&[0.0, 0.0], &[0.0, 0.0]), (&[1.0, -0.5], &[10.0, 0.0])]);
        let v = check_operator_cocoercive(&scaled, 0.5, 1.0, &tol()).unwrap();
        assert!(!v.satisfied);
        assert_eq!(v.witness.unwrap().constraint, "cocoercivity");

        let dup = od(&[(&[0.2, 0.1], &[1.0, 3.0]), (&[0.2, 0.1], &[1.0, 3.0])]);
        let v = check_operator_cocoercive(&dup, 0.5, 1.0, &tol()).unwrap();
        assert!(v.satisfied);
        assert_eq!(v.worst_margin, 0.0);
    }

    #[test]
    fn lipschitz_operator_cases() {
        let iso = od(&[(&[0.0, 1.0], &[0.0, 2.0]), (&[3.0, -1.0], &[6.0, -2.0])]);
        let v = check_operator_lipschitz(&iso, 2.0, &tol()).unwrap();
        assert!(v.satisfied);
        assert!(v.worst_margin.abs() < 1e-12);
        let constant = od(&[(&[0.0], &[5.0]), (&[1.0], &[5.0])]);
        assert!(check_operator_lipschitz(&constant, 1.0, &tol()).unwrap().satisfied);
        let collide = od(&[(&[0.0], &[0.0]), (&[0.0], &[1.0])]);
        assert!(!check_operator_lipschitz(&collide, 1.0, &tol()).unwrap().satisfied);
    }

    #[test]
    fn uniform_convexity_q2_is_strong_convexity() {
        // f = ‖x‖², exactly 2-strongly convex: margins are zero with μ = 2.
        let ds = fd(&[(&[0.0, 0.0], 0.0, &[0.0, 0.0]), (&[1.0, 2.0], 5.0, &[2.0, 4.0])]);
        let v = check_uniformly_convex(&ds, 2.0, 2.0, &tol()).unwrap();
        assert!(v.satisfied);
        assert!(v.worst_margin.abs() < 1e-12);
        assert!(!check_uniformly_convex(&ds, 2.5, 2.0, &tol()).unwrap().satisfied);
        let nonconvex = fd(&[(&[0.0], 0.0, &[1.0]), (&[1.0], 0.0, &[0.0])]);
        assert!(!check_uniformly_convex(&nonconvex, 0.0, 3.0, &tol()).unwrap().satisfied);
        assert!(check_uniformly_convex(&fd(&[(&[0.0], 0.0, &[0.0])]), 1.0, 3.0, &tol()).unwrap().satisfied);
    }
}
