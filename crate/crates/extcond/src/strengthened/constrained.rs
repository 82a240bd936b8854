//! Smooth convex functions on an open convex domain, where the cocoercive
//! form of the interpolation inequality only holds between nearby points.

use serde::Serialize;

use crate::conditions::{alpha_lhs, check_smooth_convex};
use crate::dataset::{dist, ClassSpec, Domain, FuncDataset, MarginTracker, SmoothConvexVariant, Tolerance, Verdict, Witness};
use crate::error::{Error, Result};

/// Verdict together with the ordered pairs on which the distance gate was
/// open.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedVerdict {
    pub verdict: Verdict,
    /// Pairs `(i, j)` with `‖x_i − x_j‖ < 2·dist(x_j, complement)`.
    pub gated_pairs: Vec<(usize, usize)>,
}

/// Convexity and gradient-Lipschitz lines on every pair, plus the
/// cocoercive-form lower bound on `f_j` anchored at `x_i`,
/// `f_i − f_j + ⟨g_i, x_j − x_i⟩ + ‖g_i − g_j‖²/2L ≤ 0`,
/// whenever `x_i` is strictly closer to `x_j` than twice the distance from
/// `x_j` to the boundary.
pub fn check_constrained_smooth_convex(
    ds: &FuncDataset,
    l: f64,
    domain: &Domain,
    tol: &Tolerance,
) -> Result<ConstrainedVerdict> {
    ClassSpec::ConstrainedSmoothConvex { l, domain: domain.clone() }.validate_params()?;
    domain.validate(ds.d())?;
    let radii: Vec<f64> = ds.samples().iter().map(|s| domain.dist_to_complement(&s.x)).collect();
    if let Some(row) = radii.iter().position(|&r| !(r > 0.0)) {
        return Err(Error::OutsideDomain(row));
    }
    let classical = check_smooth_convex(ds, l, SmoothConvexVariant::P, tol)?;
    let mut track = MarginTracker::new();
    if let Some(w) = classical.witness {
        track.offer(classical.worst_margin, || w);
    }
    let mut gated_pairs = Vec::new();
    for j in 0..ds.len() {
        for i in 0..ds.len() {
            if i == j || dist(&ds.sample(i).x, &ds.sample(j).x) >= 2.0 * radii[j] {
                continue;
            }
            gated_pairs.push((i, j));
            track.offer(alpha_lhs(ds, j, i, l, 1.0), || Witness::new("local-cocoercive-form", vec![i, j]));
        }
    }
    gated_pairs.sort_unstable();
    Ok(ConstrainedVerdict {
        verdict: track.finish(ds.scale(l), tol),
        gated_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::FuncSample;

    fn pair(f2: f64) -> FuncDataset {
        FuncDataset::new(vec![
            FuncSample::new(vec![0.0], 0.0, vec![0.0]),
            FuncSample::new(vec![1.0], f2, vec![1.0]),
        ])
        .unwrap()
    }

    #[test]
    fn huge_ball_matches_unconstrained_cocoercive_form() {
        let ball = Domain::Ball { center: vec![0.0], radius: 1e6 };
        let tol = Tolerance::default();
        for f2 in [0.2, 0.5, 0.9, 1.4] {
            let ds = pair(f2);
            let gated = check_constrained_smooth_convex(&ds, 1.0, &ball, &tol).unwrap();
            let plain = check_smooth_convex(&ds, 1.0, SmoothConvexVariant::Pdoubleprime, &tol).unwrap();
            assert_eq!(gated.verdict.satisfied, plain.satisfied, "f2 = {f2}");
            assert_eq!(gated.gated_pairs, vec![(0, 1), (1, 0)]);
        }
    }

    #[test]
    fn gate_is_strict() {
        // x_j = 0 sits at distance 1 from the boundary of (−1, 3); x_i = 2 is at
        // exactly twice that distance.
        let domain = Domain::HalfspaceIntersection(vec![(vec![-1.0], 1.0), (vec![1.0], 3.0)]);
        let ds = FuncDataset::new(vec![
            FuncSample::new(vec![0.0], 0.0, vec![0.0]),
            FuncSample::new(vec![2.0], 2.0, vec![1.0]),
        ])
        .unwrap();
        let v = check_constrained_smooth_convex(&ds, 1.0, &domain, &Tolerance::default()).unwrap();
        assert!(!v.gated_pairs.contains(&(1, 0)));
        // x_j = 2 is at distance 1 as well, so (0, 1) is also closed.
        assert!(v.gated_pairs.is_empty());
    }

    #[test]
    fn unit_distance_pair_is_gated() {
        let domain = Domain::HalfspaceIntersection(vec![(vec![0.0, -1.0], 1.0)]);
        let ds = FuncDataset::new(vec![
            FuncSample::new(vec![0.0, 0.0], 0.0, vec![0.0, 0.0]),
            FuncSample::new(vec![1.0, 0.0], 0.25, vec![0.5, 0.5]),
        ])
        .unwrap();
        let v = check_constrained_smooth_convex(&ds, 1.0, &domain, &Tolerance::default()).unwrap();
        assert_eq!(v.gated_pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn sample_outside_domain_is_rejected() {
        let ball = Domain::Ball { center: vec![0.0], radius: 0.5 };
        assert_eq!(
            check_constrained_smooth_convex(&pair(0.5), 1.0, &ball, &Tolerance::default()),
            Err(Error::OutsideDomain(1))
        );
    }
}
