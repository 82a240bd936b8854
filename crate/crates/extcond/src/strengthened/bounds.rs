//! Lower and upper bounds on `f(y)` for smooth convex functions on a
//! constrained domain, obtained by chaining `N` short steps from `x` to `y`.
//!
//! For `N = 1` both bounds are closed forms. For `N = 2` the intermediate
//! value `f_1` can be eliminated, leaving a program in the intermediate
//! gradient `g_1` alone: its objective is a convex quadratic and its
//! feasible set is the intersection of two Euclidean balls of equal radius
//! `L‖y − x‖/4`. The optimum is therefore the projection of a point onto a
//! lens, which is computed exactly.

use serde::Serialize;

use crate::dataset::{dist, dot, norm2, sub};
use crate::error::{Error, Result};

/// Bounds `B_N ≤ f(y) ≤ U_N`.
///
/// When the chain constraints are infeasible, `lower` is `+∞`, `upper` is
/// `−∞` and `feasible` is false.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsBU {
    pub steps: usize,
    pub lower: f64,
    pub upper: f64,
    pub feasible: bool,
    /// Whether the reported values are proven optimal. Both supported step
    /// counts are solved in closed form, so this is always true; it is kept
    /// in the output so consumers do not have to know that.
    pub certified: bool,
}

/// Euclidean projection of `c` onto the ball `‖p − center‖ ≤ radius`.
fn project_ball(c: &[f64], center: &[f64], radius: f64) -> Vec<f64> {
    let gap = dist(c, center);
    if gap <= radius {
        return c.to_vec();
    }
    let shrink = radius / gap;
    center.iter().zip(c).map(|(o, p)| o + shrink * (p - o)).collect()
}

/// Projection of `c` onto the intersection of two balls of radius `r`, or
/// `None` when the intersection is empty.
fn project_lens(c: &[f64], a: &[f64], b: &[f64], r: f64) -> Option<Vec<f64>> {
    let slack = 1e-12 * (1.0 + r);
    let separation = dist(a, b);
    if separation > 2.0 * r + slack {
        return None;
    }
    let inside = |p: &[f64], o: &[f64]| dist(p, o) <= r + slack;
    if inside(c, a) && inside(c, b) {
        return Some(c.to_vec());
    }
    let onto_a = project_ball(c, a, r);
    if inside(&onto_a, b) {
        return Some(onto_a);
    }
    let onto_b = project_ball(c, b, r);
    if inside(&onto_b, a) {
        return Some(onto_b);
    }
    // Both spheres are active: the nearest point lies on their intersection,
    // a sphere of radius `rim` centered at the midpoint in the bisecting
    // hyperplane.
    let mid: Vec<f64> = a.iter().zip(b).map(|(p, q)| 0.5 * (p + q)).collect();
    let rim = (r * r - 0.25 * separation * separation).max(0.0).sqrt();
    if separation == 0.0 {
        return Some(onto_a);
    }
    let axis: Vec<f64> = sub(b, a).iter().map(|v| v / separation).collect();
    let offset = sub(c, &mid);
    let along = dot(&offset, &axis);
    let mut radial: Vec<f64> = offset.iter().zip(&axis).map(|(o, u)| o - along * u).collect();
    let length = norm2(&radial).sqrt();
    if length > 0.0 {
        radial.iter_mut().for_each(|v| *v /= length);
    } else {
        // `c` sits on the axis; every rim point is equally close.
        radial = vec![0.0; c.len()];
        let pivot = (0..axis.len())
            .min_by(|&p, &q| axis[p].abs().total_cmp(&axis[q].abs()))
            .unwrap_or(0);
        radial[pivot] = 1.0;
        let along = axis[pivot];
        radial.iter_mut().zip(&axis).for_each(|(v, u)| *v -= along * u);
        let length = norm2(&radial).sqrt();
        if length == 0.0 {
            return Some(mid);
        }
        radial.iter_mut().for_each(|v| *v /= length);
    }
    Some(mid.iter().zip(&radial).map(|(m, u)| m + rim * u).collect())
}

/// `B_N` and `U_N` for `N ∈ {1, 2}`.
pub fn bounds_bu(x: &[f64], g_x: &[f64], f_x: f64, y: &[f64], g_y: &[f64], l: f64, steps: usize) -> Result<BoundsBU> {
    let d = x.len();
    if [g_x.len(), y.len(), g_y.len()].iter().any(|&n| n != d) {
        return Err(Error::Validation("x, g_x, y and g_y must share one dimension".into()));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Parameter(format!("L must be positive and finite, got {l}")));
    }
    let step = sub(y, x);
    let gap = |a: &[f64], b: &[f64]| norm2(&sub(a, b)) / (2.0 * l);
    match steps {
        1 => {
            let q = gap(g_x, g_y);
            let lower = f_x + dot(g_x, &step) + q;
            let upper = f_x + dot(g_y, &step) - q;
            Ok(BoundsBU {
                steps,
                lower,
                upper,
                feasible: lower <= upper,
                certified: true,
            })
        }
        2 => {
            let radius = 0.25 * l * norm2(&step).sqrt();
            let first: Vec<f64> = g_x.iter().zip(&step).map(|(g, s)| g + 0.25 * l * s).collect();
            let second: Vec<f64> = g_y.iter().zip(&step).map(|(g, s)| g - 0.25 * l * s).collect();
            let mid: Vec<f64> = g_x.iter().zip(g_y).map(|(a, b)| 0.5 * (a + b)).collect();
            let toward = |sign: f64| -> Vec<f64> { mid.iter().zip(&step).map(|(m, s)| m + sign * 0.25 * l * s).collect() };
            let (Some(g_low), Some(g_up)) = (
                project_lens(&toward(-1.0), &first, &second, radius),
                project_lens(&toward(1.0), &first, &second, radius),
            ) else {
                return Ok(BoundsBU {
                    steps,
                    lower: f64::INFINITY,
                    upper: f64::NEG_INFINITY,
                    feasible: false,
                    certified: true,
                });
            };
            let lower = f_x + 0.5 * dot(g_x, &step) + gap(g_x, &g_low) + 0.5 * dot(&g_low, &step) + gap(&g_low, g_y);
            let upper = f_x + 0.5 * dot(&g_up, &step) - gap(g_x, &g_up) + 0.5 * dot(g_y, &step) - gap(&g_up, g_y);
            Ok(BoundsBU {
                steps,
                lower,
                upper,
                feasible: true,
                certified: true,
            })
        }
        n => Err(Error::Unsupported(format!("bounds are available for 1 or 2 steps, not {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn figure5(s: f64) -> (Vec<f64>, Vec<f64>) {
        (vec![1.0, 0.0], vec![s, (0.5 - s * s).max(0.0).sqrt()])
    }

    #[test]
    fn one_step_closed_forms_on_figure5() {
        for s in [0.5, 0.6, 0.7] {
            let (y, gy) = figure5(s);
            let b = bounds_bu(&[0.0, 0.0], &[0.0, 0.0], 0.0, &y, &gy, 1.0, 1).unwrap();
            assert!((b.lower - 0.25).abs() < 1e-15);
            assert!((b.upper - (s - 0.25)).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_pair_pins_value() {
        for n in [1, 2] {
            let b = bounds_bu(&[0.3, 1.0], &[2.0, -1.0], 1.5, &[0.3, 1.0], &[2.0, -1.0], 1.0, n).unwrap();
            assert_eq!((b.lower, b.upper), (1.5, 1.5));
        }
    }

    #[test]
    fn two_steps_relax_one_step_on_figure5() {
        for k in 0..=20 {
            let s = 0.5 + (0.5f64.sqrt() - 0.5) * k as f64 / 20.0;
            let (y, gy) = figure5(s);
            let one = bounds_bu(&[0.0, 0.0], &[0.0, 0.0], 0.0, &y, &gy, 1.0, 1).unwrap();
            let two = bounds_bu(&[0.0, 0.0], &[0.0, 0.0], 0.0, &y, &gy, 1.0, 2).unwrap();
            assert!(two.lower <= one.lower + 1e-12 && one.upper <= two.upper + 1e-12, "s = {s}");
        }
    }

    /// Evaluates both chain programs at a given `g_1`, returning `None` when
    /// the `f_1`/`f_2` intervals are empty.
    fn chain_values(x: &[f64], gx: &[f64], fx: f64, y: &[f64], gy: &[f64], l: f64, g1: &[f64]) -> Option<(f64, f64)> {
        let step = sub(y, x);
        let q0 = norm2(&sub(gx, g1)) / (2.0 * l);
        let q1 = norm2(&sub(g1, gy)) / (2.0 * l);
        let (lo1, hi1) = (fx + 0.5 * dot(gx, &step) + q0, fx + 0.5 * dot(g1, &step) - q0);
        if lo1 > hi1 {
            return None;
        }
        let low = lo1 + 0.5 * dot(g1, &step) + q1;
        let high = hi1 + 0.5 * dot(gy, &step) - q1;
        (lo1 + 0.5 * dot(g1, &step) + q1 <= lo1 + 0.5 * dot(gy, &step) - q1).then_some((low, high))
    }

    #[test]
    fn exact_two_step_beats_random_intermediate_gradients() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        for _ in 0..200 {
            let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let gx: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let gy: Vec<f64> = gx.iter().zip(x.iter().zip(&y)).map(|(g, (a, b))| g + rng.gen_range(0.3..0.9) * (b - a)).collect();
            let b = bounds_bu(&x, &gx, 0.0, &y, &gy, 1.0, 2).unwrap();
            if !b.feasible {
                continue;
            }
            checked += 1;
            let mid: Vec<f64> = gx.iter().zip(&gy).map(|(a, c)| 0.5 * (a + c)).collect();
            for _ in 0..300 {
                let g1: Vec<f64> = mid.iter().map(|m| m + rng.gen_range(-0.5..0.5)).collect();
                if let Some((low, high)) = chain_values(&x, &gx, 0.0, &y, &gy, 1.0, &g1) {
                    assert!(b.lower <= low + 1e-12 && high <= b.upper + 1e-12);
                }
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn unsupported_step_count() {
        assert!(matches!(bounds_bu(&[0.0], &[0.0], 0.0, &[1.0], &[0.5], 1.0, 3), Err(Error::Unsupported(_))));
    }
}
