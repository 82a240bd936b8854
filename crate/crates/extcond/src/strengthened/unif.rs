//! Terwise strengthening of uniform convexity of power `q`.

use rayon::prelude::*;

use super::symmetric_triples;
use crate::conditions::{check_uniformly_convex, unif_scale};
use crate::dataset::{dist, dot, sub, ClassSpec, FuncDataset, FuncSample, MarginTracker, Tolerance, Verdict, Witness};
use crate::error::Result;
use crate::optim::golden_section_max;

const GRID: usize = 1024;

/// Left-hand side of the triple inequality at the convex weight `λ` on
/// `x_i` (and `1 − λ` on `x_j`), anchored at `x_k`.
fn triple_lhs(ds: &FuncDataset, (i, j, k): (usize, usize, usize), mu: f64, q: f64, lambda: f64) -> f64 {
    let (si, sj, sk) = (ds.sample(i), ds.sample(j), ds.sample(k));
    let tangent = |s: &FuncSample| -s.f + sk.f + dot(&sk.g, &sub(&s.x, &sk.x));
    let rest = 1.0 - lambda;
    let spread = dist(&si.x, &sj.x).powf(q);
    let pull: f64 = sk
        .x
        .iter()
        .zip(si.x.iter().zip(&sj.x))
        .map(|(c, (a, b))| (c - lambda * a - rest * b).powi(2))
        .sum::<f64>()
        .sqrt()
        .powf(q);
    lambda * tangent(si)
        + rest * tangent(sj)
        + mu / q * ((lambda * rest.powf(q) + rest * lambda.powf(q)) * spread + pull)
}

/// Maximum of the triple inequality over `λ ∈ [0, 1]` as `(λ, value)`: a
/// uniform grid followed by golden-section refinement around the best cell.
pub fn unif_triple_max(ds: &FuncDataset, triple: (usize, usize, usize), mu: f64, q: f64) -> (f64, f64) {
    let h = 1.0 / GRID as f64;
    let (mut best_lambda, mut best) = (0.0, f64::NEG_INFINITY);
    for s in 0..=GRID {
        let lambda = s as f64 * h;
        let v = triple_lhs(ds, triple, mu, q, lambda);
        if v > best {
            best = v;
            best_lambda = lambda;
        }
    }
    let (lo, hi) = ((best_lambda - h).max(0.0), (best_lambda + h).min(1.0));
    let (lambda, v) = golden_section_max(|t| triple_lhs(ds, triple, mu, q, t), lo, hi, 60);
    if v > best {
        (lambda, v)
    } else {
        (best_lambda, best)
    }
}

/// Pairwise uniform convexity plus the triple condition on every triple of
/// distinct samples. The triple condition is invariant under swapping `i`
/// and `j` together with `λ ↔ 1 − λ`, so each unordered `{i, j}` is visited once.
pub fn check_unif_convex_strengthened(ds: &FuncDataset, mu: f64, q: f64, tol: &Tolerance) -> Result<Verdict> {
    ClassSpec::UniformlyConvex { mu, q }.validate_params()?;
    let classical = check_uniformly_convex(ds, mu, q, tol)?;
    let mut track = MarginTracker::new();
    if let Some(w) = classical.witness {
        track.offer(classical.worst_margin, || w);
    }
    let per_triple: Vec<MarginTracker> = symmetric_triples(ds.len())
        .into_par_iter()
        .map(|triple| {
            let mut local = MarginTracker::new();
            let (lambda, value) = unif_triple_max(ds, triple, mu, q);
            local.offer(value, || {
                Witness::new("uniform-convexity-triple", vec![triple.0, triple.1, triple.2]).with("lambda", lambda)
            });
            local
        })
        .collect();
    for local in per_triple {
        track.merge(local);
    }
    Ok(track.finish(unif_scale(ds, mu, q), tol))
}
