//! Terwise strengthenings of the two operator classes. Each triple yields two
//! homogeneous cubics in `(λ_k, μ_i, μ_j)` that must be nonpositive on the
//! nonnegative orthant, checked on the 2-simplex.

use rayon::prelude::*;
use serde::Serialize;

use super::simplex::{maximize_on_simplex, SimplexCubic, SimplexScan};
use super::symmetric_triples;
use crate::conditions::{
    check_operator_cocoercive, check_operator_monotone_lipschitz, cocoercive_weight,
};
use crate::dataset::{dist2, dot_diff, ClassSpec, MarginTracker, OpDataset, Tolerance, Verdict, Witness};
use crate::error::Result;

/// Which operator class a triple belongs to, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OperatorFamily {
    /// `μ`-strongly monotone, `L`-Lipschitz.
    MonotoneLipschitz { mu: f64, l: f64 },
    /// `μ`-strongly monotone, `β`-cocoercive.
    Cocoercive { mu: f64, beta: f64 },
}

impl OperatorFamily {
    /// Coefficient `κ` of `λ_k` inside the factor `(μ_i + μ_j + κλ_k)`.
    pub fn kappa(&self) -> f64 {
        match *self {
            OperatorFamily::MonotoneLipschitz { mu, .. } => -2.0 * mu,
            OperatorFamily::Cocoercive { mu, beta } => 2.0 - 4.0 * beta * mu,
        }
    }

    /// `(A_ab, B_ab)` for one pair of records.
    pub fn pair_terms(&self, ds: &OpDataset, a: usize, b: usize) -> (f64, f64) {
        let (p, q) = (ds.sample(a), ds.sample(b));
        let inner = dot_diff(&p.t, &q.t, &p.x, &q.x);
        let dx2 = dist2(&p.x, &q.x);
        let dt2 = dist2(&p.t, &q.t);
        match *self {
            OperatorFamily::MonotoneLipschitz { mu, l } => (dt2 - l * l * dx2, -2.0 * l * inner + 2.0 * l * mu * dx2),
            OperatorFamily::Cocoercive { mu, beta } => (-inner + mu * dx2, -inner + beta * dt2),
        }
    }

    fn scale(&self, ds: &OpDataset) -> f64 {
        match *self {
            OperatorFamily::MonotoneLipschitz { l, .. } => ds.scale(l),
            OperatorFamily::Cocoercive { mu, beta } => ds.scale(cocoercive_weight(mu, beta)),
        }
    }
}

/// `A` and `B` for the three pairs of a triple, ordered `[ij, ik, jk]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpTripleCoefficients {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub family: OperatorFamily,
}

impl OpTripleCoefficients {
    pub fn from_triple(ds: &OpDataset, (i, j, k): (usize, usize, usize), family: OperatorFamily) -> Self {
        let (a_ij, b_ij) = family.pair_terms(ds, i, j);
        let (a_ik, b_ik) = family.pair_terms(ds, i, k);
        let (a_jk, b_jk) = family.pair_terms(ds, j, k);
        Self {
            a: [a_ij, a_ik, a_jk],
            b: [b_ij, b_ik, b_jk],
            family,
        }
    }

    /// The two cubics of the triple condition. For monotone-Lipschitz
    /// operators the first has `A` in the `λ_k` terms and `B` in the
    /// `μ_iμ_j` terms; cocoercive operators use the opposite roles.
    pub fn polynomials(&self) -> [SimplexCubic; 2] {
        let kappa = self.family.kappa();
        let (first, second) = match self.family {
            OperatorFamily::MonotoneLipschitz { .. } => ((self.a, self.b), (self.b, self.a)),
            OperatorFamily::Cocoercive { .. } => ((self.b, self.a), (self.a, self.b)),
        };
        [
            SimplexCubic::operator_form(first.0, first.1, kappa),
            SimplexCubic::operator_form(second.0, second.1, kappa),
        ]
    }
}

fn check_triples(ds: &OpDataset, family: OperatorFamily, classical: Verdict, scan: &SimplexScan, tol: &Tolerance) -> Verdict {
    let mut track = MarginTracker::new();
    if let Some(w) = classical.witness {
        track.offer(classical.worst_margin, || w);
    }
    let per_triple: Vec<MarginTracker> = symmetric_triples(ds.len())
        .into_par_iter()
        .map(|(i, j, k)| {
            let mut local = MarginTracker::new();
            let coeffs = OpTripleCoefficients::from_triple(ds, (i, j, k), family);
            for (which, poly) in coeffs.polynomials().iter().enumerate() {
                let best = maximize_on_simplex(poly, scan);
                local.offer(best.value, || {
                    Witness::new(if which == 0 { "triple-first" } else { "triple-second" }, vec![i, j, k])
                        .with("lambda_k", best.point[0])
                        .with("mu_i", best.point[1])
                        .with("mu_j", best.point[2])
                });
            }
            local
        })
        .collect();
    for local in per_triple {
        track.merge(local);
    }
    track.finish(family.scale(ds), tol)
}

/// Monotone-Lipschitz classical lines plus both triple cubics on every
/// triple of distinct samples.
pub fn check_op_monotone_strengthened(
    ds: &OpDataset,
    mu: f64,
    l: f64,
    scan: &SimplexScan,
    tol: &Tolerance,
) -> Result<Verdict> {
    ClassSpec::MonotoneLipschitzOp { mu, l }.validate_params()?;
    let classical = check_operator_monotone_lipschitz(ds, mu, l, tol)?;
    Ok(check_triples(ds, OperatorFamily::MonotoneLipschitz { mu, l }, classical, scan, tol))
}

/// Cocoercive classical lines plus both triple cubics on every triple of
/// distinct samples.
pub fn check_op_cocoercive_strengthened(
    ds: &OpDataset,
    mu: f64,
    beta: f64,
    scan: &SimplexScan,
    tol: &Tolerance,
) -> Result<Verdict> {
    ClassSpec::CocoerciveOp { mu, beta }.validate_params()?;
    let classical = check_operator_cocoercive(ds, mu, beta, tol)?;
    Ok(check_triples(ds, OperatorFamily::Cocoercive { mu, beta }, classical, scan, tol))
}
