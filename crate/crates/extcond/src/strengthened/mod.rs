//! One-point-strengthened conditions, each reduced to an exact or
//! grid-plus-refinement finite-dimensional maximization.
//!
//! Every strengthened check also imposes the classical inequalities of its
//! class, so a strengthened pass always implies a classical pass.

pub mod alpha;
pub mod blockwise;
pub mod bounds;
pub mod constrained;
pub mod cubic;
pub mod loja;
pub mod operator;
pub mod simplex;
pub mod unif;

pub use alpha::{alpha_iterate, check_smooth_convex_alpha};
pub use blockwise::{check_blockwise_strengthened, BlockTripleCoefficients};
pub use bounds::{bounds_bu, BoundsBU};
pub use constrained::{check_constrained_smooth_convex, ConstrainedVerdict};
pub use loja::{check_loja_strengthened, LojaPairCoefficients};
pub use operator::{
    check_op_cocoercive_strengthened, check_op_monotone_strengthened, OpTripleCoefficients, OperatorFamily,
};
pub use simplex::{maximize_on_simplex, Exponents, SimplexCubic, SimplexMax, SimplexScan};
pub use unif::{check_unif_convex_strengthened, unif_triple_max};

/// Distinct index triples `(i, j, k)` with `i < j`, for conditions symmetric
/// under exchanging `i` and `j`.
pub(crate) fn symmetric_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                if i != k && j != k {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// All ordered triples of distinct indices.
pub(crate) fn ordered_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}
