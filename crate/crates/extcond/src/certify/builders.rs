//! Certificate templates for the classes whose strengthened conditions are
//! polynomial sign conditions, and dataset-wide certification on top of them.

use rayon::prelude::*;
use serde::Serialize;

use super::identity::{build_identity, GramBlock, Poly};
use super::problem::PsdFeasibilityProblem;
use super::solver::{solve_psd_feasibility, PsdOptions, PsdVerdict};
use crate::conditions::{check_blockwise, check_operator_cocoercive, check_operator_monotone_lipschitz};
use crate::dataset::{FuncDataset, OpDataset, Tolerance, Verdict};
use crate::error::{Error, Result};
use crate::strengthened::loja::check_loja_base;
use crate::strengthened::{
    symmetric_triples, BlockTripleCoefficients, Exponents, LojaPairCoefficients, OpTripleCoefficients,
    OperatorFamily, SimplexCubic,
};

/// `−P(α) ≥ 0` on `[0, 2μ/(2L+μ)]` written as `α·σ₁(α) + (c − α)·σ₂(α)` with
/// `σ₁ = [1 α] M [1 α]ᵀ` and `σ₂ = [1 α] M̄ [1 α]ᵀ`. Block 0 is `M`, block 1
/// is `M̄`.
pub fn build_loja_sos(coeffs: &LojaPairCoefficients, mu: f64, l: f64) -> Result<PsdFeasibilityProblem> {
    if !(mu > 0.0 && mu <= l && l.is_finite()) {
        return Err(Error::Parameter(format!("the interval certificate needs 0 < μ ≤ L, got μ = {mu}, L = {l}")));
    }
    interval_sos(coeffs.cubic(mu, l), LojaPairCoefficients::alpha_max(mu, l))
}

/// Markov–Lukács template for `−(a₀ + a₁α + a₂α² + a₃α³) ≥ 0` on `[0, end]`.
fn interval_sos(cubic: [f64; 4], end: f64) -> Result<PsdFeasibilityProblem> {
    let target = Poly::from_terms((0..4).map(|k| ([k as u8, 0, 0], -cubic[k])));
    let basis = vec![[0, 0, 0], [1, 0, 0]];
    build_identity(
        &target,
        &[
            GramBlock {
                multiplier: Poly::from_terms([([1, 0, 0], 1.0)]),
                basis: basis.clone(),
            },
            GramBlock {
                multiplier: Poly::from_terms([([0, 0, 0], end), ([1, 0, 0], -1.0)]),
                basis,
            },
        ],
    )
}

/// `−P(λ) = [1 λ] M [1 λ]ᵀ + λ(1 − λ)K` with `M ⪰ 0` (block 0) and `K ≥ 0`
/// (block 1, a 1×1 block).
pub fn build_blockwise_sos(coeffs: &BlockTripleCoefficients) -> Result<PsdFeasibilityProblem> {
    let BlockTripleCoefficients { a_ij, a_ik, b_jk } = *coeffs;
    let target = Poly::from_terms([([0, 0, 0], -a_ij), ([1, 0, 0], -(a_ik - a_ij + b_jk)), ([2, 0, 0], b_jk)]);
    build_identity(
        &target,
        &[
            GramBlock {
                multiplier: Poly::constant(1.0),
                basis: vec![[0, 0, 0], [1, 0, 0]],
            },
            GramBlock {
                multiplier: Poly::from_terms([([1, 0, 0], 1.0), ([2, 0, 0], -1.0)]),
                basis: vec![[0, 0, 0]],
            },
        ],
    )
}

/// Monomial vector of the 7×7 operator Gram matrix, as exponents of
/// `(γ, θ, α)` with `λ_k = γ²`, `μ_i = θ²`, `μ_j = α²`:
/// `α²θ, α²γ, αθ², αγ², αθγ, θ²γ, θγ²`.
pub const OPERATOR_BASIS: [Exponents; 7] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 0, 1], [1, 1, 1], [1, 2, 0], [2, 1, 0]];

/// Gram template for `−p(γ², θ², α²) = vᵀ M v`.
fn operator_gram(poly: &SimplexCubic) -> Result<PsdFeasibilityProblem> {
    let target = Poly::from_terms(poly.terms().iter().map(|(e, c)| ([2 * e[0], 2 * e[1], 2 * e[2]], -c)));
    build_identity(
        &target,
        &[GramBlock {
            multiplier: Poly::constant(1.0),
            basis: OPERATOR_BASIS.to_vec(),
        }],
    )
}

fn operator_sos(coeffs: &OpTripleCoefficients) -> Result<PsdFeasibilityProblem> {
    let [first, second] = coeffs.polynomials();
    Ok(operator_gram(&first)?.concat(operator_gram(&second)?))
}

/// Two 7×7 Gram blocks, one per triple cubic, for a monotone-Lipschitz triple.
pub fn build_op_monotone_sos(coeffs: &OpTripleCoefficients) -> Result<PsdFeasibilityProblem> {
    match coeffs.family {
        OperatorFamily::MonotoneLipschitz { mu, l } if (0.0..=l).contains(&mu) => operator_sos(coeffs),
        OperatorFamily::MonotoneLipschitz { mu, l } => {
            Err(Error::Parameter(format!("monotone-Lipschitz certificate needs 0 ≤ μ ≤ L, got μ = {mu}, L = {l}")))
        }
        OperatorFamily::Cocoercive { .. } => Err(Error::KindMismatch {
            expected: "monotone-Lipschitz triple".into(),
            found: "cocoercive triple".into(),
        }),
    }
}

/// Two 7×7 Gram blocks, one per triple cubic, for a cocoercive triple.
pub fn build_op_cocoercive_sos(coeffs: &OpTripleCoefficients) -> Result<PsdFeasibilityProblem> {
    match coeffs.family {
        OperatorFamily::Cocoercive { mu, beta } if mu >= 0.0 && beta > 0.0 => operator_sos(coeffs),
        OperatorFamily::Cocoercive { mu, beta } => {
            Err(Error::Parameter(format!("cocoercive certificate needs μ ≥ 0 and β > 0, got μ = {mu}, β = {beta}")))
        }
        OperatorFamily::MonotoneLipschitz { .. } => Err(Error::KindMismatch {
            expected: "cocoercive triple".into(),
            found: "monotone-Lipschitz triple".into(),
        }),
    }
}

/// Certificate outcome for one pair or triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceCertificate {
    pub indices: Vec<usize>,
    /// Coordinate block, for blockwise smoothness.
    pub block: Option<usize>,
    pub verdict: PsdVerdict,
}

/// Dataset-wide certification: the lines outside the polynomial systems are checked
/// directly, and every pair or triple condition through its PSD system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetCertificate {
    pub feasible: bool,
    /// Every instance verdict is certified.
    pub certified: bool,
    /// Verdict of the lines checked directly.
    pub classical: Verdict,
    pub instances: Vec<InstanceCertificate>,
}

impl DatasetCertificate {
    fn assemble(classical: Verdict, instances: Vec<InstanceCertificate>) -> Self {
        Self {
            feasible: classical.satisfied && instances.iter().all(|c| c.verdict.feasible),
            certified: instances.iter().all(|c| c.verdict.certified),
            classical,
            instances,
        }
    }

    /// Instances whose system was found infeasible.
    pub fn failures(&self) -> impl Iterator<Item = &InstanceCertificate> {
        self.instances.iter().filter(|c| !c.verdict.feasible)
    }
}

fn solve_all<T: Sync>(
    items: Vec<T>,
    opts: &PsdOptions,
    build: impl Fn(&T) -> Result<(Vec<usize>, Option<usize>, PsdFeasibilityProblem)> + Sync,
) -> Result<Vec<InstanceCertificate>> {
    items
        .par_iter()
        .map(|item| {
            let (indices, block, problem) = build(item)?;
            Ok(InstanceCertificate {
                indices,
                block,
                verdict: solve_psd_feasibility(&problem, opts),
            })
        })
        .collect()
}

/// The non-cubic lines of the strengthened Łojasiewicz condition plus one
/// interval certificate per ordered pair.
pub fn certify_loja(
    ds: &FuncDataset,
    mu: f64,
    l: f64,
    f_star: f64,
    tol: &Tolerance,
    opts: &PsdOptions,
) -> Result<DatasetCertificate> {
    let classical = check_loja_base(ds, mu, l, f_star, tol)?;
    let n = ds.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let instances = solve_all(pairs, opts, |&(i, j)| {
        let coeffs = LojaPairCoefficients::from_pair(ds, i, j, mu, l, f_star);
        Ok((vec![i, j], None, build_loja_sos(&coeffs, mu, l)?))
    })?;
    Ok(DatasetCertificate::assemble(classical, instances))
}

/// Classical blockwise smoothness plus one certificate per ordered triple and
/// coordinate block.
pub fn certify_blockwise(
    ds: &FuncDataset,
    partition: &[Vec<usize>],
    lvec: &[f64],
    tol: &Tolerance,
    opts: &PsdOptions,
) -> Result<DatasetCertificate> {
    let classical = check_blockwise(ds, partition, lvec, tol)?;
    let items: Vec<((usize, usize, usize), usize)> = crate::strengthened::ordered_triples(ds.len())
        .into_iter()
        .flat_map(|t| (0..partition.len()).map(move |m| (t, m)))
        .collect();
    let instances = solve_all(items, opts, |&((i, j, k), m)| {
        let coeffs = BlockTripleCoefficients::from_triple(ds, (i, j, k), m, partition, lvec);
        Ok((vec![i, j, k], Some(m), build_blockwise_sos(&coeffs)?))
    })?;
    Ok(DatasetCertificate::assemble(classical, instances))
}

fn certify_operator(
    ds: &OpDataset,
    family: OperatorFamily,
    classical: Verdict,
    opts: &PsdOptions,
) -> Result<DatasetCertificate> {
    let instances = solve_all(symmetric_triples(ds.len()), opts, |&(i, j, k)| {
        let coeffs = OpTripleCoefficients::from_triple(ds, (i, j, k), family);
        let problem = match family {
            OperatorFamily::MonotoneLipschitz { .. } => build_op_monotone_sos(&coeffs)?,
            OperatorFamily::Cocoercive { .. } => build_op_cocoercive_sos(&coeffs)?,
        };
        Ok((vec![i, j, k], None, problem))
    })?;
    Ok(DatasetCertificate::assemble(classical, instances))
}

/// Classical monotone-Lipschitz lines plus one Gram certificate per triple.
/// A feasible certificate is sufficient for the triple condition.
pub fn certify_op_monotone(ds: &OpDataset, mu: f64, l: f64, tol: &Tolerance, opts: &PsdOptions) -> Result<DatasetCertificate> {
    let classical = check_operator_monotone_lipschitz(ds, mu, l, tol)?;
    certify_operator(ds, OperatorFamily::MonotoneLipschitz { mu, l }, classical, opts)
}

/// Classical cocoercive lines plus one Gram certificate per triple.
pub fn certify_op_cocoercive(
    ds: &OpDataset,
    mu: f64,
    beta: f64,
    tol: &Tolerance,
    opts: &PsdOptions,
) -> Result<DatasetCertificate> {
    let classical = check_operator_cocoercive(ds, mu, beta, tol)?;
    certify_operator(ds, OperatorFamily::Cocoercive { mu, beta }, classical, opts)
}
