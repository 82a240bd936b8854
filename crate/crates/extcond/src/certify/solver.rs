//! Maximization of the smallest eigenvalue over an affine family of
//! symmetric blocks.
//!
//! With `φ(θ) = min_b λ_min(M_b(θ))`, the problem is feasible iff
//! `max φ ≥ −ε`. The maximization is done on the epigraph
//! `max s s.t. M_b(θ) − sI ⪰ 0` by a log-barrier path-following method with
//! damped Newton steps. Every centered point yields a dual matrix
//! `Z ⪰ 0` with `⟨Z, N_p⟩ = 0` for every parameter direction, which bounds
//! `max φ` from above. A feasible answer is therefore backed by a witness `θ`,
//! and an infeasible one by the dual bound, unless the iteration cap is hit
//! first.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Serialize, Serializer};

use super::problem::PsdFeasibilityProblem;

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdOptions {
    /// Feasibility threshold on the smallest eigenvalue.
    pub eps_psd: f64,
    /// Cap on Newton steps per independent component.
    pub max_iter: usize,
}

impl Default for PsdOptions {
    fn default() -> Self {
        Self {
            eps_psd: 1e-7,
            max_iter: 20_000,
        }
    }
}

fn serialize_matrices<S: Serializer>(ms: &[DMatrix<f64>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<Vec<f64>>> = ms
        .iter()
        .map(|m| (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect())
        .collect();
    rows.serialize(s)
}

fn serialize_finite<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

/// Outcome of [`solve_psd_feasibility`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdVerdict {
    pub feasible: bool,
    /// True when the answer is backed by a witness (feasible) or by a dual
    /// bound below `−ε` (infeasible). False means "presumed infeasible".
    pub certified: bool,
    /// Smallest eigenvalue over all blocks at `theta`.
    #[serde(serialize_with = "serialize_finite")]
    pub best_min_eig: f64,
    /// Proven upper bound on the largest achievable smallest eigenvalue.
    pub upper_bound: Option<f64>,
    pub theta: Vec<f64>,
    #[serde(serialize_with = "serialize_matrices")]
    pub matrices: Vec<DMatrix<f64>>,
    pub iterations: usize,
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        0 => f64::INFINITY,
        1 => m[(0, 0)],
        2 => {
            let (a, b, d) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
            0.5 * (a + d) - (0.25 * (a - d).powi(2) + b * b).sqrt()
        }
        _ => SymmetricEigen::new(m.clone()).eigenvalues.min(),
    }
}

/// One block restricted to the parameters of its component.
struct LocalBlock {
    constant: DMatrix<f64>,
    directions: Vec<DMatrix<f64>>,
}

impl LocalBlock {
    fn at(&self, theta: &[f64]) -> DMatrix<f64> {
        let mut m = self.constant.clone();
        for (n, t) in self.directions.iter().zip(theta) {
            if *t != 0.0 {
                m += n * *t;
            }
        }
        m
    }
}

fn phi(blocks: &[LocalBlock], theta: &[f64]) -> f64 {
    blocks.iter().map(|b| min_eigenvalue(&b.at(theta))).fold(f64::INFINITY, f64::min)
}

fn frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

struct ComponentResult {
    theta: Vec<f64>,
    best: f64,
    upper: Option<f64>,
    iterations: usize,
}

/// Slack matrices `M_b(θ) − sI` and their inverses, or `None` outside the
/// barrier domain.
fn slack_inverses(blocks: &[LocalBlock], theta: &[f64], s: f64) -> Option<(f64, Vec<DMatrix<f64>>)> {
    let mut logdet = 0.0;
    let mut inverses = Vec::with_capacity(blocks.len());
    for b in blocks {
        let mut m = b.at(theta);
        for k in 0..m.nrows() {
            m[(k, k)] -= s;
        }
        let chol = m.cholesky()?;
        logdet += 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        inverses.push(chol.inverse());
    }
    logdet.is_finite().then_some((logdet, inverses))
}

/// Dual bound from a barrier point: `Z_b ∝ W_b`, corrected to be orthogonal
/// to every parameter direction, then checked for semidefiniteness.
fn dual_bound(blocks: &[LocalBlock], inverses: &[DMatrix<f64>]) -> Option<f64> {
    let params = blocks.first().map_or(0, |b| b.directions.len());
    let mut residual = DVector::<f64>::zeros(params);
    let mut gram = DMatrix::<f64>::zeros(params, params);
    for (b, w) in blocks.iter().zip(inverses) {
        for p in 0..params {
            residual[p] += frobenius(w, &b.directions[p]);
            for q in 0..params {
                gram[(p, q)] += frobenius(&b.directions[p], &b.directions[q]);
            }
        }
    }
    let correction = if params == 0 {
        DVector::zeros(0)
    } else {
        gram.clone().cholesky()?.solve(&residual)
    };
    let mut weighted = 0.0;
    let mut trace = 0.0;
    for (b, w) in blocks.iter().zip(inverses) {
        let mut z = w.clone();
        for p in 0..params {
            z -= &b.directions[p] * correction[p];
        }
        if min_eigenvalue(&z) < 0.0 {
            return None;
        }
        weighted += frobenius(&z, &b.constant);
        trace += z.trace();
    }
    (trace > 0.0).then(|| weighted / trace)
}

fn solve_component(blocks: &[LocalBlock], opts: &PsdOptions) -> ComponentResult {
    let params = blocks[0].directions.len();
    let mut theta = vec![0.0; params];
    let mut best = phi(blocks, &theta);
    let mut best_theta = theta.clone();
    let fixed_diagonal = blocks
        .iter()
        .flat_map(|b| {
            (0..b.constant.nrows())
                .filter(|&k| b.directions.iter().all(|n| n[(k, k)] == 0.0))
                .map(|k| b.constant[(k, k)])
        })
        .fold(f64::INFINITY, f64::min);
    let done = |theta: Vec<f64>, best: f64, upper: Option<f64>, iterations: usize| ComponentResult {
        theta,
        best,
        upper,
        iterations,
    };
    if params == 0 {
        return done(theta, best, Some(best), 0);
    }
    if best >= 0.0 {
        return done(theta, best, None, 0);
    }
    if fixed_diagonal < -opts.eps_psd {
        return done(theta, best, Some(fixed_diagonal), 0);
    }

    let scale = blocks
        .iter()
        .flat_map(|b| b.constant.iter().chain(b.directions.iter().flat_map(|n| n.iter())))
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let total_dim: usize = blocks.iter().map(|b| b.constant.nrows()).sum();
    let gap0 = best.abs().max(1e-3 * scale);
    let mut s = best - gap0;
    let mut t = total_dim as f64 / gap0;
    let mut iterations = 0;
    let mut upper: Option<f64> = None;
    let dim = params + 1;
    // The parameter set may be unbounded while the barrier keeps growing
    // along it; a wide ball keeps the central path well defined.
    let radius2 = (1e4 * scale).powi(2);
    let room = |theta: &[f64]| radius2 - theta.iter().map(|v| v * v).sum::<f64>();

    while t < 1e16 / scale && iterations < opts.max_iter {
        // Newton centering on F(θ, s) = t·s + Σ log det(M_b(θ) − sI) + log(R² − ‖θ‖²).
        while let Some((logdet, inverses)) = slack_inverses(blocks, &theta, s) {
            let slack = room(&theta);
            let mut grad = DVector::<f64>::zeros(dim);
            let mut hess = DMatrix::<f64>::zeros(dim, dim);
            grad[params] = t;
            for p in 0..params {
                grad[p] -= 2.0 * theta[p] / slack;
                hess[(p, p)] += 2.0 / slack;
                for q in 0..params {
                    hess[(p, q)] += 4.0 * theta[p] * theta[q] / (slack * slack);
                }
            }
            for (b, w) in blocks.iter().zip(&inverses) {
                let products: Vec<DMatrix<f64>> = b.directions.iter().map(|n| w * n).collect();
                for p in 0..params {
                    grad[p] += products[p].trace();
                    for q in p..params {
                        let v = frobenius(&products[p], &products[q].transpose());
                        hess[(p, q)] += v;
                        if q != p {
                            hess[(q, p)] += v;
                        }
                    }
                    let v = frobenius(&products[p], &w.transpose());
                    hess[(p, params)] -= v;
                    hess[(params, p)] -= v;
                }
                grad[params] -= w.trace();
                hess[(params, params)] += frobenius(w, w);
            }
            let ridge = 1e-14 * hess.diagonal().amax().max(1e-300);
            let step = (0..8)
                .find_map(|k| {
                    let mut h = hess.clone();
                    for i in 0..dim {
                        h[(i, i)] += ridge * 100f64.powi(k);
                    }
                    h.cholesky().map(|c| c.solve(&grad))
                })
                .unwrap_or_else(|| grad.clone());
            let decrement = grad.dot(&step);
            if !(decrement > 1e-8) {
                break;
            }
            let objective = t * s + logdet + slack.ln();
            let mut tau = 1.0;
            let mut accepted = false;
            while tau > 1e-14 {
                let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(v, d)| v + tau * d).collect();
                let trial_s = s + tau * step[params];
                let trial_room = room(&trial);
                if let Some((trial_logdet, _)) = slack_inverses(blocks, &trial, trial_s).filter(|_| trial_room > 0.0) {
                    if t * trial_s + trial_logdet + trial_room.ln() >= objective + 0.25 * tau * decrement {
                        theta = trial;
                        s = trial_s;
                        accepted = true;
                        break;
                    }
                }
                tau *= 0.5;
            }
            iterations += 1;
            if accepted {
                let value = phi(blocks, &theta);
                if value > best {
                    best = value;
                    best_theta = theta.clone();
                }
                if best >= 0.0 {
                    return done(best_theta, best, upper, iterations);
                }
            }
            if !accepted || iterations >= opts.max_iter {
                break;
            }
        }
        if let Some((_, inverses)) = slack_inverses(blocks, &theta, s) {
            if let Some(bound) = dual_bound(blocks, &inverses) {
                upper = Some(upper.map_or(bound, |u: f64| u.min(bound)));
            }
        }
        if let Some(u) = upper {
            if u < -opts.eps_psd || (best >= -opts.eps_psd && u - best <= opts.eps_psd) {
                break;
            }
        }
        t *= 10.0;
    }
    done(best_theta, best, upper, iterations)
}

/// Maximizes the smallest eigenvalue over the parameter space, splitting the
/// problem into independent groups of blocks that share no parameter.
pub fn solve_psd_feasibility(problem: &PsdFeasibilityProblem, opts: &PsdOptions) -> PsdVerdict {
    let blocks = problem.blocks();
    let mut group: Vec<usize> = (0..blocks.len()).collect();
    fn root(group: &mut [usize], mut i: usize) -> usize {
        while group[i] != i {
            group[i] = group[group[i]];
            i = group[i];
        }
        i
    }
    let mut owner: Vec<Option<usize>> = vec![None; problem.theta_dim()];
    for (b, template) in blocks.iter().enumerate() {
        for p in template.parameters() {
            match owner[p] {
                None => owner[p] = Some(b),
                Some(other) => {
                    let (x, y) = (root(&mut group, other), root(&mut group, b));
                    group[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..blocks.len()).map(|b| root(&mut group, b)).collect();
    let mut components: Vec<usize> = roots.clone();
    components.sort_unstable();
    components.dedup();

    let mut theta = vec![0.0; problem.theta_dim()];
    let mut best = f64::INFINITY;
    let mut upper: Option<f64> = None;
    let mut iterations = 0;
    let mut all_feasible = true;
    let mut refuted = false;
    for c in components {
        let members: Vec<usize> = (0..blocks.len()).filter(|&b| roots[b] == c).collect();
        let mut local_params: Vec<usize> = members.iter().flat_map(|&b| blocks[b].parameters()).collect();
        local_params.sort_unstable();
        local_params.dedup();
        let local: Vec<LocalBlock> = members
            .iter()
            .map(|&b| LocalBlock {
                constant: blocks[b].constant_part(),
                directions: local_params.iter().map(|&p| blocks[b].parameter_part(p)).collect(),
            })
            .collect();
        let result = solve_component(&local, opts);
        for (&p, v) in local_params.iter().zip(&result.theta) {
            theta[p] = *v;
        }
        best = best.min(result.best);
        iterations += result.iterations;
        if let Some(u) = result.upper {
            upper = Some(upper.map_or(u, |v: f64| v.min(u)));
            refuted |= u < -opts.eps_psd;
        }
        all_feasible &= result.best >= -opts.eps_psd;
    }
    let matrices = problem.assemble(&theta);
    let best = if blocks.is_empty() {
        f64::INFINITY
    } else {
        matrices.iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min)
    };
    let feasible = all_feasible && best >= -opts.eps_psd;
    PsdVerdict {
        feasible,
        certified: feasible || refuted,
        best_min_eig: best,
        upper_bound: upper,
        theta,
        matrices,
        iterations,
    }
}
