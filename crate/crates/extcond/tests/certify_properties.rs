mod common;

use extcond::certify::{
    build_blockwise_sos, build_loja_sos, build_op_cocoercive_sos, build_op_monotone_sos, certify_loja, min_eigenvalue,
    solve_psd_feasibility, PsdFeasibilityProblem, PsdOptions,
};
use extcond::strengthened::{check_loja_strengthened, BlockTripleCoefficients, LojaPairCoefficients, OpTripleCoefficients, OperatorFamily};
use extcond::Tolerance;
use proptest::prelude::*;
use rand::Rng;

use common::*;

/// `φ(θ)`: the smallest eigenvalue over all blocks.
fn phi(problem: &PsdFeasibilityProblem, theta: &[f64]) -> f64 {
    problem.assemble(theta).iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min)
}

fn random_problem(kind: u8, seed: u64) -> PsdFeasibilityProblem {
    let mut rng = rng(seed);
    match kind % 4 {
        0 => {
            let c = LojaPairCoefficients { a: rng.gen_range(-1.0..0.5), b: rng.gen_range(-1.0..1.0), c: rng.gen_range(-1.0..1.0) };
            build_loja_sos(&c, rng.gen_range(0.1..1.0), 1.0).unwrap()
        }
        1 => {
            let c = BlockTripleCoefficients { a_ij: rng.gen_range(-1.0..0.2), a_ik: rng.gen_range(-1.0..0.2), b_jk: rng.gen_range(0.0..2.0) };
            build_blockwise_sos(&c).unwrap()
        }
        2 => {
            let mu = rng.gen_range(0.0..0.5);
            let ds = monotone_lipschitz_samples(&mut rng, 3, 2, mu, 1.0, 0.05);
            build_op_monotone_sos(&OpTripleCoefficients::from_triple(&ds, (0, 1, 2), OperatorFamily::MonotoneLipschitz { mu, l: 1.0 })).unwrap()
        }
        _ => {
            let mu = rng.gen_range(0.0..0.5);
            let ds = cocoercive_samples(&mut rng, 3, 2, mu, 1.0, 0.05);
            build_op_cocoercive_sos(&OpTripleCoefficients::from_triple(&ds, (0, 1, 2), OperatorFamily::Cocoercive { mu, beta: 1.0 })).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn feasible_witnesses_reassemble(kind in 0u8..4, seed in any::<u64>()) {
        let problem = random_problem(kind, seed);
        let opts = PsdOptions::default();
        let verdict = solve_psd_feasibility(&problem, &opts);
        if verdict.feasible {
            prop_assert!(phi(&problem, &verdict.theta) >= -2.0 * opts.eps_psd);
            for (assembled, reported) in problem.assemble(&verdict.theta).iter().zip(&verdict.matrices) {
                prop_assert!((assembled - reported).amax() <= 1e-12 * (1.0 + assembled.amax()));
            }
        }
        if let Some(bound) = verdict.upper_bound {
            prop_assert!(verdict.best_min_eig <= bound + 1e-9);
        }
    }

    #[test]
    fn phi_is_concave_along_segments(kind in 0u8..4, seed in any::<u64>(), ends in prop::collection::vec(-3.0..3.0f64, 16)) {
        let problem = random_problem(kind, seed);
        let p = problem.theta_dim();
        prop_assume!(p <= 8);
        let (a, b) = (&ends[..p], &ends[8..8 + p]);
        let mid: Vec<f64> = a.iter().zip(b).map(|(u, v)| 0.5 * (u + v)).collect();
        let scale = 1.0 + problem.assemble(a).iter().chain(problem.assemble(b).iter()).map(|m| m.amax()).fold(0.0, f64::max);
        prop_assert!(phi(&problem, &mid) >= phi(&problem, a).min(phi(&problem, b)) - 1e-10 * scale);
    }

    #[test]
    fn loja_sdp_matches_the_cubic_away_from_the_boundary(mu in 0.1..1.0f64, noise in 0.0..0.1f64, drop in 0.0..0.3f64, seed in any::<u64>()) {
        let ds = quadratic_samples(&mut rng(seed), 3, 2, [mu, 1.0], noise);
        let f_star = ds.samples().iter().map(|s| s.f).fold(f64::INFINITY, f64::min) - drop;
        let tol = Tolerance::default();
        let opts = PsdOptions::default();
        let cubic = check_loja_strengthened(&ds, mu, 1.0, f_star, &tol).unwrap();
        prop_assume!(cubic.worst_margin.abs() > 10.0 * opts.eps_psd);
        let sdp = certify_loja(&ds, mu, 1.0, f_star, &tol, &opts).unwrap();
        prop_assert_eq!(sdp.feasible, cubic.satisfied);
    }

    #[test]
    fn loja_interval_certificate_matches_cubic_maximum(a in -1.0..0.2f64, b in -1.0..1.0f64, c in -1.0..1.0f64, mu in 0.05..1.0f64) {
        let coeffs = LojaPairCoefficients { a, b, c };
        let (_, value) = coeffs.maximize(mu, 1.0);
        let opts = PsdOptions::default();
        prop_assume!(value.abs() > 10.0 * opts.eps_psd);
        let verdict = solve_psd_feasibility(&build_loja_sos(&coeffs, mu, 1.0).unwrap(), &opts);
        prop_assert_eq!(verdict.feasible, value <= 0.0);
    }

    #[test]
    fn blockwise_sdp_matches_closed_form(a_ij in -1.0..1.0f64, a_ik in -1.0..1.0f64, b_jk in 0.0..2.0f64) {
        let c = BlockTripleCoefficients { a_ij, a_ik, b_jk };
        let exact = c.maximize().1;
        let opts = PsdOptions::default();
        prop_assume!(exact.abs() > 10.0 * opts.eps_psd);
        let verdict = solve_psd_feasibility(&build_blockwise_sos(&c).unwrap(), &opts);
        prop_assert_eq!(verdict.feasible, exact <= 0.0);
    }
}
