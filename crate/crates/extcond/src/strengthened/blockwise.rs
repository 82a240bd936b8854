//! Terwise strengthening of convex blockwise smoothness, in closed form.

use rayon::prelude::*;

use super::ordered_triples;
use crate::conditions::{block_pair_a, block_scale, check_blockwise};
use crate::dataset::{ClassSpec, FuncDataset, MarginTracker, Tolerance, Verdict, Witness};
use crate::error::Result;

/// `A_ijm`, `A_ikm` and `B_jkm` for one ordered triple and block `m`.
///
/// The triple condition is `P(λ) = (1−λ)A_ij + λA_ik + λ(1−λ)B_jk ≤ 0` for all
/// `λ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockTripleCoefficients {
    pub a_ij: f64,
    pub a_ik: f64,
    pub b_jk: f64,
}

fn block_gap(ds: &FuncDataset, j: usize, k: usize, block: &[usize], l_m: f64) -> f64 {
    let (a, b) = (ds.sample(j), ds.sample(k));
    block.iter().map(|&c| (a.g[c] - b.g[c]).powi(2)).sum::<f64>() / (2.0 * l_m)
}

impl BlockTripleCoefficients {
    pub fn from_triple(
        ds: &FuncDataset,
        (i, j, k): (usize, usize, usize),
        m: usize,
        partition: &[Vec<usize>],
        lvec: &[f64],
    ) -> Self {
        let widest = partition
            .iter()
            .zip(lvec)
            .map(|(block, &l)| block_gap(ds, j, k, block, l))
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            a_ij: block_pair_a(ds, i, j, &partition[m], lvec[m]),
            a_ik: block_pair_a(ds, i, k, &partition[m], lvec[m]),
            b_jk: (widest - block_gap(ds, j, k, &partition[m], lvec[m])).max(0.0),
        }
    }

    pub fn value_at(&self, lambda: f64) -> f64 {
        (1.0 - lambda) * self.a_ij + lambda * self.a_ik + lambda * (1.0 - lambda) * self.b_jk
    }

    /// Vertex of the concave parabola, when it is one.
    pub fn lambda_star(&self) -> Option<f64> {
        (self.b_jk > 0.0).then(|| (self.a_ik - self.a_ij + self.b_jk) / (2.0 * self.b_jk))
    }

    /// Exact maximum over `[0, 1]` as `(λ, P(λ))`. An interior vertex gives
    /// `((A_ij − A_ik)² + B² + 2B(A_ij + A_ik))/(4B)`.
    pub fn maximize(&self) -> (f64, f64) {
        if let Some(lambda) = self.lambda_star().filter(|l| (0.0..=1.0).contains(l)) {
            let quartic = (self.a_ij - self.a_ik).powi(2) + self.b_jk.powi(2) + 2.0 * self.b_jk * (self.a_ij + self.a_ik);
            return (lambda, quartic / (4.0 * self.b_jk));
        }
        if self.a_ik > self.a_ij {
            (1.0, self.a_ik)
        } else {
            (0.0, self.a_ij)
        }
    }
}

/// Classical blockwise smoothness plus the closed-form triple condition on
/// every ordered triple of distinct samples and every block.
pub fn check_blockwise_strengthened(
    ds: &FuncDataset,
    partition: &[Vec<usize>],
    lvec: &[f64],
    tol: &Tolerance,
) -> Result<Verdict> {
    ClassSpec::BlockwiseSmooth {
        partition: partition.to_vec(),
        lvec: lvec.to_vec(),
    }
    .validate_params()?;
    let classical = check_blockwise(ds, partition, lvec, tol)?;
    let mut track = MarginTracker::new();
    if let Some(w) = classical.witness {
        track.offer(classical.worst_margin, || w);
    }
    let per_triple: Vec<MarginTracker> = ordered_triples(ds.len())
        .into_par_iter()
        .map(|(i, j, k)| {
            let mut local = MarginTracker::new();
            for m in 0..partition.len() {
                let c = BlockTripleCoefficients::from_triple(ds, (i, j, k), m, partition, lvec);
                let (lambda, value) = c.maximize();
                local.offer(value, || {
                    Witness::new("blockwise-triple", vec![i, j, k])
                        .with("block", m as f64)
                        .with("lambda", lambda)
                });
            }
            local
        })
        .collect();
    for local in per_triple {
        track.merge(local);
    }
    Ok(track.finish(block_scale(ds, lvec), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::FuncSample;

    fn example33() -> FuncDataset {
        FuncDataset::new(vec![
            FuncSample::new(vec![-1.0, 0.0], 0.5, vec![-1.0, 0.0]),
            FuncSample::new(vec![1.0, 0.0], 0.5, vec![1.0, 0.0]),
            FuncSample::new(vec![0.0, 0.0], 0.0, vec![0.0, -1.0]),
        ])
        .unwrap()
    }

    #[test]
    fn example33_discarded_at_half() {
        let part = vec![vec![0], vec![1]];
        let v = check_blockwise_strengthened(&example33(), &part, &[1.0, 1.0], &Tolerance::default()).unwrap();
        assert!(!v.satisfied);
        assert!((v.worst_margin - 0.5).abs() < 1e-15);
        let w = v.witness.unwrap();
        assert_eq!(w.indices, vec![2, 0, 1]);
        assert_eq!(w.multiplier("block"), Some(1.0));
        assert_eq!(w.multiplier("lambda"), Some(0.5));
    }

    #[test]
    fn vertex_outside_unit_interval_uses_endpoints() {
        let c = BlockTripleCoefficients { a_ij: -1.0, a_ik: 3.0, b_jk: 0.5 };
        assert!(c.lambda_star().unwrap() > 1.0);
        assert_eq!(c.maximize(), (1.0, 3.0));
        let flat = BlockTripleCoefficients { a_ij: -0.2, a_ik: -0.7, b_jk: 0.0 };
        assert_eq!(flat.lambda_star(), None);
        assert_eq!(flat.maximize(), (0.0, -0.2));
    }

    #[test]
    fn closed_form_matches_grid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let c = BlockTripleCoefficients {
                a_ij: rng.gen_range(-1.0..1.0),
                a_ik: rng.gen_range(-1.0..1.0),
                b_jk: rng.gen_range(0.0..2.0),
            };
            let grid = (0..=10_000).map(|t| c.value_at(t as f64 / 10_000.0)).fold(f64::NEG_INFINITY, f64::max);
            let (lambda, exact) = c.maximize();
            assert!((c.value_at(lambda) - exact).abs() < 1e-12);
            assert!(exact >= grid - 1e-12 && exact <= grid + 1e-7);
        }
    }
}
