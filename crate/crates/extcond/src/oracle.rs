//! Randomized comparison of the numeric extension engine against closed-form
//! conditions that are known to be exact.
//!
//! * Smooth convex: the strengthening of `p′` is `p″`, so the engine value
//!   of `p′` must be positive exactly when `p″` fails.
//! * Lipschitz operators: the pairwise condition is already extensible, so
//!   the engine must accept exactly the datasets passing the pairwise check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conditions::{check_operator_lipschitz, check_smooth_convex};
use crate::dataset::{FuncDataset, FuncSample, OpDataset, OpSample, SmoothConvexVariant, Tolerance};
use crate::engine::{
    strengthening_value, verify_one_point_extensible, ExtensionData, LipschitzCondition, SmoothConvexCondition,
    StrengtheningOptions,
};
use crate::error::{Error, Result};
use crate::extend::worst_z_smooth_convex;

/// Closed-form reference for the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleFamily {
    /// Pairs `(x, f, g)`; engine on `p′`, reference `p″`.
    SmoothConvex { l: f64 },
    /// Three operator records; engine and reference on Lipschitz continuity.
    OpLipschitz { l: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub trials: usize,
    pub seed: u64,
    /// Dimensions are drawn cyclically from `1..=max_dim`.
    pub max_dim: usize,
    pub grid_per_axis: usize,
    /// Trials whose reference margin lies within `band·scale` of zero are
    /// not compared.
    pub band: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { trials: 100, seed: 0, max_dim: 1, grid_per_axis: 17, band: 1e-3 }
    }
}

/// One compared dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleTrial {
    pub index: usize,
    pub dim: usize,
    /// Reference verdict.
    pub reference: bool,
    /// Engine verdict.
    pub engine: bool,
    pub reference_margin: f64,
    pub scale: f64,
    /// Engine strengthening value, when the family computes one.
    pub engine_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub family: OracleFamily,
    pub trials: usize,
    pub compared: usize,
    pub agreements: usize,
    /// Trials skipped because the reference margin was inside the band.
    pub in_band: usize,
    pub mismatches: Vec<OracleTrial>,
}

impl OracleReport {
    pub fn mismatch_rate(&self) -> f64 {
        if self.compared == 0 {
            0.0
        } else {
            self.mismatches.len() as f64 / self.compared as f64
        }
    }
}

fn uniform_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// A random pair satisfying `p′`, biased so that about half also satisfy `p″`.
fn smooth_convex_pair(rng: &mut ChaCha8Rng, d: usize, l: f64) -> FuncDataset {
    loop {
        let x1 = uniform_vec(rng, d);
        let x2 = uniform_vec(rng, d);
        let g1 = uniform_vec(rng, d);
        let g2 = uniform_vec(rng, d);
        let f1 = rng.gen_range(-1.0..1.0);
        let step: Vec<f64> = x2.iter().zip(&x1).map(|(a, b)| a - b).collect();
        let linear: f64 = g1.iter().zip(&step).map(|(g, s)| g * s).sum();
        let quad = 0.5 * l * step.iter().map(|s| s * s).sum::<f64>();
        let f2 = f1 + linear + rng.gen_range(0.0..1.0) * quad;
        let ds = FuncDataset::new(vec![FuncSample::new(x1, f1, g1), FuncSample::new(x2, f2, g2)]).expect("well-formed");
        let pprime = check_smooth_convex(&ds, l, SmoothConvexVariant::Pprime, &Tolerance::uniform(0.0)).expect("valid L");
        if pprime.satisfied {
            return ds;
        }
    }
}

/// Runs the comparison. Fails only on invalid parameters.
pub fn run_oracle(family: OracleFamily, opts: &OracleOptions) -> Result<OracleReport> {
    let l = match family {
        OracleFamily::SmoothConvex { l } | OracleFamily::OpLipschitz { l } => l,
    };
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Parameter(format!("L must be positive and finite, got {l}")));
    }
    if opts.max_dim == 0 || opts.grid_per_axis == 0 {
        return Err(Error::Parameter("dimension and grid size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let strict = Tolerance::uniform(0.0);
    let mut report = OracleReport { family, trials: opts.trials, compared: 0, agreements: 0, in_band: 0, mismatches: Vec::new() };
    for index in 0..opts.trials {
        let dim = 1 + index % opts.max_dim;
        let trial = match family {
            OracleFamily::SmoothConvex { l } => {
                let ds = smooth_convex_pair(&mut rng, dim, l);
                let reference = check_smooth_convex(&ds, l, SmoothConvexVariant::Pdoubleprime, &strict)?;
                let [a, b] = [ds.sample(0), ds.sample(1)];
                let search = StrengtheningOptions {
                    grid_per_axis: opts.grid_per_axis,
                    warm_starts: vec![worst_z_smooth_convex([a, b], l), worst_z_smooth_convex([b, a], l)],
                    ..Default::default()
                };
                let value = strengthening_value(
                    &ExtensionData::from(&ds),
                    &SmoothConvexCondition { l, variant: SmoothConvexVariant::Pprime },
                    &search,
                )?;
                OracleTrial {
                    index,
                    dim,
                    reference: reference.satisfied,
                    engine: value.value <= 0.5 * opts.band * reference.scale,
                    reference_margin: reference.worst_margin,
                    scale: reference.scale,
                    engine_value: Some(value.value),
                }
            }
            OracleFamily::OpLipschitz { l } => {
                let samples = (0..3).map(|_| OpSample::new(uniform_vec(&mut rng, dim), uniform_vec(&mut rng, dim))).collect();
                let ds = OpDataset::new(samples).expect("well-formed");
                let reference = check_operator_lipschitz(&ds, l, &strict)?;
                let search = StrengtheningOptions { grid_per_axis: opts.grid_per_axis, ..Default::default() };
                let tol = Tolerance { abs: 0.0, rel: 0.5 * opts.band };
                let engine = verify_one_point_extensible(&ExtensionData::from(&ds), &LipschitzCondition { l }, &search, &tol)?;
                OracleTrial {
                    index,
                    dim,
                    reference: reference.satisfied,
                    engine,
                    reference_margin: reference.worst_margin,
                    scale: reference.scale,
                    engine_value: None,
                }
            }
        };
        if trial.reference_margin.abs() <= opts.band * trial.scale {
            report.in_band += 1;
            continue;
        }
        report.compared += 1;
        if trial.reference == trial.engine {
            report.agreements += 1;
        } else {
            report.mismatches.push(trial);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_agree() {
        let opts = OracleOptions { trials: 6, seed: 3, max_dim: 1, grid_per_axis: 9, band: 1e-3 };
        for family in [OracleFamily::SmoothConvex { l: 1.0 }, OracleFamily::OpLipschitz { l: 1.0 }] {
            let report = run_oracle(family, &opts).unwrap();
            assert_eq!(report.compared + report.in_band, 6);
            assert!(report.mismatches.is_empty(), "{report:?}");
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let opts = OracleOptions { trials: 3, seed: 9, ..Default::default() };
        let family = OracleFamily::SmoothConvex { l: 2.0 };
        assert_eq!(run_oracle(family, &opts).unwrap(), run_oracle(family, &opts).unwrap());
        assert!(run_oracle(OracleFamily::OpLipschitz { l: 0.0 }, &opts).is_err());
    }
}
