//! Name-based class selection shared by the command line and region specs,
//! and a single entry point that runs the classical or strengthened check of
//! any class.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certify::{
    certify_blockwise, certify_loja, certify_op_cocoercive, certify_op_monotone, DatasetCertificate, PsdOptions,
};
use crate::conditions::{
    check_blockwise, check_lojasiewicz, check_operator_cocoercive, check_operator_lipschitz,
    check_operator_monotone_lipschitz, check_smooth_convex, check_uniformly_convex,
};
use crate::dataset::{validate, ClassSpec, Dataset, Domain, SmoothConvexVariant, Tolerance, Verdict};
use crate::error::{Error, Result};
use crate::strengthened::{
    check_blockwise_strengthened, check_constrained_smooth_convex, check_loja_strengthened,
    check_op_cocoercive_strengthened, check_op_monotone_strengthened, check_smooth_convex_alpha,
    check_unif_convex_strengthened, SimplexScan,
};

/// Class names accepted on the command line and in region specs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassName {
    SmoothConvex,
    SmoothConvexAlpha,
    Loja,
    Blockwise,
    OpMonotone,
    OpCocoercive,
    UnifConvex,
    OpLipschitz,
    Constrained,
}

impl ClassName {
    pub const ALL: [ClassName; 9] = [
        ClassName::SmoothConvex,
        ClassName::SmoothConvexAlpha,
        ClassName::Loja,
        ClassName::Blockwise,
        ClassName::OpMonotone,
        ClassName::OpCocoercive,
        ClassName::UnifConvex,
        ClassName::OpLipschitz,
        ClassName::Constrained,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::SmoothConvex => "smooth-convex",
            ClassName::SmoothConvexAlpha => "smooth-convex-alpha",
            ClassName::Loja => "loja",
            ClassName::Blockwise => "blockwise",
            ClassName::OpMonotone => "op-monotone",
            ClassName::OpCocoercive => "op-cocoercive",
            ClassName::UnifConvex => "unif-convex",
            ClassName::OpLipschitz => "op-lipschitz",
            ClassName::Constrained => "constrained",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == name)
            .ok_or_else(|| Error::Parameter(format!("unknown class `{name}`")))
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Raw class parameters as they appear on the command line. Only the fields
/// the chosen class needs are read.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassParams {
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(rename = "L", default)]
    pub l: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub fstar: Option<f64>,
    /// One-based coordinate blocks such as `"1,2;3"`.
    #[serde(default)]
    pub blocks: Option<String>,
    /// Comma-separated smoothness constants, one per block.
    #[serde(rename = "Lvec", default)]
    pub lvec: Option<String>,
    /// `p`, `p'` or `p''`; defaults to `p`.
    #[serde(default)]
    pub variant: Option<String>,
    #[serde(default)]
    pub domain: Option<Domain>,
}

fn required(value: Option<f64>, flag: &str, class: ClassName) -> Result<f64> {
    value.ok_or_else(|| Error::Parameter(format!("class {class} needs --{flag}")))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parameter(format!("cannot read `{t}` in {what}")))
        })
        .collect()
}

/// Parses `"1,2;3"` into zero-based blocks `[[0, 1], [2]]`.
pub fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|block| {
            block
                .split(',')
                .map(|t| match t.trim().parse::<usize>() {
                    Ok(c) if c >= 1 => Ok(c - 1),
                    _ => Err(Error::Partition(format!("`{t}` is not a one-based coordinate"))),
                })
                .collect()
        })
        .collect()
}

pub fn parse_variant(text: &str) -> Result<SmoothConvexVariant> {
    match text {
        "p" => Ok(SmoothConvexVariant::P),
        "p'" | "pprime" => Ok(SmoothConvexVariant::Pprime),
        "p''" | "pdoubleprime" => Ok(SmoothConvexVariant::Pdoubleprime),
        other => Err(Error::Parameter(format!("unknown smooth convex variant `{other}`"))),
    }
}

impl ClassParams {
    /// Builds and range-checks the class parameters.
    pub fn to_spec(&self, class: ClassName) -> Result<ClassSpec> {
        let spec = match class {
            ClassName::SmoothConvex => ClassSpec::SmoothConvex {
                l: required(self.l, "L", class)?,
                variant: parse_variant(self.variant.as_deref().unwrap_or("p"))?,
            },
            ClassName::SmoothConvexAlpha => ClassSpec::SmoothConvexAlpha {
                l: required(self.l, "L", class)?,
                alpha: required(self.alpha, "alpha", class)?,
            },
            ClassName::Loja => ClassSpec::Lojasiewicz {
                mu: required(self.mu, "mu", class)?,
                l: required(self.l, "L", class)?,
                f_star: self.fstar.unwrap_or(0.0),
            },
            ClassName::Blockwise => {
                let blocks = self.blocks.as_deref().ok_or_else(|| Error::Parameter("class blockwise needs --blocks".into()))?;
                let lvec = self.lvec.as_deref().ok_or_else(|| Error::Parameter("class blockwise needs --Lvec".into()))?;
                ClassSpec::BlockwiseSmooth { partition: parse_blocks(blocks)?, lvec: parse_list(lvec, "--Lvec")? }
            }
            ClassName::OpMonotone => ClassSpec::MonotoneLipschitzOp {
                mu: required(self.mu, "mu", class)?,
                l: required(self.l, "L", class)?,
            },
            ClassName::OpCocoercive => ClassSpec::CocoerciveOp {
                mu: required(self.mu, "mu", class)?,
                beta: required(self.beta, "beta", class)?,
            },
            ClassName::UnifConvex => ClassSpec::UniformlyConvex {
                mu: required(self.mu, "mu", class)?,
                q: required(self.q, "q", class)?,
            },
            ClassName::OpLipschitz => ClassSpec::LipschitzOp { l: required(self.l, "L", class)? },
            ClassName::Constrained => ClassSpec::ConstrainedSmoothConvex {
                l: required(self.l, "L", class)?,
                domain: self
                    .domain
                    .clone()
                    .ok_or_else(|| Error::Parameter("class constrained needs --domain".into()))?,
            },
        };
        spec.validate_params()?;
        Ok(spec)
    }
}

/// Whether a class has a strengthened checker.
pub fn has_strengthened(spec: &ClassSpec) -> bool {
    !matches!(spec, ClassSpec::ConstrainedSmoothConvex { .. })
}

/// Runs the classical check of `spec`, or its one-point strengthening when
/// `strengthened` is set.
///
/// The strengthening of the smooth convex forms and of the `α`-family is
/// the next member of the `α`-sequence (`α ↦ (1 + α)/2`, with every smooth
/// convex variant mapped to the fixed point `α = 1`). Lipschitz operators
/// are their own strengthening.
pub fn check(ds: &Dataset, spec: &ClassSpec, strengthened: bool, scan: &SimplexScan, tol: &Tolerance) -> Result<Verdict> {
    validate(ds, spec)?;
    if strengthened && !has_strengthened(spec) {
        return Err(Error::Unsupported("the constrained class has no strengthened check".into()));
    }
    match (ds, spec) {
        (Dataset::Function(f), ClassSpec::SmoothConvex { l, variant }) => {
            if strengthened {
                check_smooth_convex_alpha(f, *l, 1.0, tol)
            } else {
                check_smooth_convex(f, *l, *variant, tol)
            }
        }
        (Dataset::Function(f), ClassSpec::SmoothConvexAlpha { l, alpha }) => {
            let alpha = if strengthened { 0.5 * (1.0 + alpha) } else { *alpha };
            check_smooth_convex_alpha(f, *l, alpha, tol)
        }
        (Dataset::Function(f), ClassSpec::Lojasiewicz { mu, l, f_star }) => {
            if strengthened {
                check_loja_strengthened(f, *mu, *l, *f_star, tol)
            } else {
                check_lojasiewicz(f, *mu, *l, *f_star, tol)
            }
        }
        (Dataset::Function(f), ClassSpec::BlockwiseSmooth { partition, lvec }) => {
            if strengthened {
                check_blockwise_strengthened(f, partition, lvec, tol)
            } else {
                check_blockwise(f, partition, lvec, tol)
            }
        }
        (Dataset::Function(f), ClassSpec::UniformlyConvex { mu, q }) => {
            if strengthened {
                check_unif_convex_strengthened(f, *mu, *q, tol)
            } else {
                check_uniformly_convex(f, *mu, *q, tol)
            }
        }
        (Dataset::Function(f), ClassSpec::ConstrainedSmoothConvex { l, domain }) => {
            Ok(check_constrained_smooth_convex(f, *l, domain, tol)?.verdict)
        }
        (Dataset::Operator(o), ClassSpec::MonotoneLipschitzOp { mu, l }) => {
            if strengthened {
                check_op_monotone_strengthened(o, *mu, *l, scan, tol)
            } else {
                check_operator_monotone_lipschitz(o, *mu, *l, tol)
            }
        }
        (Dataset::Operator(o), ClassSpec::CocoerciveOp { mu, beta }) => {
            if strengthened {
                check_op_cocoercive_strengthened(o, *mu, *beta, scan, tol)
            } else {
                check_operator_cocoercive(o, *mu, *beta, tol)
            }
        }
        (Dataset::Operator(o), ClassSpec::LipschitzOp { l }) => check_operator_lipschitz(o, *l, tol),
        _ => Err(Error::KindMismatch {
            expected: spec.kind().to_string(),
            found: ds.kind().to_string(),
        }),
    }
}

/// Certifies the strengthened condition of `spec` through its PSD systems.
/// Only the classes with a sum-of-squares reformulation are supported.
pub fn certify(ds: &Dataset, spec: &ClassSpec, tol: &Tolerance, opts: &PsdOptions) -> Result<DatasetCertificate> {
    validate(ds, spec)?;
    match (ds, spec) {
        (Dataset::Function(f), ClassSpec::Lojasiewicz { mu, l, f_star }) => certify_loja(f, *mu, *l, *f_star, tol, opts),
        (Dataset::Function(f), ClassSpec::BlockwiseSmooth { partition, lvec }) => certify_blockwise(f, partition, lvec, tol, opts),
        (Dataset::Operator(o), ClassSpec::MonotoneLipschitzOp { mu, l }) => certify_op_monotone(o, *mu, *l, tol, opts),
        (Dataset::Operator(o), ClassSpec::CocoerciveOp { mu, beta }) => certify_op_cocoercive(o, *mu, *beta, tol, opts),
        _ => Err(Error::Unsupported(
            "PSD certificates exist for loja, blockwise, op-monotone and op-cocoercive only".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FuncDataset, FuncSample, OpDataset, OpSample};

    #[test]
    fn names_round_trip() {
        for c in ClassName::ALL {
            assert_eq!(ClassName::parse(c.as_str()).unwrap(), c);
        }
        assert!(ClassName::parse("convex").is_err());
    }

    #[test]
    fn blocks_are_one_based() {
        assert_eq!(parse_blocks("1,2;3").unwrap(), vec![vec![0, 1], vec![2]]);
        assert!(parse_blocks("0,1").is_err());
        assert!(parse_blocks("1;;2").is_err());
    }

    #[test]
    fn missing_parameter_names_the_flag() {
        let err = ClassParams::default().to_spec(ClassName::OpMonotone).unwrap_err();
        assert!(err.to_string().contains("--mu"));
        let params = ClassParams { mu: Some(2.0), l: Some(1.0), ..Default::default() };
        assert!(params.to_spec(ClassName::OpMonotone).is_err());
    }

    #[test]
    fn dispatch_matches_direct_calls() {
        let ds = FuncDataset::new(vec![
            FuncSample::new(vec![0.0], 0.0, vec![1.0]),
            FuncSample::new(vec![1.0], 1.2, vec![1.5]),
        ])
        .unwrap();
        let tol = Tolerance::default();
        let scan = SimplexScan::default();
        let spec = ClassSpec::SmoothConvexAlpha { l: 1.0, alpha: 0.0 };
        let wrapped = Dataset::Function(ds.clone());
        assert_eq!(check(&wrapped, &spec, false, &scan, &tol).unwrap(), check_smooth_convex_alpha(&ds, 1.0, 0.0, &tol).unwrap());
        assert_eq!(check(&wrapped, &spec, true, &scan, &tol).unwrap(), check_smooth_convex_alpha(&ds, 1.0, 0.5, &tol).unwrap());

        let ops = Dataset::Operator(OpDataset::new(vec![OpSample::new(vec![0.0], vec![0.0])]).unwrap());
        assert!(matches!(check(&ops, &spec, false, &scan, &tol), Err(Error::KindMismatch { .. })));
        let domain = Domain::Ball { center: vec![0.0], radius: 5.0 };
        let constrained = ClassSpec::ConstrainedSmoothConvex { l: 1.0, domain };
        assert!(check(&wrapped, &constrained, false, &scan, &tol).is_ok());
        assert!(matches!(check(&wrapped, &constrained, true, &scan, &tol), Err(Error::Unsupported(_))));
    }
}
