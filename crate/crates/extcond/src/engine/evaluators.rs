//! The classical conditions of each class, phrased on record tuples so that
//! the engine can evaluate them with one record replaced by unknowns.

use super::{ConditionEvaluator, ExtensionData, Record};
use crate::dataset::{dist2, norm2, DatasetKind, SmoothConvexVariant};

/// `⟨v, x − y⟩`.
fn along(v: &[f64], x: &[f64], y: &[f64]) -> f64 {
    v.iter().zip(x.iter().zip(y)).map(|(v, (x, y))| v * (x - y)).sum()
}

/// `f_b − f_a + ⟨g_b, x_a − x_b⟩`: nonpositive iff `a` lies above the tangent at `b`.
fn tangent(a: &Record, b: &Record) -> f64 {
    b.f - a.f + along(b.v, a.x, b.x)
}

/// `−⟨t_a − t_b, x_a − x_b⟩`.
fn negative_coupling(a: &Record, b: &Record) -> f64 {
    -a.v.iter()
        .zip(b.v)
        .zip(a.x.iter().zip(b.x))
        .map(|((ta, tb), (xa, xb))| (ta - tb) * (xa - xb))
        .sum::<f64>()
}

fn function_scale(data: &ExtensionData, l: f64) -> f64 {
    1.0 + data
        .records()
        .map(|r| r.f.abs().max(norm2(r.v)).max(l * norm2(r.x)))
        .fold(0.0, f64::max)
}

fn operator_scale(data: &ExtensionData, w: f64) -> f64 {
    1.0 + data.records().map(|r| norm2(r.v).max(w * w * norm2(r.x))).fold(0.0, f64::max)
}

/// Smooth convex functions in one of the three classical forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothConvexCondition {
    pub l: f64,
    pub variant: SmoothConvexVariant,
}

impl ConditionEvaluator for SmoothConvexCondition {
    fn name(&self) -> String {
        format!("smooth-convex {:?} (L = {})", self.variant, self.l)
    }
    fn kind(&self) -> DatasetKind {
        DatasetKind::Function
    }
    fn arity(&self) -> usize {
        2
    }
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
        let (a, b, l) = (&args[0], &args[1], self.l);
        match self.variant {
            SmoothConvexVariant::P => {
                out.push(tangent(a, b));
                out.push((dist2(a.v, b.v) - l * l * dist2(a.x, b.x)) / (2.0 * l));
            }
            SmoothConvexVariant::Pprime => {
                out.push(tangent(a, b));
                out.push(-tangent(a, b) - 0.5 * l * dist2(a.x, b.x));
            }
            SmoothConvexVariant::Pdoubleprime => out.push(tangent(a, b) + dist2(a.v, b.v) / (2.0 * l)),
        }
    }
    fn box_constant(&self) -> f64 {
        self.l
    }
    fn scale(&self, data: &ExtensionData) -> f64 {
        function_scale(data, self.l)
    }
}

/// The `α`-family: `α`-strengthened convexity plus gradient Lipschitz continuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaCondition {
    pub l: f64,
    pub alpha: f64,
}

impl ConditionEvaluator for AlphaCondition {
    fn name(&self) -> String {
        format!("smooth-convex-alpha (L = {}, alpha = {})", self.l, self.alpha)
    }
    fn kind(&self) -> DatasetKind {
        DatasetKind::Function
    }
    fn arity(&self) -> usize {
        2
    }
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
        let (a, b, l) = (&args[0], &args[1], self.l);
        out.push(tangent(a, b) + self.alpha * dist2(a.v, b.v) / (2.0 * l));
        out.push((dist2(a.v, b.v) - l * l * dist2(a.x, b.x)) / (2.0 * l));
    }
    fn box_constant(&self) -> f64 {
        self.l
    }
    fn scale(&self, data: &ExtensionData) -> f64 {
        function_scale(data, self.l)
    }
}

/// The part of the Łojasiewicz condition that is convex in the extension
/// values: the two-sided smoothness line of each pair and the lower line
/// `f ≥ f⋆ + ‖g‖²/2L` of each record. The upper line `f ≤ f⋆ + ‖g‖²/2μ` is
/// concave in `g` and is left out, so the engine value is a relaxation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LojaCondition {
    pub mu: f64,
    pub l: f64,
    pub f_star: f64,
}

impl ConditionEvaluator for LojaCondition {
    fn name(&self) -> String {
        format!("lojasiewicz convex part (mu = {}, L = {})", self.mu, self.l)
    }
    fn kind(&self) -> DatasetKind {
        DatasetKind::Function
    }
    fn arity(&self) -> usize {
        2
    }
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
        let (a, b, l) = (&args[0], &args[1], self.l);
        let mean_slope: f64 = a
            .v
            .iter()
            .zip(b.v)
            .zip(a.x.iter().zip(b.x))
            .map(|((ga, gb), (xa, xb))| 0.5 * (ga + gb) * (xa - xb))
            .sum();
        out.push(-a.f + b.f + mean_slope + dist2(a.v, b.v) / (4.0 * l) - 0.25 * l * dist2(a.x, b.x));
        for r in [a, b] {
            out.push(self.f_star + norm2(r.v) / (2.0 * l) - r.f);
        }
    }
    fn box_constant(&self) -> f64 {
        self.l
    }
    fn scale(&self, data: &ExtensionData) -> f64 {
        function_scale(data, self.l).max(1.0 + self.f_star.abs())
    }
}

/// Convex functions with blockwise Lipschitz gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockwiseCondition {
    pub partition: Vec<Vec<usize>>,
    pub lvec: Vec<f64>,
}

impl ConditionEvaluator for BlockwiseCondition {
    fn name(&self) -> String {
        format!("blockwise smooth convex ({} blocks)", self.partition.len())
    }
    fn kind(&self) -> DatasetKind {
        DatasetKind::Function
    }
    fn arity(&self) -> usize {
        2
    }
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
        let (a, b) = (&args[0], &args[1]);
        let base = tangent(a, b);
        for (block, &l_m) in self.partition.iter().zip(&self.lvec) {
            let gap: f64 = block.iter().map(|&c| (a.v[c] - b.v[c]).powi(2)).sum();
            out.push(base + gap / (2.0 * l_m));
        }
    }
    fn box_constant(&self) -> f64 {
        self.lvec.iter().cloned().fold(0.0, f64::max)
    }
    fn scale(&self, data: &ExtensionData) -> f64 {
        function_scale(data, self.box_constant())
    }
}

/// Uniformly convex functions of power `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformlyConvexCondition {
    pub mu: f64,
    pub q: f64,
}

impl ConditionEvaluator for UniformlyConvexCondition {
    fn name(&self) -> String {
        format!("uniformly convex (mu = {}, q = {})", self.mu, self.q)
    }
    fn kind(&self) -> DatasetKind {
        DatasetKind::Function
    }
    fn arity(&self) -> usize {
        2
    }
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
        let (a, b) = (&args[0], &args[1]);
        out.push(tangent(a, b) + self.mu / self.q * dist2(a.x, b.x).sqrt().powf(self.q));
    }
    fn box_constant(&self) -> f64 {
        self.mu.max(1.0)
    }
    fn scale(&self, data: &ExtensionData) -> f64 {
        let spread = data.records().map(|r| norm2(r.x).sqrt()).fold(0.0, f64::max);
        function_scale(data, 0.0).max(1.0 + self.mu * (2.0 * spread).powf(self.q))
    }
}

/// `μ`-strongly monotone, `L`-Lipschitz operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneLipschitzCondition {
    pub mu: f64,
    pub l: f64,
}

impl ConditionEvaluator for MonotoneLipschitzCondition {
    fn name(&self) -> String {
        format!("monotone-Lipschitz operator (mu = {}, L = {})", self.mu, self.l)
    }
    fn kind(&self) -> DatasetKind {
        DatasetKind::Operator
    }
    fn arity(&self) -> usize {
        2
    }
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
        let (a, b, l) = (&args[0], &args[1], self.l);
        out.push(negative_coupling(a, b) + self.mu * dist2(a.x, b.x));
        out.push((dist2(a.v, b.v) - l * l * dist2(a.x, b.x)) / (2.0 * l));
    }
    fn box_constant(&self) -> f64 {
        self.l
    }
    fn scale(&self, data: &ExtensionData) -> f64 {
        operator_scale(data, self.l)
    }
}

/// `μ`-strongly monotone, `β`-cocoercive operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocoerciveCondition {
    pub mu: f64,
    pub beta: f64,
}

impl ConditionEvaluator for CocoerciveCondition {
    fn name(&self) -> String {
        format!("cocoercive operator (mu = {}, beta = {})", self.mu, self.beta)
    }
    fn kind(&self) -> DatasetKind {
        DatasetKind::Operator
    }
    fn arity(&self) -> usize {
        2
    }
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
        let (a, b) = (&args[0], &args[1]);
        let coupling = negative_coupling(a, b);
        out.push(coupling + self.mu * dist2(a.x, b.x));
        out.push(coupling + self.beta * dist2(a.v, b.v));
    }
    fn box_constant(&self) -> f64 {
        1.0 / self.beta
    }
    fn scale(&self, data: &ExtensionData) -> f64 {
        operator_scale(data, self.mu.max(1.0 / self.beta).max(1.0))
    }
}

/// `L`-Lipschitz operators, with the Lipschitz line in squared form over `2L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzCondition {
    pub l: f64,
}

impl ConditionEvaluator for LipschitzCondition {
    fn name(&self) -> String {
        format!("Lipschitz operator (L = {})", self.l)
    }
    fn kind(&self) -> DatasetKind {
        DatasetKind::Operator
    }
    fn arity(&self) -> usize {
        2
    }
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
        let (a, b, l) = (&args[0], &args[1], self.l);
        out.push((dist2(a.v, b.v) - l * l * dist2(a.x, b.x)) / (2.0 * l));
    }
    fn box_constant(&self) -> f64 {
        self.l
    }
    fn scale(&self, data: &ExtensionData) -> f64 {
        operator_scale(data, self.l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{
        check_blockwise, check_lojasiewicz, check_operator_cocoercive, check_operator_lipschitz,
        check_operator_monotone_lipschitz, check_smooth_convex, check_uniformly_convex,
    };
    use crate::dataset::{FuncDataset, FuncSample, OpDataset, OpSample, Tolerance};
    use crate::engine::classical_value;
    use crate::strengthened::check_smooth_convex_alpha;
    use rand::{Rng, SeedableRng};

    fn random_func(rng: &mut impl Rng, n: usize, d: usize) -> FuncDataset {
        FuncDataset::new(
            (0..n)
                .map(|_| {
                    let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let f = rng.gen_range(0.0..1.0);
                    let g = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    FuncSample::new(x, f, g)
                })
                .collect(),
        )
        .unwrap()
    }

    fn random_op(rng: &mut impl Rng, n: usize, d: usize) -> OpDataset {
        OpDataset::new(
            (0..n)
                .map(|_| {
                    let x = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let t = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    OpSample::new(x, t)
                })
                .collect(),
        )
        .unwrap()
    }

    /// The data-only part of every evaluator reproduces the library check.
    #[test]
    fn evaluators_match_classical_checks() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let tol = Tolerance::default();
        for _ in 0..40 {
            let ds = random_func(&mut rng, 4, 2);
            let data = ExtensionData::from(&ds);
            let same = |cond: &dyn ConditionEvaluator, expected: f64| {
                assert!((classical_value(&data, cond) - expected).abs() < 1e-12, "{}", cond.name());
            };
            for variant in [SmoothConvexVariant::P, SmoothConvexVariant::Pprime, SmoothConvexVariant::Pdoubleprime] {
                same(&SmoothConvexCondition { l: 1.3, variant }, check_smooth_convex(&ds, 1.3, variant, &tol).unwrap().worst_margin);
            }
            same(&AlphaCondition { l: 1.0, alpha: 0.75 }, check_smooth_convex_alpha(&ds, 1.0, 0.75, &tol).unwrap().worst_margin);
            let part = vec![vec![0], vec![1]];
            same(
                &BlockwiseCondition { partition: part.clone(), lvec: vec![1.0, 2.0] },
                check_blockwise(&ds, &part, &[1.0, 2.0], &tol).unwrap().worst_margin,
            );
            same(&UniformlyConvexCondition { mu: 0.5, q: 3.0 }, check_uniformly_convex(&ds, 0.5, 3.0, &tol).unwrap().worst_margin);
            let loja = check_lojasiewicz(&ds, 0.5, 2.0, -1.0, &tol).unwrap().worst_margin;
            let relaxed = classical_value(&data, &LojaCondition { mu: 0.5, l: 2.0, f_star: -1.0 });
            assert!(relaxed <= loja + 1e-12);

            let ops = random_op(&mut rng, 4, 2);
            let data = ExtensionData::from(&ops);
            let same = |cond: &dyn ConditionEvaluator, expected: f64| {
                assert!((classical_value(&data, cond) - expected).abs() < 1e-12, "{}", cond.name());
            };
            same(&MonotoneLipschitzCondition { mu: 0.2, l: 1.5 }, check_operator_monotone_lipschitz(&ops, 0.2, 1.5, &tol).unwrap().worst_margin);
            same(&CocoerciveCondition { mu: 0.1, beta: 0.8 }, check_operator_cocoercive(&ops, 0.1, 0.8, &tol).unwrap().worst_margin);
            same(&LipschitzCondition { l: 0.7 }, check_operator_lipschitz(&ops, 0.7, &tol).unwrap().worst_margin);
        }
    }
}
