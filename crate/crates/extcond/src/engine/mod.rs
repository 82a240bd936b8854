//! Generic numeric one-point strengthening.
//!
//! For a condition given as a black box on record tuples, the value at a
//! candidate point `z` is
//! `min over extension values u of max over tuples containing z of the constraint values`,
//! where `u = (f_z, g_z)` for function data and `u = t_z` for operator data.
//! The strengthening value is the maximum of that quantity over a box of
//! candidate points. A dataset is one-point extensible when the classical
//! condition holds on the data and the strengthening value is nonpositive up
//! to tolerance.

pub mod evaluators;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{dist, DatasetKind, FuncDataset, OpDataset, Tolerance};
use crate::error::{Error, Result};
use crate::optim::ellipsoid_min;

pub use evaluators::{
    AlphaCondition, BlockwiseCondition, CocoerciveCondition, LipschitzCondition, LojaCondition,
    MonotoneLipschitzCondition, SmoothConvexCondition, UniformlyConvexCondition,
};

/// A record as seen by a condition: point `x`, value `f` (zero for
/// operators) and vector `v`, which is the gradient or the operator value.
#[derive(Debug, Clone, Copy)]
pub struct Record<'a> {
    pub x: &'a [f64],
    pub f: f64,
    pub v: &'a [f64],
}

/// A property of record tuples, given by the left-hand sides of its
/// inequalities (nonpositive means satisfied).
pub trait ConditionEvaluator: Sync {
    fn name(&self) -> String;
    fn kind(&self) -> DatasetKind;
    /// Number of records per tuple.
    fn arity(&self) -> usize;
    /// Appends the left-hand sides for one ordered tuple of records.
    fn evaluate(&self, args: &[Record], out: &mut Vec<f64>);
    /// Whether every left-hand side is jointly convex in the values of any
    /// single record. The engine only accepts convex conditions.
    fn convex_in_extension(&self) -> bool {
        true
    }
    /// Smoothness-like constant used to size the default search box.
    fn box_constant(&self) -> f64;
    /// Magnitude of the data, for relative tolerances.
    fn scale(&self, data: &ExtensionData) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
struct StoredRecord {
    x: Vec<f64>,
    f: f64,
    v: Vec<f64>,
}

/// Dataset in the uniform record form used by the engine.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionData {
    kind: DatasetKind,
    dim: usize,
    records: Vec<StoredRecord>,
}

impl From<&FuncDataset> for ExtensionData {
    fn from(ds: &FuncDataset) -> Self {
        Self {
            kind: DatasetKind::Function,
            dim: ds.d(),
            records: ds
                .samples()
                .iter()
                .map(|s| StoredRecord { x: s.x.clone(), f: s.f, v: s.g.clone() })
                .collect(),
        }
    }
}

impl From<&OpDataset> for ExtensionData {
    fn from(ds: &OpDataset) -> Self {
        Self {
            kind: DatasetKind::Operator,
            dim: ds.d(),
            records: ds
                .samples()
                .iter()
                .map(|s| StoredRecord { x: s.x.clone(), f: 0.0, v: s.t.clone() })
                .collect(),
        }
    }
}

impl ExtensionData {
    pub fn kind(&self) -> DatasetKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn record(&self, i: usize) -> Record<'_> {
        let r = &self.records[i];
        Record { x: &r.x, f: r.f, v: &r.v }
    }

    pub fn records(&self) -> impl Iterator<Item = Record<'_>> {
        (0..self.len()).map(|i| self.record(i))
    }

    /// Number of unknowns attached to a new point.
    pub fn extension_dim(&self) -> usize {
        match self.kind {
            DatasetKind::Function => self.dim + 1,
            DatasetKind::Operator => self.dim,
        }
    }

    /// The record at `z` with extension values `u`.
    fn candidate<'a>(&self, z: &'a [f64], u: &'a [f64]) -> Record<'a> {
        match self.kind {
            DatasetKind::Function => Record { x: z, f: u[0], v: &u[1..] },
            DatasetKind::Operator => Record { x: z, f: 0.0, v: u },
        }
    }

    fn stored_values(&self, i: usize) -> Vec<f64> {
        let r = &self.records[i];
        match self.kind {
            DatasetKind::Function => std::iter::once(r.f).chain(r.v.iter().copied()).collect(),
            DatasetKind::Operator => r.v.clone(),
        }
    }
}

/// Ordered tuples of distinct entries; `None` stands for the new point and
/// appears exactly once when `with_candidate` is set, never otherwise.
fn tuples(n: usize, arity: usize, with_candidate: bool) -> Vec<Vec<Option<usize>>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(arity);
    fn extend(
        n: usize,
        arity: usize,
        with_candidate: bool,
        current: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if current.len() == arity {
            if current.contains(&None) == with_candidate {
                out.push(current.clone());
            }
            return;
        }
        let options = (0..n).map(Some).chain(with_candidate.then_some(None));
        for option in options {
            if !current.contains(&option) {
                current.push(option);
                extend(n, arity, with_candidate, current, out);
                current.pop();
            }
        }
    }
    extend(n, arity, with_candidate, &mut current, &mut out);
    out
}

fn check_compatible(data: &ExtensionData, cond: &dyn ConditionEvaluator) -> Result<()> {
    if data.kind() != cond.kind() {
        return Err(Error::KindMismatch {
            expected: cond.kind().to_string(),
            found: data.kind().to_string(),
        });
    }
    if !cond.convex_in_extension() {
        return Err(Error::Unsupported(format!("{} is not convex in the extension values", cond.name())));
    }
    if data.is_empty() {
        return Err(Error::Empty);
    }
    Ok(())
}

/// Largest left-hand side over tuples of data records only, `−∞` when there
/// are fewer records than the arity.
pub fn classical_value(data: &ExtensionData, cond: &dyn ConditionEvaluator) -> f64 {
    let mut out = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for tuple in tuples(data.len(), cond.arity(), false) {
        let args: Vec<Record> = tuple.iter().map(|i| data.record(i.expect("data tuple"))).collect();
        out.clear();
        cond.evaluate(&args, &mut out);
        worst = out.iter().copied().fold(worst, f64::max);
    }
    worst
}

/// Settings of the inner convex minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerOptions {
    /// Cap on ellipsoid cuts per restart.
    pub max_iter: usize,
    /// Target gap between the best value and the certified lower bound,
    /// relative to the data scale.
    pub gap_tol: f64,
}

impl Default for InnerOptions {
    fn default() -> Self {
        Self { max_iter: 5000, gap_tol: 1e-9 }
    }
}

/// Inner minimum at one candidate point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionValue {
    /// Best (smallest) worst-constraint value found.
    pub value: f64,
    /// Certified lower bound on the minimum.
    pub lower_bound: f64,
    /// Extension values attaining `value`: `(f_z, g_z)` or `t_z`.
    pub extension: Vec<f64>,
}

/// Worst constraint over tuples containing the candidate, with the position
/// of the active constraint.
fn worst_constraint(
    data: &ExtensionData,
    cond: &dyn ConditionEvaluator,
    tuples: &[Vec<Option<usize>>],
    z: &[f64],
    u: &[f64],
) -> (f64, usize, usize) {
    let mut out = Vec::new();
    let mut worst = (f64::NEG_INFINITY, 0, 0);
    for (t, tuple) in tuples.iter().enumerate() {
        out.clear();
        evaluate_tuple(data, cond, tuple, z, u, &mut out);
        for (c, &v) in out.iter().enumerate() {
            if v > worst.0 || v.is_nan() {
                worst = (if v.is_nan() { f64::INFINITY } else { v }, t, c);
            }
        }
    }
    worst
}

fn evaluate_tuple(
    data: &ExtensionData,
    cond: &dyn ConditionEvaluator,
    tuple: &[Option<usize>],
    z: &[f64],
    u: &[f64],
    out: &mut Vec<f64>,
) {
    let args: Vec<Record> = tuple
        .iter()
        .map(|slot| match slot {
            Some(i) => data.record(*i),
            None => data.candidate(z, u),
        })
        .collect();
    cond.evaluate(&args, out);
}

/// Early exit for yes/no questions: stop once the minimum is known to lie
/// above `threshold`, or below it to within `resolution`.
#[derive(Debug, Clone, Copy)]
struct Decision {
    threshold: f64,
    resolution: f64,
}

impl Decision {
    fn settled(&self, value: f64, lower: f64) -> bool {
        lower > self.threshold || (value <= self.threshold && value - lower <= self.resolution)
    }
}

fn inner_solve(
    data: &ExtensionData,
    cond: &dyn ConditionEvaluator,
    z: &[f64],
    opts: &InnerOptions,
    decide: Option<Decision>,
) -> Result<ExtensionValue> {
    check_compatible(data, cond)?;
    if z.len() != data.dim() {
        return Err(Error::Validation(format!("candidate has dimension {}, data has {}", z.len(), data.dim())));
    }
    let candidate_tuples = tuples(data.len(), cond.arity(), true);
    let n = data.extension_dim();
    let scale = cond.scale(data);
    let l = cond.box_constant().max(1e-12);

    let values: Vec<Vec<f64>> = (0..data.len()).map(|i| data.stored_values(i)).collect();
    let mut center = vec![0.0; n];
    for v in &values {
        center.iter_mut().zip(v).for_each(|(c, x)| *c += x / values.len() as f64);
    }
    let spread = values.iter().map(|v| dist(v, &center)).fold(0.0, f64::max);
    let reach = data
        .records()
        .map(|r| {
            let gap = dist(r.x, z);
            (crate::dataset::norm2(r.v).sqrt() + l * gap) * gap + l * gap
        })
        .fold(0.0, f64::max);
    let mut radius = 10.0 * (1.0 + spread + reach);
    let limit = 1e6 * scale.max(1.0 + spread + reach);

    let objective = |u: &[f64]| -> (f64, Vec<f64>) {
        let (value, t, c) = worst_constraint(data, cond, &candidate_tuples, z, u);
        let mut grad = vec![0.0; n];
        let mut probe = u.to_vec();
        let mut out = Vec::new();
        for k in 0..n {
            let h = 1e-6 * (1.0 + u[k].abs());
            let mut side = |delta: f64| {
                probe[k] = u[k] + delta;
                out.clear();
                evaluate_tuple(data, cond, &candidate_tuples[t], z, &probe, &mut out);
                out[c]
            };
            let (plus, minus) = (side(h), side(-h));
            probe[k] = u[k];
            grad[k] = (plus - minus) / (2.0 * h);
        }
        (value, grad)
    };

    let gap_tol = opts.gap_tol * scale;
    loop {
        let result = ellipsoid_min(objective, &center, radius, opts.max_iter, gap_tol, |value, lower| {
            decide.is_some_and(|d| d.settled(value, lower))
        });
        if !result.value.is_finite() && result.value.is_sign_positive() {
            return Err(Error::Divergence(format!("{} produced no finite value at z = {z:?}", cond.name())));
        }
        let travelled = dist(&result.x, &center);
        if travelled <= 0.5 * radius {
            return Ok(ExtensionValue {
                value: result.value,
                lower_bound: result.lower_bound,
                extension: result.x,
            });
        }
        radius *= 4.0;
        center = result.x;
        if radius > limit || center.iter().any(|v| v.abs() > limit) {
            return Err(Error::Divergence(format!(
                "extension values for {} left the ball of radius {limit:e} at z = {z:?}",
                cond.name()
            )));
        }
    }
}

/// Minimum over extension values at `z` of the worst constraint among tuples
/// that contain `z`.
pub fn inner_extension_value(data: &ExtensionData, cond: &dyn ConditionEvaluator, z: &[f64]) -> Result<ExtensionValue> {
    inner_solve(data, cond, z, &InnerOptions::default(), None)
}

/// Axis-aligned box of candidate points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SearchBox {
    /// Bounding box of the data points, inflated on every side by
    /// `max(1, max‖v_i‖/L)` with `L` the condition's box constant.
    pub fn around(data: &ExtensionData, cond: &dyn ConditionEvaluator) -> Self {
        let d = data.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        let mut largest = 0.0f64;
        for r in data.records() {
            for k in 0..d {
                lo[k] = lo[k].min(r.x[k]);
                hi[k] = hi[k].max(r.x[k]);
            }
            largest = largest.max(crate::dataset::norm2(r.v).sqrt());
        }
        let pad = (largest / cond.box_constant().max(1e-12)).max(1.0);
        Self {
            lo: lo.iter().map(|v| v - pad).collect(),
            hi: hi.iter().map(|v| v + pad).collect(),
        }
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        z.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a <= v && v <= b)
    }

    fn clamp(&self, z: &mut [f64]) {
        for (v, (a, b)) in z.iter_mut().zip(self.lo.iter().zip(&self.hi)) {
            *v = v.clamp(*a, *b);
        }
    }

    /// Regular grid with `per_axis` points per axis, in lexicographic order.
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let d = self.lo.len();
        let per_axis = per_axis.max(1);
        let coordinate = |k: usize, i: usize| {
            if per_axis == 1 {
                0.5 * (self.lo[k] + self.hi[k])
            } else {
                self.lo[k] + (self.hi[k] - self.lo[k]) * i as f64 / (per_axis - 1) as f64
            }
        };
        let total = per_axis.pow(d as u32);
        (0..total)
            .map(|mut index| {
                let mut z = vec![0.0; d];
                for k in (0..d).rev() {
                    z[k] = coordinate(k, index % per_axis);
                    index /= per_axis;
                }
                z
            })
            .collect()
    }
}

/// Settings of the outer search over candidate points.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengtheningOptions {
    pub grid_per_axis: usize,
    /// Defaults to [`SearchBox::around`].
    pub search_box: Option<SearchBox>,
    /// Extra candidates evaluated and refined alongside the grid.
    pub warm_starts: Vec<Vec<f64>>,
    /// Coordinate-search refinement around the best candidates.
    pub refine: bool,
    pub inner: InnerOptions,
}

impl Default for StrengtheningOptions {
    fn default() -> Self {
        Self {
            grid_per_axis: 33,
            search_box: None,
            warm_starts: Vec::new(),
            refine: true,
            inner: InnerOptions::default(),
        }
    }
}

/// Result of the outer maximization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrengtheningValue {
    /// Largest inner value found over the candidates.
    pub value: f64,
    pub argmax: Vec<f64>,
    /// Worst constraint among data-only tuples.
    pub classical: f64,
    /// Number of inner solves performed.
    pub evaluations: usize,
}

impl StrengtheningValue {
    /// The strengthened condition's worst margin: data-only and
    /// candidate-containing tuples together.
    pub fn margin(&self) -> f64 {
        self.value.max(self.classical)
    }
}

struct Search<'a> {
    data: &'a ExtensionData,
    cond: &'a dyn ConditionEvaluator,
    opts: &'a StrengtheningOptions,
    decide: Option<Decision>,
}

impl Search<'_> {
    fn value(&self, z: &[f64]) -> Result<f64> {
        inner_solve(self.data, self.cond, z, &self.opts.inner, self.decide).map(|r| r.value)
    }

    fn decided(&self, value: f64) -> bool {
        self.decide.is_some_and(|d| value > d.threshold)
    }

    /// Compass search from `start`, halving the step when no axis improves.
    fn refine(&self, bounds: &SearchBox, start: Vec<f64>, start_value: f64, step: &[f64]) -> Result<(Vec<f64>, f64, usize)> {
        let (mut z, mut best) = (start, start_value);
        let mut step = step.to_vec();
        let initial: Vec<f64> = step.clone();
        let mut evaluations = 0;
        while step.iter().zip(&initial).any(|(s, s0)| *s > 1e-4 * s0) && evaluations < 400 {
            let mut improved = false;
            for k in 0..z.len() {
                for sign in [1.0, -1.0] {
                    let mut trial = z.clone();
                    trial[k] += sign * step[k];
                    bounds.clamp(&mut trial);
                    if trial == z {
                        continue;
                    }
                    let v = self.value(&trial)?;
                    evaluations += 1;
                    if v > best {
                        best = v;
                        z = trial;
                        improved = true;
                        if self.decided(best) {
                            return Ok((z, best, evaluations));
                        }
                        break;
                    }
                }
            }
            if !improved {
                step.iter_mut().for_each(|s| *s *= 0.5);
            }
        }
        Ok((z, best, evaluations))
    }

    fn run(&self) -> Result<StrengtheningValue> {
        check_compatible(self.data, self.cond)?;
        let bounds = self.opts.search_box.clone().unwrap_or_else(|| SearchBox::around(self.data, self.cond));
        if bounds.lo.len() != self.data.dim() || bounds.hi.len() != self.data.dim() {
            return Err(Error::Validation("search box dimension differs from the data".into()));
        }
        let classical = classical_value(self.data, self.cond);
        let mut candidates = bounds.grid(self.opts.grid_per_axis);
        let grid_len = candidates.len();
        for w in &self.opts.warm_starts {
            if w.len() != self.data.dim() {
                return Err(Error::Validation("warm start dimension differs from the data".into()));
            }
            candidates.push(w.clone());
        }
        let values: Vec<f64> = candidates.par_iter().map(|z| self.value(z)).collect::<Result<_>>()?;
        let mut evaluations = candidates.len();
        let best_index = (0..values.len()).fold(0, |b, i| if values[i] > values[b] { i } else { b });
        let (mut argmax, mut value) = (candidates[best_index].clone(), values[best_index]);
        if self.opts.refine && !self.decided(value) {
            let cells = self.opts.grid_per_axis.max(2) - 1;
            let step: Vec<f64> = bounds.lo.iter().zip(&bounds.hi).map(|(a, b)| (b - a) / cells as f64).collect();
            let mut starts: Vec<usize> = (0..grid_len).collect();
            starts.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
            starts.truncate(3);
            starts.extend(grid_len..candidates.len());
            let refined: Vec<(Vec<f64>, f64, usize)> = starts
                .par_iter()
                .map(|&i| {
                    let fine: Vec<f64> = if i >= grid_len { step.iter().map(|s| 0.25 * s).collect() } else { step.clone() };
                    self.refine(&bounds, candidates[i].clone(), values[i], &fine)
                })
                .collect::<Result<_>>()?;
            for (z, v, count) in refined {
                evaluations += count;
                if v > value {
                    value = v;
                    argmax = z;
                }
            }
        }
        Ok(StrengtheningValue { value, argmax, classical, evaluations })
    }
}

/// Maximum over candidate points of [`inner_extension_value`], by grid
/// search plus refinement.
pub fn strengthening_value(
    data: &ExtensionData,
    cond: &dyn ConditionEvaluator,
    opts: &StrengtheningOptions,
) -> Result<StrengtheningValue> {
    Search { data, cond, opts, decide: None }.run()
}

/// True iff the data satisfy the condition and every candidate point in the
/// search admits extension values within tolerance. Inner solves stop as
/// soon as their side of the threshold is settled, so candidates are ranked
/// for refinement by values accurate to `1e-4·scale` only.
pub fn verify_one_point_extensible(
    data: &ExtensionData,
    cond: &dyn ConditionEvaluator,
    opts: &StrengtheningOptions,
    tol: &Tolerance,
) -> Result<bool> {
    check_compatible(data, cond)?;
    let scale = cond.scale(data);
    let threshold = tol.threshold(scale);
    if classical_value(data, cond) > threshold {
        return Ok(false);
    }
    let decide = Decision { threshold, resolution: 1e-4 * scale };
    let result = Search { data, cond, opts, decide: Some(decide) }.run()?;
    Ok(result.value <= threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FuncSample, OpSample, SmoothConvexVariant};
    use crate::optim::golden_section_max;
    use rand::{Rng, SeedableRng};

    #[test]
    fn tuple_enumeration() {
        assert_eq!(tuples(3, 2, true).len(), 6);
        assert_eq!(tuples(3, 2, false).len(), 6);
        assert_eq!(tuples(3, 3, true).len(), 18);
        assert!(tuples(1, 2, false).is_empty());
    }

    #[test]
    fn grid_is_lexicographic() {
        let b = SearchBox { lo: vec![0.0, -1.0], hi: vec![1.0, 1.0] };
        let g = b.grid(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[1], vec![0.0, 0.0]);
        assert_eq!(g[3], vec![0.5, -1.0]);
    }

    fn pair(f2: f64, g2: f64) -> FuncDataset {
        FuncDataset::new(vec![FuncSample::new(vec![0.0], 0.0, vec![1.0]), FuncSample::new(vec![1.0], f2, vec![g2])]).unwrap()
    }

    #[test]
    fn candidate_on_data_point_is_not_worse_than_data() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let cond = SmoothConvexCondition { l: 1.0, variant: SmoothConvexVariant::Pdoubleprime };
        for _ in 0..20 {
            let ds = pair(rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5));
            let data = ExtensionData::from(&ds);
            if classical_value(&data, &cond) > 0.0 {
                continue;
            }
            for i in 0..2 {
                let r = inner_extension_value(&data, &cond, &ds.sample(i).x).unwrap();
                assert!(r.value <= 1e-8, "{r:?}");
            }
        }
    }

    #[test]
    fn upper_bound_form_is_strengthened_to_cocoercive_form() {
        // p′ (convexity plus quadratic upper bound) holds but p″ fails; the
        // worst candidate is x₁ + (g₂ − g₁)/L.
        let ds = pair(1.31, 1.8);
        let data = ExtensionData::from(&ds);
        let weak = SmoothConvexCondition { l: 1.0, variant: SmoothConvexVariant::Pprime };
        let strong = SmoothConvexCondition { l: 1.0, variant: SmoothConvexVariant::Pdoubleprime };
        assert!(classical_value(&data, &weak) <= 0.0);
        let target = classical_value(&data, &strong);
        assert!(target > 0.0);
        // The optimal dual weights are one half on each active line, so the
        // inner value at x₂ + (g₁ − g₂)/L is half the violated p″ line.
        let r = inner_extension_value(&data, &weak, &[0.2]).unwrap();
        assert!((r.value - 0.5 * target).abs() < 1e-7, "{} vs {target}", r.value);
        let s = strengthening_value(&data, &weak, &StrengtheningOptions::default()).unwrap();
        assert!(s.value >= r.value - 1e-9);
        assert!(!verify_one_point_extensible(&data, &weak, &StrengtheningOptions::default(), &Tolerance::default()).unwrap());
    }

    #[test]
    fn lipschitz_pair_reduces_to_one_dimension() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let cond = LipschitzCondition { l: 1.0 };
        for _ in 0..20 {
            let ds = OpDataset::new(
                (0..2)
                    .map(|_| OpSample::new((0..2).map(|_| rng.gen_range(-1.0..1.0)).collect(), (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect()))
                    .collect(),
            )
            .unwrap();
            let data = ExtensionData::from(&ds);
            let z: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let (a, b) = (ds.sample(0), ds.sample(1));
            let reach = [dist(&a.x, &z).powi(2), dist(&b.x, &z).powi(2)];
            let span = dist(&a.t, &b.t);
            // On the segment from t₁ to t₂ at distance s from t₁.
            let (_, neg) = golden_section_max(
                |s| -f64::max(s * s - reach[0], (span - s).powi(2) - reach[1]) / 2.0,
                -span - 5.0,
                2.0 * span + 5.0,
                200,
            );
            let r = inner_extension_value(&data, &cond, &z).unwrap();
            assert!((r.value + neg).abs() < 1e-7, "{} vs {}", r.value, -neg);
        }
    }

    #[test]
    fn example38_has_no_extension() {
        let ds = OpDataset::new(vec![
            OpSample::new(vec![0.0, 0.0], vec![0.0, 0.0]),
            OpSample::new(vec![1.0, 0.0], vec![0.0, 0.0]),
            OpSample::new(vec![0.5, 0.0], vec![0.0, -0.5]),
        ])
        .unwrap();
        let data = ExtensionData::from(&ds);
        let cond = MonotoneLipschitzCondition { mu: 0.0, l: 1.0 };
        assert!(classical_value(&data, &cond) <= 0.0);
        let opts = StrengtheningOptions { grid_per_axis: 17, ..Default::default() };
        assert!(!verify_one_point_extensible(&data, &cond, &opts, &Tolerance::default()).unwrap());
    }

    #[test]
    fn example33_has_no_extension() {
        let ds = FuncDataset::new(vec![
            FuncSample::new(vec![-1.0, 0.0], 0.5, vec![-1.0, 0.0]),
            FuncSample::new(vec![1.0, 0.0], 0.5, vec![1.0, 0.0]),
            FuncSample::new(vec![0.0, 0.0], 0.0, vec![0.0, -1.0]),
        ])
        .unwrap();
        let data = ExtensionData::from(&ds);
        let cond = BlockwiseCondition { partition: vec![vec![0], vec![1]], lvec: vec![1.0, 1.0] };
        assert!(classical_value(&data, &cond) <= 0.0);
        let opts = StrengtheningOptions { grid_per_axis: 17, ..Default::default() };
        assert!(!verify_one_point_extensible(&data, &cond, &opts, &Tolerance::default()).unwrap());
    }

    #[test]
    fn single_record_is_always_extensible() {
        let ds = FuncDataset::new(vec![FuncSample::new(vec![0.3, -0.2], 1.0, vec![0.5, 0.5])]).unwrap();
        let data = ExtensionData::from(&ds);
        let cond = SmoothConvexCondition { l: 2.0, variant: SmoothConvexVariant::P };
        let opts = StrengtheningOptions { grid_per_axis: 5, ..Default::default() };
        assert!(verify_one_point_extensible(&data, &cond, &opts, &Tolerance::default()).unwrap());
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let ds = pair(1.0, 1.0);
        let data = ExtensionData::from(&ds);
        assert!(matches!(inner_extension_value(&data, &LipschitzCondition { l: 1.0 }, &[0.0]), Err(Error::KindMismatch { .. })));
    }

    struct Unbounded;

    impl ConditionEvaluator for Unbounded {
        fn name(&self) -> String {
            "unbounded".into()
        }
        fn kind(&self) -> DatasetKind {
            DatasetKind::Operator
        }
        fn arity(&self) -> usize {
            2
        }
        fn evaluate(&self, args: &[Record], out: &mut Vec<f64>) {
            out.push(args[0].v[0] + args[1].v[0]);
        }
        fn box_constant(&self) -> f64 {
            1.0
        }
        fn scale(&self, _: &ExtensionData) -> f64 {
            1.0
        }
    }

    #[test]
    fn unbounded_evaluator_trips_divergence_guard() {
        let ds = OpDataset::new(vec![OpSample::new(vec![0.0], vec![0.0]), OpSample::new(vec![1.0], vec![0.0])]).unwrap();
        let data = ExtensionData::from(&ds);
        assert!(matches!(inner_extension_value(&data, &Unbounded, &[0.5]), Err(Error::Divergence(_))));
    }
}
