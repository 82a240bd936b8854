//! Dataset model shared by every checker: samples, class parameters,
//! verdicts, tolerances, domains and JSON file IO.

use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A function record `(x, f, g)` with `g` a candidate (sub)gradient at `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuncSample {
    pub x: Vec<f64>,
    pub f: f64,
    pub g: Vec<f64>,
}

/// An operator record `(x, t)` with `t` a candidate value of the operator at `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpSample {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
}

impl FuncSample {
    pub fn new(x: Vec<f64>, f: f64, g: Vec<f64>) -> Self {
        Self { x, f, g }
    }
}

impl OpSample {
    pub fn new(x: Vec<f64>, t: Vec<f64>) -> Self {
        Self { x, t }
    }
}

/// Finite list of function records in dimension `d`. Repeated `x` rows encode
/// a multivalued subdifferential.
#[derive(Debug, Clone, PartialEq)]
pub struct FuncDataset {
    d: usize,
    samples: Vec<FuncSample>,
}

/// Finite list of operator records in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpDataset {
    d: usize,
    samples: Vec<OpSample>,
}

fn check_vec(v: &[f64], d: usize, row: usize, field: &str) -> Result<()> {
    if v.len() != d {
        return Err(Error::DimensionMismatch {
            row,
            field: field.to_string(),
            expected: d,
            found: v.len(),
        });
    }
    if let Some(bad) = v.iter().find(|e| !e.is_finite()) {
        return Err(Error::NonFinite {
            row,
            field: format!("{field} ({bad})"),
        });
    }
    Ok(())
}

impl FuncDataset {
    /// Builds a dataset, inferring `d` from the first sample.
    pub fn new(samples: Vec<FuncSample>) -> Result<Self> {
        let d = samples.first().ok_or(Error::Empty)?.x.len();
        if d == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        for (row, s) in samples.iter().enumerate() {
            check_vec(&s.x, d, row, "x")?;
            check_vec(&s.g, d, row, "g")?;
            if !s.f.is_finite() {
                return Err(Error::NonFinite { row, field: "f".into() });
            }
        }
        Ok(Self { d, samples })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[FuncSample] {
        &self.samples
    }

    pub fn sample(&self, i: usize) -> &FuncSample {
        &self.samples[i]
    }

    /// Tolerance scale `1 + max_i max(|f_i|, ‖g_i‖², L‖x_i‖²)`.
    pub fn scale(&self, l: f64) -> f64 {
        1.0 + self
            .samples
            .iter()
            .map(|s| s.f.abs().max(norm2(&s.g)).max(l * norm2(&s.x)))
            .fold(0.0, f64::max)
    }

    /// Returns a copy restricted to the given rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        Self::new(rows.iter().map(|&i| self.samples[i].clone()).collect())
    }
}

impl OpDataset {
    pub fn new(samples: Vec<OpSample>) -> Result<Self> {
        let d = samples.first().ok_or(Error::Empty)?.x.len();
        if d == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        for (row, s) in samples.iter().enumerate() {
            check_vec(&s.x, d, row, "x")?;
            check_vec(&s.t, d, row, "t")?;
        }
        Ok(Self { d, samples })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[OpSample] {
        &self.samples
    }

    pub fn sample(&self, i: usize) -> &OpSample {
        &self.samples[i]
    }

    /// Tolerance scale `1 + max_i max(‖t_i‖², w²‖x_i‖²)` for a curvature weight `w`.
    pub fn scale(&self, w: f64) -> f64 {
        1.0 + self
            .samples
            .iter()
            .map(|s| norm2(&s.t).max(w * w * norm2(&s.x)))
            .fold(0.0, f64::max)
    }

    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        Self::new(rows.iter().map(|&i| self.samples[i].clone()).collect())
    }
}

/// Either kind of dataset, as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Function(FuncDataset),
    Operator(OpDataset),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Function,
    Operator,
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetKind::Function => "function",
            DatasetKind::Operator => "operator",
        })
    }
}

impl Dataset {
    pub fn kind(&self) -> DatasetKind {
        match self {
            Dataset::Function(_) => DatasetKind::Function,
            Dataset::Operator(_) => DatasetKind::Operator,
        }
    }

    pub fn d(&self) -> usize {
        match self {
            Dataset::Function(ds) => ds.d(),
            Dataset::Operator(ds) => ds.d(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Dataset::Function(ds) => ds.len(),
            Dataset::Operator(ds) => ds.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_function(&self) -> Result<&FuncDataset> {
        match self {
            Dataset::Function(ds) => Ok(ds),
            Dataset::Operator(_) => Err(Error::KindMismatch {
                expected: DatasetKind::Function.to_string(),
                found: DatasetKind::Operator.to_string(),
            }),
        }
    }

    pub fn as_operator(&self) -> Result<&OpDataset> {
        match self {
            Dataset::Operator(ds) => Ok(ds),
            Dataset::Function(_) => Err(Error::KindMismatch {
                expected: DatasetKind::Operator.to_string(),
                found: DatasetKind::Function.to_string(),
            }),
        }
    }

    /// Parses the JSON dataset schema. `expect` rejects the other kind.
    pub fn from_json_str(text: &str, expect: Option<DatasetKind>) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&value, expect)
    }

    pub fn from_json_value(value: &Value, expect: Option<DatasetKind>) -> Result<Self> {
        let kind = match value.get("kind").and_then(Value::as_str) {
            Some("function") => DatasetKind::Function,
            Some("operator") => DatasetKind::Operator,
            Some(other) => return Err(Error::Parse(format!("unknown dataset kind `{other}`"))),
            None => return Err(Error::Parse("missing string field `kind`".into())),
        };
        if let Some(expected) = expect {
            if expected != kind {
                return Err(Error::KindMismatch {
                    expected: expected.to_string(),
                    found: kind.to_string(),
                });
            }
        }
        let samples = value
            .get("samples")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `samples`".into()))?;
        if samples.is_empty() {
            return Err(Error::Empty);
        }
        let ds = match kind {
            DatasetKind::Function => {
                let parsed = samples
                    .iter()
                    .enumerate()
                    .map(|(row, s)| {
                        serde_json::from_value::<FuncSample>(s.clone())
                            .map_err(|e| Error::Parse(format!("sample {row}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Dataset::Function(FuncDataset::new(parsed)?)
            }
            DatasetKind::Operator => {
                let parsed = samples
                    .iter()
                    .enumerate()
                    .map(|(row, s)| {
                        serde_json::from_value::<OpSample>(s.clone())
                            .map_err(|e| Error::Parse(format!("sample {row}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Dataset::Operator(OpDataset::new(parsed)?)
            }
        };
        if let Some(d) = value.get("d") {
            let declared = d
                .as_u64()
                .ok_or_else(|| Error::Parse("field `d` must be a positive integer".into()))?;
            if declared as usize != ds.d() {
                return Err(Error::DimensionMismatch {
                    row: 0,
                    field: "d".into(),
                    expected: declared as usize,
                    found: ds.d(),
                });
            }
        }
        Ok(ds)
    }

    pub fn to_json_value(&self) -> Value {
        match self {
            Dataset::Function(ds) => json!({
                "kind": "function",
                "d": ds.d(),
                "samples": ds.samples(),
            }),
            Dataset::Operator(ds) => json!({
                "kind": "operator",
                "d": ds.d(),
                "samples": ds.samples(),
            }),
        }
    }

    /// Canonical text encoding: shortest round-trip decimals, two-space indent.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("dataset serializes")
    }
}

/// Reads and validates a dataset file.
pub fn load_dataset(path: impl AsRef<Path>, expect: Option<DatasetKind>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Dataset::from_json_str(&text, expect)
}

pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, ds.to_json_string() + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Gram matrix of `[x_1, …, x_N, v_1, …, v_N]` where `v` is `g` or `t`.
pub fn gram(ds: &Dataset) -> DMatrix<f64> {
    let vectors: Vec<&[f64]> = match ds {
        Dataset::Function(fd) => fd
            .samples()
            .iter()
            .map(|s| s.x.as_slice())
            .chain(fd.samples().iter().map(|s| s.g.as_slice()))
            .collect(),
        Dataset::Operator(od) => od
            .samples()
            .iter()
            .map(|s| s.x.as_slice())
            .chain(od.samples().iter().map(|s| s.t.as_slice()))
            .collect(),
    };
    let n = vectors.len();
    DMatrix::from_fn(n, n, |i, j| dot(vectors[i], vectors[j]))
}

/// Variants of the smooth convex interpolation condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothConvexVariant {
    /// Convexity plus gradient Lipschitz continuity.
    P,
    /// Convexity plus the quadratic upper bound.
    Pprime,
    /// The single cocoercivity-form inequality.
    Pdoubleprime,
}

/// Open convex domain used by the constrained smooth convex check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// `{y : a_k·y < b_k for all k}`.
    HalfspaceIntersection(Vec<(Vec<f64>, f64)>),
    Ball { center: Vec<f64>, radius: f64 },
}

impl Domain {
    /// Distance from an interior point `y` to the complement of the domain.
    /// Nonpositive values mean `y` is not in the open domain.
    pub fn dist_to_complement(&self, y: &[f64]) -> f64 {
        match self {
            Domain::Ball { center, radius } => radius - dist(y, center),
            Domain::HalfspaceIntersection(faces) => faces
                .iter()
                .map(|(a, b)| (b - dot(a, y)) / norm2(a).sqrt())
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.dist_to_complement(y) > 0.0
    }

    pub(crate) fn validate(&self, d: usize) -> Result<()> {
        match self {
            Domain::Ball { center, radius } => {
                if center.len() != d {
                    return Err(Error::Validation(format!("ball center has length {}, expected {d}", center.len())));
                }
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::Validation("ball radius must be positive and finite".into()));
                }
            }
            Domain::HalfspaceIntersection(faces) => {
                if faces.is_empty() {
                    return Err(Error::Validation("halfspace domain needs at least one face".into()));
                }
                for (a, b) in faces {
                    if a.len() != d || norm2(a) == 0.0 || !b.is_finite() {
                        return Err(Error::Validation("halfspace normal must be nonzero with length d".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Class parameters for every supported condition family.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassSpec {
    SmoothConvex { l: f64, variant: SmoothConvexVariant },
    SmoothConvexAlpha { l: f64, alpha: f64 },
    Lojasiewicz { mu: f64, l: f64, f_star: f64 },
    /// Zero-based coordinate blocks with one smoothness constant each.
    BlockwiseSmooth { partition: Vec<Vec<usize>>, lvec: Vec<f64> },
    MonotoneLipschitzOp { mu: f64, l: f64 },
    CocoerciveOp { mu: f64, beta: f64 },
    UniformlyConvex { mu: f64, q: f64 },
    LipschitzOp { l: f64 },
    ConstrainedSmoothConvex { l: f64, domain: Domain },
}

impl ClassSpec {
    pub fn kind(&self) -> DatasetKind {
        match self {
            ClassSpec::MonotoneLipschitzOp { .. } | ClassSpec::CocoerciveOp { .. } | ClassSpec::LipschitzOp { .. } => {
                DatasetKind::Operator
            }
            _ => DatasetKind::Function,
        }
    }

    /// Checks the parameter ranges on their own, independent of any data.
    pub fn validate_params(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let nonneg = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be nonnegative and finite, got {v}")))
            }
        };
        match self {
            ClassSpec::SmoothConvex { l, .. } | ClassSpec::LipschitzOp { l } => positive("L", *l),
            ClassSpec::ConstrainedSmoothConvex { l, .. } => positive("L", *l),
            ClassSpec::SmoothConvexAlpha { l, alpha } => {
                positive("L", *l)?;
                if (0.0..=1.0).contains(alpha) {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("alpha must lie in [0, 1], got {alpha}")))
                }
            }
            ClassSpec::Lojasiewicz { mu, l, f_star } => {
                positive("L", *l)?;
                nonneg("mu", *mu)?;
                if mu > l {
                    return Err(Error::Parameter(format!("mu = {mu} exceeds L = {l}")));
                }
                if !f_star.is_finite() {
                    return Err(Error::Parameter("f_star must be finite".into()));
                }
                Ok(())
            }
            ClassSpec::MonotoneLipschitzOp { mu, l } => {
                positive("L", *l)?;
                nonneg("mu", *mu)?;
                if mu > l {
                    return Err(Error::Parameter(format!("mu = {mu} exceeds L = {l}")));
                }
                Ok(())
            }
            ClassSpec::CocoerciveOp { mu, beta } => {
                nonneg("mu", *mu)?;
                positive("beta", *beta)
            }
            ClassSpec::UniformlyConvex { mu, q } => {
                nonneg("mu", *mu)?;
                if *q >= 2.0 && q.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("q must be at least 2, got {q}")))
                }
            }
            ClassSpec::BlockwiseSmooth { partition, lvec } => {
                if partition.is_empty() || partition.len() != lvec.len() {
                    return Err(Error::Parameter(format!(
                        "{} blocks but {} smoothness constants",
                        partition.len(),
                        lvec.len()
                    )));
                }
                lvec.iter().try_for_each(|&l| positive("L_m", l))
            }
        }
    }

    /// Checks that the block partition covers `0..d` exactly once.
    pub fn validate_partition(partition: &[Vec<usize>], d: usize) -> Result<()> {
        let mut seen = vec![false; d];
        for block in partition {
            if block.is_empty() {
                return Err(Error::Partition("empty block".into()));
            }
            for &c in block {
                if c >= d {
                    return Err(Error::Partition(format!("coordinate {} out of range 1..={d}", c + 1)));
                }
                if seen[c] {
                    return Err(Error::Partition(format!("coordinate {} appears in two blocks", c + 1)));
                }
                seen[c] = true;
            }
        }
        if let Some(gap) = seen.iter().position(|s| !s) {
            return Err(Error::Partition(format!("coordinate {} is not covered", gap + 1)));
        }
        Ok(())
    }
}

/// Validates a dataset against class parameters.
pub fn validate(ds: &Dataset, spec: &ClassSpec) -> Result<()> {
    if ds.kind() != spec.kind() {
        return Err(Error::KindMismatch {
            expected: spec.kind().to_string(),
            found: ds.kind().to_string(),
        });
    }
    spec.validate_params()?;
    match spec {
        ClassSpec::BlockwiseSmooth { partition, .. } => ClassSpec::validate_partition(partition, ds.d()),
        ClassSpec::ConstrainedSmoothConvex { domain, .. } => domain.validate(ds.d()),
        _ => Ok(()),
    }
}

/// Absolute and relative tolerance used to threshold signed margins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-9, rel: 1e-9 }
    }
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Self { abs: tol, rel: tol }
    }

    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }

    pub fn accepts(&self, margin: f64, scale: f64) -> bool {
        margin <= self.threshold(scale)
    }
}

/// The record attaining the worst margin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Which inequality attained the worst margin.
    pub constraint: String,
    /// Zero-based sample indices involved, in the order the inequality uses them.
    pub indices: Vec<usize>,
    /// Named multiplier values at the maximizer (α, λ, λ_k, μ_i, …).
    pub multipliers: Vec<(String, f64)>,
}

impl Witness {
    pub fn new(constraint: impl Into<String>, indices: Vec<usize>) -> Self {
        Self {
            constraint: constraint.into(),
            indices,
            multipliers: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.multipliers.push((name.to_string(), value));
        self
    }

    pub fn multiplier(&self, name: &str) -> Option<f64> {
        self.multipliers.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

fn serialize_margin<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

/// Outcome of a condition check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub satisfied: bool,
    /// Largest left-hand side over every imposed inequality; `-∞` when none
    /// was imposed (serialized as `null`).
    #[serde(serialize_with = "serialize_margin")]
    pub worst_margin: f64,
    pub scale: f64,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn vacuous(scale: f64) -> Self {
        Self {
            satisfied: true,
            worst_margin: f64::NEG_INFINITY,
            scale,
            witness: None,
        }
    }
}

/// Running max of signed margins with the witness that attains it.
///
/// Ties keep the earliest witness so the result does not depend on the
/// evaluation order of equal margins as long as offers arrive in a fixed order.
#[derive(Debug, Clone)]
pub struct MarginTracker {
    worst: f64,
    witness: Option<Witness>,
}

impl Default for MarginTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl MarginTracker {
    pub fn new() -> Self {
        Self {
            worst: f64::NEG_INFINITY,
            witness: None,
        }
    }

    pub fn offer(&mut self, margin: f64, witness: impl FnOnce() -> Witness) {
        if margin > self.worst || (margin.is_nan() && !self.worst.is_nan()) {
            self.worst = margin;
            self.witness = Some(witness());
        }
    }

    pub fn merge(&mut self, other: MarginTracker) {
        if let Some(w) = other.witness {
            self.offer(other.worst, || w);
        }
    }

    pub fn worst(&self) -> f64 {
        self.worst
    }

    pub fn finish(self, scale: f64, tol: &Tolerance) -> Verdict {
        let satisfied = !self.worst.is_nan() && tol.accepts(self.worst, scale);
        Verdict {
            satisfied,
            worst_margin: self.worst,
            scale,
            witness: self.witness,
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `‖a − b‖²`.
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

/// `⟨a − b, c − e⟩`.
pub fn dot_diff(a: &[f64], b: &[f64], c: &[f64], e: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(c.iter().zip(e))
        .map(|((a, b), (c, e))| (a - b) * (c - e))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example38_json() -> &'static str {
        r#"{"kind":"operator","d":2,"samples":[
            {"x":[0,0],"t":[0,0]},
            {"x":[1,0],"t":[0,0]},
            {"x":[0.5,0],"t":[0,-0.5]}]}"#
    }

    #[test]
    fn parses_operator_file() {
        let ds = Dataset::from_json_str(example38_json(), Some(DatasetKind::Operator)).unwrap();
        let od = ds.as_operator().unwrap();
        assert_eq!(od.d(), 2);
        assert_eq!(od.len(), 3);
    }

    #[test]
    fn parses_minimal_function_file() {
        let ds = Dataset::from_json_str(r#"{"kind":"function","d":1,"samples":[{"x":[0],"f":0,"g":[0]}]}"#, None)
            .unwrap();
        assert_eq!(ds.d(), 1);
        assert_eq!(ds.kind(), DatasetKind::Function);
    }

    #[test]
    fn rejects_mixed_lengths() {
        let err = Dataset::from_json_str(
            r#"{"kind":"function","samples":[{"x":[0],"f":0,"g":[0]},{"x":[0,1],"f":0,"g":[0,0]}]}"#,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { row: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_empty_and_wrong_kind() {
        assert!(matches!(
            Dataset::from_json_str(r#"{"kind":"function","samples":[]}"#, None),
            Err(Error::Empty)
        ));
        assert!(matches!(
            Dataset::from_json_str(example38_json(), Some(DatasetKind::Function)),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(Dataset::from_json_str("", None), Err(Error::Parse(_))));
    }

    #[test]
    fn gram_of_zero_sample_is_zero() {
        let ds = Dataset::Function(FuncDataset::new(vec![FuncSample::new(vec![0.0], 0.0, vec![0.0])]).unwrap());
        let g = gram(&ds);
        assert_eq!(g.shape(), (2, 2));
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gram_of_example38_has_unit_x2_entry() {
        let ds = Dataset::from_json_str(example38_json(), None).unwrap();
        let g = gram(&ds);
        assert_eq!(g.shape(), (6, 6));
        assert_eq!(g[(1, 1)], 1.0);
        assert_eq!(g[(2, 2)], 0.25);
        assert_eq!(g[(5, 5)], 0.25);
        assert_eq!(g[(1, 2)], 0.5);
    }

    #[test]
    fn partition_errors() {
        assert!(ClassSpec::validate_partition(&[vec![0], vec![0, 1]], 2).is_err());
        assert!(ClassSpec::validate_partition(&[vec![0]], 2).is_err());
        assert!(ClassSpec::validate_partition(&[vec![1], vec![0]], 2).is_ok());
    }

    #[test]
    fn loja_parameter_ranges() {
        let ds = Dataset::Function(FuncDataset::new(vec![FuncSample::new(vec![0.0], 0.0, vec![0.0])]).unwrap());
        let ok = ClassSpec::Lojasiewicz { mu: 0.5, l: 1.0, f_star: 0.0 };
        assert!(validate(&ds, &ok).is_ok());
        let bad = ClassSpec::Lojasiewicz { mu: 2.0, l: 1.0, f_star: 0.0 };
        assert!(matches!(validate(&ds, &bad), Err(Error::Parameter(_))));
        let wrong_kind = ClassSpec::LipschitzOp { l: 1.0 };
        assert!(matches!(validate(&ds, &wrong_kind), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn domain_distances() {
        let ball = Domain::Ball { center: vec![0.0, 0.0], radius: 2.0 };
        assert!((ball.dist_to_complement(&[1.0, 0.0]) - 1.0).abs() < 1e-15);
        let half = Domain::HalfspaceIntersection(vec![(vec![0.0, 2.0], 2.0), (vec![-1.0, 0.0], 3.0)]);
        assert!((half.dist_to_complement(&[0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!(!half.contains(&[0.0, 1.0]));
    }

    #[test]
    fn null_margin_serialization() {
        let v = Verdict::vacuous(1.0);
        let s = serde_json::to_value(&v).unwrap();
        assert!(s["worst_margin"].is_null());
    }
}
