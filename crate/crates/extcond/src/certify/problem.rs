//! Symmetric matrix templates that are affine in a parameter vector `θ`.

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Entry `(row, col)` of a symmetric block, equal to `coeffs·θ + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineEntry {
    pub row: usize,
    pub col: usize,
    pub coeffs: Vec<f64>,
    pub constant: f64,
}

impl AffineEntry {
    pub fn is_fixed(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn value(&self, theta: &[f64]) -> f64 {
        self.constant + self.coeffs.iter().zip(theta).map(|(c, t)| c * t).sum::<f64>()
    }
}

/// One symmetric block. Entries not listed are zero; each listed entry also
/// sets its mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTemplate {
    dim: usize,
    entries: Vec<AffineEntry>,
}

impl MatrixTemplate {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[AffineEntry] {
        &self.entries
    }

    pub fn push(&mut self, entry: AffineEntry) {
        debug_assert!(entry.row < self.dim && entry.col < self.dim);
        self.entries.push(entry);
    }

    /// The entry at `(row, col)` in either orientation.
    pub fn entry(&self, row: usize, col: usize) -> Option<&AffineEntry> {
        self.entries
            .iter()
            .find(|e| (e.row, e.col) == (row, col) || (e.row, e.col) == (col, row))
    }

    pub fn assemble(&self, theta: &[f64]) -> DMatrix<f64> {
        self.fill(|e| e.value(theta))
    }

    /// Constant part `M₀`.
    pub fn constant_part(&self) -> DMatrix<f64> {
        self.fill(|e| e.constant)
    }

    /// Coefficient matrix `N_p` of parameter `p`.
    pub fn parameter_part(&self, p: usize) -> DMatrix<f64> {
        self.fill(|e| e.coeffs.get(p).copied().unwrap_or(0.0))
    }

    /// Parameters with a nonzero coefficient somewhere in the block.
    pub fn parameters(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .entries
            .iter()
            .flat_map(|e| e.coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(p, _)| p))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn fill(&self, value: impl Fn(&AffineEntry) -> f64) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            let v = value(e);
            m[(e.row, e.col)] = v;
            m[(e.col, e.row)] = v;
        }
        m
    }
}

/// Find `θ` with every block positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdFeasibilityProblem {
    blocks: Vec<MatrixTemplate>,
    theta_dim: usize,
}

impl PsdFeasibilityProblem {
    pub fn new(blocks: Vec<MatrixTemplate>, theta_dim: usize) -> Self {
        Self { blocks, theta_dim }
    }

    pub fn blocks(&self) -> &[MatrixTemplate] {
        &self.blocks
    }

    pub fn theta_dim(&self) -> usize {
        self.theta_dim
    }

    pub fn assemble(&self, theta: &[f64]) -> Vec<DMatrix<f64>> {
        self.blocks.iter().map(|b| b.assemble(theta)).collect()
    }

    /// Appends the blocks of `other`, with its parameters renumbered after
    /// those of `self`.
    pub fn concat(mut self, other: PsdFeasibilityProblem) -> Self {
        let offset = self.theta_dim;
        let total = offset + other.theta_dim;
        for block in &mut self.blocks {
            block.entries.iter_mut().for_each(|e| e.coeffs.resize(total, 0.0));
        }
        for mut block in other.blocks {
            for e in &mut block.entries {
                let mut coeffs = vec![0.0; total];
                coeffs[offset..].copy_from_slice(&e.coeffs);
                e.coeffs = coeffs;
            }
            self.blocks.push(block);
        }
        self.theta_dim = total;
        self
    }

    pub fn to_json_value(&self) -> Value {
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                let fixed: Vec<Value> = b
                    .entries
                    .iter()
                    .filter(|e| e.is_fixed())
                    .map(|e| json!([e.row, e.col, e.constant]))
                    .collect();
                let affine: Vec<Value> = b
                    .entries
                    .iter()
                    .filter(|e| !e.is_fixed())
                    .map(|e| json!([e.row, e.col, e.coeffs, e.constant]))
                    .collect();
                json!({ "dim": b.dim, "fixed": fixed, "affine": affine })
            })
            .collect();
        json!({ "blocks": blocks, "theta_dim": self.theta_dim })
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("PSD problem: {what}"));
        let theta_dim = value
            .get("theta_dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing theta_dim"))? as usize;
        let index = |v: &Value, dim: usize| -> Result<usize> {
            let i = v.as_u64().ok_or_else(|| bad("index is not a nonnegative integer"))? as usize;
            if i < dim {
                Ok(i)
            } else {
                Err(bad("index out of range"))
            }
        };
        let number = |v: &Value| v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| bad("entry is not a finite number"));
        let mut blocks = Vec::new();
        for b in value.get("blocks").and_then(Value::as_array).ok_or_else(|| bad("missing blocks"))? {
            let dim = b.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("block without dim"))? as usize;
            let mut template = MatrixTemplate::new(dim);
            for f in b.get("fixed").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]) {
                let f = f.as_array().filter(|f| f.len() == 3).ok_or_else(|| bad("fixed entry must be [i, j, v]"))?;
                template.push(AffineEntry {
                    row: index(&f[0], dim)?,
                    col: index(&f[1], dim)?,
                    coeffs: vec![0.0; theta_dim],
                    constant: number(&f[2])?,
                });
            }
            for a in b.get("affine").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]) {
                let a = a
                    .as_array()
                    .filter(|a| a.len() == 4)
                    .ok_or_else(|| bad("affine entry must be [i, j, [coeffs], const]"))?;
                let coeffs = a[2]
                    .as_array()
                    .filter(|c| c.len() == theta_dim)
                    .ok_or_else(|| bad("coefficient list length differs from theta_dim"))?
                    .iter()
                    .map(number)
                    .collect::<Result<Vec<f64>>>()?;
                template.push(AffineEntry {
                    row: index(&a[0], dim)?,
                    col: index(&a[1], dim)?,
                    coeffs,
                    constant: number(&a[3])?,
                });
            }
            blocks.push(template);
        }
        Ok(Self { blocks, theta_dim })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PsdFeasibilityProblem {
        let mut b = MatrixTemplate::new(2);
        b.push(AffineEntry { row: 0, col: 0, coeffs: vec![0.0], constant: -1.5 });
        b.push(AffineEntry { row: 0, col: 1, coeffs: vec![1.0], constant: 0.25 });
        PsdFeasibilityProblem::new(vec![b], 1)
    }

    #[test]
    fn json_round_trip() {
        let p = sample();
        let v = p.to_json_value();
        assert_eq!(v["blocks"][0]["fixed"][0], json!([0, 0, -1.5]));
        assert_eq!(PsdFeasibilityProblem::from_json_value(&v).unwrap(), p);
    }

    #[test]
    fn assembly_is_symmetric() {
        let m = sample().assemble(&[2.0]).remove(0);
        assert_eq!(m[(0, 1)], 2.25);
        assert_eq!(m[(1, 0)], 2.25);
        assert_eq!(m[(1, 1)], 0.0);
    }

    #[test]
    fn concat_renumbers_parameters() {
        let joined = sample().concat(sample());
        assert_eq!(joined.theta_dim(), 2);
        assert_eq!(joined.blocks()[1].parameters(), vec![1]);
        assert_eq!(joined.assemble(&[0.0, 1.0])[1][(0, 1)], 1.25);
    }

    #[test]
    fn malformed_json_is_rejected() {
        let v = json!({"blocks": [{"dim": 2, "fixed": [[0, 5, 1.0]]}], "theta_dim": 0});
        assert!(PsdFeasibilityProblem::from_json_value(&v).is_err());
    }
}
