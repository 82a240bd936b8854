//! Gram-matrix polynomial identities and their affine parameterization.
//!
//! A certificate asks for symmetric blocks `M_b ⪰ 0` such that
//! `target = Σ_b m_b · v_bᵀ M_b v_b`, where `m_b` is a fixed multiplier
//! polynomial and `v_b` a vector of monomials. Matching coefficients
//! monomial by monomial gives a linear system in the upper-triangular
//! entries of the blocks; its solution set is described by an affine map
//! from free parameters `θ`, which is what the PSD solver works with.

use std::collections::BTreeMap;

use super::problem::{AffineEntry, MatrixTemplate, PsdFeasibilityProblem};
use crate::error::{Error, Result};
use crate::strengthened::Exponents;

/// Sparse polynomial in up to three variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Exponents, f64>,
}

impl Poly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms([([0, 0, 0], c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, f64)>) -> Self {
        let mut p = Self::new();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: f64) {
        *self.terms.entry(e).or_insert(0.0) += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &f64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: Exponents) -> f64 {
        self.terms.get(&e).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, k * c)).collect(),
        }
    }

    /// Product with a single monomial `c · x^e`.
    fn times_monomial(&self, e: Exponents, c: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(f, d)| (add_exponents(*f, e), c * d)))
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * (0..3).map(|k| x[k].powi(e[k] as i32)).product::<f64>())
            .sum()
    }
}

fn add_exponents(a: Exponents, b: Exponents) -> Exponents {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// One Gram block of a certificate: `multiplier · vᵀ M v` with `v = basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramBlock {
    pub multiplier: Poly,
    pub basis: Vec<Exponents>,
}

/// Position of an unknown inside a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slot {
    block: usize,
    row: usize,
    col: usize,
}

/// Builds the affine parameterization of all Gram blocks satisfying
/// `target = Σ_b m_b vᵀ M_b v`. Diagonal entries are eliminated first, so the
/// remaining free parameters are preferably off-diagonal entries.
pub fn build_identity(target: &Poly, blocks: &[GramBlock]) -> Result<PsdFeasibilityProblem> {
    let mut slots: Vec<Slot> = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        let n = block.basis.len();
        slots.extend((0..n).map(|r| Slot { block: b, row: r, col: r }));
    }
    for (b, block) in blocks.iter().enumerate() {
        let n = block.basis.len();
        for r in 0..n {
            slots.extend((r + 1..n).map(|c| Slot { block: b, row: r, col: c }));
        }
    }

    // Coefficient of each monomial contributed by each unknown.
    let mut rows: BTreeMap<Exponents, Vec<f64>> = BTreeMap::new();
    for (u, slot) in slots.iter().enumerate() {
        let block = &blocks[slot.block];
        let weight = if slot.row == slot.col { 1.0 } else { 2.0 };
        let product = add_exponents(block.basis[slot.row], block.basis[slot.col]);
        for (e, c) in block.multiplier.times_monomial(product, weight).terms() {
            rows.entry(*e).or_insert_with(|| vec![0.0; slots.len()])[u] += c;
        }
    }
    for (e, _) in target.terms() {
        rows.entry(*e).or_insert_with(|| vec![0.0; slots.len()]);
    }
    let mut system: Vec<Vec<f64>> = rows
        .iter()
        .map(|(e, coeffs)| {
            let mut row = coeffs.clone();
            row.push(target.coefficient(*e));
            row
        })
        .collect();

    let solution = reduce(&mut system, slots.len())?;
    let theta_dim = solution.free.len();
    let mut templates: Vec<MatrixTemplate> = blocks
        .iter()
        .map(|b| MatrixTemplate::new(b.basis.len()))
        .collect();
    for (u, slot) in slots.iter().enumerate() {
        let (coeffs, constant) = match solution.free.iter().position(|&f| f == u) {
            Some(p) => {
                let mut coeffs = vec![0.0; theta_dim];
                coeffs[p] = 1.0;
                (coeffs, 0.0)
            }
            None => solution.pivot_expr[u].clone().unwrap_or((vec![0.0; theta_dim], 0.0)),
        };
        templates[slot.block].push(AffineEntry {
            row: slot.row,
            col: slot.col,
            coeffs,
            constant,
        });
    }
    Ok(PsdFeasibilityProblem::new(templates, theta_dim))
}

struct Reduced {
    free: Vec<usize>,
    /// For pivot unknowns: value as `coeffs·θ + constant`.
    pivot_expr: Vec<Option<(Vec<f64>, f64)>>,
}

/// Gauss–Jordan elimination with partial pivoting on `[A | b]`.
fn reduce(system: &mut [Vec<f64>], unknowns: usize) -> Result<Reduced> {
    let magnitude = system
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let tiny = 1e-12 * magnitude;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_row = 0;
    for col in 0..unknowns {
        if next_row == system.len() {
            break;
        }
        let best = (next_row..system.len()).max_by(|&a, &b| system[a][col].abs().total_cmp(&system[b][col].abs()));
        let Some(best) = best else { break };
        if system[best][col].abs() <= tiny {
            continue;
        }
        system.swap(next_row, best);
        let lead = system[next_row][col];
        system[next_row].iter_mut().for_each(|v| *v /= lead);
        let pivot_row = system[next_row].clone();
        for (r, row) in system.iter_mut().enumerate() {
            if r != next_row && row[col] != 0.0 {
                let factor = row[col];
                row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= factor * p);
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
    }
    if let Some(row) = system[next_row..].iter().find(|r| r[unknowns].abs() > 1e-9 * magnitude) {
        return Err(Error::InconsistentTemplate(format!(
            "coefficient identity has residual {:e} that no Gram matrix can absorb",
            row[unknowns]
        )));
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..unknowns).filter(|c| !pivot_cols.contains(c)).collect();
    let mut pivot_expr = vec![None; unknowns];
    for &(r, c) in &pivots {
        let coeffs = free.iter().map(|&f| -system[r][f]).collect();
        pivot_expr[c] = Some((coeffs, system[r][unknowns]));
    }
    Ok(Reduced { free, pivot_expr })
}
