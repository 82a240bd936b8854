//! Maximization of homogeneous ternary cubics over the closed 2-simplex.
//!
//! The search combines a barycentric grid, exact maximization along the three
//! edges, and derivative-free Nelder–Mead refinement started from the best
//! grid cells.

use super::cubic::maximize_cubic;

/// Exponents of `(λ_k, μ_i, μ_j)` in a monomial.
pub type Exponents = [u8; 3];

/// A homogeneous cubic in the multipliers `(λ_k, μ_i, μ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexCubic {
    terms: Vec<(Exponents, f64)>,
}

impl SimplexCubic {
    pub fn new(terms: Vec<(Exponents, f64)>) -> Self {
        debug_assert!(terms.iter().all(|(e, _)| e.iter().map(|&v| v as u32).sum::<u32>() == 3));
        Self { terms }
    }

    /// The operator-class shape
    /// `λ(μ_i + μ_j)(X_ik μ_i + X_jk μ_j) − λ μ_i μ_j X_ij + λ²(Y_ik μ_i + Y_jk μ_j)
    ///  + Y_ij μ_i μ_j (μ_i + μ_j + κλ)`
    /// with `x = [X_ij, X_ik, X_jk]` and `y = [Y_ij, Y_ik, Y_jk]`.
    pub fn operator_form(x: [f64; 3], y: [f64; 3], kappa: f64) -> Self {
        let [x_ij, x_ik, x_jk] = x;
        let [y_ij, y_ik, y_jk] = y;
        Self::new(vec![
            ([1, 2, 0], x_ik),
            ([1, 0, 2], x_jk),
            ([1, 1, 1], x_ik + x_jk - x_ij + kappa * y_ij),
            ([2, 1, 0], y_ik),
            ([2, 0, 1], y_jk),
            ([0, 2, 1], y_ij),
            ([0, 1, 2], y_ij),
        ])
    }

    pub fn terms(&self) -> &[(Exponents, f64)] {
        &self.terms
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32))
            .sum()
    }

    /// Coefficients in `s` of the restriction to the segment `(1 − s)v + s w`.
    fn restrict(&self, v: [f64; 3], w: [f64; 3]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (e, c) in &self.terms {
            let mut poly = vec![*c];
            for k in 0..3 {
                for _ in 0..e[k] {
                    poly = mul_linear(&poly, v[k], w[k] - v[k]);
                }
            }
            for (d, coef) in poly.into_iter().enumerate() {
                out[d] += coef;
            }
        }
        out
    }
}

fn mul_linear(poly: &[f64], c0: f64, c1: f64) -> Vec<f64> {
    let mut out = vec![0.0; poly.len() + 1];
    for (d, &p) in poly.iter().enumerate() {
        out[d] += p * c0;
        out[d + 1] += p * c1;
    }
    out
}

/// Search parameters for [`maximize_on_simplex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexScan {
    /// Grid subdivisions per edge.
    pub subdivisions: usize,
    /// Number of best grid cells used as refinement starts.
    pub refine_starts: usize,
    /// Nelder–Mead iteration cap per start.
    pub refine_iters: usize,
}

impl Default for SimplexScan {
    fn default() -> Self {
        Self {
            subdivisions: 200,
            refine_starts: 10,
            refine_iters: 400,
        }
    }
}

/// Best point found and the polynomial value there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexMax {
    pub value: f64,
    /// `(λ_k, μ_i, μ_j)`, summing to one.
    pub point: [f64; 3],
}

/// Euclidean projection onto `{p ≥ 0, Σp = 1}`.
pub fn project_to_simplex(p: [f64; 3]) -> [f64; 3] {
    let mut sorted = p;
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let candidate = (cumulative - 1.0) / (k as f64 + 1.0);
        if s - candidate > 0.0 {
            shift = candidate;
        }
    }
    p.map(|v| (v - shift).max(0.0))
}

fn lift(u: [f64; 2]) -> [f64; 3] {
    project_to_simplex([1.0 - u[0] - u[1], u[0], u[1]])
}

/// Maximizes `poly` over the 2-simplex.
pub fn maximize_on_simplex(poly: &SimplexCubic, scan: &SimplexScan) -> SimplexMax {
    let n = scan.subdivisions.max(1);
    let inv = 1.0 / n as f64;
    let mut cells: Vec<(f64, [f64; 3])> = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for a in 0..=n {
        for b in 0..=(n - a) {
            let p = [(n - a - b) as f64 * inv, a as f64 * inv, b as f64 * inv];
            cells.push((poly.eval(p), p));
        }
    }
    let starts = scan.refine_starts.min(cells.len());
    if starts > 0 && starts < cells.len() {
        cells.select_nth_unstable_by(starts - 1, |x, y| y.0.total_cmp(&x.0));
    }
    let mut top: Vec<(f64, [f64; 3])> = cells[..starts.max(1)].to_vec();
    top.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1[1].total_cmp(&y.1[1])).then(x.1[2].total_cmp(&y.1[2])));
    let mut best = SimplexMax {
        value: top[0].0,
        point: top[0].1,
    };

    let vertices = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for (v, w) in [(0, 1), (0, 2), (1, 2)] {
        let (s, value) = maximize_cubic(poly.restrict(vertices[v], vertices[w]), 0.0, 1.0);
        if value > best.value {
            let mut p = [0.0; 3];
            p[v] = 1.0 - s;
            p[w] = s;
            best = SimplexMax { value, point: p };
        }
    }

    let step = inv.max(1e-3);
    for &(_, p) in top.iter().take(scan.refine_starts) {
        let (u, value) = nelder_mead_max(|u| poly.eval(lift(u)), [p[1], p[2]], step, scan.refine_iters);
        if value > best.value {
            best = SimplexMax { value, point: lift(u) };
        }
    }
    best
}

/// Nelder–Mead maximization in two variables; returns the best vertex.
pub fn nelder_mead_max(f: impl Fn([f64; 2]) -> f64, x0: [f64; 2], step: f64, max_iter: usize) -> ([f64; 2], f64) {
    let mut simplex = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut values = simplex.map(&f);
    for _ in 0..max_iter {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let [hi, mid, lo] = order;
        let spread = (values[hi] - values[lo]).abs();
        let size = (0..2)
            .map(|k| (simplex[hi][k] - simplex[lo][k]).abs().max((simplex[hi][k] - simplex[mid][k]).abs()))
            .fold(0.0, f64::max);
        if size < 1e-13 || (spread <= 1e-16 * (1.0 + values[hi].abs()) && size < 1e-9) {
            break;
        }
        let centroid = [(simplex[hi][0] + simplex[mid][0]) / 2.0, (simplex[hi][1] + simplex[mid][1]) / 2.0];
        let toward = |t: f64| {
            [
                centroid[0] + t * (simplex[lo][0] - centroid[0]),
                centroid[1] + t * (simplex[lo][1] - centroid[1]),
            ]
        };
        let reflected = toward(-1.0);
        let fr = f(reflected);
        if fr > values[hi] {
            let expanded = toward(-2.0);
            let fe = f(expanded);
            if fe > fr {
                simplex[lo] = expanded;
                values[lo] = fe;
            } else {
                simplex[lo] = reflected;
                values[lo] = fr;
            }
        } else if fr > values[mid] {
            simplex[lo] = reflected;
            values[lo] = fr;
        } else {
            let contracted = if fr > values[lo] { toward(-0.5) } else { toward(0.5) };
            let fc = f(contracted);
            if fc > values[lo].max(fr) {
                simplex[lo] = contracted;
                values[lo] = fc;
            } else {
                for k in [mid, lo] {
                    simplex[k] = [
                        simplex[hi][0] + 0.5 * (simplex[k][0] - simplex[hi][0]),
                        simplex[hi][1] + 0.5 * (simplex[k][1] - simplex[hi][1]),
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (simplex[best], values[best])
}
