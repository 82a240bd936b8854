//! Small derivative-free optimizers shared by several modules.

/// Nelder–Mead maximization in `n` variables. Non-finite objective values
/// are treated as infeasible and never accepted. Returns the best vertex and
/// its value.
pub fn nelder_mead_max(f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, max_iter: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let score = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for k in 0..n {
        let mut v = x0.to_vec();
        v[k] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| score(x)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    for _ in 0..max_iter {
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let (hi, worst, second_worst) = (order[0], order[n], order[n.saturating_sub(1)]);
        let size = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[hi]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if size < 1e-13 * (1.0 + simplex[hi].iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            break;
        }
        let mut centroid = vec![0.0; n];
        for &k in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&simplex[k]) {
                *c += v / n as f64;
            }
        }
        let toward = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let reflected = toward(-1.0);
        let fr = score(&reflected);
        if fr > values[hi] {
            let expanded = toward(-2.0);
            let fe = score(&expanded);
            if fe > fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr > values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = if fr > values[worst] { toward(-0.5) } else { toward(0.5) };
            let fc = score(&contracted);
            if fc > values[worst].max(fr) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                let best = simplex[hi].clone();
                for k in 0..=n {
                    if k == hi {
                        continue;
                    }
                    for (v, b) in simplex[k].iter_mut().zip(&best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    values[k] = score(&simplex[k]);
                }
            }
        }
    }
    let best = (0..=n).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (simplex[best].clone(), values[best])
}

/// Golden-section maximization of a function assumed unimodal on `[lo, hi]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        }
    }
    if fa >= fb {
        (a, fa)
    } else {
        (b, fb)
    }
}

/// Outcome of [`ellipsoid_min`].
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidMin {
    pub x: Vec<f64>,
    pub value: f64,
    /// Lower bound on the minimum over the initial ball, from the cutting
    /// planes seen so far.
    pub lower_bound: f64,
    pub iterations: usize,
}

/// Central-cut ellipsoid method for a convex function given by value and
/// subgradient, started from the ball `‖x − center‖ ≤ radius`.
///
/// Stops when the certified gap `value − lower_bound` drops below `gap_tol`,
/// when `stop(value, lower_bound)` returns true, or after `max_iter` cuts.
pub fn ellipsoid_min(
    f: impl Fn(&[f64]) -> (f64, Vec<f64>),
    center: &[f64],
    radius: f64,
    max_iter: usize,
    gap_tol: f64,
    stop: impl Fn(f64, f64) -> bool,
) -> EllipsoidMin {
    let n = center.len();
    let mut x = center.to_vec();
    let mut shape = nalgebra::DMatrix::<f64>::identity(n, n) * (radius * radius);
    let mut best = EllipsoidMin {
        x: x.clone(),
        value: f64::INFINITY,
        lower_bound: f64::NEG_INFINITY,
        iterations: 0,
    };
    if n == 0 {
        best.value = f(&x).0;
        best.lower_bound = best.value;
        return best;
    }
    for iteration in 1..=max_iter {
        best.iterations = iteration;
        let (value, grad) = f(&x);
        if value < best.value {
            best.value = value;
            best.x.clone_from(&x);
        }
        let g = nalgebra::DVector::from_column_slice(&grad);
        let pg = &shape * &g;
        let width = g.dot(&pg).max(0.0).sqrt();
        best.lower_bound = best.lower_bound.max(value - width);
        if width == 0.0 || !width.is_finite() {
            if width == 0.0 {
                best.lower_bound = best.lower_bound.max(value);
            }
            break;
        }
        if best.value - best.lower_bound <= gap_tol || stop(best.value, best.lower_bound) {
            break;
        }
        let direction = pg / width;
        if n == 1 {
            x[0] -= 0.5 * direction[0];
            shape *= 0.25;
        } else {
            let nf = n as f64;
            for (xi, di) in x.iter_mut().zip(direction.iter()) {
                *xi -= di / (nf + 1.0);
            }
            shape = (shape - (&direction * direction.transpose()) * (2.0 / (nf + 1.0))) * (nf * nf / (nf * nf - 1.0));
            shape = (&shape + shape.transpose()) * 0.5;
        }
    }
    best
}
