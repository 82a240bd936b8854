//! Random dataset generators shared by the integration tests.
#![allow(dead_code)]

use extcond::{dot, sub, FuncDataset, FuncSample, OpDataset, OpSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, d: usize, half_width: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-half_width..=half_width)).collect()
}

fn jitter(rng: &mut ChaCha8Rng, v: &mut [f64], noise: f64) {
    if noise > 0.0 {
        v.iter_mut().for_each(|c| *c += rng.gen_range(-noise..=noise));
    }
}

/// Samples of `f(x) = c + ½ Σ a_i (x_i − m_i)²` with curvatures drawn from
/// `curvature`, then perturbed by uniform noise of half-width `noise`.
pub fn quadratic_samples(rng: &mut ChaCha8Rng, n: usize, d: usize, curvature: [f64; 2], noise: f64) -> FuncDataset {
    let a: Vec<f64> = (0..d).map(|_| rng.gen_range(curvature[0]..=curvature[1])).collect();
    let m = uniform_vec(rng, d, 0.5);
    let c = rng.gen_range(-0.5..=0.5);
    let samples = (0..n)
        .map(|_| {
            let x = uniform_vec(rng, d, 1.0);
            let r = sub(&x, &m);
            let mut f = [c + 0.5 * r.iter().zip(&a).map(|(r, a)| a * r * r).sum::<f64>()];
            let mut g: Vec<f64> = r.iter().zip(&a).map(|(r, a)| a * r).collect();
            jitter(rng, &mut f, noise);
            jitter(rng, &mut g, noise);
            FuncSample::new(x, f[0], g)
        })
        .collect();
    FuncDataset::new(samples).expect("well-formed samples")
}

/// Samples of the affine map `x ↦ r·R(θ)x + b`, where `R(θ)` is a rotation
/// (the identity when `d = 1`), perturbed by uniform noise.
pub fn rotation_operator_samples(rng: &mut ChaCha8Rng, n: usize, d: usize, r: f64, theta: f64, noise: f64) -> OpDataset {
    let b = uniform_vec(rng, d, 0.5);
    let (c, s) = (theta.cos(), theta.sin());
    let samples = (0..n)
        .map(|_| {
            let x = uniform_vec(rng, d, 1.0);
            let mut t: Vec<f64> = match d {
                1 => vec![r * x[0] + b[0]],
                _ => {
                    let mut t: Vec<f64> = x.iter().zip(&b).map(|(x, b)| r * x + b).collect();
                    t[0] = r * (c * x[0] - s * x[1]) + b[0];
                    t[1] = r * (s * x[0] + c * x[1]) + b[1];
                    t
                }
            };
            jitter(rng, &mut t, noise);
            OpSample::new(x, t)
        })
        .collect();
    OpDataset::new(samples).expect("well-formed samples")
}

/// A random `μ`-strongly monotone, `L`-Lipschitz linear operator sample set.
pub fn monotone_lipschitz_samples(rng: &mut ChaCha8Rng, n: usize, d: usize, mu: f64, l: f64, noise: f64) -> OpDataset {
    let theta = if d == 1 { 0.0 } else { rng.gen_range(-1.0..=1.0) * (mu / l).acos() };
    let r = rng.gen_range(mu / theta.cos()..=l);
    rotation_operator_samples(rng, n, d, r, theta, noise)
}

/// A random `μ`-strongly monotone, `β`-cocoercive linear operator sample set
/// (requires `μβ ≤ 1`).
pub fn cocoercive_samples(rng: &mut ChaCha8Rng, n: usize, d: usize, mu: f64, beta: f64, noise: f64) -> OpDataset {
    let theta = if d == 1 { 0.0 } else { rng.gen_range(-1.0..=1.0) * (mu * beta).sqrt().acos() };
    let (lo, hi) = (mu / theta.cos(), theta.cos() / beta);
    let r = if lo < hi { rng.gen_range(lo..=hi) } else { hi };
    rotation_operator_samples(rng, n, d, r, theta, noise)
}

pub fn uniform_operator_samples(rng: &mut ChaCha8Rng, n: usize, d: usize) -> OpDataset {
    let samples = (0..n).map(|_| OpSample::new(uniform_vec(rng, d, 1.0), uniform_vec(rng, d, 1.0))).collect();
    OpDataset::new(samples).expect("well-formed samples")
}

/// `f_a + ⟨g_a, x − x_a⟩ + (μ/q)‖x − x_a‖^q`.
pub fn power_lower_model(a: &FuncSample, x: &[f64], mu: f64, q: f64) -> f64 {
    let step = sub(x, &a.x);
    a.f + dot(&a.g, &step) + mu / q * dot(&step, &step).sqrt().powf(q)
}

/// Two samples that are jointly uniformly convex of power `q` with modulus `μ`.
pub fn consistent_unif_pair(rng: &mut ChaCha8Rng, d: usize, mu: f64, q: f64) -> [FuncSample; 2] {
    loop {
        let xa = uniform_vec(rng, d, 1.0);
        let xb = uniform_vec(rng, d, 1.0);
        let ga = uniform_vec(rng, d, 1.0);
        let gb = uniform_vec(rng, d, 1.0);
        let a = FuncSample::new(xa, rng.gen_range(-1.0..=1.0), ga);
        let lo = power_lower_model(&a, &xb, mu, q);
        let step = sub(&a.x, &xb);
        let hi = a.f - dot(&gb, &step) - mu / q * dot(&step, &step).sqrt().powf(q);
        if lo < hi {
            let b = FuncSample::new(xb, rng.gen_range(lo..=hi), gb);
            return [a, b];
        }
    }
}
