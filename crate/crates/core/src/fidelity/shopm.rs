//! Best rank-one value `max_{|u_i|=1} T(u_1, ..., u_n)` by the shifted
//! symmetric higher-order power method on the block symmetric embedding.
//!
//! The embedding of an order-`n` tensor over `d_1 + ... + d_n` coordinates
//! is never formed. For `x = (x_1, ..., x_n)` its gradient block `i` is `T`
//! contracted with every block except `x_i`, and its form value is
//! `n T(x_1, ..., x_n)`.

use rand::Rng;

use super::tensor::SettingTensor;
use crate::random::{derive_seed, seeded};

#[derive(Debug, Clone)]
pub struct ShopmOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ShopmOptions {
    fn default() -> Self {
        ShopmOptions { restarts: 20, max_iter: 5000, tol: 1e-10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShopmResult {
    pub value: f64,
    /// Unit factors attaining `value`.
    pub factors: Vec<Vec<f64>>,
    pub restarts: usize,
    /// Iterations summed over restarts.
    pub iterations: usize,
    /// At least one restart met the convergence tolerance.
    pub converged: bool,
    /// Steps where the embedded objective decreased by more than round-off.
    pub monotonicity_violations: usize,
    pub shift: f64,
}

/// Shift making the embedded iteration monotone.
pub fn shopm_shift(t: &SettingTensor) -> f64 {
    let n = t.order().max(3) as f64;
    1.0 + (n - 2.0) * t.abs_sum()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn embedded_value(t: &SettingTensor, blocks: &[Vec<f64>]) -> f64 {
    t.order() as f64 * t.multilinear(blocks)
}

struct Run {
    value: f64,
    factors: Vec<Vec<f64>>,
    iterations: usize,
    converged: bool,
    violations: usize,
}

fn run_from(t: &SettingTensor, mut blocks: Vec<Vec<f64>>, alpha: f64, opts: &ShopmOptions) -> Run {
    let n = t.order();
    let scale = norm(&blocks.concat());
    for b in &mut blocks {
        b.iter_mut().for_each(|v| *v /= scale);
    }
    let mut lambda = embedded_value(t, &blocks);
    let mut iterations = 0;
    let mut converged = false;
    let mut violations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut next: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let g = t.contract_except(&blocks, i);
                g.iter().zip(&blocks[i]).map(|(g, x)| g + alpha * x).collect()
            })
            .collect();
        let s = norm(&next.concat());
        if s == 0.0 {
            break;
        }
        for b in &mut next {
            b.iter_mut().for_each(|v| *v /= s);
        }
        let new_lambda = embedded_value(t, &next);
        if new_lambda < lambda - 1e-12 * lambda.abs().max(1.0) {
            violations += 1;
        }
        blocks = next;
        let change = (new_lambda - lambda).abs();
        lambda = new_lambda;
        if change < opts.tol {
            converged = true;
            break;
        }
    }
    let (value, factors) = polish(t, blocks);
    Run { value, factors, iterations, converged, violations }
}

/// Normalise each block, fold signs (nonnegative tensors are maximised in
/// the nonnegative orthant) and finish with alternating exact block updates.
fn polish(t: &SettingTensor, blocks: Vec<Vec<f64>>) -> (f64, Vec<Vec<f64>>) {
    let n = t.order();
    let mut u: Vec<Vec<f64>> = blocks
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            let b: Vec<f64> = b.into_iter().map(f64::abs).collect();
            let s = norm(&b);
            if s > 0.0 {
                b.into_iter().map(|v| v / s).collect()
            } else {
                let d = t.shape()[i];
                vec![1.0 / (d as f64).sqrt(); d]
            }
        })
        .collect();
    let mut value = t.multilinear(&u);
    for _ in 0..1000 {
        for i in 0..n {
            let g = t.contract_except(&u, i);
            let s = norm(&g);
            if s > 0.0 {
                u[i] = g.into_iter().map(|v| v / s).collect();
            }
        }
        let next = t.multilinear(&u);
        let done = next - value <= 1e-15;
        value = value.max(next);
        if done {
            break;
        }
    }
    (value, u)
}

/// Best rank-one value of a nonnegative tensor of order ≥ 2, over 1 uniform
/// and `restarts - 1` random nonnegative starts.
pub fn setting_bound_shopm(t: &SettingTensor, opts: &ShopmOptions) -> ShopmResult {
    let alpha = shopm_shift(t);
    let mut rng = seeded(derive_seed(opts.seed, 0x5409));
    let restarts = opts.restarts.max(1);
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut iterations = 0;
    let mut converged = false;
    let mut violations = 0;
    for r in 0..restarts {
        let start: Vec<Vec<f64>> = t
            .shape()
            .iter()
            .map(|&d| if r == 0 { vec![1.0; d] } else { (0..d).map(|_| rng.random::<f64>() + 1e-3).collect() })
            .collect();
        let run = run_from(t, start, alpha, opts);
        iterations += run.iterations;
        converged |= run.converged;
        violations += run.violations;
        if best.as_ref().is_none_or(|(v, _)| run.value > *v) {
            best = Some((run.value, run.factors));
        }
    }
    let (value, factors) = best.expect("at least one restart");
    ShopmResult {
        value: value.min(t.frobenius()),
        factors,
        restarts,
        iterations,
        converged,
        monotonicity_violations: violations,
        shift: alpha,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_fixed_point() {
        let u = [0.6, 0.8];
        let v = [1.0 / 3f64.sqrt(); 3];
        let w = [0.28, 0.96];
        let mut e = Vec::new();
        for a in u {
            for b in v {
                for c in w {
                    e.push(2.5 * a * b * c);
                }
            }
        }
        let t = SettingTensor::new(vec![2, 3, 2], e).unwrap();
        let r = setting_bound_shopm(&t, &ShopmOptions::default());
        assert!((r.value - 2.5).abs() < 1e-12);
        assert_eq!(r.monotonicity_violations, 0);
    }

    #[test]
    fn ghz_parity_tensor() {
        let mut e = vec![0.0; 8];
        for o in [0b000usize, 0b011, 0b101, 0b110] {
            e[o] = 0.5;
        }
        let t = SettingTensor::new(vec![2, 2, 2], e).unwrap();
        let r = setting_bound_shopm(&t, &ShopmOptions::default());
        assert!((r.value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert!(r.converged);
    }
}
