//! Floating-point induced norms on weighted L^p spaces, `1 < p < ∞`.
//!
//! `‖x‖_p = (Σ_i μ_i |x_i|^p)^{1/p}`. Conjugating by `D = diag(μ)^{1/p}`
//! turns the weighted problem into the plain `ℓ^p → ℓ^p` norm of
//! `D A D^{-1}`, which is what the searches below maximize.
//!
//! Two-point spaces are handled by a dense sweep of the unit circle followed
//! by golden-section refinement of the best arcs. Larger spaces use the
//! nonlinear power iteration `x ← ψ_q(Bᵀ ψ_p(Bx))`, which increases `‖Bx‖_p`
//! monotonically, started from every vertex, the all-ones vector and a fixed
//! set of seeded random points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::operator::MatrixOperator;
use crate::rational::to_f64;

const SWEEP_SAMPLES: usize = 8192;
const REFINED_ARCS: usize = 4;
const GOLDEN_ITERATIONS: usize = 200;
const POWER_ITERATIONS: usize = 20_000;
const RESTARTS_PER_DIM: usize = 8;
const RESTART_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpNormError {
    #[error("exponent p = {0} is outside (1, ∞)")]
    InvalidExponent(f64),
    #[error("tolerance {0} must be positive and finite")]
    InvalidTolerance(f64),
    #[error("no convergence after {iterations} iterations (last change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },
}

/// Approximates `sup{‖Ax‖_p : ‖x‖_p = 1}` on the weighted space of `a`.
///
/// Deterministic for fixed inputs.
pub fn lp_operator_norm(a: &MatrixOperator, p: f64, tol: f64) -> Result<f64, LpNormError> {
    if !(p.is_finite() && p > 1.0) {
        return Err(LpNormError::InvalidExponent(p));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(LpNormError::InvalidTolerance(tol));
    }
    let b = conjugated(a, p);
    match b.len() {
        1 => Ok(b[0][0].abs()),
        2 => circle_search(&b, p, tol),
        _ => power_search(&b, p, tol),
    }
}

fn conjugated(a: &MatrixOperator, p: f64) -> Vec<Vec<f64>> {
    let n = a.dim();
    let scale: Vec<f64> = a
        .space()
        .weights()
        .iter()
        .map(|w| to_f64(w).powf(1.0 / p))
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| scale[i] * to_f64(&a.entry(i, j)) / scale[j])
                .collect()
        })
        .collect()
}

fn p_norm(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

fn mat_vec(b: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    b.iter()
        .map(|row| row.iter().zip(x).map(|(a, v)| a * v).sum())
        .collect()
}

fn mat_t_vec(b: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = b.len();
    (0..n)
        .map(|j| (0..n).map(|i| b[i][j] * y[i]).sum())
        .collect()
}

/// `‖B x(θ)‖_p` where `x(θ)` is the direction `(cos θ, sin θ)` scaled to unit
/// p-norm.
fn circle_value(b: &[Vec<f64>], p: f64, theta: f64) -> f64 {
    let dir = [theta.cos(), theta.sin()];
    let len = p_norm(&dir, p);
    let x = [dir[0] / len, dir[1] / len];
    p_norm(&mat_vec(b, &x), p)
}

fn circle_search(b: &[Vec<f64>], p: f64, tol: f64) -> Result<f64, LpNormError> {
    use std::f64::consts::PI;
    // x(θ + π) = −x(θ), so half a turn covers the sphere.
    let step = PI / SWEEP_SAMPLES as f64;
    let values: Vec<f64> = (0..SWEEP_SAMPLES)
        .map(|i| circle_value(b, p, i as f64 * step))
        .collect();
    let mut peaks: Vec<usize> = (0..SWEEP_SAMPLES)
        .filter(|&i| {
            let prev = values[(i + SWEEP_SAMPLES - 1) % SWEEP_SAMPLES];
            let next = values[(i + 1) % SWEEP_SAMPLES];
            values[i] >= prev && values[i] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    peaks.truncate(REFINED_ARCS);

    let mut best = values.iter().copied().fold(0.0, f64::max);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let target = (tol * 1e-3).max(1e-15);
    for peak in peaks {
        let centre = peak as f64 * step;
        let (mut lo, mut hi) = (centre - step, centre + step);
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let mut fc = circle_value(b, p, c);
        let mut fd = circle_value(b, p, d);
        let mut converged = false;
        for _ in 0..GOLDEN_ITERATIONS {
            if hi - lo < target {
                converged = true;
                break;
            }
            if fc > fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = circle_value(b, p, c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = circle_value(b, p, d);
            }
        }
        if !converged {
            return Err(LpNormError::NonConvergence {
                iterations: GOLDEN_ITERATIONS,
                last_change: hi - lo,
            });
        }
        best = best.max(fc).max(fd);
    }
    Ok(best)
}

/// Runs the power iteration from `start`; returns the final value and whether
/// it met the stopping rule.
fn ascend(b: &[Vec<f64>], p: f64, start: &[f64], tol: f64) -> (f64, bool, f64) {
    let q = p / (p - 1.0);
    let len = p_norm(start, p);
    if len == 0.0 {
        return (0.0, true, 0.0);
    }
    let mut x: Vec<f64> = start.iter().map(|v| v / len).collect();
    let mut value = p_norm(&mat_vec(b, &x), p);
    let mut change = f64::INFINITY;
    for _ in 0..POWER_ITERATIONS {
        let y = mat_vec(b, &x);
        if value == 0.0 {
            return (0.0, true, 0.0);
        }
        let dual: Vec<f64> = y
            .iter()
            .map(|v| v.signum() * (v.abs() / value).powf(p - 1.0))
            .collect();
        let z = mat_t_vec(b, &dual);
        let z_len = p_norm(&z, q);
        if z_len == 0.0 {
            return (value, true, 0.0);
        }
        x = z
            .iter()
            .map(|v| v.signum() * (v.abs() / z_len).powf(q - 1.0))
            .collect();
        let next = p_norm(&mat_vec(b, &x), p);
        change = (next - value).abs();
        value = value.max(next);
        if change <= tol * 1e-3 {
            return (value, true, change);
        }
    }
    (value, false, change)
}

fn power_search(b: &[Vec<f64>], p: f64, tol: f64) -> Result<f64, LpNormError> {
    let n = b.len();
    let mut starts: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    starts.push(vec![1.0; n]);
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    for _ in 0..RESTARTS_PER_DIM * n {
        starts.push((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }

    let mut best = (0.0f64, true, 0.0f64);
    for start in &starts {
        let run = ascend(b, p, start, tol);
        if run.0 > best.0 {
            best = run;
        }
    }
    if !best.1 {
        return Err(LpNormError::NonConvergence {
            iterations: POWER_ITERATIONS,
            last_change: best.2,
        });
    }
    Ok(best.0)
}
