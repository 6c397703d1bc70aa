use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Dataset, Diagnostics, TrainParams};
use crate::{Error, Result};

fn primal_objective(data: &Dataset, w: &[f64], b: f64, c: f64) -> f64 {
    let hinge: f64 = (0..data.len())
        .map(|i| (1.0 - data.target(i) * (data.dot(i, w) + b)).max(0.0))
        .sum();
    0.5 * w.iter().map(|x| x * x).sum::<f64>() + c * hinge
}

pub(super) fn objective_and_gradient(data: &Dataset, w: &[f64], b: f64, c: f64) -> (f64, Vec<f64>) {
    let d = data.dimension();
    let mut grad = w.to_vec();
    grad.push(0.0);
    let mut hinge = 0.0;
    for i in 0..data.len() {
        let y = data.target(i);
        let margin = y * (data.dot(i, w) + b);
        if margin < 1.0 {
            hinge += 1.0 - margin;
            data.axpy(i, -c * y, &mut grad[..d]);
            grad[d] -= c * y;
        }
    }
    (0.5 * w.iter().map(|x| x * x).sum::<f64>() + c * hinge, grad)
}

/// Bias minimizing the hinge sum for fixed decision values `margins[k] = w.x_k`.
/// The sum is convex and piecewise linear in `b`; when the minimum is attained
/// on an interval its midpoint is returned.
fn best_bias(data: &Dataset, margins: &[f64]) -> f64 {
    // Point k is active (margin < 1) for b below its breakpoint if positive,
    // above it if negative. Slope of the hinge sum at b is
    // -(#active positives) + (#active negatives).
    // Either way, crossing a breakpoint from the left raises the slope by one.
    let mut breaks: Vec<f64> = (0..data.len()).map(|k| data.target(k) - margins[k]).collect();
    breaks.sort_unstable_by(f64::total_cmp);
    // Left of every breakpoint, all positives are active and no negatives.
    let mut slope = -((0..data.len()).filter(|&k| data.target(k) > 0.0).count() as f64);
    for (idx, &at) in breaks.iter().enumerate() {
        slope += 1.0;
        if slope >= 0.0 {
            if slope == 0.0 {
                let next = breaks.get(idx + 1).map_or(at, |&b| b);
                return 0.5 * (at + next);
            }
            return at;
        }
    }
    breaks.last().copied().unwrap_or(0.0)
}

fn sparse_dot(a: (&[u32], &[f64]), b: (&[u32], &[f64])) -> f64 {
    let (mut i, mut j, mut acc) = (0, 0, 0.0);
    while i < a.0.len() && j < b.0.len() {
        match a.0[i].cmp(&b.0[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                acc += a.1[i] * b.1[j];
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Feasible step interval for `alpha + y * t` within `[0, c]`.
fn step_bounds(alpha: f64, y: f64, c: f64) -> (f64, f64) {
    if y > 0.0 {
        (-alpha, c - alpha)
    } else {
        (alpha - c, alpha)
    }
}

/// Pairwise dual coordinate descent on
/// `min_a 0.5 |sum a_i y_i x_i|^2 - sum a_i`, `0 <= a_i <= C`, `sum a_i y_i = 0`.
///
/// Each pass ranks the rows by KKT violation (ties in seeded random order),
/// pairs the most violating "up" rows with the most violating "low" rows and
/// moves each pair along the direction that keeps the equality constraint, so
/// every iterate is dual feasible. The bias is recovered by exact minimization
/// of the primal in `b` for the current weights. The pass ends the solve when
/// the relative duality gap, which bounds any further objective improvement,
/// drops below the tolerance.
pub(super) fn train(data: &Dataset, params: &TrainParams) -> Result<(Vec<f64>, f64, Diagnostics)> {
    let n = data.len();
    let c = params.c;
    let sq_norms: Vec<f64> = (0..n).map(|i| data.squared_norm(i)).collect();
    let mut alpha = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; data.dimension()];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let objective_at = |w: &[f64]| {
        let margins: Vec<f64> = (0..n).map(|k| data.dot(k, w)).collect();
        let b = best_bias(data, &margins);
        (primal_objective(data, w, b, c), b)
    };
    let (mut prev, mut bias) = objective_at(&w);
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let mut up: Vec<(f64, usize)> = Vec::with_capacity(n);
    let mut low: Vec<(f64, usize)> = Vec::with_capacity(n);
    while iterations < params.max_iterations {
        iterations += 1;
        // Rank by -y_k * grad_k = y_k - w.x_k; ties in random order.
        order.shuffle(&mut rng);
        up.clear();
        low.clear();
        for &k in &order {
            let y = data.target(k);
            let f = y - data.dot(k, &w);
            if (y > 0.0 && alpha[k] < c) || (y < 0.0 && alpha[k] > 0.0) {
                up.push((f, k));
            }
            if (y > 0.0 && alpha[k] > 0.0) || (y < 0.0 && alpha[k] < c) {
                low.push((f, k));
            }
        }
        up.sort_by(|a, b| b.0.total_cmp(&a.0));
        low.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (&(fi, i), &(fj, j)) in up.iter().zip(&low) {
            if fi - fj <= 1e-12 {
                break;
            }
            if i == j {
                continue;
            }
            let (yi, yj) = (data.target(i), data.target(j));
            // derivative of the dual along (y_i e_i - y_j e_j)
            let slope = data.dot(i, &w) - yi - (data.dot(j, &w) - yj);
            let (lo_i, hi_i) = step_bounds(alpha[i], yi, c);
            let (lo_j, hi_j) = step_bounds(alpha[j], -yj, c);
            let (lo, hi) = (lo_i.max(lo_j), hi_i.min(hi_j));
            if (slope > 0.0 && lo >= 0.0) || (slope < 0.0 && hi <= 0.0) || slope == 0.0 {
                continue;
            }
            let curvature = sq_norms[i] + sq_norms[j] - 2.0 * sparse_dot(data.row(i), data.row(j));
            let t = if curvature > 1e-12 {
                (-slope / curvature).clamp(lo, hi)
            } else if slope > 0.0 {
                lo
            } else {
                hi
            };
            if t == 0.0 || !t.is_finite() {
                continue;
            }
            alpha[i] = (alpha[i] + yi * t).clamp(0.0, c);
            alpha[j] = (alpha[j] - yj * t).clamp(0.0, c);
            data.axpy(i, t, &mut w);
            data.axpy(j, -t, &mut w);
        }

        let (obj, b) = objective_at(&w);
        if !obj.is_finite() {
            return Err(Error::NonFinite("svm objective"));
        }
        bias = b;
        let dual = alpha.iter().sum::<f64>() - 0.5 * w.iter().map(|x| x * x).sum::<f64>();
        change = (obj - dual).max(0.0) / obj.abs().max(f64::MIN_POSITIVE);
        prev = obj;
        if change < params.tolerance {
            converged = true;
            break;
        }
    }
    Ok((
        w,
        bias,
        Diagnostics {
            objective: prev,
            stopping_measure: change,
            iterations,
            converged,
        },
    ))
}
