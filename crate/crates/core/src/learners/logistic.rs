use alloc::vec::Vec;

use super::{Dataset, Diagnostics, TrainParams};
use crate::{Error, Result};

/// ln(1 + exp(-m)) without overflow.
fn log_loss(margin: f64) -> f64 {
    if margin > 0.0 {
        libm::log1p(libm::exp(-margin))
    } else {
        -margin + libm::log1p(libm::exp(margin))
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

struct Problem<'a> {
    data: &'a Dataset,
    c: f64,
}

impl Problem<'_> {
    /// Decision values `w.x_i + b`; `theta` is `[w.., b]`.
    fn decision(&self, theta: &[f64]) -> Vec<f64> {
        let d = self.data.dimension();
        let (w, b) = (&theta[..d], theta[d]);
        (0..self.data.len()).map(|i| self.data.dot(i, w) + b).collect()
    }

    fn objective(&self, theta: &[f64], z: &[f64]) -> f64 {
        let w = &theta[..self.data.dimension()];
        let loss: f64 = z
            .iter()
            .enumerate()
            .map(|(i, &zi)| log_loss(self.data.target(i) * zi))
            .sum();
        0.5 * dot(w, w) + self.c * loss
    }

    /// Gradient and the per-row Hessian weights `C * s(1 - s)`.
    fn gradient(&self, theta: &[f64], z: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let d = self.data.dimension();
        let mut grad = theta.to_vec();
        grad[d] = 0.0;
        let mut curvature = Vec::with_capacity(z.len());
        for (i, &zi) in z.iter().enumerate() {
            let y = self.data.target(i);
            let coef = self.c * (sigmoid(y * zi) - 1.0) * y;
            self.data.axpy(i, coef, &mut grad[..d]);
            grad[d] += coef;
            let s = sigmoid(zi);
            curvature.push(self.c * s * (1.0 - s));
        }
        (grad, curvature)
    }

    /// Row-wise `X v_w + v_b`.
    fn apply_x(&self, v: &[f64]) -> Vec<f64> {
        self.decision(v)
    }

    fn hessian_product(&self, curvature: &[f64], v: &[f64], out: &mut [f64]) {
        let d = self.data.dimension();
        out[..d].copy_from_slice(&v[..d]);
        out[d] = 0.0;
        for (i, &weight) in curvature.iter().enumerate() {
            let t = weight * (self.data.dot(i, &v[..d]) + v[d]);
            if t != 0.0 {
                self.data.axpy(i, t, &mut out[..d]);
                out[d] += t;
            }
        }
    }

    /// Truncated conjugate gradient for `H s = -g`.
    fn newton_direction(&self, curvature: &[f64], grad: &[f64], max_steps: usize) -> Vec<f64> {
        let m = grad.len();
        let gnorm = norm(grad);
        let target = gnorm * libm::sqrt(gnorm).min(0.1);
        let mut s = alloc::vec![0.0; m];
        let mut r: Vec<f64> = grad.iter().map(|g| -g).collect();
        let mut p = r.clone();
        let mut hp = alloc::vec![0.0; m];
        let mut rr = dot(&r, &r);
        for _ in 0..max_steps {
            if libm::sqrt(rr) <= target {
                break;
            }
            self.hessian_product(curvature, &p, &mut hp);
            let php = dot(&p, &hp);
            if php <= 0.0 {
                break;
            }
            let alpha = rr / php;
            for k in 0..m {
                s[k] += alpha * p[k];
                r[k] -= alpha * hp[k];
            }
            let rr_next = dot(&r, &r);
            let beta = rr_next / rr;
            rr = rr_next;
            for k in 0..m {
                p[k] = r[k] + beta * p[k];
            }
        }
        if s.iter().all(|&x| x == 0.0) {
            // Degenerate curvature: fall back to steepest descent.
            s = grad.iter().map(|g| -g).collect();
        }
        s
    }
}

pub(super) fn objective_and_gradient(data: &Dataset, w: &[f64], b: f64, c: f64) -> (f64, Vec<f64>) {
    let problem = Problem { data, c };
    let mut theta = w.to_vec();
    theta.push(b);
    let z = problem.decision(&theta);
    let obj = problem.objective(&theta, &z);
    (obj, problem.gradient(&theta, &z).0)
}

pub(super) fn train(data: &Dataset, params: &TrainParams) -> Result<(Vec<f64>, f64, Diagnostics)> {
    let problem = Problem { data, c: params.c };
    let d = data.dimension();
    let mut theta = alloc::vec![0.0; d + 1];
    let mut z = alloc::vec![0.0; data.len()];
    let mut obj = problem.objective(&theta, &z);
    let max_cg = (d + 1).clamp(10, 250);
    let mut iterations = 0;
    let mut converged = false;
    let mut gnorm;
    loop {
        let (grad, curvature) = problem.gradient(&theta, &z);
        gnorm = norm(&grad);
        if !gnorm.is_finite() {
            return Err(Error::NonFinite("logistic gradient"));
        }
        if gnorm < params.tolerance {
            converged = true;
            break;
        }
        if iterations >= params.max_iterations {
            break;
        }
        iterations += 1;

        let step = problem.newton_direction(&curvature, &grad, max_cg);
        let slope = dot(&grad, &step);
        let xs = problem.apply_x(&step);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = theta.iter().zip(&step).map(|(a, s)| a + t * s).collect();
            let trial_z: Vec<f64> = z.iter().zip(&xs).map(|(a, s)| a + t * s).collect();
            let trial_obj = problem.objective(&trial, &trial_z);
            if trial_obj <= obj + 1e-4 * t * slope {
                theta = trial;
                z = problem.decision(&theta);
                obj = problem.objective(&theta, &z);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // No representable decrease left; report the current point.
            break;
        }
    }
    let bias = theta.pop().unwrap_or(0.0);
    Ok((
        theta,
        bias,
        Diagnostics {
            objective: obj,
            stopping_measure: gnorm,
            iterations,
            converged,
        },
    ))
}
