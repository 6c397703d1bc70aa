//! Linear classifiers: L2-regularized logistic regression and linear SVM.
//!
//! Both minimize `0.5 * |w|^2 + C * sum_i loss(y_i, w.x_i + b)` with an
//! unregularized bias `b`:
//!
//! * logistic regression: `loss = ln(1 + exp(-y f))`, solved by Newton-CG with
//!   a backtracking line search; stops when the gradient norm is below the
//!   tolerance.
//! * SVM: `loss = max(0, 1 - y f)`, solved by pairwise dual coordinate descent
//!   that keeps the bias constraint satisfied; stops when the relative duality
//!   gap (an upper bound on any remaining objective improvement) is below the
//!   tolerance.

mod data;
mod logistic;
mod svm;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use data::Dataset;

use crate::features::SparseVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmChoice {
    Svm,
    LogisticRegression,
}

impl AlgorithmChoice {
    pub const ALL: [AlgorithmChoice; 2] = [AlgorithmChoice::Svm, AlgorithmChoice::LogisticRegression];

    pub const fn as_str(self) -> &'static str {
        match self {
            AlgorithmChoice::Svm => "svm",
            AlgorithmChoice::LogisticRegression => "lr",
        }
    }

    /// Stopping tolerance used when none is configured.
    pub const fn default_tolerance(self) -> f64 {
        match self {
            AlgorithmChoice::Svm => 1e-3,
            AlgorithmChoice::LogisticRegression => 1e-4,
        }
    }
}

impl fmt::Display for AlgorithmChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svm" => Ok(AlgorithmChoice::Svm),
            "lr" | "logistic_regression" => Ok(AlgorithmChoice::LogisticRegression),
            other => Err(Error::param(
                "algorithm",
                alloc::format!("expected `svm` or `lr`, got `{other}`"),
            )),
        }
    }
}

pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_MAX_ITERATIONS: usize = 1000;

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    pub c: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Coordinate order for the SVM solver.
    pub seed: u64,
}

impl TrainParams {
    pub fn defaults_for(algorithm: AlgorithmChoice) -> Self {
        TrainParams {
            c: DEFAULT_C,
            tolerance: algorithm.default_tolerance(),
            max_iterations: DEFAULT_MAX_ITERATIONS,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::param("c", "must be a positive finite number"));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::param("tolerance", "must be a positive finite number"));
        }
        if self.max_iterations == 0 {
            return Err(Error::param("max_iterations", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub objective: f64,
    /// Gradient norm for logistic regression; relative duality gap for the SVM.
    pub stopping_measure: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub algorithm: AlgorithmChoice,
    pub c: f64,
    pub diagnostics: Diagnostics,
}

impl TrainedModel {
    pub fn dimension(&self) -> usize {
        self.weights.len()
    }
}

/// Trains a model over features `0..dimension`. Labels are `true` for relevant.
pub fn train(
    vectors: &[SparseVector],
    labels: &[bool],
    dimension: usize,
    algorithm: AlgorithmChoice,
    params: &TrainParams,
) -> Result<TrainedModel> {
    let data = Dataset::new(vectors, labels, dimension)?;
    train_dataset(&data, algorithm, params)
}

pub fn train_dataset(data: &Dataset, algorithm: AlgorithmChoice, params: &TrainParams) -> Result<TrainedModel> {
    params.validate()?;
    data.ensure_trainable()?;
    let (weights, bias, diagnostics) = match algorithm {
        AlgorithmChoice::LogisticRegression => logistic::train(data, params)?,
        AlgorithmChoice::Svm => svm::train(data, params)?,
    };
    if !diagnostics.objective.is_finite() || !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite("model parameters"));
    }
    Ok(TrainedModel {
        weights,
        bias,
        algorithm,
        c: params.c,
        diagnostics,
    })
}

/// Raw margin `w.x + b`.
pub fn score(model: &TrainedModel, vector: &SparseVector) -> Result<f64> {
    if let Some(max) = vector.max_index() {
        if max as usize >= model.weights.len() {
            return Err(Error::IndexOutOfBounds {
                index: max as usize,
                dimension: model.weights.len(),
            });
        }
    }
    Ok(vector
        .entries()
        .iter()
        .map(|&(i, v)| model.weights[i as usize] * v)
        .sum::<f64>()
        + model.bias)
}

/// Objective value and (sub)gradient at `(weights, bias)`. The gradient's last
/// component is the bias derivative. At the hinge kink (margin exactly 1) the
/// zero branch is used.
pub fn objective_and_gradient(
    weights: &[f64],
    bias: f64,
    data: &Dataset,
    algorithm: AlgorithmChoice,
    c: f64,
) -> Result<(f64, Vec<f64>)> {
    if weights.len() != data.dimension() {
        return Err(Error::param("weights", "length must equal the feature dimension"));
    }
    if !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) || !c.is_finite() {
        return Err(Error::NonFinite("objective parameters"));
    }
    let (obj, grad) = match algorithm {
        AlgorithmChoice::LogisticRegression => logistic::objective_and_gradient(data, weights, bias, c),
        AlgorithmChoice::Svm => svm::objective_and_gradient(data, weights, bias, c),
    };
    if !obj.is_finite() {
        return Err(Error::NonFinite("objective"));
    }
    Ok((obj, grad))
}
