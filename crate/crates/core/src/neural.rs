//! Logistic stand-in for an external feature extractor.
//!
//! Trains with the importance-weighted cross-entropy (weights `N_2/N` for
//! label 0 and `N_1/N` for label 1) using full-batch gradient descent, and
//! exposes the pre-sigmoid logit as the test statistic.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NeuralError {
    #[error("predictions and labels have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("feature rows must all have dimension {expected}, row {row} has {got}")]
    ShapeMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("training data contains a single class")]
    SingleClassInput,
    #[error("class counts must both be positive")]
    EmptyClass,
    #[error("input dimension {0} does not match model dimension {1}")]
    DimensionMismatch(usize, usize),
}

const PROB_CLAMP: f64 = 1e-12;

/// Class counts driving the importance weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedBceSpec {
    pub n1: usize,
    pub n2: usize,
}

impl WeightedBceSpec {
    pub fn new(n1: usize, n2: usize) -> Result<Self, NeuralError> {
        if n1 == 0 || n2 == 0 {
            return Err(NeuralError::EmptyClass);
        }
        Ok(Self { n1, n2 })
    }

    pub fn from_labels(labels: &[u8]) -> Result<Self, NeuralError> {
        let n2 = labels.iter().filter(|&&y| y == 1).count();
        Self::new(labels.len() - n2, n2)
    }

    pub fn total(&self) -> usize {
        self.n1 + self.n2
    }
}

/// Importance weight: `N_2/N` for label 0, `N_1/N` for label 1, so each
/// class contributes the same total weight regardless of imbalance.
pub fn sample_weight(label: u8, spec: WeightedBceSpec) -> f64 {
    let n = spec.total() as f64;
    if label == 0 {
        spec.n2 as f64 / n
    } else {
        spec.n1 as f64 / n
    }
}

/// `L = -Σ w_n { y_n log ŷ_n + (1-y_n) log(1-ŷ_n) }`, with predictions
/// clamped to `[1e-12, 1-1e-12]` so the sum stays finite.
pub fn weighted_bce_loss(
    predictions: &[f64],
    labels: &[u8],
    spec: WeightedBceSpec,
) -> Result<f64, NeuralError> {
    if predictions.len() != labels.len() {
        return Err(NeuralError::LengthMismatch(predictions.len(), labels.len()));
    }
    let mut loss = 0.0;
    for (&p, &y) in predictions.iter().zip(labels) {
        let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
        let term = if y == 1 { p.ln() } else { (1.0 - p).ln() };
        loss -= sample_weight(y, spec) * term;
    }
    Ok(loss)
}

/// Linear logit model; the logit (not the sigmoid output) is the statistic
/// fed to the hypothesis tests.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LogisticModel {
    pub fn zeros(dim: usize) -> Self {
        Self {
            weights: vec![0.0; dim],
            bias: 0.0,
        }
    }

    /// Pre-sigmoid value `w·x + b`.
    pub fn logit(&self, x: &[f64]) -> Result<f64, NeuralError> {
        if x.len() != self.weights.len() {
            return Err(NeuralError::DimensionMismatch(x.len(), self.weights.len()));
        }
        Ok(self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias)
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<f64, NeuralError> {
        Ok(sigmoid(self.logit(x)?))
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn check_shapes(features: &[Vec<f64>], labels: &[u8]) -> Result<usize, NeuralError> {
    if features.len() != labels.len() {
        return Err(NeuralError::LengthMismatch(features.len(), labels.len()));
    }
    let dim = features.first().map(|r| r.len()).unwrap_or(0);
    for (row, f) in features.iter().enumerate() {
        if f.len() != dim {
            return Err(NeuralError::ShapeMismatch {
                row,
                expected: dim,
                got: f.len(),
            });
        }
    }
    Ok(dim)
}

/// Analytic gradient of the weighted loss at `model`: `Σ w_n (ŷ_n − y_n) x_n`
/// per weight, same sum without the feature for the bias.
pub fn loss_gradient(
    features: &[Vec<f64>],
    labels: &[u8],
    spec: WeightedBceSpec,
    model: &LogisticModel,
) -> Result<(Vec<f64>, f64), NeuralError> {
    let dim = check_shapes(features, labels)?;
    let mut grad_w = vec![0.0; dim];
    let mut grad_b = 0.0;
    for (x, &y) in features.iter().zip(labels) {
        let residual = sample_weight(y, spec) * (model.predict_proba(x)? - y as f64);
        for (g, &v) in grad_w.iter_mut().zip(x) {
            *g += residual * v;
        }
        grad_b += residual;
    }
    Ok((grad_w, grad_b))
}

/// Full-batch gradient descent from a zero initialization. Deterministic;
/// the seed parameter is accepted for interface stability but unused.
pub fn train_logistic(
    features: &[Vec<f64>],
    labels: &[u8],
    spec: WeightedBceSpec,
    lr: f64,
    epochs: usize,
    _seed: u64,
) -> Result<LogisticModel, NeuralError> {
    let dim = check_shapes(features, labels)?;
    if labels.iter().all(|&y| y == labels[0]) {
        return Err(NeuralError::SingleClassInput);
    }
    let mut model = LogisticModel::zeros(dim);
    for _ in 0..epochs {
        let (grad_w, grad_b) = loss_gradient(features, labels, spec, &model)?;
        for (w, g) in model.weights.iter_mut().zip(&grad_w) {
            *w -= lr * g;
        }
        model.bias -= lr * grad_b;
    }
    Ok(model)
}
