//! Soft-margin RBF-kernel SVM trained with sequential minimal optimization.
//!
//! The trained discriminant `g(x) = Σ α_l y_l K(x, x_l) + b` doubles as the
//! test statistic for the spiral benchmark: its value on the two classes'
//! training points defines the per-class empirical distributions.
//!
//! The solver is Platt-style SMO over the dual problem: pick the point with
//! the largest KKT violation, pair it with the point maximizing |E_i − E_j|,
//! fall back to a seeded shuffle of the remaining candidates when that pair
//! makes no progress.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SvmError {
    #[error("training data contains a single class")]
    SingleClassInput,
    #[error("points and labels have different lengths ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("non-finite coordinate in input")]
    NonFiniteValue,
    #[error("need at least two training points, got {0}")]
    TooFewPoints(usize),
    #[error("labels must be +1 or -1, got {0}")]
    BadLabel(f64),
    #[error("grid range must satisfy lo < hi, got ({0}, {1})")]
    BadRange(f64, f64),
    #[error("grid resolution must be at least 2")]
    BadResolution,
}

/// RBF kernel `K(x, y) = exp(-gamma * ||x - y||^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub gamma: f64,
}

impl KernelParams {
    pub fn new(gamma: f64) -> Result<Self, SvmError> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(SvmError::NonFiniteValue);
        }
        Ok(Self { gamma })
    }

    pub fn eval(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let dx = a[0] - b[0];
        let dy = a[1] - b[1];
        (-self.gamma * (dx * dx + dy * dy)).exp()
    }
}

/// SMO hyperparameters. The `seed` only drives the fallback shuffle of
/// second-index candidates; training is reproducible given the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoSettings {
    pub c: f64,
    pub tolerance: f64,
    pub max_passes: usize,
    pub seed: u64,
}

impl Default for SmoSettings {
    fn default() -> Self {
        Self {
            c: 1.0,
            tolerance: 1e-3,
            max_passes: 200,
            seed: 0,
        }
    }
}

/// Trained model: support vectors with signed dual coefficients `α_l y_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub support_vectors: Vec<[f64; 2]>,
    /// Signed coefficients `α_l y_l`.
    pub duals: Vec<f64>,
    pub bias: f64,
    pub kernel: KernelParams,
    /// Box constraint used at training time, kept for audit.
    pub c: f64,
    /// False when `max_passes` ran out before every KKT residual fit
    /// inside the tolerance.
    pub converged: bool,
    /// Dual objective after each accepted pair update.
    pub objective_trace: Vec<f64>,
}

impl SvmModel {
    /// Discriminant `g(x) = Σ (α_l y_l) K(x, x_l) + b`.
    pub fn decision_function(&self, x: [f64; 2]) -> Result<f64, SvmError> {
        if !(x[0].is_finite() && x[1].is_finite()) {
            return Err(SvmError::NonFiniteValue);
        }
        let sum: f64 = self
            .support_vectors
            .iter()
            .zip(&self.duals)
            .map(|(sv, d)| d * self.kernel.eval(x, *sv))
            .sum();
        Ok(sum + self.bias)
    }

    /// Discriminant values at the centers of a `resolution × resolution`
    /// grid, row-major with rows along the y axis.
    pub fn decision_grid(
        &self,
        x_range: (f64, f64),
        y_range: (f64, f64),
        resolution: usize,
    ) -> Result<DecisionGrid, SvmError> {
        if resolution < 2 {
            return Err(SvmError::BadResolution);
        }
        for &(lo, hi) in &[x_range, y_range] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(SvmError::BadRange(lo, hi));
            }
        }
        let mut values = Vec::with_capacity(resolution * resolution);
        for row in 0..resolution {
            for col in 0..resolution {
                let center = grid_cell_center(x_range, y_range, resolution, row, col);
                values.push(self.decision_function(center)?);
            }
        }
        Ok(DecisionGrid {
            values,
            resolution,
            x_range,
            y_range,
        })
    }
}

/// Row-major matrix of discriminant values over a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionGrid {
    pub values: Vec<f64>,
    pub resolution: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl DecisionGrid {
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.resolution + col]
    }

    pub fn cell_center(&self, row: usize, col: usize) -> [f64; 2] {
        grid_cell_center(self.x_range, self.y_range, self.resolution, row, col)
    }
}

fn grid_cell_center(
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: usize,
    row: usize,
    col: usize,
) -> [f64; 2] {
    let dx = (x_range.1 - x_range.0) / resolution as f64;
    let dy = (y_range.1 - y_range.0) / resolution as f64;
    [
        x_range.0 + (col as f64 + 0.5) * dx,
        y_range.0 + (row as f64 + 0.5) * dy,
    ]
}

/// Trains a soft-margin SVM on 2-D points with ±1 labels.
///
/// Exhausting `max_passes` is not a hard failure: the model comes back with
/// `converged == false` so callers can decide how to report it.
pub fn train(
    points: &[[f64; 2]],
    labels: &[f64],
    kernel: KernelParams,
    settings: SmoSettings,
) -> Result<SvmModel, SvmError> {
    let n = points.len();
    if n != labels.len() {
        return Err(SvmError::DimensionMismatch(n, labels.len()));
    }
    if n < 2 {
        return Err(SvmError::TooFewPoints(n));
    }
    if points.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(SvmError::NonFiniteValue);
    }
    for &y in labels {
        if y != 1.0 && y != -1.0 {
            return Err(SvmError::BadLabel(y));
        }
    }
    if labels.iter().all(|&y| y == labels[0]) {
        return Err(SvmError::SingleClassInput);
    }

    let c = settings.c;
    let tol = settings.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);

    // Dense kernel matrix; the benchmark problems are small.
    let mut k = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = kernel.eval(points[i], points[j]);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }

    let mut alpha = vec![0.0f64; n];
    let mut bias = 0.0f64;
    // Error cache: E_i = g(x_i) - y_i. All alphas start at zero.
    let mut errors: Vec<f64> = labels.iter().map(|&y| bias - y).collect();
    let mut objective_trace = vec![0.0f64];

    let dual_objective = |alpha: &[f64]| -> f64 {
        let mut obj = 0.0;
        for i in 0..n {
            if alpha[i] == 0.0 {
                continue;
            }
            obj += alpha[i];
            for j in 0..n {
                if alpha[j] != 0.0 {
                    obj -= 0.5 * alpha[i] * alpha[j] * labels[i] * labels[j] * k[i * n + j];
                }
            }
        }
        obj
    };

    // KKT violation of point i given the current alphas and bias.
    let kkt_violation = |alpha: &[f64], errors: &[f64], i: usize| -> f64 {
        let r = errors[i] * labels[i]; // y_i * g(x_i) - 1
        if alpha[i] < c - 1e-12 && r < 0.0 {
            -r
        } else if alpha[i] > 1e-12 && r > 0.0 {
            r
        } else {
            0.0
        }
    };

    let mut converged = false;
    'outer: for _pass in 0..settings.max_passes {
        // First choice: maximal KKT violation, ties broken by lowest index.
        let mut worst = 0usize;
        let mut worst_violation = 0.0f64;
        for i in 0..n {
            let v = kkt_violation(&alpha, &errors, i);
            if v > worst_violation {
                worst_violation = v;
                worst = i;
            }
        }
        if worst_violation <= tol {
            converged = true;
            break;
        }
        let i1 = worst;

        // Second choice: maximize |E1 - E2|, then seeded-shuffle fallback.
        let mut candidates: Vec<usize> = (0..n).filter(|&j| j != i1).collect();
        candidates.sort_by(|&a, &b| {
            let da = (errors[i1] - errors[a]).abs();
            let db = (errors[i1] - errors[b]).abs();
            db.partial_cmp(&da).unwrap().then(a.cmp(&b))
        });
        let best = candidates[0];
        let mut fallback = candidates[1..].to_vec();
        fallback.shuffle(&mut rng);

        let mut stepped = false;
        for &i2 in std::iter::once(&best).chain(fallback.iter()) {
            if take_step(
                i1, i2, &mut alpha, &mut bias, &mut errors, &k, labels, c, n,
            ) {
                objective_trace.push(dual_objective(&alpha));
                stepped = true;
                break;
            }
        }
        if !stepped {
            // Violator exists but no pair makes progress; numerically stuck.
            break 'outer;
        }
    }
    // Final convergence check in case the loop ran out of passes right
    // after the last violation was fixed.
    if !converged {
        converged = (0..n).all(|i| kkt_violation(&alpha, &errors, i) <= tol);
    }

    // Recompute the bias from the final alphas: average over free support
    // vectors, else midpoint of the KKT-feasible interval.
    let raw = |i: usize| -> f64 {
        (0..n)
            .map(|j| alpha[j] * labels[j] * k[i * n + j])
            .sum::<f64>()
    };
    let free: Vec<usize> = (0..n)
        .filter(|&i| alpha[i] > 1e-8 && alpha[i] < c - 1e-8)
        .collect();
    let bias = if !free.is_empty() {
        free.iter().map(|&i| labels[i] - raw(i)).sum::<f64>() / free.len() as f64
    } else {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..n {
            let bound = labels[i] - raw(i);
            // y_i (raw_i + b) >= 1 for alpha=0, <= 1 for alpha=C.
            let at_zero = alpha[i] <= 1e-8;
            if (at_zero && labels[i] > 0.0) || (!at_zero && labels[i] < 0.0) {
                lo = lo.max(bound);
            } else {
                hi = hi.min(bound);
            }
        }
        if lo.is_finite() && hi.is_finite() {
            0.5 * (lo + hi)
        } else {
            bias
        }
    };

    let mut support_vectors = Vec::new();
    let mut duals = Vec::new();
    for i in 0..n {
        if alpha[i] > 1e-8 {
            support_vectors.push(points[i]);
            duals.push(alpha[i] * labels[i]);
        }
    }
    if support_vectors.is_empty() {
        // Degenerate but representable: constant discriminant.
        support_vectors.push(points[0]);
        duals.push(0.0);
    }

    Ok(SvmModel {
        support_vectors,
        duals,
        bias,
        kernel,
        c,
        converged,
        objective_trace,
    })
}

/// Platt's analytic two-variable update. Returns true when the pair moved.
#[allow(clippy::too_many_arguments)]
fn take_step(
    i1: usize,
    i2: usize,
    alpha: &mut [f64],
    bias: &mut f64,
    errors: &mut [f64],
    k: &[f64],
    labels: &[f64],
    c: f64,
    n: usize,
) -> bool {
    if i1 == i2 {
        return false;
    }
    let (a1_old, a2_old) = (alpha[i1], alpha[i2]);
    let (y1, y2) = (labels[i1], labels[i2]);
    let (e1, e2) = (errors[i1], errors[i2]);
    let s = y1 * y2;

    let (lo, hi) = if s < 0.0 {
        let d = a2_old - a1_old;
        (d.max(0.0), (c + d).min(c))
    } else {
        let sum = a1_old + a2_old;
        ((sum - c).max(0.0), sum.min(c))
    };
    if hi - lo < 1e-12 {
        return false;
    }

    let k11 = k[i1 * n + i1];
    let k12 = k[i1 * n + i2];
    let k22 = k[i2 * n + i2];
    let eta = k11 + k22 - 2.0 * k12;
    if eta <= 1e-12 {
        return false;
    }

    let mut a2 = a2_old + y2 * (e1 - e2) / eta;
    a2 = a2.clamp(lo, hi);
    if (a2 - a2_old).abs() < 1e-12 * (a2 + a2_old + 1e-12) {
        return false;
    }
    let a1 = a1_old + s * (a2_old - a2);

    // Bias update keeping the error cache consistent.
    let b1 = *bias - e1 - y1 * (a1 - a1_old) * k11 - y2 * (a2 - a2_old) * k12;
    let b2 = *bias - e2 - y1 * (a1 - a1_old) * k12 - y2 * (a2 - a2_old) * k22;
    let new_bias = if a1 > 1e-12 && a1 < c - 1e-12 {
        b1
    } else if a2 > 1e-12 && a2 < c - 1e-12 {
        b2
    } else {
        0.5 * (b1 + b2)
    };

    let db = new_bias - *bias;
    let da1 = a1 - a1_old;
    let da2 = a2 - a2_old;
    for j in 0..n {
        errors[j] += y1 * da1 * k[i1 * n + j] + y2 * da2 * k[i2 * n + j] + db;
    }
    alpha[i1] = a1;
    alpha[i2] = a2;
    *bias = new_bias;
    true
}

/// Maximum KKT residual of a trained model over its own training set.
/// Zero at an exact optimum; `train` drives this below the tolerance.
pub fn max_kkt_residual(model: &SvmModel, points: &[[f64; 2]], labels: &[f64]) -> f64 {
    // Recover per-point alphas: points matching a support vector carry its
    // |dual|, everything else is zero.
    let mut worst = 0.0f64;
    for (p, &y) in points.iter().zip(labels) {
        let g = model.decision_function(*p).unwrap();
        let a = model
            .support_vectors
            .iter()
            .position(|sv| sv == p)
            .map(|idx| model.duals[idx].abs())
            .unwrap_or(0.0);
        let margin = y * g;
        let r = if a <= 1e-8 {
            (1.0 - margin).max(0.0)
        } else if a >= model.c - 1e-8 {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(r);
    }
    worst
}
