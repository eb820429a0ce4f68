//! Per-class empirical distributions of scalar feature values.
//!
//! A distribution is just the sorted sample of training-set feature values
//! for one class. Quantiles are order statistics (the `⌈p·N⌉`-th smallest
//! sample, no interpolation), which makes them exactly the inverse of the
//! empirical CDF and keeps every threshold oracle-testable.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EmpiricalError {
    #[error("need at least {min} samples, got {got}")]
    EmptyOrTooSmall { got: usize, min: usize },
    #[error("non-finite value at index {0}")]
    NonFiniteValue(usize),
    #[error("quantile point {0} outside (0, 1]")]
    POutOfRange(f64),
    #[error("histogram needs at least one bin")]
    ZeroBins,
}

/// One labeled feature value. Label 0 is class 1, label 1 is class 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureSample {
    pub value: f64,
    pub label: u8,
}

impl FeatureSample {
    pub fn new(value: f64, label: u8) -> Result<Self, EmpiricalError> {
        if !value.is_finite() {
            return Err(EmpiricalError::NonFiniteValue(0));
        }
        Ok(Self {
            value,
            label: if label == 0 { 0 } else { 1 },
        })
    }
}

/// Sorted feature values of one class. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted_values: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Default minimum sample count for calibration-grade distributions.
    /// Tail quantiles at the percent level are meaningless below this.
    pub const DEFAULT_MIN_COUNT: usize = 20;

    /// Builds a distribution from raw values. Duplicates are retained.
    pub fn from_samples(values: &[f64], min_count: usize) -> Result<Self, EmpiricalError> {
        let min = min_count.max(1);
        if values.len() < min {
            return Err(EmpiricalError::EmptyOrTooSmall {
                got: values.len(),
                min,
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(EmpiricalError::NonFiniteValue(i));
        }
        let mut sorted_values = values.to_vec();
        sorted_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { sorted_values })
    }

    pub fn count(&self) -> usize {
        self.sorted_values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted_values
    }

    pub fn min(&self) -> f64 {
        self.sorted_values[0]
    }

    pub fn max(&self) -> f64 {
        *self.sorted_values.last().unwrap()
    }

    /// The `⌈p·N⌉`-th smallest sample; equivalently the smallest value `t`
    /// with `ecdf(t) ≥ p`.
    pub fn quantile(&self, p: f64) -> Result<f64, EmpiricalError> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(EmpiricalError::POutOfRange(p));
        }
        let n = self.sorted_values.len();
        let rank = (p * n as f64).ceil() as usize;
        let idx = rank.clamp(1, n) - 1;
        Ok(self.sorted_values[idx])
    }

    /// Fraction of samples ≤ `t`.
    pub fn ecdf(&self, t: f64) -> Result<f64, EmpiricalError> {
        if !t.is_finite() {
            return Err(EmpiricalError::NonFiniteValue(0));
        }
        let below = self.sorted_values.partition_point(|&v| v <= t);
        Ok(below as f64 / self.sorted_values.len() as f64)
    }

    /// Equal-width bins over `[min, max]`, last bin right-inclusive.
    /// An all-equal sample gets its range widened by 0.5 on each side.
    pub fn histogram(&self, bins: usize) -> Result<Vec<(f64, f64, usize)>, EmpiricalError> {
        if bins == 0 {
            return Err(EmpiricalError::ZeroBins);
        }
        let (mut lo, mut hi) = (self.min(), self.max());
        if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &v in &self.sorted_values {
            let idx = (((v - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Ok(counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| (lo + i as f64 * width, lo + (i + 1) as f64 * width, c))
            .collect())
    }
}
