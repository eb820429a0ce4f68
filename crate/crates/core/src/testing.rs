//! Acceptance-region calibration and the four-way decision rule.
//!
//! Each class gets a closed interval of accepted test-statistic values,
//! bounded by empirical quantiles of that class's training scores. A score
//! inside exactly one interval is assigned to that class; inside both it is
//! overlap-uncertain; outside both it is outlier-uncertain.

use crate::empirical::{EmpiricalDistribution, EmpiricalError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TestingError {
    #[error(transparent)]
    Empirical(#[from] EmpiricalError),
    #[error("quantile points must satisfy 0 < lower < upper < 1, got ({0}, {1})")]
    BadQuantilePoints(f64, f64),
    #[error("non-finite test statistic at index {0}")]
    NonFiniteValue(usize),
    #[error("region bounds must be finite with lower <= upper, got [{0}, {1}]")]
    BadRegion(f64, f64),
}

/// Closed interval of test-statistic values for which one class's null
/// hypothesis is not rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceRegion {
    pub lower: f64,
    pub upper: f64,
}

impl AcceptanceRegion {
    pub fn new(lower: f64, upper: f64) -> Result<Self, TestingError> {
        if !(lower.is_finite() && upper.is_finite() && lower <= upper) {
            return Err(TestingError::BadRegion(lower, upper));
        }
        Ok(Self { lower, upper })
    }

    /// Boundary-inclusive membership.
    pub fn contains(&self, t: f64) -> bool {
        self.lower <= t && t <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Quantile points bounding the two acceptance regions. The per-class pairs
/// are independent because the benchmark experiments use unequal tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestConfig {
    pub class1_lower_p: f64,
    pub class1_upper_p: f64,
    pub class2_lower_p: f64,
    pub class2_upper_p: f64,
}

impl TestConfig {
    pub fn new(q1_lo: f64, q1_hi: f64, q2_lo: f64, q2_hi: f64) -> Result<Self, TestingError> {
        for &(lo, hi) in &[(q1_lo, q1_hi), (q2_lo, q2_hi)] {
            if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi && hi < 1.0) {
                return Err(TestingError::BadQuantilePoints(lo, hi));
            }
        }
        Ok(Self {
            class1_lower_p: q1_lo,
            class1_upper_p: q1_hi,
            class2_lower_p: q2_lo,
            class2_upper_p: q2_hi,
        })
    }

    /// Common significance level: both tests use points `(α, 1−α)`.
    pub fn symmetric(alpha: f64) -> Result<Self, TestingError> {
        Self::new(alpha, 1.0 - alpha, alpha, 1.0 - alpha)
    }
}

/// Outcome of the dual hypothesis test for one test-statistic value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Class1,
    Class2,
    /// Both nulls accepted: the score sits where the class distributions overlap.
    UncertainOverlap,
    /// Both nulls rejected: the score is an outlier relative to both classes.
    UncertainOutlier,
}

impl Decision {
    pub fn is_uncertain(&self) -> bool {
        matches!(self, Decision::UncertainOverlap | Decision::UncertainOutlier)
    }

    /// Stable lowercase token used in CSV output.
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Class1 => "class1",
            Decision::Class2 => "class2",
            Decision::UncertainOverlap => "uncertain_overlap",
            Decision::UncertainOutlier => "uncertain_outlier",
        }
    }
}

/// Calibrated pair of acceptance regions plus the config they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedTester {
    pub region1: AcceptanceRegion,
    pub region2: AcceptanceRegion,
    pub config: TestConfig,
}

impl CalibratedTester {
    /// Builds region_i = [quantile(dist_i, lower_p), quantile(dist_i, upper_p)].
    pub fn calibrate(
        dist1: &EmpiricalDistribution,
        dist2: &EmpiricalDistribution,
        config: TestConfig,
    ) -> Result<Self, TestingError> {
        let region1 = AcceptanceRegion::new(
            dist1.quantile(config.class1_lower_p)?,
            dist1.quantile(config.class1_upper_p)?,
        )?;
        let region2 = AcceptanceRegion::new(
            dist2.quantile(config.class2_lower_p)?,
            dist2.quantile(config.class2_upper_p)?,
        )?;
        Ok(Self {
            region1,
            region2,
            config,
        })
    }

    pub fn from_regions(
        region1: AcceptanceRegion,
        region2: AcceptanceRegion,
        config: TestConfig,
    ) -> Self {
        Self {
            region1,
            region2,
            config,
        }
    }

    pub fn decide(&self, t: f64) -> Result<Decision, TestingError> {
        if !t.is_finite() {
            return Err(TestingError::NonFiniteValue(0));
        }
        Ok(match (self.region1.contains(t), self.region2.contains(t)) {
            (true, false) => Decision::Class1,
            (false, true) => Decision::Class2,
            (true, true) => Decision::UncertainOverlap,
            (false, false) => Decision::UncertainOutlier,
        })
    }

    /// Elementwise [`decide`](Self::decide); the error carries the offending index.
    pub fn decide_batch(&self, ts: &[f64]) -> Result<Vec<Decision>, TestingError> {
        ts.iter()
            .enumerate()
            .map(|(i, &t)| self.decide(t).map_err(|_| TestingError::NonFiniteValue(i)))
            .collect()
    }
}
