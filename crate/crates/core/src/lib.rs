//! Binary classification with an abstention option.
//!
//! A scalar feature extracted from a trained classifier (an SVM discriminant
//! value or a pre-sigmoid logit) is tested against the per-class empirical
//! distributions of training-set feature values. Each class defines a
//! quantile-bounded acceptance interval; the pair of interval memberships
//! yields a four-way decision:
//!
//! - inside exactly one interval: a confident class assignment,
//! - inside both: the score lies where the class distributions overlap,
//! - outside both: the score looks like an outlier relative to both classes.
//!
//! The crate bundles everything needed to run this end to end on synthetic
//! benchmarks: empirical distributions ([`empirical`]), region calibration and
//! the decision rule ([`testing`]), an RBF-kernel SVM trained with SMO
//! ([`svm`]), a weighted-loss logistic stand-in ([`neural`]), seeded dataset
//! generators ([`datasets`]), selective-classification metrics ([`metrics`]),
//! score/snapshot file IO ([`io`]) and SVG figure emission ([`plot`]).

pub mod datasets;
pub mod empirical;
pub mod io;
pub mod metrics;
pub mod neural;
pub mod plot;
pub mod svm;
pub mod testing;

pub use empirical::EmpiricalDistribution;
pub use metrics::SelectiveReport;
pub use svm::SvmModel;
pub use testing::{AcceptanceRegion, CalibratedTester, Decision, TestConfig};
