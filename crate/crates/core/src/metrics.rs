//! Selective-classification metrics.
//!
//! Coverage counts every decided input; the confusion-derived metrics are
//! computed only over decisions that were not abstentions. Ratios with a
//! zero denominator are reported as `None` rather than 0, 1 or NaN.

use crate::testing::Decision;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("decisions and truths have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("cannot evaluate an empty sequence")]
    Empty,
}

/// Coverage plus confusion-matrix metrics over non-abstained decisions.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectiveReport {
    pub total: usize,
    pub abstained: usize,
    pub abstained_overlap: usize,
    pub abstained_outlier: usize,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub coverage: f64,
    pub accuracy: Option<f64>,
    pub recall: Option<f64>,
    pub precision: Option<f64>,
    pub specificity: Option<f64>,
    pub f1: Option<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Scores decisions against true labels. `positive_class` selects which
/// label (0 or 1) counts as positive in the confusion matrix.
pub fn evaluate(
    decisions: &[Decision],
    truths: &[u8],
    positive_class: u8,
) -> Result<SelectiveReport, MetricsError> {
    if decisions.len() != truths.len() {
        return Err(MetricsError::LengthMismatch(decisions.len(), truths.len()));
    }
    if decisions.is_empty() {
        return Err(MetricsError::Empty);
    }
    let (mut overlap, mut outlier) = (0usize, 0usize);
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (&d, &truth) in decisions.iter().zip(truths) {
        let predicted = match d {
            Decision::UncertainOverlap => {
                overlap += 1;
                continue;
            }
            Decision::UncertainOutlier => {
                outlier += 1;
                continue;
            }
            Decision::Class1 => 0u8,
            Decision::Class2 => 1u8,
        };
        match (predicted == positive_class, truth == positive_class) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let total = decisions.len();
    let abstained = overlap + outlier;
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    Ok(SelectiveReport {
        total,
        abstained,
        abstained_overlap: overlap,
        abstained_outlier: outlier,
        tp,
        fp,
        tn,
        fn_,
        coverage: 1.0 - abstained as f64 / total as f64,
        accuracy: ratio(tp + tn, total - abstained),
        recall,
        precision,
        specificity: ratio(tn, tn + fp),
        f1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Decision::*;

    #[test]
    fn hand_computed_twelve_item_case() {
        // 2 abstained; decided confusion: tp=3, fp=1, fn=1, tn=5
        let decisions = vec![
            Class2, Class2, Class2, // tp x3
            Class2, // fp
            Class1, // fn
            Class1, Class1, Class1, Class1, Class1, // tn x5
            UncertainOverlap, UncertainOutlier,
        ];
        let truths = vec![1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0];
        let r = evaluate(&decisions, &truths, 1).unwrap();
        assert_eq!(
            (r.tp, r.fp, r.fn_, r.tn, r.abstained),
            (3, 1, 1, 5, 2)
        );
        assert!((r.coverage - 10.0 / 12.0).abs() < 1e-12);
        assert!((r.accuracy.unwrap() - 0.8).abs() < 1e-12);
        assert!((r.recall.unwrap() - 0.75).abs() < 1e-12);
        assert!((r.precision.unwrap() - 0.75).abs() < 1e-12);
        assert!((r.specificity.unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert!((r.f1.unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn all_abstained_gives_undefined_metrics() {
        let decisions = vec![UncertainOverlap, UncertainOutlier, UncertainOverlap];
        let r = evaluate(&decisions, &[0, 1, 0], 1).unwrap();
        assert_eq!(r.coverage, 0.0);
        assert_eq!(r.abstained_overlap, 2);
        assert_eq!(r.abstained_outlier, 1);
        assert_eq!(r.accuracy, None);
        assert_eq!(r.recall, None);
        assert_eq!(r.precision, None);
        assert_eq!(r.specificity, None);
        assert_eq!(r.f1, None);
    }

    #[test]
    fn perfect_case() {
        let decisions = vec![Class1, Class2, Class1, Class2];
        let r = evaluate(&decisions, &[0, 1, 0, 1], 1).unwrap();
        assert_eq!(r.coverage, 1.0);
        assert_eq!(r.accuracy, Some(1.0));
        assert_eq!(r.f1, Some(1.0));
    }

    #[test]
    fn errors() {
        assert_eq!(
            evaluate(&[Class1], &[0, 1], 1),
            Err(MetricsError::LengthMismatch(1, 2))
        );
        assert_eq!(evaluate(&[], &[], 1), Err(MetricsError::Empty));
    }

    #[test]
    fn positive_class_zero_swaps_roles() {
        let decisions = vec![Class1, Class2];
        let truths = vec![0, 0];
        let r = evaluate(&decisions, &truths, 0).unwrap();
        assert_eq!((r.tp, r.fp, r.tn, r.fn_), (1, 0, 0, 1));
    }

    #[test]
    fn accuracy_identity_holds() {
        let decisions = vec![Class1, Class2, Class2, UncertainOverlap, Class1];
        let truths = vec![0, 0, 1, 1, 1];
        let r = evaluate(&decisions, &truths, 1).unwrap();
        let decided = r.total - r.abstained;
        assert_eq!(r.tp + r.fp + r.tn + r.fn_, decided);
        assert_eq!(r.accuracy, Some((r.tp + r.tn) as f64 / decided as f64));
    }
}
