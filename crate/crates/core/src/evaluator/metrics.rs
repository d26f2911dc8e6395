use serde::{Deserialize, Serialize};

use super::ConsistencyLabel;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Binary confusion counts with `Inconsistent` as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn add(&mut self, predicted: ConsistencyLabel, gold: ConsistencyLabel) {
        use ConsistencyLabel::*;
        match (predicted, gold) {
            (Inconsistent, Inconsistent) => self.tp += 1,
            (Consistent, Inconsistent) => self.fn_ += 1,
            (Inconsistent, Consistent) => self.fp += 1,
            (Consistent, Consistent) => self.tn += 1,
        }
    }

    pub fn merge(self, o: ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts {
            tp: self.tp + o.tp,
            fn_: self.fn_ + o.fn_,
            fp: self.fp + o.fp,
            tn: self.tn + o.tn,
        }
    }

    /// Same counts with `Consistent` taken as the positive class.
    pub fn swapped(self) -> ConfusionCounts {
        ConfusionCounts {
            tp: self.tn,
            fn_: self.fp,
            fp: self.fn_,
            tn: self.tp,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fn_ + self.fp + self.tn
    }

    pub fn correct(&self) -> u64 {
        self.tp + self.tn
    }
}

/// Precision, recall and F1 for one class. A zero denominator yields 0 and
/// sets the matching flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics<T> {
    pub precision: T,
    pub recall: T,
    pub f1: T,
    pub precision_zero_denominator: bool,
    pub recall_zero_denominator: bool,
}

impl<T: Scalar> ClassMetrics<T> {
    /// Metrics of the positive class of `c`.
    pub fn positive(c: ConfusionCounts) -> Self {
        ClassMetrics {
            precision: T::ratio(c.tp, c.tp + c.fp),
            recall: T::ratio(c.tp, c.tp + c.fn_),
            f1: T::ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn_),
            precision_zero_denominator: c.tp + c.fp == 0,
            recall_zero_denominator: c.tp + c.fn_ == 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationScores<T> {
    pub counts: ConfusionCounts,
    pub inconsistent: ClassMetrics<T>,
    pub consistent: ClassMetrics<T>,
    pub accuracy: T,
    pub micro_f1: T,
}

impl<T: Scalar> ClassificationScores<T> {
    pub fn from_counts(counts: ConfusionCounts) -> Self {
        // Micro-averaging over both classes pools tp+tn as true positives and
        // fp+fn as both false positives and false negatives.
        let micro_tp = counts.correct();
        let micro_err = counts.fp + counts.fn_;
        ClassificationScores {
            counts,
            inconsistent: ClassMetrics::positive(counts),
            consistent: ClassMetrics::positive(counts.swapped()),
            accuracy: T::ratio(counts.correct(), counts.total()),
            micro_f1: T::ratio(2 * micro_tp, 2 * micro_tp + 2 * micro_err),
        }
    }
}

pub fn score_classification<T: Scalar>(
    predictions: &[ConsistencyLabel],
    gold: &[ConsistencyLabel],
) -> Result<ClassificationScores<T>> {
    if predictions.len() != gold.len() {
        return Err(Error::Input(format!(
            "{} predictions for {} gold labels",
            predictions.len(),
            gold.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::Input("no labels to score".into()));
    }
    let mut counts = ConfusionCounts::default();
    for (p, g) in predictions.iter().zip(gold) {
        counts.add(*p, *g);
    }
    Ok(ClassificationScores::from_counts(counts))
}
