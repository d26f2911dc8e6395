//! Synthetic factual-error datasets, rule-based summary correction, and
//! corrector evaluation for abstractive summarization.

pub mod corpus;
pub mod corrector;
pub mod corruptor;
pub mod error;
pub mod evaluator;
pub mod harness;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{ExactRatio, Scalar};

/// Evaluation report with `f64` metrics.
pub type EvalReport = evaluator::EvalReport<f64>;
/// Evaluation report with exact rational metrics.
pub type ExactEvalReport = evaluator::EvalReport<ExactRatio>;
pub type ClassificationScores = evaluator::ClassificationScores<f64>;
pub type CorrectionScores = evaluator::CorrectionScores<f64>;
