use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ClassMetrics, ClassificationScores, ConfusionCounts, CorrectionTally};
use crate::corpus::CorruptionClass;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<T> {
    pub records: u64,
    pub ignore_case: bool,
    pub counts: ConfusionCounts,
    /// Metrics with `Inconsistent` (corrupted) as the positive class.
    pub inconsistent: ClassMetrics<T>,
    /// Metrics with `Consistent` (clean) as the positive class.
    pub consistent: ClassMetrics<T>,
    pub accuracy: T,
    pub micro_f1: T,
    pub correction_accuracy_corrupted: T,
    pub correction_accuracy_clean: T,
    pub per_corruption_class_accuracy: BTreeMap<CorruptionClass, T>,
    pub correction_counts: CorrectionTally,
}

impl<T: Scalar> EvalReport<T> {
    pub fn from_parts(counts: ConfusionCounts, correction: CorrectionTally, ignore_case: bool) -> Self {
        let c = ClassificationScores::<T>::from_counts(counts);
        let s = correction.scores::<T>();
        EvalReport {
            records: counts.total(),
            ignore_case,
            counts,
            inconsistent: c.inconsistent,
            consistent: c.consistent,
            accuracy: c.accuracy,
            micro_f1: c.micro_f1,
            correction_accuracy_corrupted: s.corrupted,
            correction_accuracy_clean: s.clean,
            per_corruption_class_accuracy: s.per_class,
            correction_counts: correction,
        }
    }
}

fn metric_row<T: Scalar>(name: &str, acc: &str, m: &ClassMetrics<T>) -> String {
    format!(
        "{name:<10} | {acc:>9} | {:>6.2} {:>6.2} {:>6.2}",
        m.precision.to_f64_lossy(),
        m.recall.to_f64_lossy(),
        m.f1.to_f64_lossy()
    )
}

/// Plain-text table: overall accuracy, per-subset consistency-checking
/// metrics, then correction accuracy.
pub fn render_table<T: Scalar>(report: &EvalReport<T>) -> String {
    let mut out = String::new();
    let acc = format!("{:.2}%", report.accuracy.to_f64_lossy() * 100.0);
    let _ = writeln!(out, "{:<10} | {:>9} | {:^20}", "", "Overall", "Consistency checking");
    let _ = writeln!(out, "{:<10} | {:>9} | {:>6} {:>6} {:>6}", "", "Acc.", "Prec.", "Recall", "F1");
    let _ = writeln!(out, "{}", "-".repeat(44));
    let _ = writeln!(out, "{}", metric_row("Corrupted", &acc, &report.inconsistent));
    let _ = writeln!(out, "{}", metric_row("Clean", "", &report.consistent));
    let _ = writeln!(out);
    let cc = &report.correction_counts;
    let _ = writeln!(out, "Correction accuracy");
    let _ = writeln!(
        out,
        "  {:<10} {:.4} ({}/{})",
        "corrupted",
        report.correction_accuracy_corrupted.to_f64_lossy(),
        cc.corrupted.success,
        cc.corrupted.total
    );
    let _ = writeln!(
        out,
        "  {:<10} {:.4} ({}/{})",
        "clean",
        report.correction_accuracy_clean.to_f64_lossy(),
        cc.clean.success,
        cc.clean.total
    );
    for (class, acc) in &report.per_corruption_class_accuracy {
        let n = cc.per_class.get(class).copied().unwrap_or_default();
        let _ = writeln!(
            out,
            "  {:<10} {:.4} ({}/{})",
            class.as_str(),
            acc.to_f64_lossy(),
            n.success,
            n.total
        );
    }
    let _ = writeln!(out, "micro-F1 {:.4} over {} records", report.micro_f1.to_f64_lossy(), report.records);
    out
}

/// Writes `report` as pretty JSON to `path` and returns the text table.
pub fn emit_report<T: Scalar + Serialize>(report: &EvalReport<T>, path: &Path) -> Result<String> {
    if report.records == 0 {
        return Err(Error::Input("no records to report".into()));
    }
    let mut json = serde_json::to_string_pretty(report).expect("report serializes");
    json.push('\n');
    std::fs::write(path, json).map_err(|e| Error::io(path, e))?;
    Ok(render_table(report))
}
