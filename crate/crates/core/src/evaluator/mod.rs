//! Edit-derived consistency classification and exact-match correction
//! accuracy.
//!
//! A corrector's output is classified `Inconsistent` iff it differs from
//! its input after whitespace normalization. Correction succeeds on a
//! corrupted item iff the output matches the reference, and on a clean
//! item iff the output is unchanged.

mod metrics;
mod report;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

pub use metrics::{score_classification, ClassMetrics, ClassificationScores, ConfusionCounts};
pub use report::{emit_report, render_table, EvalReport};

use crate::corpus::CorruptionClass;
use crate::corruptor::Triplet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConsistencyLabel {
    Consistent,
    Inconsistent,
}

/// Trims and collapses whitespace runs to one space. Case and punctuation
/// are kept.
pub fn normalize(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// String comparison used by both protocols.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Normalizer {
    pub ignore_case: bool,
}

impl Normalizer {
    pub fn new(ignore_case: bool) -> Self {
        Normalizer { ignore_case }
    }

    pub fn apply(&self, text: &str) -> String {
        let n = normalize(text);
        if self.ignore_case {
            n.to_lowercase()
        } else {
            n
        }
    }

    pub fn same(&self, a: &str, b: &str) -> bool {
        if self.ignore_case {
            self.apply(a) == self.apply(b)
        } else {
            a.split_whitespace().eq(b.split_whitespace())
        }
    }

    pub fn classify(&self, original: &str, output: &str) -> ConsistencyLabel {
        if self.same(original, output) {
            ConsistencyLabel::Consistent
        } else {
            ConsistencyLabel::Inconsistent
        }
    }
}

pub fn classify_from_edit(original: &str, output: &str) -> ConsistencyLabel {
    Normalizer::default().classify(original, output)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetCount {
    pub success: u64,
    pub total: u64,
}

impl SubsetCount {
    fn add(&mut self, success: bool) {
        self.total += 1;
        self.success += u64::from(success);
    }

    fn merge(self, o: SubsetCount) -> SubsetCount {
        SubsetCount {
            success: self.success + o.success,
            total: self.total + o.total,
        }
    }

    pub fn accuracy<T: Scalar>(&self) -> T {
        T::ratio(self.success, self.total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionTally {
    pub corrupted: SubsetCount,
    pub clean: SubsetCount,
    pub per_class: BTreeMap<CorruptionClass, SubsetCount>,
}

impl Default for CorrectionTally {
    fn default() -> Self {
        CorrectionTally {
            corrupted: SubsetCount::default(),
            clean: SubsetCount::default(),
            per_class: CorruptionClass::ALL
                .into_iter()
                .map(|c| (c, SubsetCount::default()))
                .collect(),
        }
    }
}

impl CorrectionTally {
    pub fn merge(mut self, o: CorrectionTally) -> CorrectionTally {
        self.corrupted = self.corrupted.merge(o.corrupted);
        self.clean = self.clean.merge(o.clean);
        for (c, n) in o.per_class {
            let e = self.per_class.entry(c).or_default();
            *e = e.merge(n);
        }
        self
    }

    pub fn scores<T: Scalar>(&self) -> CorrectionScores<T> {
        CorrectionScores {
            corrupted: self.corrupted.accuracy(),
            clean: self.clean.accuracy(),
            per_class: self
                .per_class
                .iter()
                .map(|(c, n)| (*c, n.accuracy()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionScores<T> {
    pub corrupted: T,
    pub clean: T,
    pub per_class: BTreeMap<CorruptionClass, T>,
}

/// Streaming accumulator for both protocols. Partial evaluators merge
/// commutatively.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Evaluator {
    pub normalizer: Normalizer,
    pub counts: ConfusionCounts,
    pub correction: CorrectionTally,
}

impl Evaluator {
    pub fn new(normalizer: Normalizer) -> Self {
        Evaluator {
            normalizer,
            ..Default::default()
        }
    }

    /// Scores one corrector `output` for the summary `triplet.corrupted`.
    pub fn add(&mut self, triplet: &Triplet, output: &str) {
        let n = self.normalizer;
        let gold = match triplet.record.class() {
            Some(_) => ConsistencyLabel::Inconsistent,
            None => ConsistencyLabel::Consistent,
        };
        self.counts.add(n.classify(&triplet.corrupted, output), gold);
        match triplet.record.class() {
            Some(class) => {
                let ok = n.same(output, &triplet.reference);
                self.correction.corrupted.add(ok);
                self.correction.per_class.entry(class).or_default().add(ok);
            }
            None => self.correction.clean.add(n.same(output, &triplet.corrupted)),
        }
    }

    pub fn merge(self, o: Evaluator) -> Evaluator {
        Evaluator {
            normalizer: self.normalizer,
            counts: self.counts.merge(o.counts),
            correction: self.correction.merge(o.correction),
        }
    }

    pub fn records(&self) -> u64 {
        self.counts.total()
    }

    pub fn report<T: Scalar>(&self) -> Result<EvalReport<T>> {
        if self.records() == 0 {
            return Err(Error::Input("no records to evaluate".into()));
        }
        Ok(EvalReport::from_parts(
            self.counts,
            self.correction.clone(),
            self.normalizer.ignore_case,
        ))
    }
}

/// Matches `(id, output)` pairs to triplets one-to-one. Returns outputs in
/// triplet order.
pub fn match_outputs<'a>(
    triplets: &[Triplet],
    outputs: &'a [(String, String)],
) -> Result<Vec<&'a str>> {
    let mut by_id: HashMap<&str, &str> = HashMap::with_capacity(outputs.len());
    for (id, out) in outputs {
        if by_id.insert(id, out).is_some() {
            return Err(Error::Input(format!("duplicate output for id {id:?}")));
        }
    }
    let mut seen: HashMap<&str, ()> = HashMap::with_capacity(triplets.len());
    let mut ordered = Vec::with_capacity(triplets.len());
    for t in triplets {
        if seen.insert(&t.id, ()).is_some() {
            return Err(Error::Input(format!("duplicate triplet id {:?}", t.id)));
        }
        match by_id.get(t.id.as_str()) {
            Some(out) => ordered.push(*out),
            None => return Err(Error::Input(format!("no output for id {:?}", t.id))),
        }
    }
    if let Some((id, _)) = outputs.iter().find(|(id, _)| !seen.contains_key(id.as_str())) {
        return Err(Error::Input(format!("output for unknown id {id:?}")));
    }
    Ok(ordered)
}

pub fn score_correction<T: Scalar>(
    outputs: &[(String, String)],
    triplets: &[Triplet],
    normalizer: Normalizer,
) -> Result<CorrectionScores<T>> {
    Ok(evaluator_for(outputs, triplets, normalizer)?.correction.scores())
}

/// Both protocols over an id-matched batch.
pub fn evaluate<T: Scalar>(
    outputs: &[(String, String)],
    triplets: &[Triplet],
    normalizer: Normalizer,
) -> Result<EvalReport<T>> {
    evaluator_for(outputs, triplets, normalizer)?.report()
}

fn evaluator_for(
    outputs: &[(String, String)],
    triplets: &[Triplet],
    normalizer: Normalizer,
) -> Result<Evaluator> {
    let ordered = match_outputs(triplets, outputs)?;
    let mut ev = Evaluator::new(normalizer);
    for (t, out) in triplets.iter().zip(ordered) {
        ev.add(t, out);
    }
    Ok(ev)
}
