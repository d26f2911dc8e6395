//! Synthetic factual-error injection.
//!
//! With probability `alpha` a reference summary is corrupted by one of four
//! swap rules (Entity, Number, Date, Pronoun); otherwise it is kept as is.
//! Every decision is driven by a per-record generator derived from the
//! master seed and the record id.

mod dataset;
pub mod pronoun;
mod rng;
mod swap;
mod wire;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    replace_and_rebase, slice_chars, validate_record, AnnotatedSummary, CorpusRecord,
};
use crate::error::{Error, Result};

pub use crate::corpus::CorruptionClass;
pub use dataset::{build_dataset, build_dataset_parallel, Corruptor, DatasetStats, DatasetStream};
pub use pronoun::{detect_pronouns, PronounCase, PronounSpan};
pub use rng::{derive_record_rng, RecordRng, RecordSeed};
pub use swap::{
    apply_swap, is_applicable, swap_entity_like, swap_pronoun, swap_targets, Provenance, Swap,
    SwapCandidate, SwapTarget,
};
pub use wire::{parse_triplet_line, triplet_to_json_line, TripletReader};

/// What to do when the drawn rule cannot be applied to a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InapplicablePolicy {
    /// Re-draw among the remaining rules until one applies.
    #[default]
    ResampleOtherRules,
    /// Keep the summary clean, flagged as inapplicable.
    EmitClean,
}

impl FromStr for InapplicablePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "resample_other_rules" | "resample" => Ok(InapplicablePolicy::ResampleOtherRules),
            "emit_clean" | "clean" => Ok(InapplicablePolicy::EmitClean),
            _ => Err(Error::Usage(format!(
                "unknown inapplicable policy {s:?} (expected resample_other_rules or emit_clean)"
            ))),
        }
    }
}

/// Nonnegative weights over the four rules, indexed by [`CorruptionClass`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleWeights(pub [f64; 4]);

impl Default for RuleWeights {
    fn default() -> Self {
        RuleWeights([1.0; 4])
    }
}

impl RuleWeights {
    pub fn get(&self, class: CorruptionClass) -> f64 {
        self.0[class.index()]
    }
}

impl fmt::Display for RuleWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [e, n, d, p] = self.0;
        write!(f, "e={e},n={n},d={d},p={p}")
    }
}

impl FromStr for RuleWeights {
    type Err = Error;

    /// Parses `e=1,n=1,d=1,p=1`. Full class names are accepted as keys;
    /// rules left out get weight 0.
    fn from_str(s: &str) -> Result<Self> {
        let mut weights = [0.0; 4];
        let mut seen = [false; 4];
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("rule weight {item:?} is not key=value")))?;
            let class = match key.trim() {
                "e" | "entity" => CorruptionClass::Entity,
                "n" | "number" => CorruptionClass::Number,
                "d" | "date" => CorruptionClass::Date,
                "p" | "pronoun" => CorruptionClass::Pronoun,
                other => return Err(Error::Usage(format!("unknown rule {other:?} in rule weights"))),
            };
            if std::mem::replace(&mut seen[class.index()], true) {
                return Err(Error::Usage(format!("rule {class} weighted twice")));
            }
            weights[class.index()] = value
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("rule weight {value:?} is not a number")))?;
        }
        Ok(RuleWeights(weights))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorruptorConfig {
    pub alpha: f64,
    pub master_seed: u64,
    pub rule_weights: RuleWeights,
    pub on_inapplicable: InapplicablePolicy,
}

impl Default for CorruptorConfig {
    fn default() -> Self {
        CorruptorConfig {
            alpha: 0.3,
            master_seed: 0,
            rule_weights: RuleWeights::default(),
            on_inapplicable: InapplicablePolicy::default(),
        }
    }
}

impl CorruptorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Usage("alpha must be in [0,1]".into()));
        }
        let w = &self.rule_weights.0;
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Usage("rule weights must be finite and nonnegative".into()));
        }
        if !w.iter().any(|x| *x > 0.0) {
            return Err(Error::Usage("at least one rule weight must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of the planning step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorruptionPlan {
    NoOp { inapplicable: bool },
    Apply(CorruptionClass),
}

/// Decides whether and how to corrupt a record.
///
/// Draws the `alpha` coin first, then a rule proportional to its weight.
pub fn plan_corruption<R: Rng + ?Sized>(
    record: &CorpusRecord,
    config: &CorruptorConfig,
    rng: &mut R,
) -> CorruptionPlan {
    if rng.random::<f64>() >= config.alpha {
        return CorruptionPlan::NoOp {
            inapplicable: false,
        };
    }
    let mut remaining: Vec<CorruptionClass> = CorruptionClass::ALL
        .into_iter()
        .filter(|c| config.rule_weights.get(*c) > 0.0)
        .collect();
    while !remaining.is_empty() {
        let total: f64 = remaining.iter().map(|c| config.rule_weights.get(*c)).sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = remaining.len() - 1;
        for (i, c) in remaining.iter().enumerate() {
            let w = config.rule_weights.get(*c);
            if u < w {
                pick = i;
                break;
            }
            u -= w;
        }
        let class = remaining[pick];
        if is_applicable(record, class) {
            return CorruptionPlan::Apply(class);
        }
        match config.on_inapplicable {
            InapplicablePolicy::EmitClean => break,
            InapplicablePolicy::ResampleOtherRules => {
                remaining.remove(pick);
            }
        }
    }
    CorruptionPlan::NoOp { inapplicable: true }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    NoOp,
    Swapped(Swap),
}

/// Provenance of one triplet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionRecord {
    pub outcome: Outcome,
    /// The alpha draw selected corruption but no rule could apply.
    pub inapplicable: bool,
    /// Hex of the per-record seed.
    pub rng_trace: String,
    /// Set when the record could not be processed normally.
    pub diagnostic: Option<String>,
}

impl CorruptionRecord {
    pub fn class(&self) -> Option<CorruptionClass> {
        match &self.outcome {
            Outcome::NoOp => None,
            Outcome::Swapped(s) => Some(s.class),
        }
    }

    pub fn swap(&self) -> Option<&Swap> {
        match &self.outcome {
            Outcome::NoOp => None,
            Outcome::Swapped(s) => Some(s),
        }
    }

    pub fn is_noop(&self) -> bool {
        matches!(self.outcome, Outcome::NoOp)
    }
}

/// `(s', s, d)` with `d` held by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triplet {
    pub id: String,
    pub corrupted: String,
    pub reference: String,
    pub document_id: String,
    pub record: CorruptionRecord,
}

impl Triplet {
    pub fn is_corrupted(&self) -> bool {
        !self.record.is_noop()
    }

    /// The corrupted summary with the reference's annotations carried over.
    pub fn corrupted_summary(&self, reference: &AnnotatedSummary) -> Result<AnnotatedSummary> {
        if reference.text != self.reference {
            return Err(Error::Mismatch(format!(
                "triplet {:?}: reference text differs from the corpus summary",
                self.id
            )));
        }
        match self.record.swap() {
            None => Ok(reference.clone()),
            Some(swap) => replace_and_rebase(
                reference,
                &swap.original,
                &swap.replacement,
                swap.replacement_label,
            ),
        }
    }
}

/// Runs the full per-record procedure: derive rng, plan, swap.
pub fn corrupt_record(record: &CorpusRecord, config: &CorruptorConfig) -> Triplet {
    let seed = RecordSeed::derive(config.master_seed, record.id());
    let mut rng = seed.rng();
    let clean = |inapplicable, diagnostic| Triplet {
        id: record.id().to_owned(),
        corrupted: record.summary.text.clone(),
        reference: record.summary.text.clone(),
        document_id: record.id().to_owned(),
        record: CorruptionRecord {
            outcome: Outcome::NoOp,
            inapplicable,
            rng_trace: seed.to_hex(),
            diagnostic,
        },
    };
    let report = validate_record(record);
    if let Some(v) = report.violations.first() {
        return clean(false, Some(format!("invalid record: {v}")));
    }
    let class = match plan_corruption(record, config, &mut rng) {
        CorruptionPlan::NoOp { inapplicable } => return clean(inapplicable, None),
        CorruptionPlan::Apply(class) => class,
    };
    let result = match class {
        CorruptionClass::Pronoun => swap_pronoun(record, &mut rng),
        _ => swap_entity_like(record, class, &mut rng),
    };
    match result {
        Ok((corrupted, swap)) => Triplet {
            id: record.id().to_owned(),
            corrupted,
            reference: record.summary.text.clone(),
            document_id: record.id().to_owned(),
            record: CorruptionRecord {
                outcome: Outcome::Swapped(swap),
                inapplicable: false,
                rng_trace: seed.to_hex(),
                diagnostic: None,
            },
        },
        Err(e) => clean(true, Some(e.to_string())),
    }
}

/// Undoes a corruption, recovering the reference summary exactly.
pub fn invert(corrupted: &str, record: &CorruptionRecord) -> Result<String> {
    let Some(swap) = record.swap() else {
        return Ok(corrupted.to_owned());
    };
    let new_span = swap.new_span();
    match slice_chars(corrupted, new_span.start, new_span.end) {
        Some(s) if s == swap.replacement => {}
        found => {
            return Err(Error::Mismatch(format!(
                "expected {:?} at [{}, {}), found {:?}",
                swap.replacement, new_span.start, new_span.end, found
            )))
        }
    }
    let (text, _) =
        crate::corpus::apply_span_replacement(corrupted, &new_span, &swap.original.surface)?;
    Ok(text)
}
