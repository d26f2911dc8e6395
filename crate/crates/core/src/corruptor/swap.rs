//! The four swap transformations.
//!
//! Each rule is expressed as an enumeration of [`SwapTarget`]s (a summary
//! span plus its admissible replacements) and a choice among them. The
//! random variants pick a target uniformly, then a candidate uniformly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pronoun::{detect_pronouns, replacements, PronounCase};
use crate::corpus::{
    apply_span_replacement, entities_of_class, CorpusRecord, CorruptionClass, EntityLabel,
    EntitySpan,
};
use crate::error::{Error, Result};

/// Where a replacement surface came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// A span of the source document, in char offsets.
    Document { start: usize, end: usize },
    /// An entry of the pronoun lexicon.
    Lexicon { case: PronounCase, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapCandidate {
    pub surface: String,
    pub label: EntityLabel,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapTarget {
    pub span: EntitySpan,
    pub candidates: Vec<SwapCandidate>,
}

/// One applied swap: `original` in the reference became `replacement`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Swap {
    pub class: CorruptionClass,
    pub original: EntitySpan,
    pub replacement: String,
    pub replacement_label: EntityLabel,
    pub provenance: Provenance,
}

impl Swap {
    /// Span of the replacement in the corrupted summary.
    pub fn new_span(&self) -> EntitySpan {
        EntitySpan {
            start: self.original.start,
            end: self.original.start + self.replacement.chars().count(),
            surface: self.replacement.clone(),
            label: self.replacement_label,
        }
    }
}

/// Targets for an Entity, Number, or Date swap.
///
/// Candidates are the document's spans of the same class, one per distinct
/// surface (first occurrence kept), excluding any surface equal to the
/// target's ignoring case. Targets without candidates are dropped.
fn entity_targets(record: &CorpusRecord, class: CorruptionClass) -> Vec<SwapTarget> {
    let mut pool: Vec<&EntitySpan> = Vec::new();
    for span in record.document.entities.iter().filter(|s| s.class() == class) {
        if !pool.iter().any(|p| p.surface == span.surface) {
            pool.push(span);
        }
    }
    entities_of_class(&record.summary, class)
        .into_iter()
        .filter_map(|span| {
            let lower = span.surface.to_lowercase();
            let candidates: Vec<_> = pool
                .iter()
                .filter(|p| p.surface.to_lowercase() != lower)
                .map(|p| SwapCandidate {
                    surface: p.surface.clone(),
                    label: p.label,
                    provenance: Provenance::Document {
                        start: p.start,
                        end: p.end,
                    },
                })
                .collect();
            (!candidates.is_empty()).then_some(SwapTarget { span, candidates })
        })
        .collect()
}

/// Targets for a pronoun swap: lexicon matches in the summary that do not
/// overlap a non-pronoun annotation.
fn pronoun_targets(record: &CorpusRecord) -> Vec<SwapTarget> {
    let summary = &record.summary;
    detect_pronouns(&summary.text)
        .into_iter()
        .filter(|p| {
            !summary
                .entities
                .iter()
                .any(|e| e.label != EntityLabel::Pronoun && e.overlaps(&p.span))
        })
        .filter_map(|p| {
            let candidates: Vec<_> = replacements(&p, &summary.text)
                .into_iter()
                .map(|(index, surface)| SwapCandidate {
                    surface,
                    label: EntityLabel::Pronoun,
                    provenance: Provenance::Lexicon {
                        case: p.case,
                        index,
                    },
                })
                .collect();
            (!candidates.is_empty()).then_some(SwapTarget {
                span: p.span,
                candidates,
            })
        })
        .collect()
}

/// Every way `class` can corrupt this record's summary.
pub fn swap_targets(record: &CorpusRecord, class: CorruptionClass) -> Vec<SwapTarget> {
    match class {
        CorruptionClass::Pronoun => pronoun_targets(record),
        _ => entity_targets(record, class),
    }
}

pub fn is_applicable(record: &CorpusRecord, class: CorruptionClass) -> bool {
    !swap_targets(record, class).is_empty()
}

/// Applies one specific choice. Returns the corrupted summary text.
pub fn apply_swap(
    summary_text: &str,
    class: CorruptionClass,
    target: &SwapTarget,
    candidate: &SwapCandidate,
) -> Result<(String, Swap)> {
    let (text, _) = apply_span_replacement(summary_text, &target.span, &candidate.surface)?;
    Ok((
        text,
        Swap {
            class,
            original: target.span.clone(),
            replacement: candidate.surface.clone(),
            replacement_label: candidate.label,
            provenance: candidate.provenance.clone(),
        },
    ))
}

fn swap_random<R: Rng + ?Sized>(
    record: &CorpusRecord,
    class: CorruptionClass,
    rng: &mut R,
) -> Result<(String, Swap)> {
    let targets = swap_targets(record, class);
    if targets.is_empty() {
        return Err(Error::Inapplicable(format!(
            "record {:?} has no {class} span with a distinct replacement",
            record.id()
        )));
    }
    let target = &targets[rng.random_range(0..targets.len())];
    let candidate = &target.candidates[rng.random_range(0..target.candidates.len())];
    apply_swap(&record.summary.text, class, target, candidate)
}

/// Swaps one summary entity of `class` for a different same-class entity
/// from the source document.
pub fn swap_entity_like<R: Rng + ?Sized>(
    record: &CorpusRecord,
    class: CorruptionClass,
    rng: &mut R,
) -> Result<(String, Swap)> {
    if class == CorruptionClass::Pronoun {
        return Err(Error::Inapplicable(
            "pronoun swaps go through swap_pronoun".into(),
        ));
    }
    swap_random(record, class, rng)
}

/// Swaps one summary pronoun for a different pronoun of the same case class.
pub fn swap_pronoun<R: Rng + ?Sized>(record: &CorpusRecord, rng: &mut R) -> Result<(String, Swap)> {
    swap_random(record, CorruptionClass::Pronoun, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AnnotatedDocument, AnnotatedSummary};
    use crate::corruptor::derive_record_rng;
    use crate::corruptor::pronoun::case_of;
    use std::collections::BTreeSet;

    fn spans(text: &str, items: &[(&str, EntityLabel)]) -> Vec<EntitySpan> {
        let mut out: Vec<EntitySpan> = Vec::new();
        let mut from = 0;
        for (surface, label) in items {
            let b = from + text[from..].find(surface).unwrap();
            let start = text[..b].chars().count();
            out.push(EntitySpan::new(text, start, start + surface.chars().count(), *label).unwrap());
            from = b + surface.len();
        }
        out
    }

    fn record(doc: &str, doc_ents: &[(&str, EntityLabel)], sum: &str, sum_ents: &[(&str, EntityLabel)]) -> CorpusRecord {
        CorpusRecord {
            document: AnnotatedDocument {
                id: "t".into(),
                text: doc.into(),
                entities: spans(doc, doc_ents),
            },
            summary: AnnotatedSummary {
                text: sum.into(),
                entities: spans(sum, sum_ents),
            },
        }
    }

    #[test]
    fn identical_surface_is_not_a_candidate() {
        use EntityLabel::*;
        let r = record(
            "Israel marked the day in Israel.",
            &[("Israel", Gpe), ("Israel", Gpe)],
            "Israel marked the day.",
            &[("Israel", Gpe)],
        );
        let mut rng = derive_record_rng(1, "t");
        assert!(matches!(
            swap_entity_like(&r, CorruptionClass::Entity, &mut rng),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn exhaustive_branches_give_each_candidate_once() {
        use EntityLabel::*;
        let r = record(
            "Teams from Oslo, Lima and Quito met in Oslo.",
            &[("Oslo", Gpe), ("Lima", Gpe), ("Quito", Gpe), ("Oslo", Gpe)],
            "Delegates met in Cairo.",
            &[("Cairo", Gpe)],
        );
        let targets = swap_targets(&r, CorruptionClass::Entity);
        assert_eq!(targets.len(), 1);
        let outputs: BTreeSet<String> = targets[0]
            .candidates
            .iter()
            .map(|c| apply_swap(&r.summary.text, CorruptionClass::Entity, &targets[0], c).unwrap().0)
            .collect();
        let expected: BTreeSet<String> = ["Oslo", "Lima", "Quito"]
            .iter()
            .map(|c| format!("Delegates met in {c}."))
            .collect();
        assert_eq!(outputs, expected);

        // The random path only ever lands on those branches.
        let seen: BTreeSet<String> = (0..200)
            .map(|i| {
                let mut rng = derive_record_rng(i, "t");
                swap_entity_like(&r, CorruptionClass::Entity, &mut rng).unwrap().0
            })
            .collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn pronoun_swap_keeps_class_and_changes_text() {
        let r = record(
            "He was in a kosher supermarket when a gunman stormed in.",
            &[],
            "He was in a kosher supermarket when a gunman stormed in.",
            &[],
        );
        let target = &swap_targets(&r, CorruptionClass::Pronoun)[0];
        let outs: Vec<String> = target
            .candidates
            .iter()
            .map(|c| apply_swap(&r.summary.text, CorruptionClass::Pronoun, target, c).unwrap().0)
            .collect();
        assert!(outs.contains(&"She was in a kosher supermarket when a gunman stormed in.".to_owned()));
        for (out, c) in outs.iter().zip(&target.candidates) {
            assert_ne!(out, &r.summary.text);
            assert_eq!(case_of(&c.surface), Some(PronounCase::Subject));
        }
    }

    #[test]
    fn pronoun_overlapping_entity_is_skipped() {
        use EntityLabel::*;
        let r = record("x", &[], "We watched It Follows.", &[("It Follows", WorkOfArt)]);
        let targets = swap_targets(&r, CorruptionClass::Pronoun);
        assert_eq!(targets.len(), 1);
        assert_eq!(targets[0].span.surface, "We");
    }
}
