//! Reference-free rule-based corrector.
//!
//! Each summary sentence is aligned to its best source sentence. An
//! Entity/Number/Date span is replaced only when that source sentence
//! offers exactly one same-class surface (or, failing that, exactly one
//! surface with the span's own label) and the span's surface does not
//! already appear there. Pronouns are left alone, and so is any sentence
//! whose alignment score is below [`MIN_ALIGNMENT_SCORE`].

mod align;
mod sentences;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use align::{align, DocumentIndex, SentenceAlignment};
pub use sentences::{split_sentences, SentenceSpan};

use crate::corpus::{
    replace_and_rebase, slice_chars, AnnotatedDocument, AnnotatedSummary, CorpusRecord,
    CorruptionClass, EntityLabel, EntitySpan,
};
use crate::error::Result;
use crate::scalar::ExactRatio;

/// Alignments scoring below this are too weak to justify an edit.
pub const MIN_ALIGNMENT_SCORE: ExactRatio = ExactRatio::new_raw(1, 2);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    /// Span in the input summary.
    pub span: EntitySpan,
    pub replacement: String,
    pub replacement_label: EntityLabel,
    pub class: CorruptionClass,
    /// Index of the source sentence the replacement was taken from.
    pub evidence: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectorVerdict {
    pub output: AnnotatedSummary,
    /// Applied edits, ordered by span start.
    pub edits: Vec<Edit>,
    pub changed: bool,
}

impl CorrectorVerdict {
    pub fn text(&self) -> &str {
        &self.output.text
    }
}

fn contains_word(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    let hay = haystack.to_lowercase();
    let needle = needle.to_lowercase();
    hay.match_indices(&needle).any(|(i, m)| {
        let before = hay[..i].chars().next_back();
        let after = hay[i + m.len()..].chars().next();
        !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
    })
}

/// The single distinct surface among `spans`, if there is exactly one.
fn unique_surface<'a>(spans: impl Iterator<Item = &'a EntitySpan>) -> Option<&'a EntitySpan> {
    let mut seen = BTreeSet::new();
    let mut first = None;
    for s in spans {
        if seen.insert(s.surface.as_str()) && first.is_none() {
            first = Some(s);
        }
    }
    if seen.len() == 1 {
        first
    } else {
        None
    }
}

fn edit_for(span: &EntitySpan, index: &DocumentIndex, alignment: &SentenceAlignment) -> Option<Edit> {
    if alignment.shared == 0 || alignment.score::<ExactRatio>() < MIN_ALIGNMENT_SCORE {
        return None;
    }
    let evidence = alignment.source_sentence_index;
    let sentence = index.sentences[evidence];
    let sentence_text = slice_chars(&index.document.text, sentence.start, sentence.end)?;
    if contains_word(sentence_text, &span.surface) {
        return None;
    }
    let class = span.class();
    let same_class: Vec<&EntitySpan> = index
        .sentence_entities(evidence)
        .filter(|e| e.class() == class)
        .collect();
    let chosen = unique_surface(same_class.iter().copied())
        .or_else(|| unique_surface(same_class.iter().copied().filter(|e| e.label == span.label)))?;
    Some(Edit {
        span: span.clone(),
        replacement: chosen.surface.clone(),
        replacement_label: chosen.label,
        class,
        evidence,
    })
}

pub fn propose_edits(summary: &AnnotatedSummary, document: &AnnotatedDocument) -> Vec<Edit> {
    let index = DocumentIndex::new(document);
    propose_with_index(summary, &index)
}

fn propose_with_index(summary: &AnnotatedSummary, index: &DocumentIndex) -> Vec<Edit> {
    let sentences = split_sentences(&summary.text);
    let alignments: Vec<Option<SentenceAlignment>> = sentences
        .iter()
        .enumerate()
        .map(|(i, s)| index.align(summary, *s, i))
        .collect();
    summary
        .entities
        .iter()
        .filter(|e| e.class() != CorruptionClass::Pronoun)
        .filter_map(|e| {
            let si = sentences.iter().position(|s| s.contains(e.start))?;
            let alignment = alignments[si].as_ref()?;
            edit_for(e, index, alignment)
        })
        .collect()
}

pub fn correct(summary: &AnnotatedSummary, document: &AnnotatedDocument) -> Result<CorrectorVerdict> {
    let index = DocumentIndex::new(document);
    let mut edits = propose_with_index(summary, &index);
    edits.sort_by_key(|e| e.span.start);
    let mut output = summary.clone();
    for edit in edits.iter().rev() {
        output = replace_and_rebase(&output, &edit.span, &edit.replacement, edit.replacement_label)?;
    }
    let changed = output.text != summary.text;
    Ok(CorrectorVerdict {
        output,
        edits,
        changed,
    })
}

pub fn correct_record(record: &CorpusRecord) -> Result<CorrectorVerdict> {
    correct(&record.summary, &record.document)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditLine {
    pub start: usize,
    pub end: usize,
    pub original: String,
    pub replacement: String,
    pub class: CorruptionClass,
}

/// One line of verdict JSONL. Producers other than the built-in corrector
/// may omit `changed` and `edits`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictLine {
    pub id: String,
    pub corrected: String,
    #[serde(default)]
    pub changed: bool,
    #[serde(default)]
    pub edits: Vec<EditLine>,
}

impl VerdictLine {
    pub fn from_verdict(id: &str, verdict: &CorrectorVerdict) -> Self {
        VerdictLine {
            id: id.to_owned(),
            corrected: verdict.output.text.clone(),
            changed: verdict.changed,
            edits: verdict
                .edits
                .iter()
                .map(|e| EditLine {
                    start: e.span.start,
                    end: e.span.end,
                    original: e.span.surface.clone(),
                    replacement: e.replacement.clone(),
                    class: e.class,
                })
                .collect(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }

    pub fn parse(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| crate::corpus::json_error(e, line))
    }
}
