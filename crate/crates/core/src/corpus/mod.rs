//! Annotated-text data model.
//!
//! All offsets are counted in Unicode scalar values (Rust `char`s), 0-based,
//! end-exclusive. Spans carry their surface string, which must equal the
//! owning text's slice at `[start, end)`.

mod schema;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use schema::{parse_record, record_to_json_line, CorpusIndex, CorpusLookup, CorpusReader};
pub(crate) use schema::json_error;
pub use validate::{validate_record, TextPart, ValidationReport, Violation};

/// Entity label vocabulary accepted by the corpus schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EntityLabel {
    Person,
    Org,
    Gpe,
    Norp,
    Loc,
    Fac,
    Event,
    Product,
    WorkOfArt,
    Cardinal,
    Money,
    Percent,
    Quantity,
    Ordinal,
    Date,
    Time,
    Pronoun,
}

impl EntityLabel {
    pub const ALL: [EntityLabel; 17] = [
        EntityLabel::Person,
        EntityLabel::Org,
        EntityLabel::Gpe,
        EntityLabel::Norp,
        EntityLabel::Loc,
        EntityLabel::Fac,
        EntityLabel::Event,
        EntityLabel::Product,
        EntityLabel::WorkOfArt,
        EntityLabel::Cardinal,
        EntityLabel::Money,
        EntityLabel::Percent,
        EntityLabel::Quantity,
        EntityLabel::Ordinal,
        EntityLabel::Date,
        EntityLabel::Time,
        EntityLabel::Pronoun,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityLabel::Person => "PERSON",
            EntityLabel::Org => "ORG",
            EntityLabel::Gpe => "GPE",
            EntityLabel::Norp => "NORP",
            EntityLabel::Loc => "LOC",
            EntityLabel::Fac => "FAC",
            EntityLabel::Event => "EVENT",
            EntityLabel::Product => "PRODUCT",
            EntityLabel::WorkOfArt => "WORK_OF_ART",
            EntityLabel::Cardinal => "CARDINAL",
            EntityLabel::Money => "MONEY",
            EntityLabel::Percent => "PERCENT",
            EntityLabel::Quantity => "QUANTITY",
            EntityLabel::Ordinal => "ORDINAL",
            EntityLabel::Date => "DATE",
            EntityLabel::Time => "TIME",
            EntityLabel::Pronoun => "PRONOUN",
        }
    }

    /// Corruption class this label belongs to. Every label maps to exactly one class.
    pub fn class(self) -> CorruptionClass {
        use EntityLabel::*;
        match self {
            Person | Org | Gpe | Norp | Loc | Fac | Event | Product | WorkOfArt => {
                CorruptionClass::Entity
            }
            Cardinal | Money | Percent | Quantity | Ordinal => CorruptionClass::Number,
            Date | Time => CorruptionClass::Date,
            Pronoun => CorruptionClass::Pronoun,
        }
    }
}

impl fmt::Display for EntityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EntityLabel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Schema(format!("unknown entity label {s:?}")))
    }
}

/// The four kinds of factual error the corruptor injects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorruptionClass {
    Entity,
    Number,
    Date,
    Pronoun,
}

impl CorruptionClass {
    pub const ALL: [CorruptionClass; 4] = [
        CorruptionClass::Entity,
        CorruptionClass::Number,
        CorruptionClass::Date,
        CorruptionClass::Pronoun,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorruptionClass::Entity => "entity",
            CorruptionClass::Number => "number",
            CorruptionClass::Date => "date",
            CorruptionClass::Pronoun => "pronoun",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for CorruptionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorruptionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorruptionClass::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Schema(format!("unknown corruption class {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub label: EntityLabel,
}

impl EntitySpan {
    /// Builds a span over `text[start, end)`, deriving its surface.
    pub fn new(text: &str, start: usize, end: usize, label: EntityLabel) -> Result<Self> {
        if start >= end {
            return Err(Error::Span(format!(
                "{label} span [{start}, {end}) is empty or reversed"
            )));
        }
        let surface = slice_chars(text, start, end).ok_or_else(|| {
            Error::Span(format!(
                "{label} span [{start}, {end}) exceeds text length {}",
                char_len(text)
            ))
        })?;
        Ok(EntitySpan {
            start,
            end,
            surface: surface.to_owned(),
            label,
        })
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn class(&self) -> CorruptionClass {
        self.label.class()
    }

    pub fn overlaps(&self, other: &EntitySpan) -> bool {
        self.start < other.end && other.start < self.end
    }

    /// Checks bounds and surface against `text`.
    pub fn check_against(&self, text: &str) -> Result<()> {
        match slice_chars(text, self.start, self.end) {
            _ if self.start >= self.end => Err(Error::Span(format!(
                "{} span [{}, {}) is empty or reversed",
                self.label, self.start, self.end
            ))),
            None => Err(Error::Span(format!(
                "{} span [{}, {}) exceeds text length {}",
                self.label,
                self.start,
                self.end,
                char_len(text)
            ))),
            Some(slice) if slice != self.surface => Err(Error::Span(format!(
                "{} span [{}, {}) has surface {:?} but text reads {:?}",
                self.label, self.start, self.end, self.surface, slice
            ))),
            Some(_) => Ok(()),
        }
    }
}

impl fmt::Display for EntitySpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}, {}) {:?}",
            self.label, self.start, self.end, self.surface
        )
    }
}

/// Source document `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedDocument {
    pub id: String,
    pub text: String,
    pub entities: Vec<EntitySpan>,
}

/// Summary `s` (reference, corrupted, or system-generated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSummary {
    pub text: String,
    pub entities: Vec<EntitySpan>,
}

/// A text with entity annotations.
pub trait Annotated {
    fn text(&self) -> &str;
    fn entities(&self) -> &[EntitySpan];
}

impl Annotated for AnnotatedDocument {
    fn text(&self) -> &str {
        &self.text
    }
    fn entities(&self) -> &[EntitySpan] {
        &self.entities
    }
}

impl Annotated for AnnotatedSummary {
    fn text(&self) -> &str {
        &self.text
    }
    fn entities(&self) -> &[EntitySpan] {
        &self.entities
    }
}

/// One unit of ingestion: a document and its reference summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub document: AnnotatedDocument,
    pub summary: AnnotatedSummary,
}

impl CorpusRecord {
    pub fn id(&self) -> &str {
        &self.document.id
    }
}

/// Spans of `part` whose label maps to `class`, in their original order.
pub fn entities_of_class<A: Annotated + ?Sized>(part: &A, class: CorruptionClass) -> Vec<EntitySpan> {
    part.entities()
        .iter()
        .filter(|s| s.class() == class)
        .cloned()
        .collect()
}

/// Replaces `span` in `text` with `replacement`.
///
/// Returns the new text and a span (same label) covering the replacement.
/// Text outside the span is left byte-identical.
pub fn apply_span_replacement(
    text: &str,
    span: &EntitySpan,
    replacement: &str,
) -> Result<(String, EntitySpan)> {
    span.check_against(text)?;
    let lo = byte_offset(text, span.start).expect("checked");
    let hi = byte_offset(text, span.end).expect("checked");
    let mut out = String::with_capacity(text.len() - (hi - lo) + replacement.len());
    out.push_str(&text[..lo]);
    out.push_str(replacement);
    out.push_str(&text[hi..]);
    let new_span = EntitySpan {
        start: span.start,
        end: span.start + char_len(replacement),
        surface: replacement.to_owned(),
        label: span.label,
    };
    Ok((out, new_span))
}

/// Replaces `target` (one of `summary.entities`, or an unannotated span) and
/// shifts every later annotation. The replaced annotation, if present, takes
/// `new_label`.
pub(crate) fn replace_and_rebase(
    summary: &AnnotatedSummary,
    target: &EntitySpan,
    replacement: &str,
    new_label: EntityLabel,
) -> Result<AnnotatedSummary> {
    let (text, new_span) = apply_span_replacement(&summary.text, target, replacement)?;
    let delta = new_span.end as isize - target.end as isize;
    let entities = summary
        .entities
        .iter()
        .filter_map(|e| {
            if e.start == target.start && e.end == target.end {
                Some(EntitySpan {
                    label: new_label,
                    ..new_span.clone()
                })
            } else if e.overlaps(target) {
                None
            } else if e.start >= target.end {
                Some(EntitySpan {
                    start: (e.start as isize + delta) as usize,
                    end: (e.end as isize + delta) as usize,
                    ..e.clone()
                })
            } else {
                Some(e.clone())
            }
        })
        .collect();
    Ok(AnnotatedSummary { text, entities })
}

pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Byte offset of the `ch`-th char; `Some(text.len())` for `ch == char_len(text)`.
pub fn byte_offset(text: &str, ch: usize) -> Option<usize> {
    text.char_indices()
        .map(|(b, _)| b)
        .chain(std::iter::once(text.len()))
        .nth(ch)
}

/// `text[start, end)` in char offsets.
pub fn slice_chars(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let lo = byte_offset(text, start)?;
    let hi = lo + byte_offset(&text[lo..], end - start)?;
    Some(&text[lo..hi])
}
