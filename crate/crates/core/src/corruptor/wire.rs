//! Triplet JSONL.
//!
//! ```text
//! {"id": str, "corrupted": str, "reference": str, "document_id": str,
//!  "corruption": {"class": str|"none", "start": int, "end": int,
//!                 "original": str, "replacement": str, "inapplicable": bool,
//!                 "label": str?, "provenance": {...}?, "rng_trace": str?,
//!                 "diagnostic": str?}}
//! ```
//!
//! `start`/`end` locate the original span in the reference summary. The
//! trailing optional fields carry full provenance and may be omitted by
//! other producers.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CorruptionRecord, Outcome, Provenance, Swap, Triplet};
use crate::corpus::{json_error, slice_chars, CorruptionClass, EntityLabel, EntitySpan};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct CorruptionWire {
    class: String,
    start: usize,
    end: usize,
    original: String,
    replacement: String,
    inapplicable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<EntityLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    original_label: Option<EntityLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rng_trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TripletWire {
    id: String,
    corrupted: String,
    reference: String,
    document_id: String,
    corruption: CorruptionWire,
}

pub fn triplet_to_json_line(t: &Triplet) -> String {
    let r = &t.record;
    let corruption = match &r.outcome {
        Outcome::NoOp => CorruptionWire {
            class: "none".into(),
            start: 0,
            end: 0,
            original: String::new(),
            replacement: String::new(),
            inapplicable: r.inapplicable,
            label: None,
            original_label: None,
            provenance: None,
            rng_trace: Some(r.rng_trace.clone()),
            diagnostic: r.diagnostic.clone(),
        },
        Outcome::Swapped(s) => CorruptionWire {
            class: s.class.as_str().into(),
            start: s.original.start,
            end: s.original.end,
            original: s.original.surface.clone(),
            replacement: s.replacement.clone(),
            inapplicable: r.inapplicable,
            label: Some(s.replacement_label),
            original_label: Some(s.original.label),
            provenance: Some(s.provenance.clone()),
            rng_trace: Some(r.rng_trace.clone()),
            diagnostic: r.diagnostic.clone(),
        },
    };
    let wire = TripletWire {
        id: t.id.clone(),
        corrupted: t.corrupted.clone(),
        reference: t.reference.clone(),
        document_id: t.document_id.clone(),
        corruption,
    };
    serde_json::to_string(&wire).expect("triplet serializes")
}

pub fn parse_triplet_line(line: &str) -> Result<Triplet> {
    let w: TripletWire = serde_json::from_str(line).map_err(|e| json_error(e, line))?;
    let c = w.corruption;
    let outcome = if c.class == "none" {
        if w.corrupted != w.reference {
            return Err(Error::Schema(format!(
                "triplet {:?}: class none but corrupted differs from reference",
                w.id
            )));
        }
        Outcome::NoOp
    } else {
        let class: CorruptionClass = c.class.parse()?;
        let found = slice_chars(&w.reference, c.start, c.end);
        if found != Some(c.original.as_str()) || c.start >= c.end {
            return Err(Error::Span(format!(
                "triplet {:?}: original {:?} not found at [{}, {}) of the reference",
                w.id, c.original, c.start, c.end
            )));
        }
        let default_label = match class {
            CorruptionClass::Entity => EntityLabel::Person,
            CorruptionClass::Number => EntityLabel::Cardinal,
            CorruptionClass::Date => EntityLabel::Date,
            CorruptionClass::Pronoun => EntityLabel::Pronoun,
        };
        Outcome::Swapped(Swap {
            class,
            original: EntitySpan {
                start: c.start,
                end: c.end,
                surface: c.original,
                label: c.original_label.unwrap_or(default_label),
            },
            replacement: c.replacement,
            replacement_label: c.label.unwrap_or(default_label),
            provenance: c.provenance.unwrap_or(Provenance::Document { start: 0, end: 0 }),
        })
    };
    Ok(Triplet {
        id: w.id,
        corrupted: w.corrupted,
        reference: w.reference,
        document_id: w.document_id,
        record: CorruptionRecord {
            outcome,
            inapplicable: c.inapplicable,
            rng_trace: c.rng_trace.unwrap_or_default(),
            diagnostic: c.diagnostic,
        },
    })
}

/// Streams triplets from JSONL with 1-based line numbers on errors.
pub struct TripletReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> TripletReader<R> {
    pub fn new(reader: R) -> Self {
        TripletReader {
            lines: reader.lines(),
            line_no: 0,
        }
    }
}

impl TripletReader<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(TripletReader::new(BufReader::new(file)))
    }
}

impl<R: BufRead> Iterator for TripletReader<R> {
    type Item = Result<Triplet>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = self.lines.next()?;
            self.line_no += 1;
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    return Some(Err(Error::Input(format!("read failed: {e}")).at_line(self.line_no)))
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            return Some(parse_triplet_line(&line).map_err(|e| e.at_line(self.line_no)));
        }
    }
}
