use std::fmt;

use super::{slice_chars, char_len, Annotated, CorpusRecord, EntitySpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextPart {
    Document,
    Summary,
}

impl fmt::Display for TextPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TextPart::Document => "document",
            TextPart::Summary => "summary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyId,
    EmptySpan { part: TextPart, span: EntitySpan },
    OutOfBounds { part: TextPart, span: EntitySpan, text_len: usize },
    SurfaceMismatch { part: TextPart, span: EntitySpan, actual: String },
    Overlap { part: TextPart, first: EntitySpan, second: EntitySpan },
    Unsorted { part: TextPart, first: EntitySpan, second: EntitySpan },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyId => write!(f, "record id is empty"),
            Violation::EmptySpan { part, span } => write!(f, "{part}: empty span {span}"),
            Violation::OutOfBounds {
                part,
                span,
                text_len,
            } => write!(f, "{part}: span {span} exceeds text length {text_len}"),
            Violation::SurfaceMismatch { part, span, actual } => {
                write!(f, "{part}: span {span} but text reads {actual:?}")
            }
            Violation::Overlap {
                part,
                first,
                second,
            } => write!(f, "{part}: span {first} overlaps span {second}"),
            Violation::Unsorted {
                part,
                first,
                second,
            } => write!(f, "{part}: span {second} comes after {first} but starts earlier"),
        }
    }
}

/// Every invariant violation found in a record; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_record(record: &CorpusRecord) -> ValidationReport {
    let mut violations = Vec::new();
    if record.document.id.is_empty() {
        violations.push(Violation::EmptyId);
    }
    check_part(&record.document, TextPart::Document, &mut violations);
    check_part(&record.summary, TextPart::Summary, &mut violations);
    ValidationReport { violations }
}

fn check_part<A: Annotated>(part: &A, which: TextPart, out: &mut Vec<Violation>) {
    let text = part.text();
    let text_len = char_len(text);
    for span in part.entities() {
        if span.start >= span.end {
            out.push(Violation::EmptySpan {
                part: which,
                span: span.clone(),
            });
        } else if span.end > text_len {
            out.push(Violation::OutOfBounds {
                part: which,
                span: span.clone(),
                text_len,
            });
        } else {
            let actual = slice_chars(text, span.start, span.end).unwrap_or_default();
            if actual != span.surface {
                out.push(Violation::SurfaceMismatch {
                    part: which,
                    span: span.clone(),
                    actual: actual.to_owned(),
                });
            }
        }
    }
    for pair in part.entities().windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.start < a.start {
            out.push(Violation::Unsorted {
                part: which,
                first: a.clone(),
                second: b.clone(),
            });
        } else if a.overlaps(b) {
            out.push(Violation::Overlap {
                part: which,
                first: a.clone(),
                second: b.clone(),
            });
        }
    }
}
