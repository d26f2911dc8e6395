//! Corpus JSONL schema.
//!
//! ```text
//! {"id": str,
//!  "document": {"text": str, "entities": [{"start": int, "end": int, "label": str}]},
//!  "summary":  {"text": str, "entities": [...]}}
//! ```
//!
//! Surfaces are derived from the text on parse and never stored.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Seek, SeekFrom};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use super::{
    validate_record, AnnotatedDocument, AnnotatedSummary, CorpusRecord, EntityLabel, EntitySpan,
};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct RawSpan {
    start: usize,
    end: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct RawPart {
    text: String,
    entities: Vec<RawSpan>,
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    id: String,
    document: RawPart,
    summary: RawPart,
}

pub(crate) fn json_error(err: serde_json::Error, line: &str) -> Error {
    match err.classify() {
        Category::Data => Error::Schema(err.to_string()),
        _ => Error::Parse {
            message: err.to_string(),
            context: excerpt(line),
        },
    }
}

fn excerpt(line: &str) -> String {
    const MAX: usize = 80;
    let mut chars = line.chars();
    let head: String = chars.by_ref().take(MAX).collect();
    if chars.next().is_some() {
        format!("{head}...")
    } else {
        head
    }
}

fn build_spans(text: &str, raw: Vec<RawSpan>) -> Result<Vec<EntitySpan>> {
    raw.into_iter()
        .map(|r| {
            let label: EntityLabel = r.label.parse()?;
            EntitySpan::new(text, r.start, r.end, label)
        })
        .collect()
}

/// Parses and fully validates one corpus line.
pub fn parse_record(line: &str) -> Result<CorpusRecord> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| json_error(e, line))?;
    if raw.id.is_empty() {
        return Err(Error::Schema("record id is empty".into()));
    }
    let doc_entities = build_spans(&raw.document.text, raw.document.entities)?;
    let sum_entities = build_spans(&raw.summary.text, raw.summary.entities)?;
    let record = CorpusRecord {
        document: AnnotatedDocument {
            id: raw.id,
            text: raw.document.text,
            entities: doc_entities,
        },
        summary: AnnotatedSummary {
            text: raw.summary.text,
            entities: sum_entities,
        },
    };
    let report = validate_record(&record);
    if let Some(v) = report.violations.first() {
        return Err(Error::Span(v.to_string()));
    }
    Ok(record)
}

fn raw_part(text: &str, entities: &[EntitySpan]) -> RawPart {
    RawPart {
        text: text.to_owned(),
        entities: entities
            .iter()
            .map(|e| RawSpan {
                start: e.start,
                end: e.end,
                label: e.label.as_str().to_owned(),
            })
            .collect(),
    }
}

/// Serializes a record as one JSONL line (no trailing newline).
pub fn record_to_json_line(record: &CorpusRecord) -> String {
    let raw = RawRecord {
        id: record.document.id.clone(),
        document: raw_part(&record.document.text, &record.document.entities),
        summary: raw_part(&record.summary.text, &record.summary.entities),
    };
    serde_json::to_string(&raw).expect("corpus record serializes")
}

/// Streams records from JSONL, attaching 1-based line numbers to errors.
/// Blank lines are skipped.
pub struct CorpusReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R) -> Self {
        CorpusReader {
            lines: reader.lines(),
            line_no: 0,
        }
    }
}

impl CorpusReader<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(CorpusReader::new(BufReader::new(file)))
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<CorpusRecord>;

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
            return Some(parse_record(&line).map_err(|e| e.at_line(self.line_no)));
        }
    }
}

/// Random access into a corpus file by record id.
///
/// Holds only `id -> byte offset`, so lookups re-read a single line.
pub struct CorpusIndex {
    path: PathBuf,
    offsets: HashMap<String, u64>,
}

#[derive(Deserialize)]
struct IdOnly {
    id: String,
}

impl CorpusIndex {
    pub fn build(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = BufReader::new(file);
        let mut offsets = HashMap::new();
        let mut offset = 0u64;
        let mut line = String::new();
        let mut line_no = 0;
        loop {
            line.clear();
            let n = reader
                .read_line(&mut line)
                .map_err(|e| Error::io(path, e))?;
            if n == 0 {
                break;
            }
            line_no += 1;
            if !line.trim().is_empty() {
                let IdOnly { id } = serde_json::from_str(line.trim_end())
                    .map_err(|e| json_error(e, &line).at_line(line_no))?;
                if offsets.insert(id.clone(), offset).is_some() {
                    return Err(Error::Input(format!("duplicate record id {id:?}")).at_line(line_no));
                }
            }
            offset += n as u64;
        }
        Ok(CorpusIndex {
            path: path.to_owned(),
            offsets,
        })
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.offsets.contains_key(id)
    }

    /// Opens a reader for lookups. Each thread should hold its own.
    pub fn reader(&self) -> Result<CorpusLookup<'_>> {
        let file = File::open(&self.path).map_err(|e| Error::io(&self.path, e))?;
        Ok(CorpusLookup {
            index: self,
            reader: BufReader::new(file),
        })
    }
}

pub struct CorpusLookup<'a> {
    index: &'a CorpusIndex,
    reader: BufReader<File>,
}

impl CorpusLookup<'_> {
    pub fn get(&mut self, id: &str) -> Result<CorpusRecord> {
        let offset = *self
            .index
            .offsets
            .get(id)
            .ok_or_else(|| Error::Input(format!("no corpus record with id {id:?}")))?;
        let path = &self.index.path;
        self.reader
            .seek(SeekFrom::Start(offset))
            .map_err(|e| Error::io(path, e))?;
        let mut line = String::new();
        self.reader
            .read_line(&mut line)
            .map_err(|e| Error::io(path, e))?;
        parse_record(line.trim_end())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_record() {
        let line = r#"{"id":"a","document":{"text":"Hello.","entities":[]},"summary":{"text":"Hello.","entities":[]}}"#;
        let r = parse_record(line).unwrap();
        assert!(r.document.entities.is_empty());
        assert_eq!(r.id(), "a");
        assert_eq!(record_to_json_line(&r), line);
    }

    #[test]
    fn malformed_json_is_parse_error() {
        let err = parse_record(r#"{"id": "a", "document": "#).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err:?}");
    }

    #[test]
    fn unknown_label_is_schema_error() {
        let line = r#"{"id":"a","document":{"text":"Hello.","entities":[{"start":0,"end":5,"label":"ANIMAL"}]},"summary":{"text":"x","entities":[]}}"#;
        let err = parse_record(line).unwrap_err();
        assert!(matches!(&err, Error::Schema(m) if m.contains("ANIMAL")), "{err:?}");
    }

    #[test]
    fn missing_field_is_schema_error() {
        let line = r#"{"id":"a","document":{"text":"Hello."},"summary":{"text":"x","entities":[]}}"#;
        assert!(matches!(parse_record(line), Err(Error::Schema(_))));
    }

    #[test]
    fn span_past_end_is_span_error() {
        let line = r#"{"id":"a","document":{"text":"Hello.","entities":[{"start":0,"end":7,"label":"ORG"}]},"summary":{"text":"x","entities":[]}}"#;
        let err = parse_record(line).unwrap_err();
        assert!(matches!(&err, Error::Span(m) if m.contains("[0, 7)")), "{err:?}");
    }

    #[test]
    fn overlapping_spans_rejected() {
        let line = r#"{"id":"a","document":{"text":"abcdefghij","entities":[{"start":0,"end":5,"label":"ORG"},{"start":3,"end":8,"label":"ORG"}]},"summary":{"text":"x","entities":[]}}"#;
        assert!(matches!(parse_record(line), Err(Error::Span(_))));
    }

    #[test]
    fn reader_numbers_lines_and_skips_blanks() {
        let input = "\n{\"id\":\"a\",\"document\":{\"text\":\"x\",\"entities\":[]},\"summary\":{\"text\":\"x\",\"entities\":[]}}\nnot json\n";
        let items: Vec<_> = CorpusReader::new(input.as_bytes()).collect();
        assert_eq!(items.len(), 2);
        assert!(items[0].is_ok());
        match &items[1] {
            Err(Error::AtLine { line, .. }) => assert_eq!(*line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
