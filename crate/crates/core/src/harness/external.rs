//! Batch protocol for external correctors.
//!
//! The harness runs the command through `sh -c`, writes one
//! [`ExternalBatchItem`] per line to its standard input, closes it, and
//! reads one `{"id": str, "corrected": str}` per line from its standard
//! output. Replies are matched by id and may arrive in any order; every
//! id must be answered exactly once.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::process::{Command, Stdio};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Separator placed between the summary and the document in `input_text`.
pub const SEP: &str = "\n<::SEP::>\n";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalBatchItem {
    pub id: String,
    pub input_text: String,
    pub summary: String,
    pub document: String,
}

impl ExternalBatchItem {
    pub fn new(id: impl Into<String>, summary: impl Into<String>, document: impl Into<String>) -> Self {
        let (summary, document) = (summary.into(), document.into());
        ExternalBatchItem {
            id: id.into(),
            input_text: format!("{summary}{SEP}{document}"),
            summary,
            document,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("batch item serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalReply {
    pub id: String,
    pub corrected: String,
}

/// Runs `cmd` over `items` and returns the corrected text keyed by id.
///
/// Items are produced on a writer thread while replies are read, so the
/// child may stream. An error yielded by `items` aborts the batch.
pub fn run_external<I>(items: I, cmd: &str) -> Result<BTreeMap<String, String>>
where
    I: IntoIterator<Item = Result<ExternalBatchItem>>,
    I::IntoIter: Send,
{
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::External {
            status: "spawn failed".into(),
            stderr: e.to_string(),
        })?;
    let mut stdin = child.stdin.take().expect("piped stdin");
    let stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    let items = items.into_iter();

    let (sent, lines, err_text) = std::thread::scope(|s| {
        let writer = s.spawn(move || -> Result<Vec<String>> {
            let mut ids = Vec::new();
            for item in items {
                let item = item?;
                let mut line = item.to_json_line();
                line.push('\n');
                ids.push(item.id);
                // A child that stops reading early shows up as missing ids
                // or a nonzero exit, both reported below.
                if stdin.write_all(line.as_bytes()).is_err() {
                    break;
                }
            }
            Ok(ids)
        });
        let err_reader = s.spawn(move || {
            let mut buf = String::new();
            let _ = stderr.read_to_string(&mut buf);
            buf
        });
        let lines: Vec<std::io::Result<String>> = BufReader::new(stdout).lines().collect();
        (
            writer.join().expect("writer thread"),
            lines,
            err_reader.join().expect("stderr thread"),
        )
    });
    let status = child.wait().map_err(|e| Error::External {
        status: "wait failed".into(),
        stderr: e.to_string(),
    })?;
    let sent = sent?;
    if !status.success() {
        return Err(Error::External {
            status: status.to_string(),
            stderr: err_text.trim_end().to_owned(),
        });
    }

    let mut expected: HashSet<&str> = HashSet::with_capacity(sent.len());
    for id in &sent {
        if !expected.insert(id) {
            return Err(Error::Input(format!("duplicate input id {id:?}")));
        }
    }
    let mut replies = BTreeMap::new();
    for (i, line) in lines.into_iter().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Protocol(format!("line {line_no}: unreadable output: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let reply: ExternalReply = serde_json::from_str(&line)
            .map_err(|e| Error::Protocol(format!("line {line_no}: malformed reply ({e})")))?;
        if !expected.contains(reply.id.as_str()) {
            return Err(Error::Protocol(format!("line {line_no}: unknown id {:?}", reply.id)));
        }
        if replies.contains_key(&reply.id) {
            return Err(Error::Protocol(format!("line {line_no}: duplicate id {:?}", reply.id)));
        }
        replies.insert(reply.id, reply.corrected);
    }
    if let Some(id) = sent.iter().find(|id| !replies.contains_key(*id)) {
        return Err(Error::Protocol(format!("no reply for id {id:?}")));
    }
    Ok(replies)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(n: usize) -> Vec<Result<ExternalBatchItem>> {
        (0..n)
            .map(|i| Ok(ExternalBatchItem::new(format!("id{i}"), format!("summary {i}"), "doc")))
            .collect()
    }

    // Echo the summary back via sed on the JSON line.
    const ECHO: &str = r#"sed -E 's/^\{"id":("[^"]*"),"input_text":"[^"]*","summary":("[^"]*"),.*$/{"id":\1,"corrected":\2}/'"#;

    #[test]
    fn input_text_uses_separator() {
        let item = ExternalBatchItem::new("a", "S.", "D.");
        assert_eq!(item.input_text, "S.\n<::SEP::>\nD.");
    }

    #[test]
    fn echo_via_shell() {
        let out = run_external(items(50), ECHO).unwrap();
        assert_eq!(out.len(), 50);
        assert_eq!(out["id7"], "summary 7");
    }

    #[test]
    fn reversed_output_is_fine() {
        let out = run_external(items(20), &format!("{ECHO} | tac")).unwrap();
        assert_eq!(out["id19"], "summary 19");
    }

    #[test]
    fn nonzero_exit_carries_stderr() {
        let err = run_external(items(3), "cat >/dev/null; echo boom >&2; exit 3").unwrap_err();
        assert!(matches!(&err, Error::External { stderr, .. } if stderr == "boom"), "{err}");
    }

    #[test]
    fn protocol_violations() {
        let err = run_external(items(3), &format!("{ECHO} | head -n 2")).unwrap_err();
        assert!(matches!(&err, Error::Protocol(m) if m.contains("id2")), "{err}");

        let err = run_external(items(3), &format!("{ECHO} | sed '2s/.*/not json/'")).unwrap_err();
        assert!(matches!(&err, Error::Protocol(m) if m.starts_with("line 2")), "{err}");

        let err = run_external(items(3), &format!("{ECHO} | sed 's/id2/id1/'")).unwrap_err();
        assert!(matches!(&err, Error::Protocol(m) if m.contains("duplicate")), "{err}");

        let err = run_external(items(3), &format!("{ECHO} | sed 's/id2/zz/'")).unwrap_err();
        assert!(matches!(&err, Error::Protocol(m) if m.contains("unknown")), "{err}");
    }

    #[test]
    fn item_error_aborts() {
        let mut it = items(2);
        it.push(Err(Error::Input("bad".into())));
        let err = run_external(it, "cat >/dev/null").unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }
}
