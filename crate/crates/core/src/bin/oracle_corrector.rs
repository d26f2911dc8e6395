//! External corrector that cheats by answering with the reference summary
//! from a triplet file. Used to check the harness end to end.
//!
//! Usage: `oracle-corrector <triplets.jsonl> [--reverse]`.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use factfix::corruptor::TripletReader;
use factfix::harness::{ExternalBatchItem, ExternalReply};

fn fail(msg: impl std::fmt::Display) -> ! {
    eprintln!("oracle-corrector: {msg}");
    std::process::exit(1);
}

fn main() {
    let mut reverse = false;
    let mut path = None;
    for a in std::env::args().skip(1) {
        if a == "--reverse" {
            reverse = true;
        } else {
            path = Some(PathBuf::from(a));
        }
    }
    let path = path.unwrap_or_else(|| fail("usage: oracle-corrector <triplets.jsonl> [--reverse]"));
    let mut references = HashMap::new();
    for t in TripletReader::open(&path).unwrap_or_else(|e| fail(e)) {
        let t = t.unwrap_or_else(|e| fail(e));
        references.insert(t.id, t.reference);
    }

    let mut replies = Vec::new();
    for line in io::stdin().lock().lines() {
        let line = line.unwrap_or_else(|e| fail(e));
        if line.trim().is_empty() {
            continue;
        }
        let item: ExternalBatchItem = serde_json::from_str(&line).unwrap_or_else(|e| fail(e));
        let corrected = references
            .get(&item.id)
            .cloned()
            .unwrap_or_else(|| fail(format!("no triplet with id {:?}", item.id)));
        replies.push(ExternalReply {
            id: item.id,
            corrected,
        });
    }
    if reverse {
        replies.reverse();
    }
    let mut out = io::BufWriter::new(io::stdout().lock());
    for r in replies {
        writeln!(out, "{}", serde_json::to_string(&r).expect("reply serializes")).expect("write stdout");
    }
}
