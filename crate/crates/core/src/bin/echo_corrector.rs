//! External corrector that returns every summary unchanged.
//!
//! Usage: `echo-corrector [--reverse]`. With `--reverse` replies are
//! written in reverse input order.

use std::io::{self, BufRead, Write};

use factfix::harness::{ExternalBatchItem, ExternalReply};

fn main() {
    let reverse = std::env::args().skip(1).any(|a| a == "--reverse");
    let mut replies = Vec::new();
    for line in io::stdin().lock().lines() {
        let line = line.expect("read stdin");
        if line.trim().is_empty() {
            continue;
        }
        let item: ExternalBatchItem = match serde_json::from_str(&line) {
            Ok(i) => i,
            Err(e) => {
                eprintln!("echo-corrector: bad input line: {e}");
                std::process::exit(1);
            }
        };
        replies.push(ExternalReply {
            id: item.id,
            corrected: item.summary,
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
