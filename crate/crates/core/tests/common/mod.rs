//! Deterministic synthetic corpus for integration tests.
//!
//! Each document is a handful of sentences drawn from distinct templates,
//! each with at most one span per corruption class. The summary copies two
//! of those sentences in shortened form, sometimes followed by a pronoun
//! sentence, so every summary has an applicable Entity, Number or Date
//! swap and every summary sentence aligns to the sentence it came from.

#![allow(dead_code)]

use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use factfix::corpus::{
    record_to_json_line, AnnotatedDocument, AnnotatedSummary, CorpusRecord, CorpusReader,
    EntityLabel, EntitySpan,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (document sentence, summary sentence). Slots: {P} person, {G} place,
/// {O} organization, {N} count, {PCT} percentage, {Q} quantity, {D} date.
const TEMPLATES: &[(&str, &str)] = &[
    (
        "{P} unveiled a sweeping plan to rebuild crumbling bridges across the region on {D}.",
        "{P} unveiled a plan to rebuild crumbling bridges on {D}.",
    ),
    (
        "Officials counted {N} volunteers planting saplings along the eroded riverbank.",
        "{N} volunteers planted saplings along the riverbank.",
    ),
    (
        "The factory in {G} shut its furnaces after inspectors found cracked pipes.",
        "The factory in {G} shut its furnaces after inspectors found cracked pipes.",
    ),
    (
        "Shares of {O} tumbled {PCT} when quarterly earnings disappointed analysts.",
        "Shares of {O} tumbled {PCT} as earnings disappointed analysts.",
    ),
    (
        "A blizzard buried {G} under heavy snow on {D}, stranding motorists overnight.",
        "A blizzard buried {G} under heavy snow on {D}.",
    ),
    (
        "Coach {P} praised the stubborn defense after a narrow playoff victory.",
        "{P} praised the stubborn defense after a playoff victory.",
    ),
    (
        "Researchers at {O} sequenced {N} ancient genomes recovered from cave sediments.",
        "Researchers at {O} sequenced {N} ancient genomes from cave sediments.",
    ),
    (
        "The museum reopened its gallery of medieval tapestries on {D} after a lengthy restoration.",
        "The museum reopened its medieval tapestries gallery on {D}.",
    ),
    (
        "Firefighters evacuated {N} residents as wildfire smoke drifted over {G}.",
        "Firefighters evacuated {N} residents as wildfire smoke drifted over {G}.",
    ),
    (
        "Lawmakers questioned {P} about missing pension funds during a tense hearing.",
        "Lawmakers questioned {P} about missing pension funds.",
    ),
    (
        "Tourism to {G} rebounded strongly, with hotel bookings up {PCT} since {D}.",
        "Hotel bookings in {G} rose {PCT} since {D} as tourism rebounded.",
    ),
    (
        "Engineers at {O} tested a battery prototype that charges within minutes.",
        "Engineers at {O} tested a battery prototype.",
    ),
    (
        "Farmers near {G} harvested {Q} of barley despite the drought.",
        "Farmers near {G} harvested {Q} of barley.",
    ),
    (
        "The orchestra led by {P} performed a forgotten symphony to a packed hall on {D}.",
        "The orchestra led by {P} performed a forgotten symphony on {D}.",
    ),
];

const PRONOUN_SENTENCES: &[(&str, &str)] = &[
    (
        "She said the results exceeded every expectation.",
        "She said the results exceeded expectations.",
    ),
    (
        "He told reporters that they would appeal the ruling.",
        "He told reporters they would appeal the ruling.",
    ),
];

const PERSONS: &[&str] = &[
    "Maria Lopez", "John Carter", "Aisha Bello", "Kenji Sato", "Olga Petrova", "Liam Walsh",
    "Priya Nair", "Tomas Novak", "Grace Mensah", "Henrik Berg", "Sofia Rossi", "Ahmed Karim",
    "Elena Vidal", "Marcus Reed", "Yuki Tanaka", "Noah Fischer",
];
const PLACES: &[&str] = &[
    "Lisbon", "Nairobi", "Toronto", "Osaka", "Krakow", "Quito", "Adelaide", "Bergen", "Tunis",
    "Cordoba", "Hanoi", "Glasgow", "Valparaiso", "Tbilisi",
];
const ORGS: &[&str] = &[
    "Norvex Labs", "Harbor Mutual", "Quillon Motors", "Brightwell Foods", "Stratos Energy",
    "Keystone Bank", "Veridian Health", "Atlas Freight", "Lumen Biotech", "Cobalt Systems",
];
const DATES: &[&str] = &[
    "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday", "March 3",
    "April 19", "June 8", "last week", "September 21", "November 2", "January 14",
];

struct Builder {
    text: String,
    len: usize,
    spans: Vec<EntitySpan>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            text: String::new(),
            len: 0,
            spans: Vec::new(),
        }
    }

    fn push(&mut self, s: &str) {
        self.text.push_str(s);
        self.len += s.chars().count();
    }

    fn push_span(&mut self, s: &str, label: EntityLabel) {
        let start = self.len;
        self.push(s);
        self.spans.push(EntitySpan {
            start,
            end: self.len,
            surface: s.to_owned(),
            label,
        });
    }

    fn fill(&mut self, template: &str, values: &Values) {
        let mut rest = template;
        while let Some(open) = rest.find('{') {
            self.push(&rest[..open]);
            let close = open + rest[open..].find('}').unwrap();
            let (value, label) = values.get(&rest[open + 1..close]);
            self.push_span(value, label);
            rest = &rest[close + 1..];
        }
        self.push(rest);
    }
}

/// Slot values for one template instance.
struct Values {
    person: String,
    place: String,
    org: String,
    count: String,
    percent: String,
    quantity: String,
    date: String,
}

impl Values {
    fn get(&self, slot: &str) -> (&str, EntityLabel) {
        match slot {
            "P" => (&self.person, EntityLabel::Person),
            "G" => (&self.place, EntityLabel::Gpe),
            "O" => (&self.org, EntityLabel::Org),
            "N" => (&self.count, EntityLabel::Cardinal),
            "PCT" => (&self.percent, EntityLabel::Percent),
            "Q" => (&self.quantity, EntityLabel::Quantity),
            "D" => (&self.date, EntityLabel::Date),
            other => panic!("unknown slot {other}"),
        }
    }
}

fn pick(rng: &mut ChaCha8Rng, pool: &[&str], used: &mut HashSet<String>) -> String {
    loop {
        let v = pool[rng.random_range(0..pool.len())];
        if used.insert(v.to_owned()) {
            return v.to_owned();
        }
    }
}

fn number(rng: &mut ChaCha8Rng, used: &mut HashSet<u32>) -> u32 {
    loop {
        let n = rng.random_range(30..1000);
        if used.insert(n) {
            return n;
        }
    }
}

/// Record `i` of the corpus generated from `seed`.
pub fn synthetic_record(seed: u64, i: usize) -> CorpusRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut order: Vec<usize> = (0..TEMPLATES.len()).collect();
    order.shuffle(&mut rng);
    let n_sentences = rng.random_range(4..=6);
    let chosen = &order[..n_sentences];

    let mut used_names = HashSet::new();
    let mut used_numbers = HashSet::new();
    let values: Vec<Values> = chosen
        .iter()
        .map(|_| Values {
            person: pick(&mut rng, PERSONS, &mut used_names),
            place: pick(&mut rng, PLACES, &mut used_names),
            org: pick(&mut rng, ORGS, &mut used_names),
            count: number(&mut rng, &mut used_numbers).to_string(),
            percent: format!("{} percent", number(&mut rng, &mut used_numbers)),
            quantity: format!("{} tonnes", number(&mut rng, &mut used_numbers)),
            date: pick(&mut rng, DATES, &mut used_names),
        })
        .collect();

    let pronoun = if rng.random_bool(0.4) {
        Some(PRONOUN_SENTENCES[rng.random_range(0..PRONOUN_SENTENCES.len())])
    } else {
        None
    };

    let mut doc = Builder::new();
    for (k, (&t, v)) in chosen.iter().zip(&values).enumerate() {
        if k > 0 {
            doc.push(" ");
        }
        doc.fill(TEMPLATES[t].0, v);
    }
    if let Some((d, _)) = pronoun {
        doc.push(" ");
        doc.push(d);
    }

    let mut summary_idx = [rng.random_range(0..n_sentences), rng.random_range(0..n_sentences - 1)];
    if summary_idx[1] >= summary_idx[0] {
        summary_idx[1] += 1;
    }
    summary_idx.sort_unstable();
    let mut sum = Builder::new();
    for (k, &j) in summary_idx.iter().enumerate() {
        if k > 0 {
            sum.push(" ");
        }
        sum.fill(TEMPLATES[chosen[j]].1, &values[j]);
    }
    if let Some((_, s)) = pronoun {
        sum.push(" ");
        sum.push(s);
    }

    CorpusRecord {
        document: AnnotatedDocument {
            id: format!("syn-{seed}-{i:06}"),
            text: doc.text,
            entities: doc.spans,
        },
        summary: AnnotatedSummary {
            text: sum.text,
            entities: sum.spans,
        },
    }
}

pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<CorpusRecord> {
    (0..n).map(|i| synthetic_record(seed, i)).collect()
}

pub fn write_corpus(path: &Path, records: &[CorpusRecord]) {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path).unwrap());
    for r in records {
        writeln!(f, "{}", record_to_json_line(r)).unwrap();
    }
    f.flush().unwrap();
}

pub fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn golden_records() -> Vec<CorpusRecord> {
    CorpusReader::open(&fixture_path("golden.jsonl"))
        .unwrap()
        .map(Result::unwrap)
        .collect()
}

pub fn golden(id: &str) -> CorpusRecord {
    golden_records()
        .into_iter()
        .find(|r| r.id() == id)
        .unwrap_or_else(|| panic!("no golden record {id}"))
}

pub fn factfix_bin() -> &'static str {
    env!("CARGO_BIN_EXE_factfix")
}

pub fn echo_bin() -> &'static str {
    env!("CARGO_BIN_EXE_echo-corrector")
}

pub fn oracle_bin() -> &'static str {
    env!("CARGO_BIN_EXE_oracle-corrector")
}

/// Runs the CLI, returning (exit code, stdout, stderr).
pub fn run_cli<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> (i32, String, String) {
    let out = std::process::Command::new(factfix_bin())
        .args(args)
        .env_remove("FACTFIX_SEED")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}
