//! Command-line entry points.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

pub mod config;
pub mod external;

use std::collections::{HashMap, HashSet};
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{load_config_file, parse_config, resolve_seed, FileConfig, SEED_ENV};
pub use external::{run_external, ExternalBatchItem, ExternalReply, SEP};

use crate::corpus::{CorpusIndex, CorpusReader, CorpusRecord};
use crate::corrector::{correct, correct_record, VerdictLine};
use crate::corruptor::{
    build_dataset_parallel, triplet_to_json_line, CorruptorConfig, DatasetStats,
    InapplicablePolicy, RuleWeights, TripletReader,
};
use crate::error::{Error, Result};
use crate::evaluator::{emit_report, render_table, ConsistencyLabel, EvalReport, Evaluator, Normalizer};

const CHUNK: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "factfix", version, about = "Corrupt, correct and evaluate summaries")]
struct Cli {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check every record of a corpus file.
    Validate {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
    /// Build a triplet dataset from a corpus.
    Corrupt(CorruptArgs),
    /// Run the built-in corrector.
    Correct(CorrectArgs),
    /// Score a verdict file against triplets.
    Evaluate(EvaluateArgs),
    /// Run an external corrector over triplets and score it.
    RunExternal(RunExternalArgs),
}

#[derive(Debug, Args)]
struct CorruptArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
    /// Defaults to `<out>.stats.json`.
    #[arg(long, value_name = "PATH")]
    stats: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// e.g. `e=1,n=1,d=1,p=1`
    #[arg(long)]
    rule_weights: Option<RuleWeights>,
    /// `resample_other_rules` or `emit_clean`
    #[arg(long)]
    on_inapplicable: Option<InapplicablePolicy>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct CorrectArgs {
    /// Corpus file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Correct the corrupted summaries of these triplets instead of the
    /// corpus summaries.
    #[arg(long, value_name = "PATH")]
    triplets: Option<PathBuf>,
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long, value_name = "PATH")]
    triplets: PathBuf,
    #[arg(long, value_name = "PATH")]
    verdicts: PathBuf,
    /// Write the JSON report here.
    #[arg(long = "out", value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long)]
    ignore_case: bool,
}

#[derive(Debug, Args)]
struct RunExternalArgs {
    /// Corpus file holding the source documents.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_name = "PATH")]
    triplets: PathBuf,
    #[arg(long, value_name = "CMD")]
    external_cmd: Option<String>,
    /// Verdict JSONL output.
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    #[arg(long)]
    ignore_case: bool,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code. Diagnostics go to standard error.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(p) => load_config_file(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Cmd::Validate { input } => cmd_validate(&input),
        Cmd::Corrupt(a) => cmd_corrupt(a, &file),
        Cmd::Correct(a) => cmd_correct(a),
        Cmd::Evaluate(a) => cmd_evaluate(a, &file),
        Cmd::RunExternal(a) => cmd_run_external(a, &file),
    }
}

fn same_path(a: &Path, b: &Path) -> bool {
    fn canonical(p: &Path) -> Option<PathBuf> {
        if let Ok(c) = p.canonicalize() {
            return Some(c);
        }
        let parent = match p.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.canonicalize().ok()?,
            _ => std::env::current_dir().ok()?,
        };
        Some(parent.join(p.file_name()?))
    }
    a == b || matches!((canonical(a), canonical(b)), (Some(x), Some(y)) if x == y)
}

fn distinct_paths(paths: &[(&str, &Path)]) -> Result<()> {
    for (i, (na, a)) in paths.iter().enumerate() {
        for (nb, b) in &paths[i + 1..] {
            if same_path(a, b) {
                return Err(Error::Usage(format!(
                    "--{na} and --{nb} name the same file {}",
                    a.display()
                )));
            }
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

fn write_line(w: &mut impl Write, line: &str, path: &Path) -> Result<()> {
    writeln!(w, "{line}").map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn cmd_validate(input: &Path) -> Result<i32> {
    let mut ids = HashSet::new();
    let (mut records, mut invalid) = (0u64, 0u64);
    for (i, r) in CorpusReader::open(input)?.enumerate() {
        match r {
            Ok(rec) => {
                records += 1;
                if !ids.insert(rec.document.id.clone()) {
                    invalid += 1;
                    eprintln!("record {}: duplicate id {:?}", i + 1, rec.document.id);
                }
            }
            Err(e) => {
                invalid += 1;
                eprintln!("{e}");
            }
        }
    }
    println!("{records} valid records, {invalid} problems");
    Ok(if invalid == 0 { 0 } else { 1 })
}

#[derive(Serialize)]
struct StatsFile<'a> {
    alpha: f64,
    master_seed: u64,
    rule_weights: String,
    on_inapplicable: InapplicablePolicy,
    skipped_lines: u64,
    #[serde(flatten)]
    stats: &'a DatasetStats,
}

fn corruptor_config(a: &CorruptArgs, file: &FileConfig) -> Result<CorruptorConfig> {
    let env = std::env::var(SEED_ENV).ok();
    let defaults = CorruptorConfig::default();
    let cfg = CorruptorConfig {
        alpha: a.alpha.or(file.alpha).unwrap_or(defaults.alpha),
        master_seed: resolve_seed(a.seed, file.seed, env.as_deref())?,
        rule_weights: match (a.rule_weights, &file.rule_weights) {
            (Some(w), _) => w,
            (None, Some(s)) => s.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            (None, None) => defaults.rule_weights,
        },
        on_inapplicable: match (a.on_inapplicable, &file.on_inapplicable) {
            (Some(p), _) => p,
            (None, Some(s)) => s.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            (None, None) => defaults.on_inapplicable,
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))
}

fn cmd_corrupt(a: CorruptArgs, file: &FileConfig) -> Result<i32> {
    let cfg = corruptor_config(&a, file)?;
    let stats_path = a.stats.clone().unwrap_or_else(|| {
        let mut s = a.output.clone().into_os_string();
        s.push(".stats.json");
        PathBuf::from(s)
    });
    distinct_paths(&[("in", &a.input), ("out", &a.output), ("stats", &stats_path)])?;
    let pool = thread_pool(a.jobs.or(file.jobs))?;

    let reader = CorpusReader::open(&a.input)?;
    let mut out = create(&a.output)?;
    let mut stats = DatasetStats::default();
    let mut skipped = 0u64;
    let mut chunk: Vec<CorpusRecord> = Vec::with_capacity(CHUNK);
    let mut flush = |chunk: &mut Vec<CorpusRecord>, stats: &mut DatasetStats| -> Result<()> {
        let (triplets, s) = pool.install(|| build_dataset_parallel(chunk, &cfg))?;
        for t in &triplets {
            write_line(&mut out, &triplet_to_json_line(t), &a.output)?;
        }
        *stats = std::mem::take(stats).merge(s);
        chunk.clear();
        Ok(())
    };
    for r in reader {
        match r {
            Ok(rec) => {
                chunk.push(rec);
                if chunk.len() == CHUNK {
                    flush(&mut chunk, &mut stats)?;
                }
            }
            Err(e) => {
                skipped += 1;
                eprintln!("skipped: {e}");
            }
        }
    }
    flush(&mut chunk, &mut stats)?;
    finish(out, &a.output)?;

    let sf = StatsFile {
        alpha: cfg.alpha,
        master_seed: cfg.master_seed,
        rule_weights: cfg.rule_weights.to_string(),
        on_inapplicable: cfg.on_inapplicable,
        skipped_lines: skipped,
        stats: &stats,
    };
    let mut json = serde_json::to_string_pretty(&sf).expect("stats serialize");
    json.push('\n');
    std::fs::write(&stats_path, json).map_err(|e| Error::io(&stats_path, e))?;
    println!(
        "{} triplets ({} corrupted, {} clean) written to {}",
        stats.total,
        stats.corrupted,
        stats.clean,
        a.output.display()
    );
    if skipped > 0 {
        eprintln!("{skipped} corpus lines skipped");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_correct(a: CorrectArgs) -> Result<i32> {
    let mut paths = vec![("in", a.input.as_path()), ("out", a.output.as_path())];
    if let Some(t) = &a.triplets {
        paths.push(("triplets", t));
    }
    distinct_paths(&paths)?;
    let mut out = create(&a.output)?;
    let (mut n, mut changed, mut skipped) = (0u64, 0u64, 0u64);
    match &a.triplets {
        None => {
            for r in CorpusReader::open(&a.input)? {
                let rec = match r {
                    Ok(rec) => rec,
                    Err(e) => {
                        skipped += 1;
                        eprintln!("skipped: {e}");
                        continue;
                    }
                };
                let v = correct_record(&rec)?;
                n += 1;
                changed += u64::from(v.changed);
                write_line(&mut out, &VerdictLine::from_verdict(rec.id(), &v).to_json_line(), &a.output)?;
            }
        }
        Some(tp) => {
            let index = CorpusIndex::build(&a.input)?;
            let mut lookup = index.reader()?;
            for t in TripletReader::open(tp)? {
                let t = t?;
                let rec = lookup.get(&t.document_id)?;
                let summary = t.corrupted_summary(&rec.summary)?;
                let v = correct(&summary, &rec.document)?;
                n += 1;
                changed += u64::from(v.changed);
                write_line(&mut out, &VerdictLine::from_verdict(&t.id, &v).to_json_line(), &a.output)?;
            }
        }
    }
    finish(out, &a.output)?;
    println!("{n} summaries, {changed} changed, written to {}", a.output.display());
    if skipped > 0 {
        eprintln!("{skipped} corpus lines skipped");
        return Ok(1);
    }
    Ok(0)
}

/// Reads verdict JSONL into `id -> corrected`, rejecting duplicate ids.
pub fn load_verdicts(path: &Path) -> Result<HashMap<String, String>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut map = HashMap::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let v = VerdictLine::parse(&line).map_err(|e| e.at_line(i + 1))?;
        if map.contains_key(&v.id) {
            return Err(Error::Input(format!("duplicate verdict for id {:?}", v.id)).at_line(i + 1));
        }
        map.insert(v.id, v.corrected);
    }
    Ok(map)
}

/// Streams triplets from `path`, scoring each against `outputs[id]`.
/// Calls `each` with every triplet id and its output, in file order.
fn score_stream(
    path: &Path,
    outputs: &HashMap<String, String>,
    normalizer: Normalizer,
    mut each: impl FnMut(&str, &str, ConsistencyLabel) -> Result<()>,
) -> Result<EvalReport<f64>> {
    let mut ev = Evaluator::new(normalizer);
    let mut seen = HashSet::new();
    for t in TripletReader::open(path)? {
        let t = t?;
        if !seen.insert(t.id.clone()) {
            return Err(Error::Input(format!("duplicate triplet id {:?}", t.id)));
        }
        let out = outputs
            .get(&t.id)
            .ok_or_else(|| Error::Input(format!("no verdict for id {:?}", t.id)))?;
        ev.add(&t, out);
        each(&t.id, out, normalizer.classify(&t.corrupted, out))?;
    }
    let mut extra: Vec<&String> = outputs.keys().filter(|id| !seen.contains(*id)).collect();
    extra.sort();
    if let Some(id) = extra.first() {
        return Err(Error::Input(format!("verdict for unknown id {id:?}")));
    }
    ev.report()
}

fn report_out(report: &EvalReport<f64>, path: Option<&Path>) -> Result<()> {
    let table = match path {
        Some(p) => emit_report(report, p)?,
        None => render_table(report),
    };
    print!("{table}");
    Ok(())
}

fn cmd_evaluate(a: EvaluateArgs, file: &FileConfig) -> Result<i32> {
    let mut paths = vec![("triplets", a.triplets.as_path()), ("verdicts", a.verdicts.as_path())];
    if let Some(o) = &a.output {
        paths.push(("out", o));
    }
    distinct_paths(&paths)?;
    let normalizer = Normalizer::new(a.ignore_case || file.ignore_case.unwrap_or(false));
    let verdicts = load_verdicts(&a.verdicts)?;
    let report = score_stream(&a.triplets, &verdicts, normalizer, |_, _, _| Ok(()))?;
    report_out(&report, a.output.as_deref())?;
    Ok(0)
}

fn cmd_run_external(a: RunExternalArgs, file: &FileConfig) -> Result<i32> {
    let cmd = a
        .external_cmd
        .clone()
        .or_else(|| file.external_cmd.clone())
        .ok_or_else(|| Error::Usage("--external-cmd is required (flag or config)".into()))?;
    let mut paths = vec![
        ("in", a.input.as_path()),
        ("triplets", a.triplets.as_path()),
        ("out", a.output.as_path()),
    ];
    if let Some(r) = &a.report {
        paths.push(("report", r));
    }
    distinct_paths(&paths)?;
    let normalizer = Normalizer::new(a.ignore_case || file.ignore_case.unwrap_or(false));

    let index = CorpusIndex::build(&a.input)?;
    let mut lookup = index.reader()?;
    let items = TripletReader::open(&a.triplets)?.map(move |t| {
        let t = t?;
        let rec = lookup.get(&t.document_id)?;
        Ok(ExternalBatchItem::new(t.id, t.corrupted, rec.document.text))
    });
    let replies: HashMap<String, String> = run_external(items, &cmd)?.into_iter().collect();

    let mut out = create(&a.output)?;
    let report = score_stream(&a.triplets, &replies, normalizer, |id, corrected, label| {
        let v = VerdictLine {
            id: id.to_owned(),
            corrected: corrected.to_owned(),
            changed: label == ConsistencyLabel::Inconsistent,
            edits: Vec::new(),
        };
        write_line(&mut out, &v.to_json_line(), &a.output)
    })?;
    finish(out, &a.output)?;
    report_out(&report, a.report.as_deref())?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(cli_dispatch(["factfix", "frobnicate"]), 2);
        assert_eq!(cli_dispatch(["factfix", "corrupt", "--in", "a", "--out", "b", "--bogus"]), 2);
        assert_eq!(
            cli_dispatch(["factfix", "corrupt", "--in", "a", "--out", "b", "--alpha", "1.5"]),
            2
        );
        assert_eq!(cli_dispatch(["factfix", "corrupt", "--in", "a", "--out", "a"]), 2);
        assert_eq!(
            cli_dispatch(["factfix", "corrupt", "--in", "a", "--out", "b", "--rule-weights", "q=1"]),
            2
        );
    }

    #[test]
    fn missing_input_is_data_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o.jsonl");
        let code = cli_dispatch([
            "factfix".as_ref(),
            "validate".as_ref(),
            "--in".as_ref(),
            dir.path().join("none.jsonl").as_os_str(),
        ]);
        assert_eq!(code, 1);
        assert!(!out.exists());
    }

    #[test]
    fn same_path_through_dot() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("x.jsonl");
        let b = dir.path().join(".").join("x.jsonl");
        assert!(same_path(&a, &b));
        assert!(!same_path(&a, &dir.path().join("y.jsonl")));
    }

    #[test]
    fn flag_beats_config_file() {
        let a = CorruptArgs {
            input: "i".into(),
            output: "o".into(),
            stats: None,
            alpha: Some(0.5),
            seed: None,
            rule_weights: None,
            on_inapplicable: None,
            jobs: None,
        };
        let file = parse_config("alpha = 0.3\nseed = 4\nrule_weights = \"n=1\"").unwrap();
        let cfg = corruptor_config(&a, &file).unwrap();
        assert_eq!(cfg.alpha, 0.5);
        assert_eq!(cfg.master_seed, 4);
        assert_eq!(cfg.rule_weights, RuleWeights([0.0, 1.0, 0.0, 0.0]));
    }
}
