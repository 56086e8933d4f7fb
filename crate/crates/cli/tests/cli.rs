use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;
use unabbrev::corpus::{abbreviate, sentence_seed, toy_corpus, AbbrevPolicy};
use unabbrev::text::format_pair_line;

const RUNNING: &str = "th rsn i went to the store .";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unabbrev"))
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        // The command may exit before reading its input.
        let _ = pipe.write_all(text.as_bytes());
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    /// Toy training and dev pairs plus a config using `decode` settings.
    fn new(decode: &str) -> Self {
        let dir = TempDir::new().unwrap();
        let corpus = toy_corpus(400, 11);
        let policy = AbbrevPolicy::new(AbbrevPolicy::default().weights().iter().copied(), 0, 0.3).unwrap();
        let lines: Vec<String> = corpus
            .iter()
            .enumerate()
            .map(|(i, s)| format_pair_line(&abbreviate(&policy, s, sentence_seed(11, i as u64)).pair))
            .collect();
        let mut train = lines[..350].join("\n");
        train.push_str(&format!("\n{RUNNING}\tthe reason i went to the store .\n"));
        fs::write(dir.path().join("train.tsv"), train).unwrap();
        fs::write(dir.path().join("dev.tsv"), lines[350..].join("\n") + "\n").unwrap();
        let config = format!("seed = 11\n[paths]\nmodels = \"models\"\npairs = \"train.tsv\"\ndev = \"dev.tsv\"\n[decode]\n{decode}\n");
        fs::write(dir.path().join("run.toml"), config).unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn config(&self) -> String {
        self.path("run.toml").to_str().unwrap().to_string()
    }

    fn train(&self) -> Output {
        let o = run(&["train", "--config", &self.config()], None);
        assert!(o.status.success(), "{}", stderr(&o));
        o
    }

    fn expand(&self, input: &str, extra: &[&str]) -> Output {
        let config = self.config();
        let mut args = vec!["expand", "--config", &config];
        args.extend_from_slice(extra);
        run(&args, Some(input))
    }
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn train_writes_six_hashed_artifacts_deterministically() {
    let f = Fixture::new("");
    f.train();
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(f.path("models/manifest.json")).unwrap()).unwrap();
    let artifacts = manifest["artifacts"].as_array().unwrap();
    assert_eq!(artifacts.len(), 6);
    for a in artifacts {
        assert!(f.path("models").join(a["file"].as_str().unwrap()).is_file());
        assert_eq!(a["sha256"].as_str().unwrap().len(), 64);
    }
    let first = read_dir_bytes(&f.path("models"));
    f.train();
    assert_eq!(first, read_dir_bytes(&f.path("models")));
}

#[test]
fn missing_pair_file_is_a_data_error() {
    let f = Fixture::new("");
    fs::remove_file(f.path("train.tsv")).unwrap();
    let o = run(&["train", "--config", &f.config()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("paths.pairs"), "{}", stderr(&o));
}

#[test]
fn malformed_config_is_a_usage_error() {
    let f = Fixture::new("beem = 3");
    let o = run(&["train", "--config", &f.config()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("beem"), "{}", stderr(&o));
    assert_eq!(run(&[], None).status.code(), Some(1));
    assert_eq!(run(&["analyze"], Some("")).status.code(), Some(1));
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
}

#[test]
fn expands_the_running_example() {
    for decode in ["channel = \"pair\"", "channel = \"subsequence\"", "beam = 0"] {
        let f = Fixture::new(decode);
        f.train();
        let o = f.expand(&format!("{RUNNING}\n"), &[]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o), "the reason i went to the store .\n", "{decode}");
    }
}

#[test]
fn lexblock_leaves_in_vocabulary_sentences_alone() {
    let f = Fixture::new("channel = \"subsequence\"");
    f.train();
    let input = "the reason i went to the store .\n";
    assert_eq!(stdout(&f.expand(input, &[])), input);
}

#[test]
fn token_counts_are_preserved_and_unknown_tokens_copied() {
    let f = Fixture::new("");
    f.train();
    let input = "qqq xzx th .\nth rsn\n";
    let o = f.expand(input, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].split(' ').count(), 4);
    assert!(lines[0].starts_with("qqq xzx "));
    assert_eq!(lines[1].split(' ').count(), 2);
}

#[test]
fn empty_line_reports_its_number() {
    let f = Fixture::new("");
    f.train();
    let o = f.expand("th rsn\n\nth rsn\n", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn tampered_or_missing_models_are_model_errors() {
    let f = Fixture::new("");
    let o = f.expand("th rsn\n", &[]);
    assert_eq!(o.status.code(), Some(3));
    f.train();
    let lex = f.path("models/lexicon.tsv");
    let mut text = fs::read_to_string(&lex).unwrap();
    text.push_str("zzz\t99999\t1\n");
    fs::write(&lex, text).unwrap();
    let o = f.expand("th rsn\n", &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("does not match the manifest"), "{}", stderr(&o));
}

#[test]
fn trace_has_one_record_per_token() {
    let f = Fixture::new("");
    f.train();
    let trace = f.path("trace.jsonl");
    let o = f.expand(&format!("{RUNNING}\nth rsn\n"), &["--trace", trace.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let records: Vec<serde_json::Value> = fs::read_to_string(&trace)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 10);
    let second = &records[1];
    assert_eq!(second["line"], 1);
    assert_eq!(second["position"], 1);
    assert_eq!(second["token"], "rsn");
    assert_eq!(second["winner"], "reason");
    let words: Vec<&str> = second["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["word"].as_str().unwrap())
        .collect();
    assert!(words.contains(&"reason"));
    assert_eq!(records[8]["line"], 2);
    assert_eq!(records[8]["position"], 0);
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let f = Fixture::new("");
    f.train();
    let input: String = fs::read_to_string(f.path("dev.tsv"))
        .unwrap()
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string() + "\n")
        .collect();
    let one = stdout(&f.expand(&input, &["--workers", "1"]));
    let four = stdout(&f.expand(&input, &["--workers", "4"]));
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 50);
}

#[test]
fn evaluate_reports_text_and_json() {
    let dir = TempDir::new().unwrap();
    let gold = dir.path().join("gold.tsv");
    let hyp = dir.path().join("hyp.txt");
    fs::write(&gold, "th rsn i went\tthe reason i went\n").unwrap();
    fs::write(&hyp, "the season i went\n").unwrap();
    let (g, h) = (gold.to_str().unwrap(), hyp.to_str().unwrap());

    let text = run(&["evaluate", "--gold", g, "--hyp", h], None);
    assert!(text.status.success());
    let text = stdout(&text);
    assert!(text.contains("WER                25.00"), "{text}");
    assert!(text.contains("IER                50.00"), "{text}");

    let json = run(&["evaluate", "--gold", g, "--hyp", h, "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["tokens"], 4);
    assert_eq!(v["wer"]["percent"], 25.0);
    assert_eq!(v["ier"]["percent"], 50.0);
    assert_eq!(v["oer"]["defined"], true);

    fs::write(&hyp, "the season i\n").unwrap();
    let bad = run(&["evaluate", "--gold", g, "--hyp", h], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("line 1"), "{}", stderr(&bad));
}

#[test]
fn ablation_has_four_deterministic_rows() {
    let f = Fixture::new("channel = \"subsequence\"");
    f.train();
    let args = ["ablate", "--config", &f.config(), "--format", "json"];
    let first = run(&args, None);
    assert!(first.status.success(), "{}", stderr(&first));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    let names: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["row"].as_str().unwrap()).collect();
    assert_eq!(names, ["subsequence", "+lexblock", "+memory", "+subblock"]);
    assert_eq!(stdout(&first), stdout(&run(&args, None)));
    let text = run(&["ablate", "--config", &f.config()], None);
    assert_eq!(stdout(&text).lines().count(), 5);
}

#[test]
fn abbreviate_is_seeded_and_analyzable() {
    let corpus: String = toy_corpus(60, 3).iter().map(|s| format!("{s}\n")).collect();
    let dir = TempDir::new().unwrap();
    let policy = dir.path().join("policy.txt");
    fs::write(&policy, "min_chars_deleted = 0\nkeep_fraction = 0.2  # restore a fifth\n").unwrap();
    let p = policy.to_str().unwrap();
    let a = run(&["abbreviate", "--policy", p, "--seed", "5"], Some(&corpus));
    let b = run(&["abbreviate", "--policy", p, "--seed", "5"], Some(&corpus));
    let c = run(&["abbreviate", "--policy", p, "--seed", "6"], Some(&corpus));
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
    assert_eq!(stdout(&a).lines().count(), 60);
    let tokens: usize = corpus.split_whitespace().count();

    for flag in ["--strategies", "--histogram"] {
        let o = run(&["analyze", flag, "--format", "json"], Some(&stdout(&a)));
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["total"], tokens as u64);
    }
    let o = run(&["analyze", "--strategies"], Some(&stdout(&a)));
    assert!(stdout(&o).contains("identity"));

    fs::write(&policy, "weight.bogus = 1\n").unwrap();
    assert_eq!(run(&["abbreviate", "--policy", p], Some(&corpus)).status.code(), Some(1));
}

#[test]
fn filter_corpus_keeps_plain_sentences() {
    let input = "\
The committee considered several alternative proposals yesterday afternoon downtown.
Short one.
Nobody expected the extraordinary announcement regarding municipal elections tonight.
Visit https://example.com for more information about everything here.
Everybody remembers the wonderful Christmas celebration downtown.
";
    let o = run(&["filter-corpus"], Some(input));
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "the committee considered several alternative proposals yesterday afternoon downtown .\n\
         nobody expected the extraordinary announcement regarding municipal elections tonight .\n"
    );
    let o = run(&["filter-corpus", "--entropy-select"], Some(input));
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1);
}
