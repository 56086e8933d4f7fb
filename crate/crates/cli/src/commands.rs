use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use serde_json::json;
use unabbrev::corpus::{
    abbreviate as abbreviate_sentence, below_median, classify_strategy, deletion_histogram, entropy_rank,
    filter_sentences, sentence_seed, tokenize, AbbrevPolicy, FilterConfig, StrategyLabel,
};
use unabbrev::corpus::filter::in_vocabulary;
use unabbrev::lm::train_byte_lm;
use unabbrev::pipeline::{ablation, train as train_models, Expander};
use unabbrev::text::{format_pair_line, read_corpus, read_pairs};
use unabbrev::{eval, Lexicon, Sentence, SentencePair};

use crate::artifacts;
use crate::config::RunConfig;
use crate::failure::{Classify, CmdResult};
use crate::report;
use crate::Format;

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn read_input(path: Option<&Path>) -> anyhow::Result<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        None => {
            io::stdin().read_to_string(&mut text).context("reading standard input")?;
        }
    }
    Ok(text)
}

fn writer(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_config(path: &Path) -> CmdResult<RunConfig> {
    let cfg = RunConfig::load(path).usage()?;
    cfg.check_inputs().data()?;
    Ok(cfg)
}

fn read_pair_file(path: &Path) -> anyhow::Result<Vec<SentencePair>> {
    read_pairs(open(path)?).with_context(|| format!("reading pairs {}", path.display()))
}

pub fn train(config: &Path) -> CmdResult {
    let cfg = load_config(config)?;
    let pairs_path = cfg.paths.pairs.as_deref().ok_or_else(|| anyhow!("paths.pairs is required for training")).usage()?;
    let pairs = read_pair_file(pairs_path).context("train").data()?;
    let corpus: Vec<Sentence> = match &cfg.paths.corpus {
        Some(p) => read_corpus(open(p).data()?)
            .with_context(|| format!("train: reading corpus {}", p.display()))
            .data()?,
        None => pairs.iter().map(|p| p.expanded().clone()).collect(),
    };
    let mut models = train_models(&cfg.train_config(), &pairs, &corpus).context("train").data()?;
    if let Some(p) = &cfg.paths.lexicon {
        models.lexicon = Lexicon::read_tsv(open(p).data()?)
            .with_context(|| format!("train: reading lexicon {}", p.display()))
            .data()?;
    }
    let manifest = artifacts::save(&models, &cfg.train, &cfg.paths.models).model()?;
    eprintln!(
        "wrote {} artifacts for {} pairs to {}",
        manifest.artifacts.len(),
        pairs.len(),
        cfg.paths.models.display()
    );
    Ok(())
}

pub fn expand(
    config: &Path,
    input: Option<&Path>,
    output: Option<&Path>,
    trace: Option<&Path>,
    workers: usize,
) -> CmdResult {
    let cfg = load_config(config)?;
    let text = read_input(input).data()?;
    let sentences: Vec<Sentence> = text
        .lines()
        .enumerate()
        .map(|(i, line)| Sentence::parse(line).with_context(|| format!("input line {}", i + 1)))
        .collect::<anyhow::Result<_>>()
        .data()?;
    let models = artifacts::load(&cfg.paths.models).model()?;
    let expander = Expander::new(&models, cfg.decode_config());

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().usage()?;
    let want_trace = trace.is_some();
    let results: Vec<(String, Vec<String>)> = pool.install(|| {
        sentences
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let net = expander.network(s);
                let r = expander.decode(&net);
                let lines = if want_trace {
                    trace_lines(i + 1, &net, &r)
                } else {
                    Vec::new()
                };
                (r.expansion.to_string(), lines)
            })
            .collect()
    });

    let mut out = writer(output).data()?;
    for (line, _) in &results {
        writeln!(out, "{line}").data()?;
    }
    out.flush().data()?;
    if let Some(p) = trace {
        let mut t = writer(Some(p)).data()?;
        for line in results.iter().flat_map(|r| &r.1) {
            writeln!(t, "{line}").data()?;
        }
        t.flush().data()?;
    }
    Ok(())
}

fn trace_lines(line: usize, net: &unabbrev::ConfusionNetwork, r: &unabbrev::DecodeResult) -> Vec<String> {
    net.positions()
        .iter()
        .zip(&r.trace)
        .enumerate()
        .map(|(pos, (set, step))| {
            let candidates: Vec<_> = set
                .candidates
                .iter()
                .map(|c| json!({ "word": c.word, "cost": c.cost }))
                .collect();
            json!({
                "line": line,
                "position": pos,
                "token": set.source.as_str(),
                "candidates": candidates,
                "winner": step.word,
                "channel_cost": step.channel_cost,
                "lm_cost": step.lm_cost,
                "copy_through": set.flags.copy_through,
            })
            .to_string()
        })
        .collect()
}

pub fn evaluate(gold: &Path, hyp: &Path, format: Format) -> CmdResult {
    let refs = read_pair_file(gold).data()?;
    let hyps = read_corpus(open(hyp).data()?)
        .with_context(|| format!("reading hypotheses {}", hyp.display()))
        .data()?;
    let rep = eval::evaluate(&refs, &hyps).context("evaluate").data()?;
    match format {
        Format::Text => println!("{rep}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report::eval_json(&rep)).data()?),
    }
    Ok(())
}

pub fn ablate(config: &Path, dev: Option<&Path>, format: Format) -> CmdResult {
    let cfg = load_config(config)?;
    let dev_path = dev
        .or(cfg.paths.dev.as_deref())
        .ok_or_else(|| anyhow!("no development pairs: pass --dev or set paths.dev"))
        .usage()?;
    let pairs = read_pair_file(dev_path).data()?;
    let models = artifacts::load(&cfg.paths.models).model()?;
    let rows = ablation(&models, &pairs, cfg.decode_config());
    match format {
        Format::Text => print!("{}", report::ablation_text(&rows)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report::ablation_json(&rows)).data()?),
    }
    Ok(())
}

pub struct FilterOptions {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub entropy_select: bool,
    pub entropy_corpus: Option<PathBuf>,
    pub entropy_order: usize,
}

pub fn filter_corpus(opts: &FilterOptions) -> CmdResult {
    let text = read_input(opts.input.as_deref()).data()?;
    let lexicon = match &opts.lexicon {
        Some(p) => Some(Lexicon::read_tsv(open(p).data()?).with_context(|| format!("reading lexicon {}", p.display())).data()?),
        None => None,
    };
    let cfg = FilterConfig::default();
    let mut kept: Vec<(String, String)> = filter_sentences(&cfg, text.lines())
        .map(|s| (s.to_string(), tokenize(s)))
        .filter(|(_, tok)| lexicon.as_ref().is_none_or(|lex| in_vocabulary(lex, tok)))
        .collect();
    if opts.entropy_select && !kept.is_empty() {
        let training: Vec<String> = match &opts.entropy_corpus {
            Some(p) => open(p).data()?.lines().collect::<io::Result<_>>().data()?,
            None => kept.iter().map(|k| k.0.clone()).collect(),
        };
        let model = train_byte_lm(&training, opts.entropy_order).context("entropy model").data()?;
        let raw: Vec<&str> = kept.iter().map(|k| k.0.as_str()).collect();
        let mut chosen: Vec<usize> = below_median(&entropy_rank(&model, &raw).data()?).iter().map(|r| r.0).collect();
        chosen.sort_unstable();
        kept = chosen.into_iter().map(|i| kept[i].clone()).collect();
    }
    let mut out = writer(opts.output.as_deref()).data()?;
    for (_, tok) in &kept {
        writeln!(out, "{tok}").data()?;
    }
    out.flush().data()?;
    Ok(())
}

pub fn abbreviate(policy: Option<&Path>, seed: u64, input: Option<&Path>, output: Option<&Path>) -> CmdResult {
    let policy = match policy {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading policy {}", p.display())).usage()?;
            AbbrevPolicy::parse(&text).with_context(|| format!("policy {}", p.display())).usage()?
        }
        None => AbbrevPolicy::default(),
    };
    let text = read_input(input).data()?;
    let mut out = writer(output).data()?;
    let mut unsatisfied = 0usize;
    for (i, line) in text.lines().enumerate() {
        let s = Sentence::parse(line).with_context(|| format!("input line {}", i + 1)).data()?;
        let a = abbreviate_sentence(&policy, &s, sentence_seed(seed, i as u64));
        unsatisfied += usize::from(!a.satisfied);
        writeln!(out, "{}", format_pair_line(&a.pair)).data()?;
    }
    out.flush().data()?;
    if unsatisfied > 0 {
        eprintln!(
            "{unsatisfied} sentences could not reach {} deleted characters",
            policy.min_chars_deleted
        );
    }
    Ok(())
}

pub fn analyze(pairs: Option<&Path>, strategies: bool, format: Format) -> CmdResult {
    let pairs = match pairs {
        Some(p) => read_pair_file(p).data()?,
        None => read_pairs(io::stdin().lock()).context("reading pairs from standard input").data()?,
    };
    let rows: Vec<(String, u64)> = if strategies {
        let labels: Vec<StrategyLabel> = std::iter::once(StrategyLabel::Identity)
            .chain(StrategyLabel::GENERATIVE)
            .collect();
        let mut counts = vec![0u64; labels.len()];
        for p in &pairs {
            for (a, e) in p.token_pairs() {
                let label = classify_strategy(a, e);
                counts[labels.iter().position(|&l| l == label).expect("every label is listed")] += 1;
            }
        }
        labels.iter().zip(counts).map(|(l, n)| (l.name().to_string(), n)).collect()
    } else {
        let names = ["0", "1", "2", "3", "4+"];
        names.iter().zip(deletion_histogram(&pairs)).map(|(l, n)| (l.to_string(), n)).collect()
    };
    match format {
        Format::Text => print!("{}", report::counts_text(&rows)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report::counts_json(&rows)).data()?),
    }
    Ok(())
}
