//! Command-line front end: training, expansion, evaluation and corpus tools.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.

mod artifacts;
mod commands;
mod config;
mod failure;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use failure::Kind;

#[derive(Debug, Parser)]
#[command(name = "unabbrev", version, about = "Expand deletion-based abbreviations with a noisy-channel model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train every model and write the artifacts with a hash manifest.
    Train {
        #[arg(long)]
        config: PathBuf,
    },
    /// Expand abbreviated sentences, one per line.
    Expand(ExpandArgs),
    /// Score hypotheses against gold pairs.
    Evaluate {
        /// Gold pairs, `abbreviated<TAB>expanded` per line.
        #[arg(long)]
        gold: PathBuf,
        /// One hypothesis sentence per line.
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// WER of the subsequence channel as heuristics are added one at a time.
    Ablate {
        #[arg(long)]
        config: PathBuf,
        /// Development pairs; overrides `paths.dev`.
        #[arg(long)]
        dev: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Select plain sentences from raw text and tokenize them.
    FilterCorpus(FilterArgs),
    /// Abbreviate tokenized sentences into synthetic training pairs.
    Abbreviate {
        /// `key = value` policy file; defaults to the built-in mixture.
        #[arg(long)]
        policy: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Describe the abbreviations in a pair file.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[arg(long)]
    config: PathBuf,
    /// Defaults to standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write per-token JSON lines (position, candidates, costs, winner).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Decoding threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also require every token to be in this lexicon TSV.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Keep only sentences below the median per-character entropy.
    #[arg(long)]
    entropy_select: bool,
    /// Byte model training text for entropy selection; defaults to the
    /// sentences that pass the other filters.
    #[arg(long, requires = "entropy_select")]
    entropy_corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 5, requires = "entropy_select")]
    entropy_order: usize,
}

#[derive(Debug, Args)]
#[command(group = ArgGroup::new("what").required(true).args(["strategies", "histogram"]))]
struct AnalyzeArgs {
    /// Pair file; defaults to standard input.
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Token counts per deletion strategy.
    #[arg(long)]
    strategies: bool,
    /// Token counts per number of deleted characters.
    #[arg(long)]
    histogram: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Kind::Usage.exit_code()
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Train { config } => commands::train(&config),
        Command::Expand(a) => commands::expand(&a.config, a.input.as_deref(), a.output.as_deref(), a.trace.as_deref(), a.workers),
        Command::Evaluate { gold, hyp, format } => commands::evaluate(&gold, &hyp, format),
        Command::Ablate { config, dev, format } => commands::ablate(&config, dev.as_deref(), format),
        Command::FilterCorpus(a) => commands::filter_corpus(&commands::FilterOptions {
            input: a.input,
            output: a.output,
            lexicon: a.lexicon,
            entropy_select: a.entropy_select,
            entropy_corpus: a.entropy_corpus,
            entropy_order: a.entropy_order,
        }),
        Command::Abbreviate {
            policy,
            seed,
            input,
            output,
        } => commands::abbreviate(policy.as_deref(), seed, input.as_deref(), output.as_deref()),
        Command::Analyze(a) => commands::analyze(a.pairs.as_deref(), a.strategies, a.format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            f.kind.exit_code()
        }
    }
}
