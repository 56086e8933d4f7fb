//! End-to-end training and expansion.

use crate::align::{em_train, AlignmentModel, EmConfig};
use crate::channel::pair::train_pair_lm;
use crate::channel::subseq::{ExpansionMemory, InsertionCostModel, SubseqConfig};
use crate::channel::{Channel, PairChannel, PairChannelModel, SubseqChannel};
use crate::decode::{beam_decode, build_network, viterbi_decode, ConfusionNetwork, DecodeResult};
use crate::error::{Error, Result};
use crate::eval::EvalReport;
use crate::lexicon::Lexicon;
use crate::lm::{NGramModel, NGramTrainer};
use crate::text::{Sentence, SentencePair};

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub word_order: usize,
    pub pair_order: usize,
    /// Relative-entropy pruning threshold for the word model (0 = none).
    pub prune_threshold: f64,
    /// Minimum corpus count for a word to enter the lexicon.
    pub min_count: u64,
    pub em: EmConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            word_order: 3,
            pair_order: 4,
            prune_threshold: 0.0,
            min_count: 1,
            em: EmConfig::default(),
        }
    }
}

/// Every trained artifact.
#[derive(Clone, Debug, PartialEq)]
pub struct Models {
    pub lexicon: Lexicon,
    pub word_lm: NGramModel,
    pub alignment: AlignmentModel,
    pub pair: PairChannelModel,
    pub insertion: InsertionCostModel,
    pub memory: ExpansionMemory,
}

/// Train every model: the lexicon and word model from `lm_corpus`, the
/// channel models from the token pairs of `pairs`. Errors name the stage.
pub fn train(cfg: &TrainConfig, pairs: &[SentencePair], lm_corpus: &[Sentence]) -> Result<Models> {
    let token_pairs: Vec<(&str, &str)> = pairs
        .iter()
        .flat_map(|p| p.token_pairs().map(|(a, e)| (a.as_str(), e.as_str())))
        .collect();
    let lexicon = Lexicon::build(lm_corpus, cfg.min_count).map_err(Error::at("lexicon"))?;
    let word_lm = NGramTrainer::new(cfg.word_order)
        .train(lm_corpus.iter().map(|s| s.words().collect::<Vec<_>>()))
        .map_err(Error::at("word model"))?
        .prune(cfg.prune_threshold);
    let alignment = em_train(token_pairs.iter().copied(), &cfg.em).map_err(Error::at("alignment"))?;
    let pair = train_pair_lm(&alignment, token_pairs.iter().copied(), cfg.pair_order).map_err(Error::at("pair model"))?;
    let insertion =
        InsertionCostModel::estimate(token_pairs.iter().copied(), &alignment).map_err(Error::at("insertion costs"))?;
    let memory = ExpansionMemory::from_pairs(token_pairs.iter().copied()).map_err(Error::at("memory"))?;
    Ok(Models {
        lexicon,
        word_lm,
        alignment,
        pair,
        insertion,
        memory,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Pair,
    Subsequence,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodeConfig {
    pub channel: ChannelKind,
    pub subseq: SubseqConfig,
    /// Candidate limit for the pair channel (`None` keeps all).
    pub pair_top_k: Option<usize>,
    /// Beam width; `None` decodes exactly with Viterbi.
    pub beam: Option<usize>,
    /// Scale of the language model cost relative to the channel cost.
    pub weight: f64,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            channel: ChannelKind::Pair,
            subseq: SubseqConfig::default(),
            pair_top_k: None,
            beam: None,
            weight: 1.0,
        }
    }
}

/// Expands sentences with a fixed set of models.
#[derive(Clone, Copy, Debug)]
pub struct Expander<'a> {
    pub models: &'a Models,
    pub config: DecodeConfig,
}

impl<'a> Expander<'a> {
    pub fn new(models: &'a Models, config: DecodeConfig) -> Self {
        Expander { models, config }
    }

    pub fn network(&self, sentence: &Sentence) -> ConfusionNetwork {
        let m = self.models;
        match self.config.channel {
            ChannelKind::Pair => build_network(
                &PairChannel {
                    model: &m.pair,
                    lexicon: &m.lexicon,
                    top_k: self.config.pair_top_k,
                },
                sentence,
            ),
            ChannelKind::Subsequence => build_network(&self.subseq_channel(), sentence),
        }
    }

    fn subseq_channel(&self) -> SubseqChannel<'a> {
        SubseqChannel {
            costs: &self.models.insertion,
            lexicon: &self.models.lexicon,
            memory: &self.models.memory,
            config: self.config.subseq,
        }
    }

    pub fn decode(&self, net: &ConfusionNetwork) -> DecodeResult {
        let lm = &self.models.word_lm;
        match self.config.beam {
            Some(width) => beam_decode(net, lm, width, self.config.weight),
            None => viterbi_decode(net, lm, self.config.weight),
        }
    }

    pub fn expand(&self, sentence: &Sentence) -> DecodeResult {
        self.decode(&self.network(sentence))
    }

    /// Expand every abbreviated side of `pairs` and score the result.
    pub fn evaluate(&self, pairs: &[SentencePair]) -> EvalReport {
        let mut report = EvalReport::default();
        for p in pairs {
            report.add(p, &self.expand(p.abbreviated()).expansion);
        }
        report
    }
}

impl Channel for Expander<'_> {
    fn candidates(&self, token: &crate::text::Token) -> crate::channel::CandidateSet {
        let s = Sentence::new(vec![token.clone()]).expect("one token");
        self.network(&s).positions()[0].clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AblationRow {
    pub name: &'static str,
    pub config: SubseqConfig,
    pub report: EvalReport,
}

/// The subsequence channel with its heuristics added one at a time:
/// none, then LexBlock, then Memory, then SubBlock. Cost pruning and
/// truncation follow `base.subseq` throughout.
pub fn ablation(models: &Models, dev: &[SentencePair], base: DecodeConfig) -> Vec<AblationRow> {
    let plain = SubseqConfig {
        lexblock: false,
        memory: false,
        subblock: false,
        ..base.subseq
    };
    let rows = [
        ("subsequence", plain),
        ("+lexblock", SubseqConfig { lexblock: true, ..plain }),
        (
            "+memory",
            SubseqConfig {
                lexblock: true,
                memory: true,
                ..plain
            },
        ),
        (
            "+subblock",
            SubseqConfig {
                lexblock: true,
                memory: true,
                subblock: true,
                ..plain
            },
        ),
    ];
    rows.into_iter()
        .map(|(name, subseq)| {
            let cfg = DecodeConfig {
                channel: ChannelKind::Subsequence,
                subseq,
                ..base
            };
            AblationRow {
                name,
                config: subseq,
                report: Expander::new(models, cfg).evaluate(dev),
            }
        })
        .collect()
}
