//! Fixtures shared by the benchmarks.

use unabbrev::corpus::{abbreviate, sentence_seed, toy_corpus, AbbrevPolicy};
use unabbrev::pipeline::{train, Models, TrainConfig};
use unabbrev::SentencePair;

/// Abbreviated toy pairs with roughly 45% of tokens shortened.
pub fn toy_pairs(n: usize, seed: u64) -> Vec<SentencePair> {
    let corpus = toy_corpus(n, seed);
    let words: Vec<&str> = corpus.iter().flat_map(|s| s.words()).collect();
    let base = AbbrevPolicy::new(AbbrevPolicy::default().weights().iter().copied(), 0, 0.0).expect("valid policy");
    let keep = 1.0 - 0.45 / base.expected_abbreviated_share(&words);
    let policy = AbbrevPolicy::new(base.weights().iter().copied(), 0, keep.max(0.0)).expect("valid policy");
    corpus
        .iter()
        .enumerate()
        .map(|(i, s)| abbreviate(&policy, s, sentence_seed(seed, i as u64)).pair)
        .collect()
}

/// Models trained on `pairs` with default settings.
pub fn trained(pairs: &[SentencePair]) -> Models {
    let lm: Vec<_> = pairs.iter().map(|p| p.expanded().clone()).collect();
    train(&TrainConfig::default(), pairs, &lm).expect("toy data trains")
}
