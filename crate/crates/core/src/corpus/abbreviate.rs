//! Synthetic abbreviation of sentences from a strategy mixture.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::strategy::StrategyLabel;
use crate::error::{Error, Result};
use crate::text::{Sentence, SentencePair, Token};

/// Deletion-count buckets: 0, 1, 2, 3 and 4 or more.
pub const HISTOGRAM_BUCKETS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct AbbrevPolicy {
    /// Strategy mixture; weights sum to 1.
    weights: Vec<(StrategyLabel, f64)>,
    /// Keep abbreviating more tokens until at least this many characters
    /// are deleted from the sentence.
    pub min_chars_deleted: usize,
    /// Probability of restoring each abbreviated token to its expansion.
    pub keep_fraction: f64,
}

impl Default for AbbrevPolicy {
    /// The observed strategy shares, normalized, with a 20-character floor
    /// and no restoration.
    fn default() -> Self {
        AbbrevPolicy::new(
            StrategyLabel::GENERATIVE.iter().map(|&s| (s, s.observed_percent())),
            20,
            0.0,
        )
        .expect("built-in weights are valid")
    }
}

impl AbbrevPolicy {
    /// Normalizes `weights`, which must be non-negative with a positive sum.
    pub fn new(
        weights: impl IntoIterator<Item = (StrategyLabel, f64)>,
        min_chars_deleted: usize,
        keep_fraction: f64,
    ) -> Result<Self> {
        let mut weights: Vec<(StrategyLabel, f64)> = weights.into_iter().collect();
        if weights.iter().any(|&(s, w)| w.is_nan() || w < 0.0 || s == StrategyLabel::Identity) {
            return Err(Error::Config("mixture weights must be non-negative strategies".into()));
        }
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Config("mixture weights must have a positive sum".into()));
        }
        if !(0.0..=1.0).contains(&keep_fraction) {
            return Err(Error::Config("keep_fraction must be in [0, 1]".into()));
        }
        weights.iter_mut().for_each(|(_, w)| *w /= total);
        weights.retain(|&(_, w)| w > 0.0);
        Ok(AbbrevPolicy {
            weights,
            min_chars_deleted,
            keep_fraction,
        })
    }

    pub fn weights(&self) -> &[(StrategyLabel, f64)] {
        &self.weights
    }

    /// Parse `key = value` lines (`#` starts a comment). Keys are
    /// `min_chars_deleted`, `keep_fraction` and `weight.<strategy>`. If any
    /// weight is given, the mixture is exactly the listed weights; otherwise
    /// the default mixture is used.
    pub fn parse(text: &str) -> Result<Self> {
        let base = AbbrevPolicy::default();
        let mut weights = Vec::new();
        let mut min_chars = base.min_chars_deleted;
        let mut keep = base.keep_fraction;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::parse(n + 1, m.to_string());
            let (k, v) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "min_chars_deleted" => min_chars = v.parse().map_err(|_| bad("bad integer"))?,
                "keep_fraction" => keep = v.parse().map_err(|_| bad("bad number"))?,
                _ => {
                    let name = k.strip_prefix("weight.").ok_or_else(|| bad("unknown key"))?;
                    let label: StrategyLabel = name.parse().map_err(|_| bad("unknown strategy"))?;
                    weights.push((label, v.parse().map_err(|_| bad("bad number"))?));
                }
            }
        }
        if weights.is_empty() {
            weights = base.weights;
        }
        AbbrevPolicy::new(weights, min_chars, keep)
    }

    /// Exact distribution of the abbreviated form of one token, before any
    /// restoration or resampling. Inapplicable strategies leave it intact.
    pub fn token_distribution(&self, word: &str) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = Vec::new();
        let mut add = |s: String, p: f64| match out.iter_mut().find(|(o, _)| *o == s) {
            Some(slot) => slot.1 += p,
            None => out.push((s, p)),
        };
        for &(s, w) in &self.weights {
            let outs = s.outcomes(word);
            if outs.is_empty() {
                add(word.to_string(), w);
            }
            for (o, p) in outs {
                add(o, w * p);
            }
        }
        out
    }

    /// Expected share of tokens per deletion-count bucket, for tokens drawn
    /// uniformly from `words`, ignoring the minimum-deletion floor.
    pub fn expected_histogram<S: AsRef<str>>(&self, words: &[S]) -> [f64; HISTOGRAM_BUCKETS] {
        let mut hist = [0.0; HISTOGRAM_BUCKETS];
        for w in words {
            let w = w.as_ref();
            let len = w.chars().count();
            for (o, p) in self.token_distribution(w) {
                let d = len - o.chars().count();
                let p_del = if d == 0 { p } else { p * (1.0 - self.keep_fraction) };
                hist[d.min(HISTOGRAM_BUCKETS - 1)] += p_del;
                if d > 0 {
                    hist[0] += p * self.keep_fraction;
                }
            }
        }
        let n = words.len().max(1) as f64;
        hist.map(|h| h / n)
    }

    /// Expected share of abbreviated tokens over `words`.
    pub fn expected_abbreviated_share<S: AsRef<str>>(&self, words: &[S]) -> f64 {
        1.0 - self.expected_histogram(words)[0]
    }
}

/// Result of abbreviating one sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct Abbreviation {
    pub pair: SentencePair,
    /// Strategy applied to each token, `None` where it was left intact.
    pub strategies: Vec<Option<StrategyLabel>>,
    /// Whether the minimum deletion count was reached.
    pub satisfied: bool,
}

/// Stable per-sentence seed so sentences can be abbreviated in any order.
pub fn sentence_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn sample_outcome<R: Rng>(outs: &[(String, f64)], rng: &mut R) -> String {
    let idx = WeightedIndex::new(outs.iter().map(|(_, p)| *p))
        .expect("outcome probabilities are positive")
        .sample(rng);
    outs[idx].0.clone()
}

/// Abbreviate `sentence` under `policy`, deterministically for a given seed.
///
/// Each token draws a strategy from the mixture and, if the strategy
/// applies, one of its outcomes. Abbreviated tokens are then restored with
/// probability `keep_fraction`. If fewer than `min_chars_deleted`
/// characters were removed, intact tokens are visited in random order and
/// abbreviated with a strategy drawn among those that apply, until the
/// floor is met or no tokens remain.
pub fn abbreviate(policy: &AbbrevPolicy, sentence: &Sentence, seed: u64) -> Abbreviation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<&str> = sentence.words().collect();
    let mut out: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    let mut labels: Vec<Option<StrategyLabel>> = vec![None; words.len()];
    let mixture = WeightedIndex::new(policy.weights.iter().map(|(_, w)| *w)).expect("weights are valid");

    for (i, w) in words.iter().enumerate() {
        let strategy = policy.weights[mixture.sample(&mut rng)].0;
        let outs = strategy.outcomes(w);
        if !outs.is_empty() {
            out[i] = sample_outcome(&outs, &mut rng);
            labels[i] = Some(strategy);
        }
    }
    for i in 0..words.len() {
        if labels[i].is_some() && rng.random::<f64>() < policy.keep_fraction {
            out[i] = words[i].to_string();
            labels[i] = None;
        }
    }

    let deleted = |out: &[String]| -> usize {
        words
            .iter()
            .zip(out)
            .map(|(w, o)| w.chars().count() - o.chars().count())
            .sum()
    };
    let mut satisfied = deleted(&out) >= policy.min_chars_deleted;
    if !satisfied {
        let mut order: Vec<usize> = (0..words.len()).filter(|&i| labels[i].is_none()).collect();
        order.shuffle(&mut rng);
        for i in order {
            let applicable: Vec<(StrategyLabel, f64)> = policy
                .weights
                .iter()
                .copied()
                .filter(|(s, _)| !s.outcomes(words[i]).is_empty())
                .collect();
            if applicable.is_empty() {
                continue;
            }
            let pick = WeightedIndex::new(applicable.iter().map(|(_, w)| *w))
                .expect("positive weights")
                .sample(&mut rng);
            let strategy = applicable[pick].0;
            out[i] = sample_outcome(&strategy.outcomes(words[i]), &mut rng);
            labels[i] = Some(strategy);
            if deleted(&out) >= policy.min_chars_deleted {
                satisfied = true;
                break;
            }
        }
    }

    let abbreviated = Sentence::new(out.iter().map(|w| Token::new(w).expect("non-empty subsequence")).collect())
        .expect("same length as the input");
    Abbreviation {
        pair: SentencePair::new(abbreviated, sentence.clone()).expect("deletion-only by construction"),
        strategies: labels,
        satisfied,
    }
}

/// Token counts by number of deleted characters (0, 1, 2, 3, 4+).
pub fn deletion_histogram<'a, I>(pairs: I) -> [u64; HISTOGRAM_BUCKETS]
where
    I: IntoIterator<Item = &'a SentencePair>,
{
    let mut hist = [0u64; HISTOGRAM_BUCKETS];
    for p in pairs {
        for (a, e) in p.token_pairs() {
            let d = e.char_len() - a.char_len();
            hist[d.min(HISTOGRAM_BUCKETS - 1)] += 1;
        }
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::strategy::{classify_strategy, is_vowel};
    use proptest::prelude::*;

    fn sent(s: &str) -> Sentence {
        Sentence::parse(s).unwrap()
    }

    const TEXT: &str = "the government announced that the native reviewers were testing a municipal background check .";

    #[test]
    fn default_weights_are_normalized() {
        let p = AbbrevPolicy::default();
        let total: f64 = p.weights().iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert_eq!(p.weights().len(), 14);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let p = AbbrevPolicy::default();
        let a = abbreviate(&p, &sent(TEXT), 7);
        let b = abbreviate(&p, &sent(TEXT), 7);
        assert_eq!(a, b);
        assert!(a.satisfied);
        let hist = deletion_histogram([&a.pair]);
        let deleted: u64 = (0..5).map(|k| k as u64 * hist[k]).sum();
        assert!(deleted >= 20 || hist[4] > 0);
    }

    #[test]
    fn keep_everything_gives_identity() {
        let p = AbbrevPolicy::new(AbbrevPolicy::default().weights().iter().copied(), 0, 1.0).unwrap();
        let a = abbreviate(&p, &sent(TEXT), 3);
        assert_eq!(a.pair.abbreviated(), a.pair.expanded());
        assert!(a.strategies.iter().all(Option::is_none));
    }

    #[test]
    fn unreachable_floor_is_flagged() {
        let p = AbbrevPolicy::default();
        let a = abbreviate(&p, &sent("a cat ."), 1);
        assert!(!a.satisfied);
    }

    #[test]
    fn single_strategy_examples() {
        let p = AbbrevPolicy::new([(StrategyLabel::DeleteAllVowels, 1.0)], 0, 0.0).unwrap();
        let a = abbreviate(&p, &sent("government"), 0);
        assert_eq!(a.pair.abbreviated().to_string(), "gvrnmnt");
        let p = AbbrevPolicy::new([(StrategyLabel::DeleteFinalE, 1.0)], 0, 0.0).unwrap();
        let a = abbreviate(&p, &sent("native"), 0);
        assert_eq!(a.pair.abbreviated().to_string(), "nativ");
    }

    #[test]
    fn policy_file() {
        let p = AbbrevPolicy::parse("# test\nkeep_fraction = 0.25\nmin_chars_deleted=5\nweight.delete_all_vowels = 3\nweight.other = 1\n").unwrap();
        assert_eq!(p.keep_fraction, 0.25);
        assert_eq!(p.min_chars_deleted, 5);
        assert_eq!(p.weights(), &[(StrategyLabel::DeleteAllVowels, 0.75), (StrategyLabel::Other, 0.25)]);
        assert_eq!(AbbrevPolicy::parse("").unwrap(), AbbrevPolicy::default());
        assert!(AbbrevPolicy::parse("keep_fraction = 2").is_err());
        assert!(AbbrevPolicy::parse("weight.nope = 1").is_err());
        assert!(AbbrevPolicy::parse("colour = 1").is_err());
    }

    #[test]
    fn histogram_counts() {
        let pairs = [SentencePair::new(sent("th cat"), sent("the cat")).unwrap()];
        assert_eq!(deletion_histogram(&pairs), [1, 1, 0, 0, 0]);
    }

    #[test]
    fn expected_histogram_sums_to_one() {
        let p = AbbrevPolicy::new(AbbrevPolicy::default().weights().iter().copied(), 0, 0.3).unwrap();
        let words: Vec<&str> = TEXT.split(' ').collect();
        let h = p.expected_histogram(&words);
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn output_is_always_a_valid_pair(seed in any::<u64>(), keep in 0.0f64..1.0) {
            let p = AbbrevPolicy::new(AbbrevPolicy::default().weights().iter().copied(), 20, keep).unwrap();
            let a = abbreviate(&p, &sent(TEXT), seed);
            prop_assert_eq!(a.pair.expanded(), &sent(TEXT));
            for ((ab, e), label) in a.pair.token_pairs().zip(&a.strategies) {
                if let Some(label) = label {
                    prop_assert!(ab != e);
                    if matches!(label, StrategyLabel::DeleteAllVowels | StrategyLabel::DeleteAllButFirstVowel) {
                        let ca: String = ab.chars().filter(|&c| !is_vowel(c)).collect();
                        let ce: String = e.chars().filter(|&c| !is_vowel(c)).collect();
                        prop_assert_eq!(ca, ce);
                    }
                    prop_assert!(classify_strategy(ab, e) != StrategyLabel::Identity);
                } else {
                    prop_assert_eq!(ab, e);
                }
            }
        }
    }
}
