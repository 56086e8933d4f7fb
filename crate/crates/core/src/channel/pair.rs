//! Channel scored by an n-gram model over aligned pair symbols.
//!
//! Training Viterbi-aligns each (abbreviation, expansion) pair and fits a
//! Kneser-Ney model to the resulting symbol sequences, which gives a joint
//! distribution over string pairs. A candidate's cost is the negative log
//! joint probability of its best alignment.

use std::collections::HashMap;

use crate::align::{viterbi_align, AlignmentModel, PairSymbol};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::lm::{LmState, NGramModel, NGramTrainer};
use crate::text::{is_subsequence, Token};

use super::{Candidate, CandidateSet, Channel};

#[derive(Clone, Debug, PartialEq)]
pub struct PairChannelModel {
    lm: NGramModel,
    alignment: AlignmentModel,
}

/// Viterbi-align every pair under `alignment` and train an order-`order`
/// model over the spelled pair symbols. The vocabulary covers a copy and an
/// insertion of every character seen in an expansion, so unseen symbols
/// still get smoothing mass.
pub fn train_pair_lm<I, A, E>(alignment: &AlignmentModel, pairs: I, order: usize) -> Result<PairChannelModel>
where
    I: IntoIterator<Item = (A, E)>,
    A: AsRef<str>,
    E: AsRef<str>,
{
    let mut sequences: Vec<Vec<String>> = Vec::new();
    let mut chars = std::collections::BTreeSet::new();
    for (index, (a, e)) in pairs.into_iter().enumerate() {
        let (a, e) = (a.as_ref(), e.as_ref());
        let path = viterbi_align(alignment, a, e).map_err(|err| match err {
            Error::NotSubsequence { abbrev, expansion, .. } => Error::NotSubsequence {
                index,
                abbrev,
                expansion,
            },
            other => other,
        })?;
        chars.extend(e.chars());
        sequences.push(path.symbols.iter().map(ToString::to_string).collect());
    }
    let vocab = chars
        .iter()
        .flat_map(|&c| [PairSymbol::copy(c), PairSymbol::insert(c)])
        .map(|s| s.to_string());
    let lm = NGramTrainer::new(order).vocab(vocab).train(&sequences)?;
    Ok(PairChannelModel {
        lm,
        alignment: alignment.clone(),
    })
}

impl PairChannelModel {
    pub fn new(lm: NGramModel, alignment: AlignmentModel) -> Self {
        PairChannelModel { lm, alignment }
    }

    pub fn lm(&self) -> &NGramModel {
        &self.lm
    }

    pub fn alignment(&self) -> &AlignmentModel {
        &self.alignment
    }

    fn symbol_id(&self, s: PairSymbol) -> Option<u32> {
        self.lm.lookup(&s.to_string()).ok()
    }

    /// Negative log joint probability of the best alignment of `a` to `e`,
    /// including the end-of-sequence term.
    pub fn channel_score(&self, a: &str, e: &str) -> Result<f64> {
        if a.is_empty() || !is_subsequence(a, e) {
            return Err(Error::NotSubsequence {
                index: 0,
                abbrev: a.to_string(),
                expansion: e.to_string(),
            });
        }
        let a: Vec<char> = a.chars().collect();
        let e: Vec<char> = e.chars().collect();
        let (m, n) = (a.len(), e.len());

        // layer[(i, state)] = best cost after consuming e[..j] and a[..i].
        let mut layer: HashMap<(usize, LmState), f64> = HashMap::new();
        layer.insert((0, self.lm.begin()), 0.0);
        for (j, &ej) in e.iter().enumerate() {
            let copy = self.symbol_id(PairSymbol::copy(ej));
            let insert = self.symbol_id(PairSymbol::insert(ej));
            let mut next: HashMap<(usize, LmState), f64> = HashMap::with_capacity(layer.len() * 2);
            let mut relax = |key: (usize, LmState), cost: f64| {
                let slot = next.entry(key).or_insert(f64::INFINITY);
                if cost < *slot {
                    *slot = cost;
                }
            };
            for ((i, state), cost) in &layer {
                let i = *i;
                if let Some(id) = insert.filter(|_| n - j > m - i) {
                    let (lp, s) = self.lm.score_id(state, id);
                    relax((i, s), cost - lp);
                }
                if let Some(id) = copy.filter(|_| i < m && a[i] == ej) {
                    let (lp, s) = self.lm.score_id(state, id);
                    relax((i + 1, s), cost - lp);
                }
            }
            layer = next;
        }
        let best = layer
            .iter()
            .filter(|((i, _), _)| *i == m)
            .map(|((_, s), c)| c - self.lm.end_ln_prob(s))
            .fold(f64::INFINITY, f64::min);
        Ok(best.max(0.0))
    }
}

/// Score every lexicon supersequence of `a` and keep the `top_k` cheapest
/// (all of them for `None`).
pub fn pair_candidates(model: &PairChannelModel, lex: &Lexicon, a: &Token, top_k: Option<usize>) -> CandidateSet {
    let candidates = lex
        .supersequence_ids(a)
        .into_iter()
        .map(|id| {
            let word = lex.word(id);
            let cost = model.channel_score(a, word).expect("supersequences are valid pairs");
            Candidate::new(word, cost, Some(id))
        })
        .collect();
    let mut set = CandidateSet::new(a.clone(), candidates);
    if let Some(k) = top_k {
        if set.candidates.len() > k {
            set.flags.truncated = set.candidates.len() - k;
            set.candidates.truncate(k);
        }
    }
    set
}

/// [`pair_candidates`] bound to a model and lexicon.
#[derive(Clone, Copy, Debug)]
pub struct PairChannel<'a> {
    pub model: &'a PairChannelModel,
    pub lexicon: &'a Lexicon,
    pub top_k: Option<usize>,
}

impl Channel for PairChannel<'_> {
    fn candidates(&self, token: &Token) -> CandidateSet {
        pair_candidates(self.model, self.lexicon, token, self.top_k)
    }
}
