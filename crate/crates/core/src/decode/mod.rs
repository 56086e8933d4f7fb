//! Sentence-level search over per-token candidate sets.
//!
//! A [`ConfusionNetwork`] holds one [`CandidateSet`] per input token. A path
//! picks one candidate per position; its cost is the sum of channel costs
//! plus `weight` times the language model's negative log probability of the
//! chosen words, including the end-of-sentence term.

use std::hash::Hash;

use crate::channel::{CandidateSet, Channel};
use crate::lm::{LmState, NGramModel};
use crate::text::{Sentence, Token};

mod beam;
mod viterbi;

pub use beam::beam_decode;
pub use viterbi::viterbi_decode;

/// A left-to-right word scorer with explicit state.
pub trait SequentialScorer {
    type State: Clone + Eq + Hash;

    fn initial(&self) -> Self::State;

    /// Natural-log probability of `word` after `state`, and the next state.
    fn transition(&self, state: &Self::State, word: &str) -> (f64, Self::State);

    /// Natural-log probability of ending the sentence after `state`.
    fn finish(&self, state: &Self::State) -> f64;
}

impl SequentialScorer for NGramModel {
    type State = LmState;

    fn initial(&self) -> LmState {
        self.begin()
    }

    /// Words outside the vocabulary score as `<unk>` when the model has it,
    /// and are impossible otherwise.
    fn transition(&self, state: &LmState, word: &str) -> (f64, LmState) {
        match self.lookup(word) {
            Ok(id) => self.score_id(state, id),
            Err(_) => (f64::NEG_INFINITY, state.clone()),
        }
    }

    fn finish(&self, state: &LmState) -> f64 {
        self.end_ln_prob(state)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfusionNetwork {
    positions: Vec<CandidateSet>,
}

impl ConfusionNetwork {
    /// Empty candidate sets are replaced by a copy-through of their source.
    pub fn new(positions: Vec<CandidateSet>) -> Self {
        let positions = positions
            .into_iter()
            .map(|set| {
                if set.is_empty() {
                    CandidateSet::copy_through(set.source)
                } else {
                    set
                }
            })
            .collect();
        ConfusionNetwork { positions }
    }

    pub fn positions(&self) -> &[CandidateSet] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Number of distinct paths (saturating).
    pub fn path_count(&self) -> u128 {
        self.positions
            .iter()
            .fold(1u128, |acc, p| acc.saturating_mul(p.len() as u128))
    }
}

/// One candidate set per token of `sentence`.
pub fn build_network<C: Channel + ?Sized>(channel: &C, sentence: &Sentence) -> ConfusionNetwork {
    ConfusionNetwork::new(sentence.iter().map(|t| channel.candidates(t)).collect())
}

/// The chosen candidate at one position.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub word: String,
    /// Index into the position's candidate list.
    pub candidate: usize,
    pub channel_cost: f64,
    /// Weighted negative log probability under the scorer.
    pub lm_cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub expansion: Sentence,
    /// Sum of every step's channel and LM cost plus `end_cost`.
    pub cost: f64,
    pub trace: Vec<TraceStep>,
    /// Weighted negative log probability of the sentence end.
    pub end_cost: f64,
}

impl DecodeResult {
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.trace.iter().map(|s| s.word.as_str())
    }
}

/// Assemble a result from the chosen candidate indices, rescoring the path
/// so the reported cost is exactly the sum of its parts.
pub(crate) fn rescore<S: SequentialScorer + ?Sized>(
    net: &ConfusionNetwork,
    scorer: &S,
    weight: f64,
    choice: &[usize],
) -> DecodeResult {
    let mut state = scorer.initial();
    let mut trace = Vec::with_capacity(choice.len());
    let mut cost = 0.0;
    for (set, &k) in net.positions.iter().zip(choice) {
        let cand = &set.candidates[k];
        let (lp, next) = scorer.transition(&state, &cand.word);
        let lm_cost = -weight * lp;
        cost += cand.cost + lm_cost;
        trace.push(TraceStep {
            word: cand.word.clone(),
            candidate: k,
            channel_cost: cand.cost,
            lm_cost,
        });
        state = next;
    }
    let end_cost = -weight * scorer.finish(&state);
    cost += end_cost;
    let tokens = trace
        .iter()
        .map(|s| Token::new(&s.word).expect("candidates are valid tokens"))
        .collect();
    DecodeResult {
        expansion: Sentence::new(tokens).expect("networks are non-empty"),
        cost,
        trace,
        end_cost,
    }
}

/// Cost increment of appending a candidate; shared by both decoders so
/// their arithmetic is identical.
#[inline]
pub(crate) fn step_cost(channel: f64, lp: f64, weight: f64) -> f64 {
    channel - weight * lp
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::channel::Candidate;

    /// Every path's (cost, choice), in lexicographic choice order.
    pub fn enumerate<S: SequentialScorer>(net: &ConfusionNetwork, scorer: &S, weight: f64) -> Vec<(f64, Vec<usize>)> {
        let mut out = Vec::new();
        let mut choice = vec![0usize; net.len()];
        loop {
            out.push((rescore(net, scorer, weight, &choice).cost, choice.clone()));
            let mut k = net.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < net.positions()[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
    }

    pub fn network(spec: &[&[(&str, f64)]]) -> ConfusionNetwork {
        ConfusionNetwork::new(
            spec.iter()
                .enumerate()
                .map(|(i, cands)| {
                    let src = Token::new(&format!("t{i}")).unwrap();
                    CandidateSet::new(src, cands.iter().map(|&(w, c)| Candidate::new(w, c, None)).collect())
                })
                .collect(),
        )
    }
}
