//! Back-off n-gram language models over arbitrary symbol alphabets.
//!
//! Models are trained with interpolated Kneser-Ney smoothing and stored in
//! back-off form: a probability for every stored n-gram and a back-off
//! weight for every stored context. Scoring applies the back-off recursion
//! exactly. Probabilities are natural logs internally; ARPA files use log10.
//!
//! The same type backs the word-level expansion model, the pair-symbol
//! channel model and the byte-level sentence filter.

mod arpa;
mod bytes;
mod prune;
mod train;

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use bytes::{byte_symbol, per_char_entropy, train_byte_lm};
pub use train::NGramTrainer;

pub const UNK: &str = "<unk>";
pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

pub(crate) const UNK_ID: u32 = 0;
pub(crate) const BOS_ID: u32 = 1;
pub(crate) const EOS_ID: u32 = 2;

type Key = SmallVec<[u32; 8]>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Entry {
    /// ln P(w | h) for the n-gram `h w`.
    pub logprob: f64,
    /// ln back-off weight when this n-gram is used as a context.
    pub backoff: f64,
    /// Set when scoring after this n-gram differs from scoring after its
    /// suffix, i.e. it has stored extensions or a non-trivial back-off.
    pub context: bool,
}

impl Entry {
    fn new(logprob: f64) -> Self {
        Entry {
            logprob,
            backoff: 0.0,
            context: false,
        }
    }
}

/// Decoder-facing history: the shortest suffix of the last `order - 1`
/// symbols that still determines every future probability.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LmState(SmallVec<[u32; 4]>);

impl LmState {
    pub fn symbols(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NGramModel {
    order: usize,
    vocab: Vec<String>,
    ids: HashMap<String, u32>,
    /// `grams[k - 1]` holds the stored k-grams.
    grams: Vec<HashMap<Vec<u32>, Entry>>,
    has_unk: bool,
    discounts: Vec<f64>,
}

impl NGramModel {
    fn empty(order: usize, has_unk: bool) -> Self {
        let mut m = NGramModel {
            order,
            vocab: Vec::new(),
            ids: HashMap::new(),
            grams: vec![HashMap::new(); order],
            has_unk,
            discounts: Vec::new(),
        };
        for s in [UNK, BOS, EOS] {
            m.intern(s);
        }
        m
    }

    fn intern(&mut self, sym: &str) -> u32 {
        if let Some(&id) = self.ids.get(sym) {
            return id;
        }
        let id = self.vocab.len() as u32;
        self.vocab.push(sym.to_string());
        self.ids.insert(sym.to_string(), id);
        id
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Per-order absolute discounts used in training (empty for loaded models).
    pub fn discounts(&self) -> &[f64] {
        &self.discounts
    }

    pub fn has_unknown(&self) -> bool {
        self.has_unk
    }

    pub fn id(&self, sym: &str) -> Option<u32> {
        self.ids.get(sym).copied()
    }

    pub fn symbol(&self, id: u32) -> &str {
        &self.vocab[id as usize]
    }

    /// Id used to score `sym`: its own id, or the unknown symbol's.
    pub fn lookup(&self, sym: &str) -> Result<u32> {
        match self.id(sym) {
            Some(id) if id != BOS_ID && self.grams[0].contains_key(&[id][..]) => Ok(id),
            _ if self.has_unk => Ok(UNK_ID),
            _ => Err(Error::UnknownSymbol(sym.to_string())),
        }
    }

    /// Every symbol that can be predicted (the full vocabulary minus `<s>`).
    pub fn predictable_ids(&self) -> Vec<u32> {
        (0..self.vocab.len() as u32)
            .filter(|&id| id != BOS_ID && self.grams[0].contains_key(&[id][..]))
            .collect()
    }

    /// Number of stored n-grams of order `k`.
    pub fn ngram_count(&self, k: usize) -> usize {
        self.grams[k - 1].len()
    }

    /// All stored contexts (including the empty one), sorted.
    pub fn contexts(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for k in 1..self.order {
            let mut ctx: Vec<Vec<u32>> = self.grams[k - 1]
                .iter()
                .filter(|(_, e)| e.context)
                .map(|(g, _)| g.clone())
                .collect();
            ctx.sort();
            out.extend(ctx);
        }
        out
    }

    /// ln P(w | context), backing off through shorter contexts as needed.
    /// Only the last `order - 1` symbols of `context` are used.
    pub fn ln_prob(&self, context: &[u32], w: u32) -> f64 {
        let ctx = &context[context.len().saturating_sub(self.order - 1)..];
        let mut acc = 0.0;
        let mut key = Key::new();
        for start in 0..=ctx.len() {
            let h = &ctx[start..];
            key.clear();
            key.extend_from_slice(h);
            key.push(w);
            if let Some(e) = self.grams[key.len() - 1].get(&key[..]) {
                return acc + e.logprob;
            }
            if !h.is_empty() {
                if let Some(e) = self.grams[h.len() - 1].get(h) {
                    acc += e.backoff;
                }
            }
        }
        f64::NEG_INFINITY
    }

    pub fn begin(&self) -> LmState {
        if self.order > 1 {
            LmState(SmallVec::from_slice(&[BOS_ID]))
        } else {
            LmState::default()
        }
    }

    pub fn advance(&self, state: &LmState, w: u32) -> LmState {
        if self.order == 1 {
            return LmState::default();
        }
        let mut v: SmallVec<[u32; 4]> = state.0.clone();
        v.push(w);
        if v.len() > self.order - 1 {
            v.remove(0);
        }
        while !v.is_empty() && !self.grams[v.len() - 1].get(&v[..]).is_some_and(|e| e.context) {
            v.remove(0);
        }
        LmState(v)
    }

    /// ln P(w | state) and the successor state.
    pub fn score_id(&self, state: &LmState, w: u32) -> (f64, LmState) {
        (self.ln_prob(&state.0, w), self.advance(state, w))
    }

    pub fn score(&self, state: &LmState, sym: &str) -> Result<(f64, LmState)> {
        Ok(self.score_id(state, self.lookup(sym)?))
    }

    /// ln P(</s> | state).
    pub fn end_ln_prob(&self, state: &LmState) -> f64 {
        self.ln_prob(&state.0, EOS_ID)
    }

    /// ln probability of a whole sequence, including the end symbol.
    pub fn sequence_ln_prob<S: AsRef<str>>(&self, seq: &[S]) -> Result<f64> {
        let mut state = self.begin();
        let mut total = 0.0;
        for s in seq {
            let (lp, next) = self.score(&state, s.as_ref())?;
            total += lp;
            state = next;
        }
        Ok(total + self.end_ln_prob(&state))
    }

    /// Per-symbol perplexity over `corpus`, counting one end symbol per
    /// sequence.
    pub fn perplexity<S, Q>(&self, corpus: &[Q]) -> Result<f64>
    where
        S: AsRef<str>,
        Q: AsRef<[S]>,
    {
        let mut total = 0.0;
        let mut n = 0usize;
        for seq in corpus {
            let seq = seq.as_ref();
            total += self.sequence_ln_prob(seq)?;
            n += seq.len() + 1;
        }
        Ok((-total / n as f64).exp())
    }

    /// Recompute which n-grams act as contexts.
    fn mark_contexts(&mut self) {
        for k in 1..=self.order {
            let mut flags: Vec<Vec<u32>> = Vec::new();
            if k < self.order {
                for g in self.grams[k].keys() {
                    flags.push(g[..k].to_vec());
                }
            }
            let level = &mut self.grams[k - 1];
            for e in level.values_mut() {
                e.context = e.backoff != 0.0;
            }
            for h in flags {
                if let Some(e) = level.get_mut(&h) {
                    e.context = true;
                }
            }
        }
    }

    /// Stored n-grams of order `k`, sorted by id sequence.
    pub(crate) fn sorted_grams(&self, k: usize) -> Vec<(&Vec<u32>, &Entry)> {
        let mut v: Vec<_> = self.grams[k - 1].iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }
}
