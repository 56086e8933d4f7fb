use std::collections::HashMap;

use super::{Entry, NGramModel, BOS_ID, EOS_ID, UNK_ID};
use crate::error::{Error, Result};

/// Interpolated Kneser-Ney estimation.
///
/// Each sequence is padded with one `<s>` and one `</s>`. The highest order
/// and n-grams starting with `<s>` use raw counts; other lower orders use
/// continuation counts (number of distinct left extensions). Each order has
/// one discount `n1 / (n1 + 2 n2)` over its counts-of-counts; when either
/// count is zero the fallback discount is used instead.
#[derive(Clone, Debug)]
pub struct NGramTrainer {
    order: usize,
    extra_vocab: Vec<String>,
    unknown: bool,
    fallback_discount: f64,
}

impl NGramTrainer {
    pub fn new(order: usize) -> Self {
        NGramTrainer {
            order,
            extra_vocab: Vec::new(),
            unknown: true,
            fallback_discount: 0.5,
        }
    }

    /// Symbols to include in the vocabulary even if unseen in training;
    /// they receive only smoothing mass.
    pub fn vocab<I, S>(mut self, symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.extra_vocab.extend(symbols.into_iter().map(|s| s.as_ref().to_string()));
        self
    }

    /// Whether to reserve `<unk>` for out-of-vocabulary symbols (default on).
    pub fn unknown(mut self, yes: bool) -> Self {
        self.unknown = yes;
        self
    }

    pub fn fallback_discount(mut self, d: f64) -> Self {
        self.fallback_discount = d;
        self
    }

    pub fn train<S, Q, I>(&self, corpus: I) -> Result<NGramModel>
    where
        S: AsRef<str>,
        Q: AsRef<[S]>,
        I: IntoIterator<Item = Q>,
    {
        let n = self.order;
        if n == 0 {
            return Err(Error::Config("n-gram order must be at least 1".into()));
        }
        if !(self.fallback_discount > 0.0 && self.fallback_discount <= 1.0) {
            return Err(Error::Config("fallback discount must be in (0, 1]".into()));
        }
        let mut model = NGramModel::empty(n, self.unknown);

        let mut raw: Vec<HashMap<Vec<u32>, u64>> = vec![HashMap::new(); n];
        let mut sequences = 0usize;
        let mut seq = Vec::new();
        for q in corpus {
            sequences += 1;
            seq.clear();
            seq.push(BOS_ID);
            for s in q.as_ref() {
                let s = s.as_ref();
                if s == super::BOS || s == super::EOS {
                    return Err(Error::Config(format!("reserved symbol {s} in training data")));
                }
                seq.push(model.intern(s));
            }
            seq.push(EOS_ID);
            for j in 1..seq.len() {
                for k in 1..=n.min(j + 1) {
                    *raw[k - 1].entry(seq[j + 1 - k..=j].to_vec()).or_default() += 1;
                }
            }
        }
        if sequences == 0 {
            return Err(Error::EmptyCorpus);
        }
        for s in &self.extra_vocab {
            if s != super::BOS {
                model.intern(s);
            }
        }

        // Adjusted counts.
        let mut adj: Vec<HashMap<Vec<u32>, u64>> = vec![HashMap::new(); n];
        adj[n - 1] = raw[n - 1].clone();
        for k in (1..n).rev() {
            let mut level: HashMap<Vec<u32>, u64> = HashMap::new();
            for (g, &c) in &raw[k - 1] {
                if g[0] == BOS_ID {
                    level.insert(g.clone(), c);
                }
            }
            for g in raw[k].keys() {
                *level.entry(g[1..].to_vec()).or_default() += 1;
            }
            adj[k - 1] = level;
        }

        let discounts: Vec<f64> = adj
            .iter()
            .map(|level| {
                let n1 = level.values().filter(|&&c| c == 1).count() as f64;
                let n2 = level.values().filter(|&&c| c == 2).count() as f64;
                if n1 > 0.0 && n2 > 0.0 {
                    n1 / (n1 + 2.0 * n2)
                } else {
                    self.fallback_discount
                }
            })
            .collect();

        // Unigrams interpolate with the uniform distribution over every
        // predictable symbol.
        let predictable: Vec<u32> = (0..model.vocab.len() as u32)
            .filter(|&id| id != BOS_ID && (id != UNK_ID || self.unknown))
            .collect();
        let d1 = discounts[0];
        let total: u64 = adj[0].values().sum();
        let types = adj[0].len() as f64;
        let gamma0 = d1 * types / total as f64;
        let uniform = 1.0 / predictable.len() as f64;
        for &w in &predictable {
            let c = adj[0].get(&[w][..]).copied().unwrap_or(0) as f64;
            let p = (c - d1).max(0.0) / total as f64 + gamma0 * uniform;
            model.grams[0].insert(vec![w], Entry::new(p.ln()));
        }
        model.grams[0].insert(vec![BOS_ID], Entry::new(f64::NEG_INFINITY));

        for k in 2..=n {
            let d = discounts[k - 1];
            let mut ctx: HashMap<&[u32], (u64, u64)> = HashMap::new();
            for (g, &c) in &adj[k - 1] {
                let e = ctx.entry(&g[..k - 1]).or_default();
                e.0 += c;
                e.1 += 1;
            }
            let gammas: HashMap<&[u32], f64> = ctx
                .iter()
                .map(|(&h, &(total, types))| (h, d * types as f64 / total as f64))
                .collect();
            let mut level = HashMap::with_capacity(adj[k - 1].len());
            for (g, &c) in &adj[k - 1] {
                let h = &g[..k - 1];
                let (total, _) = ctx[h];
                let lower = model.ln_prob(&h[1..], g[k - 1]).exp();
                let p = (c as f64 - d).max(0.0) / total as f64 + gammas[h] * lower;
                level.insert(g.clone(), Entry::new(p.ln()));
            }
            for (h, g) in gammas {
                model.grams[k - 2]
                    .get_mut(h)
                    .expect("every context is a stored lower-order n-gram")
                    .backoff = g.ln();
            }
            model.grams[k - 1] = level;
        }

        model.discounts = discounts;
        model.mark_contexts();
        Ok(model)
    }
}
