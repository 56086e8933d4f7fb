use std::collections::{BTreeMap, HashSet};

use super::{NGramModel, BOS_ID};

impl NGramModel {
    /// Relative-entropy pruning.
    ///
    /// Every n-gram of order two or more whose removal would change the
    /// model's relative entropy by strictly less than `threshold` is
    /// dropped, unless it is the context of an n-gram that stays. All
    /// decisions use the unpruned model; back-off weights are then
    /// recomputed so each context stays normalized. A threshold of zero
    /// returns the model unchanged.
    pub fn prune(&self, threshold: f64) -> NGramModel {
        let mut out = self.clone();
        if threshold <= 0.0 || self.order < 2 {
            return out;
        }

        let children = self.children();
        for k in (2..=self.order).rev() {
            let protected: HashSet<Vec<u32>> = if k < self.order {
                out.grams[k].keys().map(|g| g[..k].to_vec()).collect()
            } else {
                HashSet::new()
            };
            let mut doomed = Vec::new();
            for (h, ws) in children.iter().filter(|(h, _)| h.len() == k - 1) {
                let deltas = self.removal_costs(h, ws);
                for (&w, delta) in ws.iter().zip(deltas) {
                    let mut g = h.clone();
                    g.push(w);
                    if delta < threshold && !protected.contains(&g) {
                        doomed.push(g);
                    }
                }
            }
            for g in doomed {
                out.grams[k - 1].remove(&g);
            }
        }

        out.recompute_backoffs();
        out.mark_contexts();
        out
    }

    /// Context -> sorted list of words stored after it.
    fn children(&self) -> BTreeMap<Vec<u32>, Vec<u32>> {
        let mut map: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
        for k in 2..=self.order {
            for g in self.grams[k - 1].keys() {
                map.entry(g[..k - 1].to_vec()).or_default().push(g[k - 1]);
            }
        }
        map.values_mut().for_each(|v| v.sort_unstable());
        map
    }

    /// Marginal probability of a history under the model.
    fn history_prob(&self, h: &[u32]) -> f64 {
        let start = usize::from(h.first() == Some(&BOS_ID));
        (start..h.len())
            .map(|i| self.ln_prob(&h[..i], h[i]))
            .sum::<f64>()
            .exp()
    }

    /// Relative-entropy increase from removing each `h w` for `w` in `ws`.
    fn removal_costs(&self, h: &[u32], ws: &[u32]) -> Vec<f64> {
        let lower = &h[1..];
        let p: Vec<f64> = ws.iter().map(|&w| self.grams[h.len()][&[h, &[w][..]].concat()].logprob.exp()).collect();
        let q: Vec<f64> = ws.iter().map(|&w| self.ln_prob(lower, w).exp()).collect();
        let num = 1.0 - p.iter().sum::<f64>();
        let den = 1.0 - q.iter().sum::<f64>();
        let ln_bo = self.grams[h.len() - 1][h].backoff;
        let ph = self.history_prob(h);
        p.iter()
            .zip(&q)
            .map(|(&pw, &qw)| {
                let ln_bo_new = ((num + pw) / (den + qw)).ln();
                -ph * (pw * (qw.ln() + ln_bo_new - pw.ln()) + num * (ln_bo_new - ln_bo))
            })
            .collect()
    }

    /// Back-off weight of each context := leftover mass after its stored
    /// words, divided by the lower order's leftover mass over the same words.
    fn recompute_backoffs(&mut self) {
        for k in 2..=self.order {
            let children = {
                let mut map: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
                for g in self.grams[k - 1].keys() {
                    map.entry(g[..k - 1].to_vec()).or_default().push(g[k - 1]);
                }
                map
            };
            let mut updates = Vec::new();
            for (h, mut ws) in children {
                ws.sort_unstable();
                let mut seen = 0.0;
                let mut lower = 0.0;
                for &w in &ws {
                    let mut g = h.clone();
                    g.push(w);
                    seen += self.grams[k - 1][&g].logprob.exp();
                    lower += self.ln_prob(&h[1..], w).exp();
                }
                let (num, den) = (1.0 - seen, 1.0 - lower);
                let bo = if num > 0.0 && den > 0.0 {
                    (num / den).ln()
                } else {
                    self.grams[k - 2][&h].backoff
                };
                updates.push((h, bo));
            }
            let level = &mut self.grams[k - 2];
            let touched: HashSet<&Vec<u32>> = updates.iter().map(|(h, _)| h).collect();
            for (h, e) in level.iter_mut() {
                if !touched.contains(h) {
                    e.backoff = 0.0;
                }
            }
            for (h, bo) in &updates {
                if let Some(e) = level.get_mut(h) {
                    e.backoff = *bo;
                }
            }
        }
    }
}
