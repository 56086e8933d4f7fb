use std::cmp::Ordering;
use std::collections::HashMap;

use super::{rescore, step_cost, ConfusionNetwork, DecodeResult, SequentialScorer};

struct Hyp<S> {
    state: S,
    cost: f64,
    choice: Vec<usize>,
    /// Lexicon ids along the path (unknown words sort last), for tie-breaks.
    ids: Vec<u32>,
}

fn rank<S>(a: &Hyp<S>, b: &Hyp<S>) -> Ordering {
    a.cost.total_cmp(&b.cost).then_with(|| a.ids.cmp(&b.ids))
}

/// Left-to-right beam search keeping the `beam` cheapest hypotheses per
/// position. Hypotheses with equal scorer states are merged, keeping the
/// cheaper one. Ties go to the path with lower lexicon ids.
///
/// # Panics
/// If `beam` is zero.
pub fn beam_decode<S: SequentialScorer + ?Sized>(
    net: &ConfusionNetwork,
    scorer: &S,
    beam: usize,
    weight: f64,
) -> DecodeResult {
    assert!(beam >= 1, "beam width must be at least 1");
    let mut hyps = vec![Hyp {
        state: scorer.initial(),
        cost: 0.0,
        choice: Vec::new(),
        ids: Vec::new(),
    }];
    for set in net.positions() {
        let mut next: Vec<Hyp<S::State>> = Vec::with_capacity(hyps.len() * set.len());
        let mut index: HashMap<S::State, usize> = HashMap::new();
        for h in &hyps {
            for (k, cand) in set.candidates.iter().enumerate() {
                let (lp, state) = scorer.transition(&h.state, &cand.word);
                let mut hyp = Hyp {
                    state,
                    cost: h.cost + step_cost(cand.cost, lp, weight),
                    choice: h.choice.clone(),
                    ids: h.ids.clone(),
                };
                hyp.choice.push(k);
                hyp.ids.push(cand.lex_id.unwrap_or(u32::MAX));
                match index.get(&hyp.state) {
                    Some(&i) => {
                        if rank(&hyp, &next[i]) == Ordering::Less {
                            next[i] = hyp;
                        }
                    }
                    None => {
                        index.insert(hyp.state.clone(), next.len());
                        next.push(hyp);
                    }
                }
            }
        }
        next.sort_by(rank);
        next.truncate(beam);
        hyps = next;
    }
    for h in &mut hyps {
        h.cost -= weight * scorer.finish(&h.state);
    }
    let best = hyps.iter().min_by(|a, b| rank(a, b)).expect("beam is non-empty");
    rescore(net, scorer, weight, &best.choice)
}
