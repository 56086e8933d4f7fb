use std::collections::HashMap;

use super::{rescore, step_cost, ConfusionNetwork, DecodeResult, SequentialScorer};

struct Node<S> {
    state: S,
    cost: f64,
    /// Index of the predecessor in the previous layer and the candidate taken.
    back: (usize, usize),
}

/// Exact minimum-cost path, by dynamic programming over scorer states.
///
/// Exact whenever the scorer is Markovian in its state (true for n-gram
/// models). Runs in O(n * K * S) for K candidates per position and S
/// distinct states per layer. Among equal-cost paths the one reached first
/// in candidate order wins.
pub fn viterbi_decode<S: SequentialScorer + ?Sized>(net: &ConfusionNetwork, scorer: &S, weight: f64) -> DecodeResult {
    let mut layers: Vec<Vec<Node<S::State>>> = Vec::with_capacity(net.len() + 1);
    layers.push(vec![Node {
        state: scorer.initial(),
        cost: 0.0,
        back: (0, 0),
    }]);
    for set in net.positions() {
        let prev = layers.last().expect("initial layer");
        let mut next: Vec<Node<S::State>> = Vec::new();
        let mut index: HashMap<S::State, usize> = HashMap::new();
        for (p, node) in prev.iter().enumerate() {
            for (k, cand) in set.candidates.iter().enumerate() {
                let (lp, state) = scorer.transition(&node.state, &cand.word);
                let cost = node.cost + step_cost(cand.cost, lp, weight);
                match index.get(&state) {
                    Some(&i) => {
                        if cost < next[i].cost {
                            next[i].cost = cost;
                            next[i].back = (p, k);
                        }
                    }
                    None => {
                        index.insert(state.clone(), next.len());
                        next.push(Node {
                            state,
                            cost,
                            back: (p, k),
                        });
                    }
                }
            }
        }
        layers.push(next);
    }

    let last = layers.last().expect("at least one layer");
    let mut best = 0;
    let mut best_cost = f64::NAN;
    for (i, node) in last.iter().enumerate() {
        let total = node.cost - weight * scorer.finish(&node.state);
        if i == 0 || total < best_cost {
            best = i;
            best_cost = total;
        }
    }

    let mut choice = vec![0; net.len()];
    let mut at = best;
    for pos in (0..net.len()).rev() {
        let (p, k) = layers[pos + 1][at].back;
        choice[pos] = k;
        at = p;
    }
    rescore(net, scorer, weight, &choice)
}
