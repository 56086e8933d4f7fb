//! Brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use unabbrev::channel::subseq::InsertionClass;
use unabbrev::decode::{ConfusionNetwork, SequentialScorer};
use unabbrev::{AlignmentModel, InsertionCostModel, NGramModel, PairSymbol};

/// Every monotone alignment of `a` to `e`, copies tried before insertions
/// at each step (so the first of several equal paths matches earliest).
pub fn alignments(a: &str, e: &str) -> Vec<Vec<PairSymbol>> {
    fn go(a: &[char], e: &[char], prefix: &mut Vec<PairSymbol>, out: &mut Vec<Vec<PairSymbol>>) {
        let Some((&c, rest)) = e.split_first() else {
            if a.is_empty() {
                out.push(prefix.clone());
            }
            return;
        };
        if a.first() == Some(&c) {
            prefix.push(PairSymbol::copy(c));
            go(&a[1..], rest, prefix, out);
            prefix.pop();
        }
        prefix.push(PairSymbol::insert(c));
        go(a, rest, prefix, out);
        prefix.pop();
    }
    let a: Vec<char> = a.chars().collect();
    let e: Vec<char> = e.chars().collect();
    let mut out = Vec::new();
    go(&a, &e, &mut Vec::new(), &mut out);
    out
}

pub fn path_ln_prob(model: &AlignmentModel, path: &[PairSymbol]) -> f64 {
    path.iter().map(|&s| model.ln_prob(s)).sum()
}

/// ln Z and posterior symbol counts by explicit summation over paths.
pub fn brute_expected_counts(model: &AlignmentModel, a: &str, e: &str) -> (f64, BTreeMap<PairSymbol, f64>) {
    let paths = alignments(a, e);
    let weights: Vec<f64> = paths.iter().map(|p| path_ln_prob(model, p).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut counts = BTreeMap::new();
    for (p, w) in paths.iter().zip(&weights) {
        for &s in p {
            *counts.entry(s).or_insert(0.0) += w / z;
        }
    }
    (z.ln(), counts)
}

/// Best path and its log probability; the first path within 1e-12 of the
/// best in enumeration order wins.
pub fn brute_viterbi(model: &AlignmentModel, a: &str, e: &str) -> (Vec<PairSymbol>, f64) {
    let paths = alignments(a, e);
    let scores: Vec<f64> = paths.iter().map(|p| path_ln_prob(model, p)).collect();
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = scores.iter().position(|&s| s >= best - 1e-12).expect("at least one path");
    (paths[k].clone(), scores[k])
}

/// Minimum pair-LM cost over all alignments.
pub fn brute_pair_cost(lm: &NGramModel, a: &str, e: &str) -> f64 {
    alignments(a, e)
        .iter()
        .map(|p| {
            let spelled: Vec<String> = p.iter().map(ToString::to_string).collect();
            -lm.sequence_ln_prob(&spelled).expect("pair vocabulary covers the alphabet")
        })
        .fold(f64::INFINITY, f64::min)
}

/// Minimum insertion cost over all alignments, classifying each insertion
/// by how many abbreviation characters precede it.
pub fn brute_subseq_cost(model: &InsertionCostModel, a: &str, e: &str) -> f64 {
    let m = a.chars().count();
    alignments(a, e)
        .iter()
        .map(|p| {
            let mut matched = 0;
            let mut cost = 0.0;
            for s in p {
                if s.is_insertion() {
                    let class = if matched == 0 {
                        InsertionClass::Initial
                    } else if matched == m {
                        InsertionClass::Final
                    } else {
                        InsertionClass::Internal
                    };
                    cost += model.cost(class, s.output());
                } else {
                    matched += 1;
                }
            }
            cost
        })
        .fold(f64::INFINITY, f64::min)
}

/// A random expansion over `alphabet` and a random non-empty subsequence.
pub fn random_pair<R: Rng>(rng: &mut R, alphabet: &[u8], max_len: usize) -> (String, String) {
    let n = rng.random_range(1..=max_len);
    let e: String = (0..n).map(|_| alphabet[rng.random_range(0..alphabet.len())] as char).collect();
    loop {
        let a: String = e.chars().filter(|_| rng.random_bool(0.6)).collect();
        if !a.is_empty() {
            return (a, e);
        }
    }
}

/// Cost and candidate choice of every path through `net`.
pub fn all_paths<S: SequentialScorer>(net: &ConfusionNetwork, scorer: &S, weight: f64) -> Vec<(f64, Vec<usize>)> {
    let mut out = Vec::new();
    let sizes: Vec<usize> = net.positions().iter().map(|p| p.len()).collect();
    let total: usize = sizes.iter().product();
    for mut code in 0..total {
        let mut choice = vec![0; sizes.len()];
        for k in (0..sizes.len()).rev() {
            choice[k] = code % sizes[k];
            code /= sizes[k];
        }
        let mut state = scorer.initial();
        let mut cost = 0.0;
        for (set, &k) in net.positions().iter().zip(&choice) {
            let cand = &set.candidates[k];
            let (lp, next) = scorer.transition(&state, &cand.word);
            cost += cand.cost - weight * lp;
            state = next;
        }
        cost -= weight * scorer.finish(&state);
        out.push((cost, choice));
    }
    out
}
