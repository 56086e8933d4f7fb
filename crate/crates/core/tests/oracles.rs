//! Randomized checks of the exact algorithms against brute-force oracles.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unabbrev::align::{em_train, expected_counts, lattice_path_count, viterbi_align, Stepwise};
use unabbrev::channel::pair::train_pair_lm;
use unabbrev::channel::subseq::generate_candidates;
use unabbrev::{EmConfig, ExpansionMemory, InsertionCostModel, Lexicon, Sentence, SubseqConfig, Token};

use common::*;

fn pair() -> impl Strategy<Value = (String, String)> {
    (any::<u64>(), 1usize..=6).prop_map(|(seed, len)| random_pair(&mut ChaCha8Rng::seed_from_u64(seed), b"abc", len))
}

fn trained_suite(seed: u64) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..60).map(|_| random_pair(&mut rng, b"abc", 5)).collect()
}

#[test]
fn lattice_count_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let (a, e) = random_pair(&mut rng, b"ab", 7);
        assert_eq!(lattice_path_count(&a, &e), alignments(&a, &e).len() as u128, "{a} {e}");
    }
}

#[test]
fn stepwise_em_matches_oracles_too() {
    let suite = trained_suite(9);
    let cfg = EmConfig {
        max_iters: 5,
        tol: 0.0,
        stepwise: Some(Stepwise {
            decay: 0.7,
            batch_size: 8,
        }),
    };
    let model = em_train(suite.iter().map(|(a, e)| (a, e)), &cfg).unwrap();
    for (a, e) in &suite {
        let (z, _) = expected_counts(&model, a, e).unwrap();
        let (bz, _) = brute_expected_counts(&model, a, e);
        assert!((z - bz).abs() < 1e-9);
        let v = viterbi_align(&model, a, e).unwrap();
        assert_eq!(v.symbols, brute_viterbi(&model, a, e).0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alignment_matches_enumeration((a, e) in pair(), seed in 0u64..4) {
        let model = em_train(trained_suite(seed).iter().map(|(a, e)| (a, e)), &EmConfig::default()).unwrap();
        let (z, counts) = expected_counts(&model, &a, &e).unwrap();
        let (bz, bcounts) = brute_expected_counts(&model, &a, &e);
        prop_assert!((z - bz).abs() < 1e-9);
        for (s, c) in &bcounts {
            prop_assert!((counts.get(s).copied().unwrap_or(0.0) - c).abs() < 1e-9);
        }
        let v = viterbi_align(&model, &a, &e).unwrap();
        let (path, lp) = brute_viterbi(&model, &a, &e);
        prop_assert!((v.log_prob - lp).abs() < 1e-9);
        prop_assert_eq!(v.symbols, path);
    }

    #[test]
    fn channel_scores_match_enumeration((a, e) in pair(), seed in 0u64..4) {
        let suite = trained_suite(seed);
        let model = em_train(suite.iter().map(|(a, e)| (a, e)), &EmConfig::default()).unwrap();
        let pair = train_pair_lm(&model, suite.iter().map(|(a, e)| (a, e)), 3).unwrap();
        prop_assert!((pair.channel_score(&a, &e).unwrap() - brute_pair_cost(pair.lm(), &a, &e)).abs() < 1e-9);
        let costs = InsertionCostModel::estimate(suite.iter().map(|(a, e)| (a, e)), &model).unwrap();
        prop_assert!((costs.score(&a, &e).unwrap() - brute_subseq_cost(&costs, &a, &e)).abs() < 1e-9);
    }

    #[test]
    fn subsequence_candidates_are_supersequences(
        words in proptest::collection::vec("[abc]{1,6}", 1..30),
        query in "[abc]{1,3}",
    ) {
        let lex = Lexicon::build([&Sentence::parse(&words.join(" ")).unwrap()], 1).unwrap();
        let token = Token::new(&query).unwrap();
        let set = generate_candidates(
            &SubseqConfig::default(),
            &InsertionCostModel::default(),
            &lex,
            &ExpansionMemory::new(),
            &token,
        );
        prop_assert!(!set.is_empty());
        prop_assert!(set.len() <= 8);
        for c in &set.candidates {
            prop_assert!(unabbrev::is_subsequence(&query, &c.word));
            prop_assert!(set.flags.copy_through || lex.contains(&c.word));
        }
    }
}
