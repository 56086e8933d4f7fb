//! Ranking sentences by per-character entropy under a byte model.

use crate::error::Result;
use crate::lm::{per_char_entropy, NGramModel};

/// `(index, bits per character)` sorted ascending; equal scores keep input
/// order.
pub fn entropy_rank<S: AsRef<str>>(model: &NGramModel, corpus: &[S]) -> Result<Vec<(usize, f64)>> {
    let mut ranked = corpus
        .iter()
        .enumerate()
        .map(|(i, s)| Ok((i, per_char_entropy(model, s.as_ref())?)))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(ranked)
}

/// Entries scoring strictly below the median (ties with the median are
/// excluded). For an even count the median is the mean of the middle two.
pub fn below_median(ranked: &[(usize, f64)]) -> Vec<(usize, f64)> {
    if ranked.is_empty() {
        return Vec::new();
    }
    let mut scores: Vec<f64> = ranked.iter().map(|r| r.1).collect();
    scores.sort_by(f64::total_cmp);
    let n = scores.len();
    let median = if n % 2 == 1 {
        scores[n / 2]
    } else {
        (scores[n / 2 - 1] + scores[n / 2]) / 2.0
    };
    ranked.iter().copied().filter(|r| r.1 < median).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lm::train_byte_lm;

    fn model() -> NGramModel {
        train_byte_lm(
            &[
                "the cat sat on the mat.",
                "the dog sat on the log.",
                "a cat ran to the dog.",
                "the big dog ran on a log.",
            ],
            5,
        )
        .unwrap()
    }

    #[test]
    fn two_sentences_select_the_lower() {
        let m = model();
        let corpus = ["xq zvw jjk pqq.", "the cat sat on the log."];
        let ranked = entropy_rank(&m, &corpus).unwrap();
        assert_eq!(ranked[0].0, 1);
        assert!(ranked[0].1 < ranked[1].1);
        let sel = below_median(&ranked);
        assert_eq!(sel.iter().map(|r| r.0).collect::<Vec<_>>(), [1]);
    }

    #[test]
    fn duplication_preserves_order() {
        let m = model();
        let corpus = ["the dog ran.", "qqq zzz.", "a cat sat on the mat."];
        let once: Vec<usize> = entropy_rank(&m, &corpus).unwrap().iter().map(|r| r.0).collect();
        let doubled: Vec<&str> = corpus.iter().chain(corpus.iter()).copied().collect();
        let twice: Vec<usize> = entropy_rank(&m, &doubled).unwrap().iter().map(|r| r.0 % 3).collect();
        let dedup: Vec<usize> = twice.chunks(2).map(|c| c[0]).collect();
        assert_eq!(once, dedup);
    }

    #[test]
    fn ties_at_the_median_are_excluded() {
        let ranked = [(0, 1.0), (1, 2.0), (2, 2.0), (3, 2.0)];
        assert_eq!(below_median(&ranked), [(0, 1.0)]);
        assert!(below_median(&[(0, 1.0), (1, 1.0)]).is_empty());
        assert!(below_median(&[]).is_empty());
    }
}
