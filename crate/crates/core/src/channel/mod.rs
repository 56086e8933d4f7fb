//! Channel models: per-token expansion candidates with costs.
//!
//! A channel maps an abbreviated token to a [`CandidateSet`] of lexicon
//! words, each carrying a non-negative cost (negative natural log
//! probability). Two channels are provided: a pair-symbol language model
//! ([`PairChannelModel`]) and a subsequence model with per-character
//! insertion costs ([`subseq`]).

use std::cmp::Ordering;

use crate::text::Token;

pub mod pair;
pub mod subseq;

pub use pair::{PairChannel, PairChannelModel};
pub use subseq::SubseqChannel;

/// One expansion hypothesis for a token.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub word: String,
    pub cost: f64,
    /// Lexicon id, or `None` for words outside the lexicon (memory entries,
    /// copy-through).
    pub lex_id: Option<u32>,
}

impl Candidate {
    pub fn new(word: impl Into<String>, cost: f64, lex_id: Option<u32>) -> Self {
        Candidate {
            word: word.into(),
            cost,
            lex_id,
        }
    }

    /// Total order used everywhere candidates are ranked: cost, then
    /// lexicon id (unknown words last), then spelling.
    pub fn rank(&self, other: &Candidate) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then_with(|| self.lex_id.unwrap_or(u32::MAX).cmp(&other.lex_id.unwrap_or(u32::MAX)))
            .then_with(|| self.word.cmp(&other.word))
    }
}

/// Which filtering steps changed a candidate set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CandidateFlags {
    pub lexblock: bool,
    /// Number of candidates contributed or protected by the expansion memory.
    pub memory_hits: usize,
    pub subblock_removed: usize,
    pub pruned: usize,
    pub truncated: usize,
    pub copy_through: bool,
}

/// Ranked candidates for one source token. Words are unique.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    pub source: Token,
    pub candidates: Vec<Candidate>,
    pub flags: CandidateFlags,
}

impl CandidateSet {
    /// Sort `candidates` by [`Candidate::rank`], keeping the first of any
    /// duplicate words.
    pub fn new(source: Token, mut candidates: Vec<Candidate>) -> Self {
        candidates.sort_by(Candidate::rank);
        let mut seen = std::collections::HashSet::new();
        candidates.retain(|c| seen.insert(c.word.clone()));
        CandidateSet {
            source,
            candidates,
            flags: CandidateFlags::default(),
        }
    }

    /// The source token as its own zero-cost expansion.
    pub fn copy_through(source: Token) -> Self {
        let word = source.as_str().to_string();
        let mut set = CandidateSet::new(source, vec![Candidate::new(word, 0.0, None)]);
        set.flags.copy_through = true;
        set
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.candidates.iter().map(|c| c.word.as_str())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.candidates.iter().any(|c| c.word == word)
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.candidates.first()
    }
}

/// Anything that proposes expansion candidates for a token.
pub trait Channel: Sync {
    /// Candidates for `token`; may be empty.
    fn candidates(&self, token: &Token) -> CandidateSet;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_breaks_ties_by_id_then_word() {
        let t = Token::new("x").unwrap();
        let set = CandidateSet::new(
            t,
            vec![
                Candidate::new("zz", 1.0, None),
                Candidate::new("b", 1.0, Some(7)),
                Candidate::new("a", 1.0, Some(9)),
                Candidate::new("yy", 1.0, None),
                Candidate::new("c", 0.5, Some(20)),
                Candidate::new("b", 3.0, Some(7)),
            ],
        );
        assert_eq!(set.words().collect::<Vec<_>>(), ["c", "b", "a", "yy", "zz"]);
    }

    #[test]
    fn copy_through_is_flagged() {
        let set = CandidateSet::copy_through(Token::new("qx").unwrap());
        assert!(set.flags.copy_through);
        assert_eq!(set.best().unwrap().word, "qx");
        assert_eq!(set.best().unwrap().cost, 0.0);
    }
}
