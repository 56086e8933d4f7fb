//! Word/id table with corpus frequencies and a supersequence index.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::text::{is_subsequence, Sentence};

const OTHER_BIT: u32 = 1 << 26;

/// Character-presence bitmask: one bit per ASCII letter plus one shared
/// bucket for every other character.
pub fn char_mask(word: &str) -> u32 {
    word.chars().fold(0, |m, c| {
        m | match c {
            'a'..='z' => 1 << (c as u32 - 'a' as u32),
            _ => OTHER_BIT,
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Signature {
    mask: u32,
    len: u32,
}

impl Signature {
    fn of(word: &str) -> Self {
        Signature {
            mask: char_mask(word),
            len: word.chars().count() as u32,
        }
    }

    /// Necessary condition for `self` to be a supersequence of `query`.
    #[inline]
    fn may_contain(self, query: Signature) -> bool {
        self.len >= query.len && self.mask & query.mask == query.mask
    }
}

/// Immutable vocabulary with dense ids.
///
/// Ids are assigned by descending frequency, ties broken alphabetically, so
/// the same corpus always yields the same table.
#[derive(Clone, Debug, PartialEq)]
pub struct Lexicon {
    words: Vec<String>,
    counts: Vec<u64>,
    signatures: Vec<Signature>,
    index: HashMap<String, u32>,
    min_count: u64,
}

impl Lexicon {
    /// Count word types over `corpus` and keep those seen at least
    /// `min_count` times.
    pub fn build<'a, I>(corpus: I, min_count: u64) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Sentence>,
    {
        if min_count == 0 {
            return Err(Error::Config("min_count must be at least 1".into()));
        }
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for sentence in corpus {
            for w in sentence.words() {
                *counts.entry(w).or_default() += 1;
            }
        }
        if counts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut kept: Vec<(&str, u64)> = counts.into_iter().filter(|&(_, c)| c >= min_count).collect();
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        Ok(Self::from_entries(
            kept.into_iter().map(|(w, c)| (w.to_string(), c)),
            min_count,
        ))
    }

    fn from_entries(entries: impl IntoIterator<Item = (String, u64)>, min_count: u64) -> Self {
        let mut lex = Lexicon {
            words: Vec::new(),
            counts: Vec::new(),
            signatures: Vec::new(),
            index: HashMap::new(),
            min_count,
        };
        for (w, c) in entries {
            lex.index.insert(w.clone(), lex.words.len() as u32);
            lex.signatures.push(Signature::of(&w));
            lex.words.push(w);
            lex.counts.push(c);
        }
        lex
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.id(word).map(|id| self.count(id))
    }

    /// `(word, count)` in id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.words.iter().map(String::as_str).zip(self.counts.iter().copied())
    }

    /// Ids of every word that has `query` as a subsequence, in id order.
    pub fn supersequence_ids(&self, query: &str) -> Vec<u32> {
        let sig = Signature::of(query);
        self.signatures
            .iter()
            .enumerate()
            .filter(|(_, s)| s.may_contain(sig))
            .map(|(id, _)| id as u32)
            .filter(|&id| is_subsequence(query, &self.words[id as usize]))
            .collect()
    }

    /// Every lexicon word that is a supersequence of `query` (including
    /// `query` itself when present), with its frequency, in id order.
    pub fn supersequences(&self, query: &str) -> Vec<(&str, u64)> {
        self.supersequence_ids(query)
            .into_iter()
            .map(|id| (self.word(id), self.count(id)))
            .collect()
    }

    /// Write `word<TAB>id<TAB>count` lines sorted by id.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        for (id, (w, c)) in self.iter().enumerate() {
            writeln!(out, "{w}\t{id}\t{c}")?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [w, id, c] = fields[..] else {
                return Err(Error::parse(n + 1, "expected word<TAB>id<TAB>count"));
            };
            let id: usize = id.parse().map_err(|_| Error::parse(n + 1, "bad id"))?;
            let c: u64 = c.parse().map_err(|_| Error::parse(n + 1, "bad count"))?;
            if id != entries.len() {
                return Err(Error::parse(n + 1, "ids must be dense and sorted"));
            }
            entries.push((w.to_string(), c));
        }
        let min_count = entries.iter().map(|e| e.1).min().unwrap_or(1).max(1);
        Ok(Self::from_entries(entries, min_count))
    }
}
