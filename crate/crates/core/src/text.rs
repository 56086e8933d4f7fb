//! Tokens, sentences and abbreviated/expanded sentence pairs.
//!
//! All text is case-folded at ingestion. Tokens are whitespace-free; the
//! sentence-final period and commas are ordinary tokens.

use std::fmt;
use std::io::BufRead;
use std::ops::Deref;

use crate::error::{Error, Result};

/// A non-empty, whitespace-free, case-folded word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn new(text: &str) -> Result<Self> {
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(text.to_string()));
        }
        Ok(Token(text.to_lowercase()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Length in characters.
    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }
}

impl Deref for Token {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// True iff `short` can be obtained from `long` by deleting zero or more
/// characters.
pub fn is_subsequence(short: &str, long: &str) -> bool {
    let mut rest = long.chars();
    short.chars().all(|c| rest.any(|l| l == c))
}

/// An ordered, non-empty list of tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence(Vec<Token>);

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::EmptySentence);
        }
        Ok(Sentence(tokens))
    }

    /// Split a line on whitespace and case-fold every token.
    pub fn parse(line: &str) -> Result<Self> {
        let tokens = line
            .split_whitespace()
            .map(Token::new)
            .collect::<Result<Vec<_>>>()?;
        Sentence::new(tokens)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.0.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(Token::as_str)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t)?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Sentence {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Token-aligned abbreviated and expanded sentences.
///
/// Every abbreviated token is a (possibly improper) subsequence of the
/// expanded token at the same position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SentencePair {
    abbreviated: Sentence,
    expanded: Sentence,
}

impl SentencePair {
    pub fn new(abbreviated: Sentence, expanded: Sentence) -> Result<Self> {
        if abbreviated.len() != expanded.len() {
            return Err(Error::parse(
                0,
                format!(
                    "token count mismatch: {} abbreviated vs {} expanded",
                    abbreviated.len(),
                    expanded.len()
                ),
            ));
        }
        for (index, (a, e)) in abbreviated.iter().zip(expanded.iter()).enumerate() {
            if !is_subsequence(a, e) {
                return Err(Error::NotSubsequence {
                    index,
                    abbrev: a.to_string(),
                    expansion: e.to_string(),
                });
            }
        }
        Ok(SentencePair {
            abbreviated,
            expanded,
        })
    }

    pub fn abbreviated(&self) -> &Sentence {
        &self.abbreviated
    }

    pub fn expanded(&self) -> &Sentence {
        &self.expanded
    }

    pub fn len(&self) -> usize {
        self.expanded.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(abbreviated, expanded)` token pairs.
    pub fn token_pairs(&self) -> impl Iterator<Item = (&Token, &Token)> {
        self.abbreviated.iter().zip(self.expanded.iter())
    }
}

/// Read a corpus with one sentence per line. Blank lines are skipped.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<Sentence>> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(Sentence::parse(&line).map_err(|e| Error::parse(n + 1, e.to_string()))?);
    }
    Ok(out)
}

/// Parse one `abbreviated<TAB>expanded` line.
pub fn parse_pair_line(line: &str) -> Result<SentencePair> {
    let (a, e) = line
        .split_once('\t')
        .ok_or_else(|| Error::parse(0, "expected abbreviated<TAB>expanded"))?;
    SentencePair::new(Sentence::parse(a)?, Sentence::parse(e)?)
}

/// Read a TSV pair file. Errors carry the 1-based line number.
pub fn read_pairs<R: BufRead>(reader: R) -> Result<Vec<SentencePair>> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_pair_line(&line).map_err(|e| Error::parse(n + 1, e.to_string()))?);
    }
    Ok(out)
}

pub fn format_pair_line(pair: &SentencePair) -> String {
    format!("{}\t{}", pair.abbreviated, pair.expanded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subsequence_examples() {
        assert!(is_subsequence("ct", "cat"));
        assert!(is_subsequence("abc", "abc"));
        assert!(is_subsequence("brd", "bread"));
        assert!(!is_subsequence("tc", "cat"));
        assert!(!is_subsequence("cats", "cat"));
    }

    #[test]
    fn tokens_are_case_folded_and_validated() {
        assert_eq!(Token::new("Bread").unwrap().as_str(), "bread");
        assert!(Token::new("").is_err());
        assert!(Token::new("a b").is_err());
        assert_eq!(Token::new("don't").unwrap().as_str(), "don't");
    }

    #[test]
    fn pair_rejects_non_subsequence() {
        let err = parse_pair_line("th rsn\tthe season").unwrap_err();
        match err {
            Error::NotSubsequence { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected {other}"),
        }
        assert!(parse_pair_line("th\tthe reason").is_err());
        assert!(parse_pair_line("th rsn . ").is_err());
    }

    #[test]
    fn read_pairs_reports_line_numbers() {
        let data = "th\tthe\nxx\tthe\n";
        match read_pairs(data.as_bytes()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other}"),
        }
    }

    fn word() -> impl Strategy<Value = String> {
        "[abc]{1,7}"
    }

    proptest! {
        #[test]
        fn subsequence_is_reflexive_and_length_bounded(a in word(), b in word()) {
            prop_assert!(is_subsequence(&a, &a));
            if is_subsequence(&a, &b) {
                prop_assert!(a.chars().count() <= b.chars().count());
            }
        }

        #[test]
        fn subsequence_is_transitive(a in word(), b in word(), c in word()) {
            if is_subsequence(&a, &b) && is_subsequence(&b, &c) {
                prop_assert!(is_subsequence(&a, &c));
            }
        }

        #[test]
        fn deleting_characters_gives_a_subsequence(w in "[a-z]{1,10}", mask in any::<u16>()) {
            let short: String = w
                .chars()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, c)| c)
                .collect();
            prop_assert!(is_subsequence(&short, &w));
        }
    }
}
