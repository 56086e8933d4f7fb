//! Sentence selection filters for annotation candidates.

use regex::Regex;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

#[derive(Clone, Debug)]
pub struct FilterConfig {
    /// Sentences must be strictly shorter than this, in characters.
    pub max_chars: usize,
    /// Sentences must have strictly more words than this.
    pub min_words: usize,
    /// Mean characters per whitespace-separated word must be at least this.
    pub min_avg_word_len: f64,
    pub pattern: Regex,
    /// Reject sentences with an uppercase letter after the first word.
    pub lowercase_rest: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            max_chars: 150,
            min_words: 8,
            min_avg_word_len: 6.0,
            pattern: Regex::new(r"^[A-Za-z',\- ]+\.$").expect("valid pattern"),
            lowercase_rest: true,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_chars == 0 || self.min_words == 0 || self.min_avg_word_len.is_nan() || self.min_avg_word_len <= 0.0 {
            return Err(Error::Config("filter thresholds must be positive".into()));
        }
        Ok(())
    }

    pub fn accepts(&self, sentence: &str) -> bool {
        let words: Vec<&str> = sentence.split_whitespace().collect();
        let chars: usize = words.iter().map(|w| w.chars().count()).sum();
        sentence.chars().count() < self.max_chars
            && words.len() > self.min_words
            && chars as f64 / words.len() as f64 >= self.min_avg_word_len
            && self.pattern.is_match(sentence)
            && (!self.lowercase_rest || words.iter().skip(1).all(|w| !w.chars().any(char::is_uppercase)))
    }
}

/// Sentences accepted by every filter, in input order.
pub fn filter_sentences<'a, I>(cfg: &'a FilterConfig, corpus: I) -> impl Iterator<Item = I::Item> + 'a
where
    I: IntoIterator + 'a,
    I::Item: AsRef<str>,
{
    corpus.into_iter().filter(move |s| cfg.accepts(s.as_ref()))
}

/// Lowercase, split on whitespace, and detach trailing commas and periods
/// as their own tokens.
pub fn tokenize(sentence: &str) -> String {
    let mut out: Vec<String> = Vec::new();
    for word in sentence.split_whitespace() {
        let word = word.to_lowercase();
        let body = word.trim_end_matches([',', '.']);
        if !body.is_empty() {
            out.push(body.to_string());
        }
        out.extend(word[body.len()..].chars().map(String::from));
    }
    out.join(" ")
}

/// Whether every token of a tokenized sentence is in the lexicon.
pub fn in_vocabulary(lex: &Lexicon, tokenized: &str) -> bool {
    tokenized.split_whitespace().all(|w| lex.contains(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "Researchers gathered considerable evidence regarding important historical documents, particularly manuscripts.";

    #[test]
    fn accepts_and_rejects() {
        let cfg = FilterConfig::default();
        assert!(cfg.accepts(GOOD), "{}", GOOD.len());
        assert!(!cfg.accepts("The quick brown fox."));
        assert!(!cfg.accepts(&GOOD.replace("important", "123")));
        assert!(!cfg.accepts(&GOOD.replace("important", "Important")));
        assert!(!cfg.accepts(GOOD.trim_end_matches('.')));
        let long = format!("{} {}", GOOD.trim_end_matches('.'), "additionally considerable evidence regarding documents.");
        assert!(long.chars().count() >= 150);
        assert!(!cfg.accepts(&long));
    }

    #[test]
    fn idempotent() {
        let cfg = FilterConfig::default();
        let corpus = [GOOD, "The quick brown fox.", "nope"];
        let once: Vec<&str> = filter_sentences(&cfg, corpus).collect();
        let twice: Vec<&str> = filter_sentences(&cfg, once.clone()).collect();
        assert_eq!(once, [GOOD]);
        assert_eq!(once, twice);
    }

    #[test]
    fn tokenization() {
        assert_eq!(tokenize("The cat, it sat."), "the cat , it sat .");
        assert_eq!(tokenize("  a   b "), "a b");
    }
}
