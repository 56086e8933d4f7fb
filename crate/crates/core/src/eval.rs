//! Scoring expansions against references.
//!
//! Each token is classified by comparing the abbreviation `a`, the reference
//! expansion `e` and the hypothesis `h`: it should be expanded iff `a != e`,
//! was expanded iff `h != a`, and is wrong iff `h != e`. Counts are pooled
//! over the corpus before dividing.
//!
//! - WER: wrong / all tokens
//! - OER: expanded but should not have been / tokens that should not be expanded
//! - UER: not expanded but should have been / tokens that should be expanded
//! - IER: expanded to the wrong word / tokens that should be expanded

use std::fmt;

use crate::error::{Error, Result};
use crate::text::{Sentence, SentencePair};

/// A percentage with a flag for an empty denominator (reported as 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rate {
    pub percent: f64,
    pub defined: bool,
}

impl Rate {
    fn of(num: u64, den: u64) -> Self {
        if den == 0 {
            Rate {
                percent: 0.0,
                defined: false,
            }
        } else {
            Rate {
                percent: 100.0 * num as f64 / den as f64,
                defined: true,
            }
        }
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.percent)?;
        if !self.defined {
            f.write_str(" (undefined)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalReport {
    pub sentences: u64,
    pub wrong_sentences: u64,
    pub total: u64,
    pub should_expand: u64,
    pub should_not_expand: u64,
    pub wrong: u64,
    pub overexpansions: u64,
    pub underexpansions: u64,
    pub wrong_expansions: u64,
    /// Character edit distance between hypothesis and reference sentences.
    pub char_edits: u64,
    pub ref_chars: u64,
}

impl EvalReport {
    pub fn wer(&self) -> Rate {
        Rate::of(self.wrong, self.total)
    }

    pub fn oer(&self) -> Rate {
        Rate::of(self.overexpansions, self.should_not_expand)
    }

    pub fn uer(&self) -> Rate {
        Rate::of(self.underexpansions, self.should_expand)
    }

    pub fn ier(&self) -> Rate {
        Rate::of(self.wrong_expansions, self.should_expand)
    }

    /// Character error rate over the space-joined sentences.
    pub fn cer(&self) -> Rate {
        Rate::of(self.char_edits, self.ref_chars)
    }

    /// Share of sentences with at least one wrong token.
    pub fn ser(&self) -> Rate {
        Rate::of(self.wrong_sentences, self.sentences)
    }

    /// Add one scored sentence.
    pub fn add(&mut self, reference: &SentencePair, hyp: &Sentence) {
        let mut any_wrong = false;
        for ((a, e), h) in reference.token_pairs().zip(hyp.iter()) {
            let should = a != e;
            let expanded = h != a;
            let wrong = h != e;
            self.total += 1;
            if should {
                self.should_expand += 1;
            } else {
                self.should_not_expand += 1;
            }
            if wrong {
                self.wrong += 1;
                any_wrong = true;
                match (should, expanded) {
                    (false, true) => self.overexpansions += 1,
                    (true, false) => self.underexpansions += 1,
                    (true, true) => self.wrong_expansions += 1,
                    (false, false) => unreachable!("unexpanded token equal to its reference"),
                }
            }
        }
        self.sentences += 1;
        self.wrong_sentences += u64::from(any_wrong);
        let r: Vec<char> = reference.expanded().to_string().chars().collect();
        let h: Vec<char> = hyp.to_string().chars().collect();
        self.char_edits += edit_distance(&h, &r) as u64;
        self.ref_chars += r.len() as u64;
    }

    /// Pool the counts of another report into this one.
    pub fn merge(&mut self, other: &EvalReport) {
        self.sentences += other.sentences;
        self.wrong_sentences += other.wrong_sentences;
        self.total += other.total;
        self.should_expand += other.should_expand;
        self.should_not_expand += other.should_not_expand;
        self.wrong += other.wrong;
        self.overexpansions += other.overexpansions;
        self.underexpansions += other.underexpansions;
        self.wrong_expansions += other.wrong_expansions;
        self.char_edits += other.char_edits;
        self.ref_chars += other.ref_chars;
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sentences          {}", self.sentences)?;
        writeln!(f, "tokens             {}", self.total)?;
        writeln!(f, "should expand      {}", self.should_expand)?;
        writeln!(f, "should not expand  {}", self.should_not_expand)?;
        writeln!(f, "wrong              {}", self.wrong)?;
        writeln!(f, "overexpansions     {}", self.overexpansions)?;
        writeln!(f, "underexpansions    {}", self.underexpansions)?;
        writeln!(f, "wrong expansions   {}", self.wrong_expansions)?;
        writeln!(f, "WER                {}", self.wer())?;
        writeln!(f, "OER                {}", self.oer())?;
        writeln!(f, "UER                {}", self.uer())?;
        writeln!(f, "IER                {}", self.ier())?;
        writeln!(f, "CER                {}", self.cer())?;
        write!(f, "SER                {}", self.ser())
    }
}

/// Score `hyps` against `refs`, which must align one to one with matching
/// token counts. Errors carry the 1-based sentence number.
pub fn evaluate(refs: &[SentencePair], hyps: &[Sentence]) -> Result<EvalReport> {
    if refs.len() != hyps.len() {
        let line = refs.len().min(hyps.len()) + 1;
        return Err(Error::parse(
            line,
            format!("{} references but {} hypotheses", refs.len(), hyps.len()),
        ));
    }
    let mut report = EvalReport::default();
    for (i, (r, h)) in refs.iter().zip(hyps).enumerate() {
        if r.len() != h.len() {
            return Err(Error::parse(
                i + 1,
                format!("hypothesis has {} tokens, reference has {}", h.len(), r.len()),
            ));
        }
        report.add(r, h);
    }
    Ok(report)
}

fn edit_distance(a: &[char], b: &[char]) -> usize {
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let next = (diag + usize::from(ca != cb)).min(row[j] + 1).min(row[j + 1] + 1);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &str, e: &str) -> SentencePair {
        SentencePair::new(Sentence::parse(a).unwrap(), Sentence::parse(e).unwrap()).unwrap()
    }

    fn sent(s: &str) -> Sentence {
        Sentence::parse(s).unwrap()
    }

    #[test]
    fn worked_example() {
        let r = evaluate(&[pair("th rsn i went", "the reason i went")], &[sent("the season i went")]).unwrap();
        assert_eq!((r.total, r.should_expand, r.should_not_expand), (4, 2, 2));
        assert_eq!(r.wer().percent, 25.0);
        assert_eq!(r.oer().percent, 0.0);
        assert_eq!(r.uer().percent, 0.0);
        assert_eq!(r.ier().percent, 50.0);
        assert_eq!(r.ser().percent, 100.0);
        assert_eq!(r.char_edits, 1);
    }

    #[test]
    fn copy_through_and_perfect() {
        let refs = [pair("th rsn i went", "the reason i went")];
        let copy = evaluate(&refs, &[sent("th rsn i went")]).unwrap();
        assert_eq!(copy.wer().percent, 50.0);
        assert_eq!(copy.uer().percent, 100.0);
        assert_eq!(copy.oer().percent, 0.0);
        assert_eq!(copy.ier().percent, 0.0);

        let perfect = evaluate(&refs, &[sent("the reason i went")]).unwrap();
        for rate in [perfect.wer(), perfect.oer(), perfect.uer(), perfect.ier(), perfect.cer()] {
            assert_eq!(rate.percent, 0.0);
            assert!(rate.defined);
        }
    }

    #[test]
    fn zero_denominators_are_flagged() {
        let r = evaluate(&[pair("a b", "a b")], &[sent("a b")]).unwrap();
        assert!(!r.uer().defined);
        assert_eq!(r.uer().percent, 0.0);
        assert!(r.oer().defined);
        assert!(r.to_string().contains("(undefined)"));
    }

    #[test]
    fn mismatches_name_the_line() {
        let refs = [pair("a", "a"), pair("b c", "b c")];
        match evaluate(&refs, &[sent("a"), sent("b")]) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match evaluate(&refs, &[sent("a")]) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_count_decomposes_and_merge_pools() {
        let refs = [pair("th rsn", "the reason"), pair("a b c", "a b c"), pair("gd", "good")];
        let hyps = [sent("this rsn"), sent("a bb c"), sent("god")];
        let all = evaluate(&refs, &hyps).unwrap();
        assert_eq!(all.wrong, all.overexpansions + all.underexpansions + all.wrong_expansions);
        let mut merged = evaluate(&refs[..1], &hyps[..1]).unwrap();
        merged.merge(&evaluate(&refs[1..], &hyps[1..]).unwrap());
        assert_eq!(merged, all);
        let rev = evaluate(&[refs[2].clone(), refs[0].clone(), refs[1].clone()], &[hyps[2].clone(), hyps[0].clone(), hyps[1].clone()]).unwrap();
        assert_eq!(rev, all);
    }

    #[test]
    fn levenshtein() {
        let d = |a: &str, b: &str| edit_distance(&a.chars().collect::<Vec<_>>(), &b.chars().collect::<Vec<_>>());
        assert_eq!(d("kitten", "sitting"), 3);
        assert_eq!(d("", "abc"), 3);
        assert_eq!(d("abc", "abc"), 0);
    }
}
