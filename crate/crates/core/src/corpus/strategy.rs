//! Abbreviation strategies: a classifier over observed pairs and a
//! generator of abbreviations for each strategy.
//!
//! Vowels are `a e i o u`; every other character counts as a consonant.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrategyLabel {
    DeleteFinalE,
    DeleteOtherFinalLetter,
    DeleteFinal2,
    DeleteFinal3,
    DeleteFinal4,
    DeleteAllVowels,
    DeleteAllButWordInitialVowel,
    DeleteAllButFirstVowel,
    DeleteAllButFinalVowel,
    DeleteOtherVowelSubset,
    DeleteVowelsAndOther,
    DeleteDuplicatedConsonants,
    DeleteNonDuplicatedConsonants,
    Other,
    Identity,
}

use StrategyLabel::*;

impl StrategyLabel {
    /// Every label that describes an actual abbreviation.
    pub const GENERATIVE: [StrategyLabel; 14] = [
        DeleteFinalE,
        DeleteOtherFinalLetter,
        DeleteFinal2,
        DeleteFinal3,
        DeleteFinal4,
        DeleteAllVowels,
        DeleteAllButWordInitialVowel,
        DeleteAllButFirstVowel,
        DeleteAllButFinalVowel,
        DeleteOtherVowelSubset,
        DeleteVowelsAndOther,
        DeleteDuplicatedConsonants,
        DeleteNonDuplicatedConsonants,
        Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DeleteFinalE => "delete_final_e",
            DeleteOtherFinalLetter => "delete_other_final_letter",
            DeleteFinal2 => "delete_final_2",
            DeleteFinal3 => "delete_final_3",
            DeleteFinal4 => "delete_final_4",
            DeleteAllVowels => "delete_all_vowels",
            DeleteAllButWordInitialVowel => "delete_all_but_word_initial_vowel",
            DeleteAllButFirstVowel => "delete_all_but_first_vowel",
            DeleteAllButFinalVowel => "delete_all_but_final_vowel",
            DeleteOtherVowelSubset => "delete_other_vowel_subset",
            DeleteVowelsAndOther => "delete_vowels_and_other",
            DeleteDuplicatedConsonants => "delete_duplicated_consonants",
            DeleteNonDuplicatedConsonants => "delete_non_duplicated_consonants",
            Other => "other",
            Identity => "identity",
        }
    }

    /// Share of observed abbreviations per strategy, in percent.
    pub fn observed_percent(self) -> f64 {
        match self {
            DeleteFinalE => 12.0,
            DeleteOtherFinalLetter => 2.3,
            DeleteFinal2 => 0.6,
            DeleteFinal3 => 1.2,
            DeleteFinal4 => 1.6,
            DeleteAllVowels => 26.2,
            DeleteAllButWordInitialVowel => 10.9,
            DeleteAllButFirstVowel => 9.3,
            DeleteAllButFinalVowel => 3.8,
            DeleteOtherVowelSubset => 18.1,
            DeleteVowelsAndOther => 3.7,
            DeleteDuplicatedConsonants => 2.0,
            DeleteNonDuplicatedConsonants => 1.2,
            Other => 7.3,
            Identity => 0.0,
        }
    }

    /// Possible abbreviations of `word` under this strategy with their
    /// probabilities. Empty when the strategy does not apply. Every outcome
    /// is a non-empty proper subsequence of `word`.
    pub fn outcomes(self, word: &str) -> Vec<(String, f64)> {
        let w: Vec<char> = word.chars().collect();
        let n = w.len();
        if n < 2 {
            return Vec::new();
        }
        let vowels: Vec<usize> = (0..n).filter(|&i| is_vowel(w[i])).collect();
        let consonants: Vec<usize> = (0..n).filter(|&i| !is_vowel(w[i])).collect();
        let keep_only = |kept: &dyn Fn(usize) -> bool| -> String { (0..n).filter(|&i| kept(i)).map(|i| w[i]).collect() };
        let single = |s: String| vec![(s, 1.0)];
        let uniform = |outs: Vec<String>| -> Vec<(String, f64)> {
            let p = 1.0 / outs.len() as f64;
            outs.into_iter().map(|s| (s, p)).collect()
        };
        let suffix = |k: usize| -> Vec<(String, f64)> {
            if n > k {
                single(w[..n - k].iter().collect())
            } else {
                Vec::new()
            }
        };
        match self {
            DeleteFinalE if w[n - 1] == 'e' => suffix(1),
            DeleteOtherFinalLetter if w[n - 1] != 'e' => suffix(1),
            DeleteFinal2 => suffix(2),
            DeleteFinal3 => suffix(3),
            DeleteFinal4 => suffix(4),
            DeleteAllVowels if !vowels.is_empty() && !consonants.is_empty() => single(keep_only(&|i| !is_vowel(w[i]))),
            DeleteAllButWordInitialVowel if is_vowel(w[0]) && vowels.len() >= 2 => {
                single(keep_only(&|i| !is_vowel(w[i]) || i == 0))
            }
            DeleteAllButFirstVowel if vowels.len() >= 2 && vowels[0] > 0 => {
                single(keep_only(&|i| !is_vowel(w[i]) || i == vowels[0]))
            }
            DeleteAllButFinalVowel if vowels.len() >= 2 => {
                let last = vowels[vowels.len() - 1];
                single(keep_only(&|i| !is_vowel(w[i]) || i == last))
            }
            DeleteOtherVowelSubset if (3..=12).contains(&vowels.len()) => {
                let v = vowels.len();
                let outs: Vec<String> = (1u32..(1 << v) - 1)
                    .filter(|&deleted| {
                        let kept = !deleted & ((1 << v) - 1);
                        kept.count_ones() > 1 || (kept != 1 && kept != 1 << (v - 1))
                    })
                    .map(|deleted| {
                        keep_only(&|i| match vowels.iter().position(|&p| p == i) {
                            Some(k) => deleted >> k & 1 == 0,
                            None => true,
                        })
                    })
                    .collect();
                uniform(outs)
            }
            DeleteVowelsAndOther if !vowels.is_empty() && consonants.len() >= 2 => uniform(
                consonants
                    .iter()
                    .map(|&c| keep_only(&|i| !is_vowel(w[i]) && i != c))
                    .collect(),
            ),
            DeleteDuplicatedConsonants => {
                let dup: Vec<usize> = (1..n).filter(|&i| w[i] == w[i - 1] && !is_vowel(w[i])).collect();
                if dup.is_empty() {
                    Vec::new()
                } else {
                    single(keep_only(&|i| !dup.contains(&i)))
                }
            }
            DeleteNonDuplicatedConsonants => {
                let outs: Vec<String> = (1..n - 1)
                    .filter(|&i| !is_vowel(w[i]) && w[i - 1] != w[i] && w[i + 1] != w[i])
                    .map(|j| keep_only(&|i| i != j))
                    .collect();
                if outs.is_empty() {
                    Vec::new()
                } else {
                    uniform(outs)
                }
            }
            Other if n >= 4 => uniform((1..n - 2).map(|j| keep_only(&|i| i != j && i != j + 1)).collect()),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for StrategyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyLabel::GENERATIVE
            .into_iter()
            .chain([Identity])
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown strategy {s:?}")))
    }
}

pub fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Split `w` at characters satisfying `sep`: the separators in order, and
/// the runs of other characters around them (one more run than separators),
/// each run as a list of indices into `w`.
fn segment(w: &[char], sep: impl Fn(char) -> bool) -> (Vec<char>, Vec<Vec<usize>>) {
    let mut seps = Vec::new();
    let mut runs = vec![Vec::new()];
    for (i, &c) in w.iter().enumerate() {
        if sep(c) {
            seps.push(c);
            runs.push(Vec::new());
        } else {
            runs.last_mut().expect("non-empty").push(i);
        }
    }
    (seps, runs)
}

/// Indices of `e` kept by a deletion that removes only non-separator
/// characters, if one exists. Within each run the leftmost embedding is used.
fn kept_between(a: &[char], e: &[char], sep: impl Fn(char) -> bool + Copy) -> Option<Vec<usize>> {
    let (sa, ra) = segment(a, sep);
    let (se, re) = segment(e, sep);
    if sa != se {
        return None;
    }
    let mut kept: Vec<usize> = (0..e.len()).filter(|&i| sep(e[i])).collect();
    for (run_a, run_e) in ra.iter().zip(&re) {
        let mut it = run_e.iter();
        for &ia in run_a {
            kept.push(*it.find(|&&ie| e[ie] == a[ia])?);
        }
    }
    kept.sort_unstable();
    Some(kept)
}

/// Which strategy turns `e` into `a`. Assumes `a` is a subsequence of `e`.
///
/// Checked in order: identity; suffix deletion; vowel-only deletion; all
/// vowels plus some consonants; consonant-only deletion; anything else.
pub fn classify_strategy(a: &str, e: &str) -> StrategyLabel {
    if a == e {
        return Identity;
    }
    let av: Vec<char> = a.chars().collect();
    let ev: Vec<char> = e.chars().collect();

    if ev.starts_with(&av) {
        return match ev.len() - av.len() {
            1 if ev[ev.len() - 1] == 'e' => DeleteFinalE,
            1 => DeleteOtherFinalLetter,
            2 => DeleteFinal2,
            3 => DeleteFinal3,
            4 => DeleteFinal4,
            _ => Other,
        };
    }

    let vowels: Vec<usize> = (0..ev.len()).filter(|&i| is_vowel(ev[i])).collect();
    if let Some(kept) = kept_between(&av, &ev, |c| !is_vowel(c)) {
        let retained: Vec<usize> = kept.into_iter().filter(|&i| is_vowel(ev[i])).collect();
        return match retained[..] {
            [] => DeleteAllVowels,
            [0] if is_vowel(ev[0]) => DeleteAllButWordInitialVowel,
            [i] if i == vowels[0] => DeleteAllButFirstVowel,
            [i] if i == vowels[vowels.len() - 1] => DeleteAllButFinalVowel,
            _ => DeleteOtherVowelSubset,
        };
    }

    if !vowels.is_empty() && !av.iter().any(|&c| is_vowel(c)) {
        return DeleteVowelsAndOther;
    }

    if let Some(kept) = kept_between(&av, &ev, is_vowel) {
        let mut is_kept = vec![false; ev.len()];
        kept.iter().for_each(|&i| is_kept[i] = true);
        // A deleted consonant is duplicated when its run of identical
        // characters keeps at least one member.
        let duplicated = |j: usize| {
            let c = ev[j];
            let mut lo = j;
            while lo > 0 && ev[lo - 1] == c {
                lo -= 1;
            }
            let mut hi = j;
            while hi + 1 < ev.len() && ev[hi + 1] == c {
                hi += 1;
            }
            (lo..=hi).any(|i| is_kept[i])
        };
        let deleted: Vec<usize> = (0..ev.len()).filter(|&i| !is_kept[i]).collect();
        if deleted.iter().all(|&j| duplicated(j)) {
            return DeleteDuplicatedConsonants;
        }
        if !deleted.iter().any(|&j| duplicated(j)) {
            return DeleteNonDuplicatedConsonants;
        }
    }
    Other
}
