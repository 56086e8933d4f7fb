//! Subsequence channel: insertion costs plus candidate filtering heuristics.
//!
//! The cost of expanding `a` to `e` is the cheapest way to insert the
//! characters of `e` that `a` lacks. Each inserted character is charged by
//! position class: before the first kept character (initial), after the last
//! one (final), or in between (internal). Copies are free, so `a -> a`
//! costs exactly zero.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::align::{viterbi_align, AlignmentModel};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::text::{is_subsequence, Token};

use super::{Candidate, CandidateFlags, CandidateSet, Channel};

/// Cost charged for a character never seen inserted in its class: ln 10^6.
pub const DEFAULT_INSERTION_COST: f64 = 13.815510557964274;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InsertionClass {
    Initial,
    Internal,
    Final,
}

impl InsertionClass {
    pub const ALL: [InsertionClass; 3] = [InsertionClass::Initial, InsertionClass::Internal, InsertionClass::Final];

    /// Class of an insertion made after `matched` of `len` abbreviation
    /// characters have been consumed.
    pub fn at(matched: usize, len: usize) -> Self {
        if matched == 0 {
            InsertionClass::Initial
        } else if matched == len {
            InsertionClass::Final
        } else {
            InsertionClass::Internal
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for InsertionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InsertionClass::Initial => "initial",
            InsertionClass::Internal => "internal",
            InsertionClass::Final => "final",
        })
    }
}

impl FromStr for InsertionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "initial" => Ok(InsertionClass::Initial),
            "internal" => Ok(InsertionClass::Internal),
            "final" => Ok(InsertionClass::Final),
            _ => Err(Error::parse(0, format!("unknown insertion class {s:?}"))),
        }
    }
}

/// Per-class insertion costs (negative natural log probabilities).
#[derive(Clone, Debug, PartialEq)]
pub struct InsertionCostModel {
    costs: [BTreeMap<char, f64>; 3],
    default_cost: f64,
}

impl Default for InsertionCostModel {
    fn default() -> Self {
        InsertionCostModel {
            costs: Default::default(),
            default_cost: DEFAULT_INSERTION_COST,
        }
    }
}

impl InsertionCostModel {
    /// Maximum-likelihood estimates from insertion counts per class.
    pub fn from_counts(counts: &[BTreeMap<char, u64>; 3]) -> Self {
        let mut model = InsertionCostModel::default();
        for (class, level) in counts.iter().enumerate() {
            let total: u64 = level.values().sum();
            for (&c, &n) in level {
                if n > 0 {
                    model.costs[class].insert(c, -(n as f64 / total as f64).ln());
                }
            }
        }
        model
    }

    /// Viterbi-align each pair and count the inserted characters by class.
    pub fn estimate<I, A, E>(pairs: I, alignment: &AlignmentModel) -> Result<Self>
    where
        I: IntoIterator<Item = (A, E)>,
        A: AsRef<str>,
        E: AsRef<str>,
    {
        let mut counts: [BTreeMap<char, u64>; 3] = Default::default();
        for (index, (a, e)) in pairs.into_iter().enumerate() {
            let (a, e) = (a.as_ref(), e.as_ref());
            if a == e {
                continue;
            }
            let path = viterbi_align(alignment, a, e).map_err(|err| match err {
                Error::NotSubsequence { abbrev, expansion, .. } => Error::NotSubsequence {
                    index,
                    abbrev,
                    expansion,
                },
                other => other,
            })?;
            let len = a.chars().count();
            let mut matched = 0;
            for s in &path.symbols {
                if s.is_insertion() {
                    *counts[InsertionClass::at(matched, len).index()].entry(s.output()).or_default() += 1;
                } else {
                    matched += 1;
                }
            }
        }
        Ok(InsertionCostModel::from_counts(&counts))
    }

    pub fn with_default_cost(mut self, cost: f64) -> Self {
        self.default_cost = cost;
        self
    }

    pub fn default_cost(&self) -> f64 {
        self.default_cost
    }

    pub fn cost(&self, class: InsertionClass, c: char) -> f64 {
        self.costs[class.index()].get(&c).copied().unwrap_or(self.default_cost)
    }

    /// Observed characters of a class with their probabilities.
    pub fn distribution(&self, class: InsertionClass) -> impl Iterator<Item = (char, f64)> + '_ {
        self.costs[class.index()].iter().map(|(&c, &v)| (c, (-v).exp()))
    }

    /// Cheapest total insertion cost over all embeddings of `a` in `e`.
    pub fn score(&self, a: &str, e: &str) -> Result<f64> {
        if a.is_empty() || !is_subsequence(a, e) {
            return Err(Error::NotSubsequence {
                index: 0,
                abbrev: a.to_string(),
                expansion: e.to_string(),
            });
        }
        if a == e {
            return Ok(0.0);
        }
        let a: Vec<char> = a.chars().collect();
        let e: Vec<char> = e.chars().collect();
        let m = a.len();
        // cost[i]: best cost having matched a[..i] against the prefix so far.
        let mut cost = vec![f64::INFINITY; m + 1];
        cost[0] = 0.0;
        for &c in &e {
            let mut next = vec![f64::INFINITY; m + 1];
            for i in 0..=m {
                if cost[i].is_infinite() {
                    continue;
                }
                let ins = cost[i] + self.cost(InsertionClass::at(i, m), c);
                next[i] = next[i].min(ins);
                if i < m && a[i] == c {
                    next[i + 1] = next[i + 1].min(cost[i]);
                }
            }
            cost = next;
        }
        Ok(cost[m])
    }

    /// `class<TAB>char<TAB>neg_log_prob` lines, preceded by the default cost.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#default\t{}", self.default_cost)?;
        for class in InsertionClass::ALL {
            for (c, v) in &self.costs[class.index()] {
                writeln!(out, "{class}\t{c}\t{v}")?;
            }
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self> {
        let mut model = InsertionCostModel::default();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            let bad = |m: &str| Error::parse(n + 1, m.to_string());
            let fields: Vec<&str> = line.split('\t').collect();
            match fields[..] {
                ["#default", v] => model.default_cost = v.parse().map_err(|_| bad("bad default cost"))?,
                [class, c, v] => {
                    let class: InsertionClass = class.parse().map_err(|_| bad("bad class"))?;
                    let mut chars = c.chars();
                    let (Some(ch), None) = (chars.next(), chars.next()) else {
                        return Err(bad("expected a single character"));
                    };
                    let v: f64 = v.parse().map_err(|_| bad("bad cost"))?;
                    if v.is_nan() || v < 0.0 {
                        return Err(bad("costs must be non-negative"));
                    }
                    model.costs[class.index()].insert(ch, v);
                }
                _ => return Err(bad("expected class<TAB>char<TAB>cost")),
            }
        }
        Ok(model)
    }
}

/// Expansions observed for each abbreviation in training, with counts.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpansionMemory {
    map: BTreeMap<String, BTreeMap<String, u64>>,
}

impl ExpansionMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, A, E>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, E)>,
        A: AsRef<str>,
        E: AsRef<str>,
    {
        let mut mem = ExpansionMemory::new();
        for (index, (a, e)) in pairs.into_iter().enumerate() {
            mem.add(a.as_ref(), e.as_ref(), 1).map_err(|err| match err {
                Error::NotSubsequence { abbrev, expansion, .. } => Error::NotSubsequence {
                    index,
                    abbrev,
                    expansion,
                },
                other => other,
            })?;
        }
        Ok(mem)
    }

    pub fn add(&mut self, a: &str, e: &str, count: u64) -> Result<()> {
        if a.is_empty() || !is_subsequence(a, e) {
            return Err(Error::NotSubsequence {
                index: 0,
                abbrev: a.to_string(),
                expansion: e.to_string(),
            });
        }
        *self.map.entry(a.to_string()).or_default().entry(e.to_string()).or_default() += count;
        Ok(())
    }

    /// Expansions of `a` in alphabetical order.
    pub fn get(&self, a: &str) -> impl Iterator<Item = (&str, u64)> {
        self.map
            .get(a)
            .into_iter()
            .flat_map(|m| m.iter().map(|(e, &c)| (e.as_str(), c)))
    }

    pub fn contains(&self, a: &str, e: &str) -> bool {
        self.map.get(a).is_some_and(|m| m.contains_key(e))
    }

    /// Number of distinct (abbreviation, expansion) entries.
    pub fn len(&self) -> usize {
        self.map.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `abbrev<TAB>expansion<TAB>count` lines, sorted.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        for (a, es) in &self.map {
            for (e, c) in es {
                writeln!(out, "{a}\t{e}\t{c}")?;
            }
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self> {
        let mut mem = ExpansionMemory::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            let bad = |m: &str| Error::parse(n + 1, m.to_string());
            let fields: Vec<&str> = line.split('\t').collect();
            let [a, e, c] = fields[..] else {
                return Err(bad("expected abbrev<TAB>expansion<TAB>count"));
            };
            let c: u64 = c.parse().map_err(|_| bad("bad count"))?;
            mem.add(a, e, c).map_err(|_| bad("abbreviation is not a subsequence of its expansion"))?;
        }
        Ok(mem)
    }
}

/// Which filtering steps [`generate_candidates`] applies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubseqConfig {
    /// Keep only the identity candidate for in-lexicon tokens.
    pub lexblock: bool,
    /// Add remembered expansions and exempt them from every filter.
    pub memory: bool,
    /// Drop candidates that contain another candidate as a substring.
    pub subblock: bool,
    /// Drop non-identity candidates costing more than this multiple of the
    /// cheapest non-identity candidate.
    pub prune_ratio: Option<f64>,
    pub max_candidates: Option<usize>,
}

impl Default for SubseqConfig {
    fn default() -> Self {
        SubseqConfig {
            lexblock: true,
            memory: true,
            subblock: true,
            prune_ratio: Some(2.0),
            max_candidates: Some(8),
        }
    }
}

impl SubseqConfig {
    /// No heuristics, but cost pruning and truncation on.
    pub fn plain() -> Self {
        SubseqConfig {
            lexblock: false,
            memory: false,
            subblock: false,
            ..Self::default()
        }
    }

    /// Every lexicon supersequence, unfiltered.
    pub fn unpruned() -> Self {
        SubseqConfig {
            prune_ratio: None,
            max_candidates: None,
            ..Self::plain()
        }
    }
}

/// Candidate set for `a` under the subsequence channel.
///
/// Steps, in order: lexicon supersequences (plus remembered expansions);
/// LexBlock; SubBlock; cost pruning; truncation to the cheapest
/// `max_candidates` (remembered expansions first); copy-through if nothing
/// is left. Remembered expansions survive every filter.
pub fn generate_candidates(
    cfg: &SubseqConfig,
    costs: &InsertionCostModel,
    lex: &Lexicon,
    mem: &ExpansionMemory,
    a: &Token,
) -> CandidateSet {
    let score = |w: &str| costs.score(a, w).expect("candidates are supersequences");
    let mut candidates: Vec<Candidate> = lex
        .supersequence_ids(a)
        .into_iter()
        .map(|id| Candidate::new(lex.word(id), score(lex.word(id)), Some(id)))
        .collect();
    let mut protected: HashSet<String> = HashSet::new();
    if cfg.memory {
        for (e, _) in mem.get(a) {
            protected.insert(e.to_string());
            if !candidates.iter().any(|c| c.word == e) {
                candidates.push(Candidate::new(e, score(e), lex.id(e)));
            }
        }
    }
    let mut set = CandidateSet::new(a.clone(), candidates);
    let keep = |c: &Candidate| protected.contains(&c.word);

    if cfg.lexblock && lex.contains(a) {
        let before = set.len();
        set.candidates.retain(|c| c.word == a.as_str() || keep(c));
        set.flags.lexblock = set.len() < before;
    }

    if cfg.subblock {
        let words: Vec<String> = set.words().map(str::to_string).collect();
        let before = set.len();
        set.candidates.retain(|c| {
            keep(c) || !words.iter().any(|w| w.len() < c.word.len() && c.word.contains(w.as_str()))
        });
        set.flags.subblock_removed = before - set.len();
    }

    if let Some(ratio) = cfg.prune_ratio {
        let best = set
            .candidates
            .iter()
            .filter(|c| c.word != a.as_str())
            .map(|c| c.cost)
            .fold(f64::INFINITY, f64::min);
        let before = set.len();
        set.candidates
            .retain(|c| c.word == a.as_str() || keep(c) || c.cost <= ratio * best);
        set.flags.pruned = before - set.len();
    }

    if let Some(k) = cfg.max_candidates {
        if set.len() > k {
            let before = set.len();
            let (mut kept, rest): (Vec<Candidate>, Vec<Candidate>) = set.candidates.drain(..).partition(keep);
            kept.truncate(k);
            let room = k - kept.len();
            kept.extend(rest.into_iter().take(room));
            kept.sort_by(Candidate::rank);
            set.candidates = kept;
            set.flags.truncated = before - set.len();
        }
    }

    set.flags.memory_hits = set.candidates.iter().filter(|c| keep(c)).count();
    if set.is_empty() {
        let flags = set.flags;
        set = CandidateSet::copy_through(a.clone());
        set.flags = CandidateFlags {
            copy_through: true,
            ..flags
        };
    }
    set
}

/// [`generate_candidates`] bound to its models.
#[derive(Clone, Copy, Debug)]
pub struct SubseqChannel<'a> {
    pub costs: &'a InsertionCostModel,
    pub lexicon: &'a Lexicon,
    pub memory: &'a ExpansionMemory,
    pub config: SubseqConfig,
}

impl Channel for SubseqChannel<'_> {
    fn candidates(&self, token: &Token) -> CandidateSet {
        generate_candidates(&self.config, self.costs, self.lexicon, self.memory, token)
    }
}
