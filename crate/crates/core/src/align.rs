//! Monotonic character alignment of abbreviations to expansions.
//!
//! An alignment of `a` to `e` walks the expansion left to right and emits one
//! [`PairSymbol`] per expansion character: either a copy (`x:x`) consuming
//! the next abbreviation character, or an insertion (`_:x`) that the
//! abbreviation dropped. The set of alignments is exactly the set of
//! embeddings of `a` into `e` as a subsequence.
//!
//! Alignment parameters are a memoryless distribution over pair symbols,
//! fitted with EM (batch or stepwise interpolated). Context comes later from
//! the pair language model trained on Viterbi alignments.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::text::is_subsequence;

/// Ties closer than this (in log space) count as equal.
const TIE_EPS: f64 = 1e-12;

/// One aligned position: an expansion character, and the abbreviation
/// character it was copied from (or none, for an insertion).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairSymbol {
    input: Option<char>,
    output: char,
}

impl PairSymbol {
    pub fn copy(c: char) -> Self {
        PairSymbol {
            input: Some(c),
            output: c,
        }
    }

    pub fn insert(c: char) -> Self {
        PairSymbol {
            input: None,
            output: c,
        }
    }

    pub fn input(self) -> Option<char> {
        self.input
    }

    pub fn output(self) -> char {
        self.output
    }

    pub fn is_insertion(self) -> bool {
        self.input.is_none()
    }
}

fn write_escaped(f: &mut fmt::Formatter<'_>, c: char) -> fmt::Result {
    match c {
        '_' => f.write_str("\\_"),
        '\\' => f.write_str("\\\\"),
        c => write!(f, "{c}"),
    }
}

/// Spelled `x:x` for a copy and `_:x` for an insertion. A literal `_` or
/// `\` is written with a leading backslash.
impl fmt::Display for PairSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.input {
            Some(c) => write_escaped(f, c)?,
            None => f.write_str("_")?,
        }
        f.write_str(":")?;
        write_escaped(f, self.output)
    }
}

impl FromStr for PairSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(0, format!("malformed pair symbol {s:?}"));
        let mut chars = s.chars();
        let mut side = |allow_eps: bool| -> Result<Option<char>> {
            match chars.next().ok_or_else(bad)? {
                '\\' => match chars.next() {
                    Some(c @ ('_' | '\\')) => Ok(Some(c)),
                    _ => Err(bad()),
                },
                '_' if allow_eps => Ok(None),
                '_' => Err(bad()),
                c => Ok(Some(c)),
            }
        };
        let input = side(true)?;
        if side(false)? != Some(':') {
            return Err(bad());
        }
        let output = side(false)?.ok_or_else(bad)?;
        if chars.next().is_some() || input.is_some_and(|i| i != output) {
            return Err(bad());
        }
        Ok(PairSymbol { input, output })
    }
}

/// A complete alignment with its log probability (natural log).
#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    pub symbols: Vec<PairSymbol>,
    pub log_prob: f64,
}

impl Alignment {
    pub fn abbreviation(&self) -> String {
        self.symbols.iter().filter_map(|s| s.input).collect()
    }

    pub fn expansion(&self) -> String {
        self.symbols.iter().map(|s| s.output).collect()
    }
}

impl fmt::Display for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stepwise {
    /// Step size at update k is `(k + 2)^-decay`; use a value in (0.5, 1].
    pub decay: f64,
    pub batch_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmConfig {
    pub max_iters: usize,
    /// Stop when the relative change in corpus log-likelihood drops below this.
    pub tol: f64,
    /// `None` runs batch EM.
    pub stepwise: Option<Stepwise>,
}

impl Default for EmConfig {
    fn default() -> Self {
        EmConfig {
            max_iters: 50,
            tol: 1e-6,
            stepwise: None,
        }
    }
}

/// Memoryless distribution over pair symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignmentModel {
    probs: BTreeMap<PairSymbol, f64>,
    iterations: usize,
    log_likelihood: f64,
    history: Vec<f64>,
}

impl AlignmentModel {
    /// Uniform distribution over `symbols`.
    pub fn uniform(symbols: impl IntoIterator<Item = PairSymbol>) -> Self {
        let mut probs: BTreeMap<PairSymbol, f64> = symbols.into_iter().map(|s| (s, 0.0)).collect();
        let p = 1.0 / probs.len().max(1) as f64;
        probs.values_mut().for_each(|v| *v = p);
        AlignmentModel {
            probs,
            iterations: 0,
            log_likelihood: f64::NAN,
            history: Vec::new(),
        }
    }

    /// Normalize arbitrary non-negative weights into a model.
    pub fn from_weights(weights: impl IntoIterator<Item = (PairSymbol, f64)>) -> Self {
        let mut probs: BTreeMap<PairSymbol, f64> = weights.into_iter().filter(|&(_, w)| w > 0.0).collect();
        let total: f64 = probs.values().sum();
        probs.values_mut().for_each(|v| *v /= total);
        AlignmentModel {
            probs,
            iterations: 0,
            log_likelihood: f64::NAN,
            history: Vec::new(),
        }
    }

    pub fn prob(&self, s: PairSymbol) -> f64 {
        self.probs.get(&s).copied().unwrap_or(0.0)
    }

    pub fn ln_prob(&self, s: PairSymbol) -> f64 {
        self.prob(s).ln()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (PairSymbol, f64)> + '_ {
        self.probs.iter().map(|(&s, &p)| (s, p))
    }

    /// Number of M-steps (or stepwise passes) performed.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Corpus log-likelihood under the final parameters.
    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    /// Corpus log-likelihood before each parameter update, ending with the
    /// final parameters.
    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#iterations\t{}", self.iterations)?;
        writeln!(out, "#log_likelihood\t{}", self.log_likelihood)?;
        for (s, p) in &self.probs {
            writeln!(out, "{s}\t{p}")?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self> {
        let mut model = AlignmentModel::uniform([]);
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            let bad = |m: &str| Error::parse(n + 1, m.to_string());
            let Some((k, v)) = line.split_once('\t') else {
                return Err(bad("expected key<TAB>value"));
            };
            match k {
                "#iterations" => model.iterations = v.parse().map_err(|_| bad("bad count"))?,
                "#log_likelihood" => model.log_likelihood = v.parse().map_err(|_| bad("bad number"))?,
                sym => {
                    let s: PairSymbol = sym.parse().map_err(|_| bad("bad pair symbol"))?;
                    model.probs.insert(s, v.parse().map_err(|_| bad("bad probability"))?);
                }
            }
        }
        Ok(model)
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

struct Lattice {
    a: Vec<char>,
    e: Vec<char>,
}

impl Lattice {
    fn new(a: &str, e: &str) -> Self {
        Lattice {
            a: a.chars().collect(),
            e: e.chars().collect(),
        }
    }

    fn m(&self) -> usize {
        self.a.len()
    }

    fn n(&self) -> usize {
        self.e.len()
    }

    fn can_copy(&self, i: usize, j: usize) -> bool {
        i < self.a.len() && j < self.e.len() && self.a[i] == self.e[j]
    }

    /// Forward log weights: `alpha[i][j]` covers `a[..i]` against `e[..j]`.
    fn forward(&self, lp: &dyn Fn(PairSymbol) -> f64) -> Vec<Vec<f64>> {
        let (m, n) = (self.m(), self.n());
        let mut alpha = vec![vec![f64::NEG_INFINITY; n + 1]; m + 1];
        alpha[0][0] = 0.0;
        for j in 0..n {
            let ins = lp(PairSymbol::insert(self.e[j]));
            let cp = lp(PairSymbol::copy(self.e[j]));
            for i in 0..=m {
                let mut v = alpha[i][j] + ins;
                if i > 0 && self.can_copy(i - 1, j) {
                    v = log_add(v, alpha[i - 1][j] + cp);
                }
                alpha[i][j + 1] = log_add(alpha[i][j + 1], v);
            }
        }
        alpha
    }

    fn backward(&self, lp: &dyn Fn(PairSymbol) -> f64) -> Vec<Vec<f64>> {
        let (m, n) = (self.m(), self.n());
        let mut beta = vec![vec![f64::NEG_INFINITY; n + 1]; m + 1];
        beta[m][n] = 0.0;
        for j in (0..n).rev() {
            let ins = lp(PairSymbol::insert(self.e[j]));
            let cp = lp(PairSymbol::copy(self.e[j]));
            for i in 0..=m {
                let mut v = beta[i][j + 1] + ins;
                if self.can_copy(i, j) {
                    v = log_add(v, beta[i + 1][j + 1] + cp);
                }
                beta[i][j] = v;
            }
        }
        beta
    }

    /// `feasible[i][j]`: `a[i..]` is a subsequence of `e[j..]`.
    fn feasible(&self) -> Vec<Vec<bool>> {
        let (m, n) = (self.m(), self.n());
        let mut f = vec![vec![false; n + 1]; m + 1];
        for j in (0..=n).rev() {
            for i in (0..=m).rev() {
                f[i][j] = if i == m {
                    true
                } else if j == n {
                    false
                } else {
                    f[i][j + 1] || (self.a[i] == self.e[j] && f[i + 1][j + 1])
                };
            }
        }
        f
    }
}

/// Number of complete paths through the alignment lattice of `(a, e)`,
/// i.e. the number of monotonic alignments.
pub fn lattice_path_count(a: &str, e: &str) -> u128 {
    let lat = Lattice::new(a, e);
    let (m, n) = (lat.m(), lat.n());
    let mut paths = vec![vec![0u128; n + 1]; m + 1];
    paths[0][0] = 1;
    for j in 0..n {
        for i in 0..=m {
            let mut v = paths[i][j];
            if i > 0 && lat.can_copy(i - 1, j) {
                v += paths[i - 1][j];
            }
            paths[i][j + 1] += v;
        }
    }
    paths[m][n]
}

/// Posterior expected pair-symbol counts for one pair, with the log of the
/// total probability of all its alignments.
pub fn expected_counts(model: &AlignmentModel, a: &str, e: &str) -> Result<(f64, BTreeMap<PairSymbol, f64>)> {
    check_pair(0, a, e)?;
    let lat = Lattice::new(a, e);
    let lp = |s: PairSymbol| model.ln_prob(s);
    let mut counts = BTreeMap::new();
    let log_z = accumulate(&lat, &lp, 1.0, &mut counts);
    Ok((log_z, counts))
}

fn accumulate(
    lat: &Lattice,
    lp: &dyn Fn(PairSymbol) -> f64,
    weight: f64,
    counts: &mut BTreeMap<PairSymbol, f64>,
) -> f64 {
    let alpha = lat.forward(lp);
    let beta = lat.backward(lp);
    let (m, n) = (lat.m(), lat.n());
    let log_z = alpha[m][n];
    if log_z == f64::NEG_INFINITY {
        return log_z;
    }
    for j in 0..n {
        let ins = PairSymbol::insert(lat.e[j]);
        let cp = PairSymbol::copy(lat.e[j]);
        let (ins_lp, cp_lp) = (lp(ins), lp(cp));
        let mut ins_post = 0.0;
        let mut cp_post = 0.0;
        for i in 0..=m {
            ins_post += (alpha[i][j] + ins_lp + beta[i][j + 1] - log_z).exp();
            if lat.can_copy(i, j) {
                cp_post += (alpha[i][j] + cp_lp + beta[i + 1][j + 1] - log_z).exp();
            }
        }
        if ins_post > 0.0 {
            *counts.entry(ins).or_default() += weight * ins_post;
        }
        if cp_post > 0.0 {
            *counts.entry(cp).or_default() += weight * cp_post;
        }
    }
    log_z
}

fn check_pair(index: usize, a: &str, e: &str) -> Result<()> {
    if a.is_empty() || !is_subsequence(a, e) {
        return Err(Error::NotSubsequence {
            index,
            abbrev: a.to_string(),
            expansion: e.to_string(),
        });
    }
    Ok(())
}

struct Corpus {
    /// Distinct pairs with multiplicities, in sorted order.
    items: Vec<(Lattice, f64)>,
}

impl Corpus {
    fn new<I, A, E>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, E)>,
        A: AsRef<str>,
        E: AsRef<str>,
    {
        let mut types: BTreeMap<(String, String), f64> = BTreeMap::new();
        for (index, (a, e)) in pairs.into_iter().enumerate() {
            let (a, e) = (a.as_ref(), e.as_ref());
            check_pair(index, a, e)?;
            *types.entry((a.to_string(), e.to_string())).or_default() += 1.0;
        }
        if types.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Corpus {
            items: types.into_iter().map(|((a, e), w)| (Lattice::new(&a, &e), w)).collect(),
        })
    }

    /// Every symbol that can occur in some alignment of some pair.
    fn symbols(&self) -> Vec<PairSymbol> {
        let flat = |_: PairSymbol| 0.0;
        let mut seen = BTreeMap::new();
        for (lat, _) in &self.items {
            accumulate(lat, &flat, 1.0, &mut seen);
        }
        seen.into_keys().collect()
    }

    fn e_step(&self, model: &AlignmentModel, range: std::ops::Range<usize>) -> (f64, BTreeMap<PairSymbol, f64>) {
        let lp = |s: PairSymbol| model.ln_prob(s);
        let mut counts = BTreeMap::new();
        let mut ll = 0.0;
        for (lat, w) in &self.items[range] {
            ll += w * accumulate(lat, &lp, *w, &mut counts);
        }
        (ll, counts)
    }
}

fn converged(prev: Option<f64>, ll: f64, tol: f64) -> bool {
    match prev {
        Some(p) => ((ll - p) / p.abs().max(f64::MIN_POSITIVE)).abs() < tol,
        None => false,
    }
}

/// Fit pair-symbol probabilities to `(abbreviation, expansion)` pairs with
/// EM over all monotonic alignments, starting from a uniform distribution
/// over the symbols the corpus can produce.
pub fn em_train<I, A, E>(pairs: I, config: &EmConfig) -> Result<AlignmentModel>
where
    I: IntoIterator<Item = (A, E)>,
    A: AsRef<str>,
    E: AsRef<str>,
{
    let corpus = Corpus::new(pairs)?;
    let mut model = AlignmentModel::uniform(corpus.symbols());
    let all = 0..corpus.items.len();
    let mut history = Vec::new();
    let mut iterations = 0;

    match config.stepwise {
        None => loop {
            let (ll, counts) = corpus.e_step(&model, all.clone());
            let done = converged(history.last().copied(), ll, config.tol) || iterations == config.max_iters;
            history.push(ll);
            if done {
                break;
            }
            model = AlignmentModel::from_weights(counts);
            iterations += 1;
        },
        Some(step) => {
            let batch = step.batch_size.max(1);
            let mut mu: BTreeMap<PairSymbol, f64> = model.symbols().collect();
            let mut updates = 0u32;
            loop {
                let (ll, _) = corpus.e_step(&model, all.clone());
                let done = converged(history.last().copied(), ll, config.tol) || iterations == config.max_iters;
                history.push(ll);
                if done {
                    break;
                }
                for start in (0..corpus.items.len()).step_by(batch) {
                    let end = (start + batch).min(corpus.items.len());
                    let (_, counts) = corpus.e_step(&model, start..end);
                    let total: f64 = counts.values().sum();
                    let eta = (updates as f64 + 2.0).powf(-step.decay);
                    mu.values_mut().for_each(|v| *v *= 1.0 - eta);
                    for (s, c) in counts {
                        *mu.entry(s).or_default() += eta * c / total;
                    }
                    model = AlignmentModel::from_weights(mu.iter().map(|(&s, &v)| (s, v)));
                    updates += 1;
                }
                iterations += 1;
            }
        }
    }

    model.iterations = iterations;
    model.log_likelihood = *history.last().expect("at least one E-step");
    model.history = history;
    Ok(model)
}

/// The most probable alignment of `a` to `e`. Among equally probable
/// alignments the one whose matches come earliest wins.
pub fn viterbi_align(model: &AlignmentModel, a: &str, e: &str) -> Result<Alignment> {
    check_pair(0, a, e)?;
    let lat = Lattice::new(a, e);
    let (m, n) = (lat.m(), lat.n());
    let feasible = lat.feasible();

    // best[i][j]: best log prob of completing from (i, j).
    let mut best = vec![vec![f64::NEG_INFINITY; n + 1]; m + 1];
    best[m][n] = 0.0;
    for j in (0..n).rev() {
        let ins = model.ln_prob(PairSymbol::insert(lat.e[j]));
        let cp = model.ln_prob(PairSymbol::copy(lat.e[j]));
        for i in 0..=m {
            let mut v = f64::NEG_INFINITY;
            if feasible[i][j + 1] {
                v = best[i][j + 1] + ins;
            }
            if lat.can_copy(i, j) && feasible[i + 1][j + 1] {
                v = v.max(best[i + 1][j + 1] + cp);
            }
            best[i][j] = v;
        }
    }

    let mut symbols = Vec::with_capacity(n);
    let mut i = 0;
    for j in 0..n {
        let cp = PairSymbol::copy(lat.e[j]);
        let take_copy = lat.can_copy(i, j) && feasible[i + 1][j + 1] && {
            let via_copy = best[i + 1][j + 1] + model.ln_prob(cp);
            let via_ins = if feasible[i][j + 1] {
                best[i][j + 1] + model.ln_prob(PairSymbol::insert(lat.e[j]))
            } else {
                f64::NEG_INFINITY
            };
            via_copy >= via_ins - TIE_EPS || via_ins == f64::NEG_INFINITY
        };
        if take_copy {
            symbols.push(cp);
            i += 1;
        } else {
            symbols.push(PairSymbol::insert(lat.e[j]));
        }
    }
    debug_assert_eq!(i, m);
    let log_prob = symbols.iter().map(|&s| model.ln_prob(s)).sum();
    Ok(Alignment { symbols, log_prob })
}
