//! The TOML run configuration.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use unabbrev::align::EmConfig;
use unabbrev::pipeline::{ChannelKind, DecodeConfig, TrainConfig};
use unabbrev::SubseqConfig;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub paths: Paths,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub decode: DecodeSection,
}

/// Relative paths are resolved against the config file's directory.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    /// Directory holding trained artifacts and the manifest.
    pub models: PathBuf,
    /// Training pairs, `abbreviated<TAB>expanded` per line.
    pub pairs: Option<PathBuf>,
    /// Word model corpus, one tokenized sentence per line. Defaults to the
    /// expanded side of `pairs`.
    pub corpus: Option<PathBuf>,
    /// Lexicon TSV (`word<TAB>id<TAB>count`) replacing the one built from
    /// the corpus.
    pub lexicon: Option<PathBuf>,
    /// Development pairs for `ablate`.
    pub dev: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub word_order: usize,
    pub pair_order: usize,
    pub prune_threshold: f64,
    pub min_count: u64,
    pub em_iters: usize,
    pub em_tol: f64,
}

impl Default for TrainSection {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainSection {
            word_order: t.word_order,
            pair_order: t.pair_order,
            prune_threshold: t.prune_threshold,
            min_count: t.min_count,
            em_iters: t.em.max_iters,
            em_tol: t.em.tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelName {
    Pair,
    Subsequence,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecodeSection {
    pub channel: ChannelName,
    /// Beam width; 0 decodes exactly.
    pub beam: usize,
    pub weight: f64,
    pub max_candidates: usize,
    /// 0 disables cost pruning.
    pub prune_ratio: f64,
    pub lexblock: bool,
    pub memory: bool,
    pub subblock: bool,
    /// Candidate limit for the pair channel; 0 keeps all.
    pub pair_top_k: usize,
}

impl Default for DecodeSection {
    fn default() -> Self {
        DecodeSection {
            channel: ChannelName::Pair,
            beam: 20,
            weight: 1.0,
            max_candidates: 8,
            prune_ratio: 2.0,
            lexblock: true,
            memory: true,
            subblock: true,
            pair_top_k: 0,
        }
    }
}

impl RunConfig {
    /// Parse, resolve relative paths and check value ranges.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.paths.resolve(base);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Every input path named in the config must exist.
    pub fn check_inputs(&self) -> Result<()> {
        let p = &self.paths;
        for (key, path) in [("pairs", &p.pairs), ("corpus", &p.corpus), ("lexicon", &p.lexicon), ("dev", &p.dev)] {
            if let Some(path) = path {
                if !path.is_file() {
                    bail!("paths.{key}: {} does not exist", path.display());
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let t = &self.train;
        if t.word_order == 0 || t.pair_order == 0 {
            bail!("train: n-gram orders must be at least 1");
        }
        let d = &self.decode;
        if !(d.weight.is_finite() && d.weight >= 0.0) {
            bail!("decode.weight must be a non-negative number");
        }
        if d.prune_ratio != 0.0 && d.prune_ratio < 1.0 {
            bail!("decode.prune_ratio must be 0 (off) or at least 1");
        }
        Ok(())
    }

    pub fn train_config(&self) -> TrainConfig {
        let t = &self.train;
        TrainConfig {
            word_order: t.word_order,
            pair_order: t.pair_order,
            prune_threshold: t.prune_threshold,
            min_count: t.min_count,
            em: EmConfig {
                max_iters: t.em_iters,
                tol: t.em_tol,
                stepwise: None,
            },
        }
    }

    pub fn decode_config(&self) -> DecodeConfig {
        let d = &self.decode;
        let nonzero = |n: usize| (n > 0).then_some(n);
        DecodeConfig {
            channel: match d.channel {
                ChannelName::Pair => ChannelKind::Pair,
                ChannelName::Subsequence => ChannelKind::Subsequence,
            },
            subseq: SubseqConfig {
                lexblock: d.lexblock,
                memory: d.memory,
                subblock: d.subblock,
                prune_ratio: (d.prune_ratio > 0.0).then_some(d.prune_ratio),
                max_candidates: nonzero(d.max_candidates),
            },
            pair_top_k: nonzero(d.pair_top_k),
            beam: nonzero(d.beam),
            weight: d.weight,
        }
    }
}

impl Paths {
    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.models);
        for p in [&mut self.pairs, &mut self.corpus, &mut self.lexicon, &mut self.dev].into_iter().flatten() {
            fix(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_sections() {
        let cfg: RunConfig = toml::from_str("[paths]\nmodels = \"m\"\n").unwrap();
        assert_eq!(cfg.decode.beam, 20);
        assert_eq!(cfg.decode.max_candidates, 8);
        assert_eq!(cfg.decode.prune_ratio, 2.0);
        assert_eq!(cfg.train.word_order, 3);
        assert_eq!(cfg.train.pair_order, 4);
        let d = cfg.decode_config();
        assert_eq!(d.beam, Some(20));
        assert_eq!(d.subseq, SubseqConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("[paths]\nmodels = \"m\"\nextra = 1\n").is_err());
        assert!(toml::from_str::<RunConfig>("[paths]\nmodels = \"m\"\n[decode]\nbeem = 3\n").is_err());
        assert!(toml::from_str::<RunConfig>("[paths]\nmodels = \"m\"\n[decode]\nchannel = \"lstm\"\n").is_err());
    }

    #[test]
    fn zero_means_off() {
        let cfg: RunConfig =
            toml::from_str("[paths]\nmodels = \"m\"\n[decode]\nbeam = 0\nprune_ratio = 0\nmax_candidates = 0\n").unwrap();
        let d = cfg.decode_config();
        assert_eq!(d.beam, None);
        assert_eq!(d.subseq.prune_ratio, None);
        assert_eq!(d.subseq.max_candidates, None);
    }
}
