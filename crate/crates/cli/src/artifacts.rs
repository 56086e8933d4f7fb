//! Writing and loading trained models with a hash manifest.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unabbrev::pipeline::Models;
use unabbrev::{AlignmentModel, ExpansionMemory, InsertionCostModel, Lexicon, NGramModel, PairChannelModel};

use crate::config::TrainSection;

pub const MANIFEST: &str = "manifest.json";

const FILES: [(&str, &str); 6] = [
    ("lexicon", "lexicon.tsv"),
    ("word_lm", "word_lm.arpa"),
    ("alignment", "alignment.tsv"),
    ("pair_lm", "pair_lm.arpa"),
    ("insertion", "insertion.tsv"),
    ("memory", "memory.tsv"),
];

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format: u32,
    pub train: TrainSection,
    pub artifacts: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn serialize(models: &Models) -> Result<[Vec<u8>; 6]> {
    let mut out: [Vec<u8>; 6] = Default::default();
    models.lexicon.write_tsv(&mut out[0])?;
    models.word_lm.write_arpa(&mut out[1])?;
    models.alignment.write_tsv(&mut out[2])?;
    models.pair.lm().write_arpa(&mut out[3])?;
    models.insertion.write_tsv(&mut out[4])?;
    models.memory.write_tsv(&mut out[5])?;
    Ok(out)
}

/// Write every artifact and the manifest into `dir`.
pub fn save(models: &Models, train: &TrainSection, dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let blobs = serialize(models)?;
    let mut artifacts = Vec::new();
    for ((name, file), blob) in FILES.iter().zip(&blobs) {
        let path = dir.join(file);
        fs::write(&path, blob).with_context(|| format!("writing {}", path.display()))?;
        artifacts.push(Entry {
            name: name.to_string(),
            file: file.to_string(),
            sha256: sha256_hex(blob),
            bytes: blob.len() as u64,
        });
    }
    let manifest = Manifest {
        format: 1,
        train: train.clone(),
        artifacts,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(dir.join(MANIFEST), text)?;
    Ok(manifest)
}

/// Load and integrity-check every artifact listed in `dir`'s manifest.
pub fn load(dir: &Path) -> Result<Models> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let manifest: Manifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if manifest.format != 1 {
        bail!("unsupported manifest format {}", manifest.format);
    }
    let blob = |name: &str| -> Result<Vec<u8>> {
        let entry = manifest
            .artifacts
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| anyhow!("manifest lists no {name} artifact"))?;
        let path = dir.join(&entry.file);
        let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
        let digest = sha256_hex(&bytes);
        if digest != entry.sha256 {
            bail!("{} does not match the manifest (sha256 {digest}, expected {})", path.display(), entry.sha256);
        }
        Ok(bytes)
    };
    let ctx = |name: &'static str| move || format!("loading {name}");
    let lexicon = Lexicon::read_tsv(&blob("lexicon")?[..]).with_context(ctx("lexicon"))?;
    let word_lm = NGramModel::read_arpa(&blob("word_lm")?[..]).with_context(ctx("word model"))?;
    let alignment = AlignmentModel::read_tsv(&blob("alignment")?[..]).with_context(ctx("alignment"))?;
    let pair_lm = NGramModel::read_arpa(&blob("pair_lm")?[..]).with_context(ctx("pair model"))?;
    let insertion = InsertionCostModel::read_tsv(&blob("insertion")?[..]).with_context(ctx("insertion costs"))?;
    let memory = ExpansionMemory::read_tsv(&blob("memory")?[..]).with_context(ctx("memory"))?;
    Ok(Models {
        lexicon,
        word_lm,
        alignment: alignment.clone(),
        pair: PairChannelModel::new(pair_lm, alignment),
        insertion,
        memory,
    })
}
