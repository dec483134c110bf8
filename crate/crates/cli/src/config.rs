//! Flat `key = value` configuration with `LITVAR_*` environment overrides.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use litvar_core::coord::{ChainMap, TranscriptSet};
use litvar_core::gene::{GeneDictionary, SpeciesGate, HUMAN_TAXON};
use litvar_core::index::Resources;

pub const ENV_PREFIX: &str = "LITVAR_";
pub const DEFAULT_LISTEN: &str = "127.0.0.1:8080";
const KEYS: [&str; 7] = [
    "gene_dictionary",
    "transcripts",
    "chains",
    "allowed_taxa",
    "target_assembly",
    "index_dir",
    "listen",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub gene_dictionary: PathBuf,
    pub transcripts: PathBuf,
    pub chains: Option<PathBuf>,
    pub allowed_taxa: BTreeSet<u32>,
    /// Label of the assembly that genomic keys are expressed in.
    pub target_assembly: Option<String>,
    pub index_dir: PathBuf,
    pub listen: String,
}

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", i + 1);
        };
        let key = key.trim().to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            bail!("config line {}: unknown key {key:?}", i + 1);
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

fn parse_taxa(value: &str) -> Result<BTreeSet<u32>> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().with_context(|| format!("bad taxon {s:?}")))
        .collect()
}

impl Config {
    /// Builds a config from file pairs overlaid with environment pairs.
    /// Relative paths resolve against `base`.
    pub fn from_pairs<I>(mut pairs: BTreeMap<String, String>, env: I, base: &Path) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        for (k, v) in env {
            if let Some(key) = k.strip_prefix(ENV_PREFIX) {
                let key = key.to_ascii_lowercase();
                if KEYS.contains(&key.as_str()) {
                    pairs.insert(key, v);
                }
            }
        }
        let path = |key: &str| -> Option<PathBuf> {
            pairs.get(key).filter(|v| !v.is_empty()).map(|v| base.join(v))
        };
        let required = |key: &str| path(key).with_context(|| format!("missing config key {key}"));
        let allowed_taxa = match pairs.get("allowed_taxa") {
            Some(v) => parse_taxa(v)?,
            None => BTreeSet::from([HUMAN_TAXON]),
        };
        Ok(Config {
            gene_dictionary: required("gene_dictionary")?,
            transcripts: required("transcripts")?,
            chains: path("chains"),
            allowed_taxa,
            target_assembly: pairs.get("target_assembly").filter(|v| !v.is_empty()).cloned(),
            index_dir: required("index_dir")?,
            listen: pairs
                .get("listen")
                .filter(|v| !v.is_empty())
                .cloned()
                .unwrap_or_else(|| DEFAULT_LISTEN.to_string()),
        })
    }

    /// Reads `path` (if any) and the process environment, then validates.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let (pairs, base) = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
                (parse_pairs(&text).with_context(|| p.display().to_string())?, base)
            }
            None => (BTreeMap::new(), PathBuf::new()),
        };
        let config = Self::from_pairs(pairs, std::env::vars(), &base)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.allowed_taxa.is_empty() {
            bail!("allowed_taxa is empty");
        }
        let mut files = vec![&self.gene_dictionary, &self.transcripts];
        files.extend(self.chains.as_ref());
        for f in files {
            if !f.is_file() {
                bail!("{} does not exist", f.display());
            }
        }
        Ok(())
    }

    pub fn segment_path(&self) -> PathBuf {
        self.index_dir.join("index.seg")
    }

    pub fn lock_path(&self) -> PathBuf {
        self.index_dir.join("index.lock")
    }

    pub fn resources(&self) -> Result<Resources> {
        let open = |p: &Path| -> Result<BufReader<File>> {
            Ok(BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?))
        };
        let genes = GeneDictionary::from_tsv(open(&self.gene_dictionary)?)
            .with_context(|| self.gene_dictionary.display().to_string())?;
        let transcripts = TranscriptSet::from_tsv(open(&self.transcripts)?)
            .with_context(|| self.transcripts.display().to_string())?;
        let chains = match &self.chains {
            Some(p) => Some(ChainMap::from_tsv(open(p)?).with_context(|| p.display().to_string())?),
            None => None,
        };
        let species = SpeciesGate::new(self.allowed_taxa.clone()).context("allowed_taxa is empty")?;
        Ok(Resources::new(genes, transcripts, chains, species))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides_file_and_paths_are_relative() {
        let pairs = parse_pairs("# c\ngene_dictionary = genes.tsv\ntranscripts=tx.tsv\nindex_dir = idx\nallowed_taxa = 9606, 10090\n").unwrap();
        let env = [
            ("LITVAR_INDEX_DIR".to_string(), "/abs/idx".to_string()),
            ("PATH".to_string(), "/bin".to_string()),
        ];
        let c = Config::from_pairs(pairs, env, Path::new("/etc/lv")).unwrap();
        assert_eq!(c.gene_dictionary, Path::new("/etc/lv/genes.tsv"));
        assert_eq!(c.index_dir, Path::new("/abs/idx"));
        assert_eq!(c.allowed_taxa, BTreeSet::from([9606, 10090]));
        assert_eq!(c.listen, DEFAULT_LISTEN);
        assert_eq!(c.chains, None);
    }

    #[test]
    fn bad_lines_and_missing_keys() {
        assert!(parse_pairs("gene_dictionary").is_err());
        assert!(parse_pairs("colour = red").is_err());
        assert!(Config::from_pairs(BTreeMap::new(), [], Path::new("")).is_err());
        let pairs = parse_pairs("gene_dictionary=a\ntranscripts=b\nindex_dir=c\nallowed_taxa=x").unwrap();
        assert!(Config::from_pairs(pairs, [], Path::new("")).is_err());
    }

    #[test]
    fn empty_taxa_fail_validation() {
        let pairs = parse_pairs("gene_dictionary=a\ntranscripts=b\nindex_dir=c\nallowed_taxa=").unwrap();
        let c = Config::from_pairs(pairs, [], Path::new("")).unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("empty"));
    }
}
