//! TOML job configuration and Japanese lexicon files.
//!
//! Every key is optional; command-line flags override file values.
//!
//! ```toml
//! language = "ja"
//! pair = "noun-gen"
//! object_tightness = "loose"
//! vo_include_copula = true
//! lexicon = "lexicon.toml"
//! seed = 7
//! workers = 4
//!
//! [preprocess]
//! drop_latin_sentences = false
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Deserialize;

use wordorder_core::policy::{JaLexicons, ObjectTightness};
use wordorder_core::preprocess::PreprocessConfig;
use wordorder_core::swap::{CorrelationPair, Language};

/// Lexicon file format version understood by this build.
pub const LEXICON_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreprocessSection {
    pub lowercase: Option<bool>,
    pub remove_punct: Option<bool>,
    pub remove_bracketed: Option<bool>,
    pub drop_latin_sentences: Option<bool>,
}

impl PreprocessSection {
    pub fn apply(&self, language: Language) -> PreprocessConfig {
        let base = PreprocessConfig::for_language(language);
        PreprocessConfig {
            language,
            lowercase: self.lowercase.unwrap_or(base.lowercase),
            remove_punct: self.remove_punct.unwrap_or(base.remove_punct),
            remove_bracketed: self.remove_bracketed.unwrap_or(base.remove_bracketed),
            drop_latin_sentences: self
                .drop_latin_sentences
                .unwrap_or(base.drop_latin_sentences),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub language: Option<Language>,
    pub pair: Option<CorrelationPair>,
    pub object_tightness: Option<ObjectTightness>,
    pub vo_include_copula: Option<bool>,
    pub lexicon: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub preprocess: PreprocessSection,
}

impl JobConfig {
    pub fn load(path: &Path) -> anyhow::Result<JobConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut config: JobConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        // Relative lexicon paths are relative to the config file.
        if let (Some(lex), Some(dir)) = (&config.lexicon, path.parent()) {
            if lex.is_relative() {
                config.lexicon = Some(dir.join(lex));
            }
        }
        Ok(config)
    }
}

pub fn load_lexicons(path: &Path) -> anyhow::Result<JaLexicons> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading lexicon {}", path.display()))?;
    let lex: JaLexicons =
        toml::from_str(&text).with_context(|| format!("parsing lexicon {}", path.display()))?;
    if lex.version != LEXICON_VERSION {
        bail!(
            "lexicon {} has version {}, expected {LEXICON_VERSION}",
            path.display(),
            lex.version
        );
    }
    Ok(lex)
}
