//! Settings from flags, environment and an optional TOML file, in that order
//! of priority.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use plumitif_core::ccc::{parse_ccc_html, ProvisionStore};
use plumitif_core::extractor::PatternTagger;
use plumitif_core::pipeline::{Pipeline, DEFAULT_MAX_INPUT_BYTES};
use plumitif_core::realizer::{DefaultStitcher, MaskedModelStitcher, PrepositionLexicon, RuleTable, StitchStrategy};
use plumitif_core::segmenter::MarkerTable;
use serde::Deserialize;

use crate::fill_mask::HttpFillMask;

pub const ENV_CONFIG: &str = "PLUMITIF_CONFIG";
pub const ENV_STORE: &str = "PLUMITIF_STORE";
pub const ENV_MAX_INPUT_BYTES: &str = "PLUMITIF_MAX_INPUT_BYTES";
pub const ENV_FILL_MASK_URL: &str = "PLUMITIF_FILL_MASK_URL";
pub const DEFAULT_PORT: u16 = 8080;

/// Every setting optional; used for the file, the environment and the flags.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    /// Provision store: `.json` as written by `parse-ccc`, or statute HTML.
    pub store: Option<PathBuf>,
    pub markers: Option<PathBuf>,
    pub tagger_rules: Option<PathBuf>,
    pub templates: Option<PathBuf>,
    pub prepositions: Option<PathBuf>,
    pub max_input_bytes: Option<usize>,
    pub fill_mask_url: Option<String>,
    pub host: Option<String>,
    pub port: Option<u16>,
}

impl Layer {
    /// `self` where set, `lower` elsewhere.
    pub fn over(self, lower: Layer) -> Layer {
        Layer {
            store: self.store.or(lower.store),
            markers: self.markers.or(lower.markers),
            tagger_rules: self.tagger_rules.or(lower.tagger_rules),
            templates: self.templates.or(lower.templates),
            prepositions: self.prepositions.or(lower.prepositions),
            max_input_bytes: self.max_input_bytes.or(lower.max_input_bytes),
            fill_mask_url: self.fill_mask_url.or(lower.fill_mask_url),
            host: self.host.or(lower.host),
            port: self.port.or(lower.port),
        }
    }

    pub fn from_file(path: &Path) -> Result<Layer> {
        let src = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&src).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn from_env(get: impl Fn(&str) -> Option<String>) -> Result<Layer> {
        let max_input_bytes = match get(ENV_MAX_INPUT_BYTES) {
            Some(v) => Some(v.trim().parse().with_context(|| format!("{ENV_MAX_INPUT_BYTES}={v:?}"))?),
            None => None,
        };
        Ok(Layer {
            store: get(ENV_STORE).map(PathBuf::from),
            max_input_bytes,
            fill_mask_url: get(ENV_FILL_MASK_URL),
            ..Layer::default()
        })
    }
}

/// Resolves the effective settings. `config` is the `--config` flag.
pub fn resolve(flags: Layer, config: Option<PathBuf>, get: impl Fn(&str) -> Option<String>) -> Result<Layer> {
    let path = config.or_else(|| get(ENV_CONFIG).map(PathBuf::from));
    let file = match path {
        Some(p) => Layer::from_file(&p)?,
        None => Layer::default(),
    };
    Ok(flags.over(Layer::from_env(get)?.over(file)))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_store(path: &Path) -> Result<ProvisionStore> {
    let src = read(path)?;
    let store = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        ProvisionStore::import_json(&src)?
    } else {
        parse_ccc_html(&src)?
    };
    if store.is_empty() {
        bail!("provision store {} is empty", path.display());
    }
    Ok(store)
}

/// Loads every table named in `settings`; bundled defaults fill the rest.
pub fn build_pipeline(settings: &Layer) -> Result<Pipeline> {
    let store = match &settings.store {
        Some(p) => load_store(p)?,
        None => ProvisionStore::sample().clone(),
    };
    let mut pipeline = Pipeline::with_store(Arc::new(store));
    if let Some(p) = &settings.markers {
        pipeline.markers = MarkerTable::parse(&read(p)?).with_context(|| format!("markers {}", p.display()))?;
    }
    if let Some(p) = &settings.tagger_rules {
        pipeline.tagger = Box::new(PatternTagger::from_json(&read(p)?).with_context(|| format!("tagger rules {}", p.display()))?);
    }
    if let Some(p) = &settings.templates {
        pipeline.rules = RuleTable::from_json(&read(p)?).with_context(|| format!("templates {}", p.display()))?;
    }
    if let Some(p) = &settings.prepositions {
        pipeline.lexicon =
            PrepositionLexicon::from_json(&read(p)?).with_context(|| format!("prepositions {}", p.display()))?;
    }
    pipeline.stitcher = match &settings.fill_mask_url {
        Some(url) => Box::new(MaskedModelStitcher::new(HttpFillMask::new(url), &pipeline.lexicon)) as Box<dyn StitchStrategy>,
        None => Box::new(DefaultStitcher { lexicon: pipeline.lexicon.clone() }),
    };
    pipeline.max_input_bytes = settings.max_input_bytes.unwrap_or(DEFAULT_MAX_INPUT_BYTES);
    if pipeline.max_input_bytes == 0 {
        bail!("max_input_bytes must be positive");
    }
    Ok(pipeline)
}
