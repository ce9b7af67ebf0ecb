//! Choosing the preposition that joins "est accusé" to a charge title.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use super::french::{decapitalize, join_preposition};
use super::template::{TemplateError, Values};
use super::RuleTable;

pub const DEFAULT_PREPOSITIONS: &str = include_str!("../../data/prepositions.json");
pub const FALLBACK_PREPOSITION: &str = "pour";
/// Placeholder standing for the missing preposition in a masked sentence.
pub const MASK: &str = "<mask>";

/// Anything that picks a preposition for a title. `masked` is the full
/// sentence with [`MASK`] where the preposition goes.
pub trait StitchStrategy: Send + Sync {
    fn id(&self) -> &str;
    /// A member of the closed preposition set, or `None` when undecided.
    fn preposition(&self, masked: &str, title: &str) -> Option<String>;
}

/// Lowercase, straight apostrophes, single spaces.
pub fn normalize_title(title: &str) -> String {
    title
        .replace(['’', '`'], "'")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

#[derive(Debug, Deserialize)]
struct RawLexicon {
    version: u32,
    prepositions: Vec<String>,
    titles: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrepositionLexicon {
    closed: BTreeSet<String>,
    titles: BTreeMap<String, String>,
}

impl Default for PrepositionLexicon {
    fn default() -> Self {
        Self::from_json(DEFAULT_PREPOSITIONS).expect("bundled preposition lexicon is valid")
    }
}

impl PrepositionLexicon {
    pub fn from_json(src: &str) -> Result<Self, TemplateError> {
        let raw: RawLexicon = serde_json::from_str(src).map_err(|e| TemplateError::Table(e.to_string()))?;
        if raw.version != 1 {
            return Err(TemplateError::Table(format!("unsupported preposition lexicon version {}", raw.version)));
        }
        let closed: BTreeSet<String> = raw.prepositions.into_iter().collect();
        let mut titles = BTreeMap::new();
        for (k, v) in raw.titles {
            if !closed.contains(&v) {
                return Err(TemplateError::Table(format!("{k:?}: {v:?} is not in the preposition set")));
            }
            if normalize_title(&k) != k {
                return Err(TemplateError::Table(format!("{k:?} is not a normalized title")));
            }
            titles.insert(k, v);
        }
        Ok(Self { closed, titles })
    }

    pub fn is_preposition(&self, p: &str) -> bool {
        self.closed.contains(p)
    }

    pub fn prepositions(&self) -> impl Iterator<Item = &str> {
        self.closed.iter().map(String::as_str)
    }

    pub fn get(&self, title: &str) -> Option<&str> {
        self.titles.get(&normalize_title(title)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.titles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.titles.is_empty()
    }
}

impl StitchStrategy for PrepositionLexicon {
    fn id(&self) -> &str {
        "lexicon"
    }

    fn preposition(&self, _: &str, title: &str) -> Option<String> {
        self.get(title).map(str::to_string)
    }
}

/// Head nouns naming a failure to act; they read as a reason ("pour").
const FAILURE_HEADS: &[&str] = &[
    "bris",
    "contravention",
    "défaut",
    "inobservation",
    "infraction",
    "infractions",
    "manquement",
    "non-respect",
    "omission",
    "refus",
];

/// Grammar rule of thumb on the title's first word.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicStitcher;

impl StitchStrategy for HeuristicStitcher {
    fn id(&self) -> &str {
        "heuristic"
    }

    fn preposition(&self, _: &str, title: &str) -> Option<String> {
        let norm = normalize_title(title);
        let head = norm.split([' ', ',', '\'']).next()?;
        if head.is_empty() || !head.chars().next()?.is_alphabetic() {
            return None;
        }
        let p = if FAILURE_HEADS.contains(&head) { "pour" } else { "de" };
        Some(p.to_string())
    }
}

/// Lexicon first, heuristic for titles it does not know.
#[derive(Debug, Clone, Default)]
pub struct DefaultStitcher {
    pub lexicon: PrepositionLexicon,
}

impl StitchStrategy for DefaultStitcher {
    fn id(&self) -> &str {
        "lexicon+heuristic"
    }

    fn preposition(&self, masked: &str, title: &str) -> Option<String> {
        self.lexicon
            .preposition(masked, title)
            .or_else(|| HeuristicStitcher.preposition(masked, title))
    }
}

/// A masked language model: scored fillers for the single [`MASK`] in the input.
pub trait FillMask: Send + Sync {
    fn fill(&self, masked: &str) -> Result<Vec<(String, f64)>, String>;
}

/// Asks a masked language model and keeps its best answer that belongs to
/// the closed preposition set.
pub struct MaskedModelStitcher<F> {
    model: F,
    closed: BTreeSet<String>,
}

impl<F: FillMask> MaskedModelStitcher<F> {
    pub fn new(model: F, lexicon: &PrepositionLexicon) -> Self {
        Self { model, closed: lexicon.prepositions().map(str::to_string).collect() }
    }
}

impl<F: FillMask> StitchStrategy for MaskedModelStitcher<F> {
    fn id(&self) -> &str {
        "masked-model"
    }

    fn preposition(&self, masked: &str, _: &str) -> Option<String> {
        let mut candidates = self.model.fill(masked).ok()?;
        candidates.sort_by(|a, b| b.1.total_cmp(&a.1));
        candidates.into_iter().find_map(|(token, _)| {
            let t = token.trim().replace('’', "'").to_lowercase();
            let t = if t == "d" { "d'".to_string() } else { t };
            self.closed.contains(&t).then_some(t)
        })
    }
}

/// Outcome of stitching one title.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stitched {
    pub sentence: String,
    pub preposition: String,
    /// Set when the strategy gave no answer and the fallback was used.
    pub warning: Option<String>,
}

/// Realizes `<accused> est accusé <prep> <title>.` with elision applied.
pub fn stitch_title(
    rules: &RuleTable,
    strategy: &dyn StitchStrategy,
    lexicon: &PrepositionLexicon,
    accused: &str,
    title: &str,
) -> Result<Stitched, super::GenerationError> {
    let lowered = decapitalize(title.trim());
    let mut values: Values = [("accused", accused.to_string()), ("preposition", MASK.to_string()), ("title", lowered.clone())]
        .into_iter()
        .collect();
    let masked = rules.stitch.render(&values)?;
    let (prep, warning) = match strategy.preposition(&masked, title).filter(|p| lexicon.is_preposition(p)) {
        Some(p) => (p, None),
        None => (
            FALLBACK_PREPOSITION.to_string(),
            Some(format!("{}: no preposition for {title:?}, used {FALLBACK_PREPOSITION:?}", strategy.id())),
        ),
    };
    let base = if prep == "d'" { "de" } else { prep.as_str() };
    let joined = join_preposition(base, &lowered);
    const SENTINEL: &str = "\u{1}";
    values.insert("preposition", SENTINEL.to_string());
    let rendered = rules.stitch.render(&values)?;
    let adjacent = format!("{SENTINEL} {lowered}");
    let sentence = if rendered.contains(&adjacent) {
        rendered.replacen(&adjacent, &joined, 1)
    } else {
        rendered.replacen(SENTINEL, base, 1)
    };
    Ok(Stitched { sentence, preposition: prep, warning })
}

/// The preposition as it surfaces after elision and contraction.
pub fn surface_preposition(prep: &str, title: &str) -> String {
    let base = if prep == "d'" { "de" } else { prep };
    let joined = join_preposition(base, &decapitalize(title.trim()));
    match joined.strip_prefix("d'") {
        Some(_) => "d'".to_string(),
        None => joined.split(' ').next().unwrap_or_default().to_string(),
    }
}
