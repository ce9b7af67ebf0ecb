use regex::Regex;
use serde::Deserialize;
use thiserror::Error;

use crate::model::{Entity, EntityLabel, Segment, SegmentKind, Span};

pub const DEFAULT_RULES: &str = include_str!("../../data/tagger_rules.json");
pub const RULES_VERSION: u32 = 1;

/// Anything that turns a segment into entities.
///
/// Implementations may return entities in any order and with overlaps;
/// [`super::extract_entities`] enforces ordering and disjointness.
pub trait TaggerStrategy: Send + Sync {
    fn id(&self) -> &str;
    fn tag(&self, segment: &Segment) -> Vec<Entity>;
}

#[derive(Debug, Error)]
pub enum RulesError {
    #[error("rules file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported rules version {0} (expected {RULES_VERSION})")]
    Version(u32),
    #[error("rule {name:?}: {source}")]
    Pattern {
        name: String,
        #[source]
        source: regex::Error,
    },
    #[error("rule {0:?}: no segment kinds")]
    NoSegments(String),
}

#[derive(Debug, Deserialize)]
struct RulesFile {
    version: u32,
    rules: Vec<RuleSpec>,
}

#[derive(Debug, Deserialize)]
struct RuleSpec {
    name: String,
    label: EntityLabel,
    pattern: String,
    segments: Vec<SegmentKind>,
    #[serde(default)]
    priority: i32,
}

/// A single labeled pattern. When the pattern has a capture group named
/// `e`, only that group becomes the entity.
#[derive(Debug, Clone)]
pub struct PatternRule {
    pub name: String,
    pub label: EntityLabel,
    pub pattern: Regex,
    pub segments: Vec<SegmentKind>,
    pub priority: i32,
}

impl PatternRule {
    pub fn new(
        name: impl Into<String>,
        label: EntityLabel,
        pattern: &str,
        segments: Vec<SegmentKind>,
        priority: i32,
    ) -> Result<Self, RulesError> {
        let name = name.into();
        if segments.is_empty() {
            return Err(RulesError::NoSegments(name));
        }
        let pattern = Regex::new(pattern).map_err(|source| RulesError::Pattern {
            name: name.clone(),
            source,
        })?;
        Ok(Self {
            name,
            label,
            pattern,
            segments,
            priority,
        })
    }

    fn matches<'a>(&'a self, text: &'a str) -> impl Iterator<Item = Span> + 'a {
        let group = self.pattern.capture_names().flatten().any(|n| n == "e");
        self.pattern.captures_iter(text).filter_map(move |caps| {
            let m = if group { caps.name("e")? } else { caps.get(0)? };
            (!m.is_empty()).then(|| Span::new(m.start(), m.end()))
        })
    }
}

/// Deterministic regular-expression tagger.
#[derive(Debug, Clone)]
pub struct PatternTagger {
    id: String,
    rules: Vec<PatternRule>,
}

impl Default for PatternTagger {
    fn default() -> Self {
        Self::from_json(DEFAULT_RULES).expect("bundled tagger rules are valid")
    }
}

impl PatternTagger {
    pub fn new(id: impl Into<String>, rules: Vec<PatternRule>) -> Self {
        Self { id: id.into(), rules }
    }

    pub fn from_json(src: &str) -> Result<Self, RulesError> {
        let file: RulesFile = serde_json::from_str(src)?;
        if file.version != RULES_VERSION {
            return Err(RulesError::Version(file.version));
        }
        let rules = file
            .rules
            .into_iter()
            .map(|r| PatternRule::new(r.name, r.label, &r.pattern, r.segments, r.priority))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(format!("pattern-v{RULES_VERSION}"), rules))
    }

    pub fn rules(&self) -> &[PatternRule] {
        &self.rules
    }
}

impl TaggerStrategy for PatternTagger {
    fn id(&self) -> &str {
        &self.id
    }

    fn tag(&self, segment: &Segment) -> Vec<Entity> {
        let mut candidates: Vec<(i32, EntityLabel, Span)> = self
            .rules
            .iter()
            .filter(|r| r.segments.contains(&segment.kind))
            .flat_map(|r| r.matches(&segment.text).map(move |s| (r.priority, r.label, s)))
            .collect();
        // Higher priority, then longer, then earlier.
        candidates.sort_by(|a, b| {
            b.0.cmp(&a.0)
                .then(b.2.len().cmp(&a.2.len()))
                .then(a.2.start.cmp(&b.2.start))
        });
        let mut kept: Vec<Entity> = Vec::new();
        for (_, label, span) in candidates {
            if kept.iter().all(|e| !e.span.overlaps(&span)) {
                kept.push(Entity {
                    label,
                    span,
                    surface: segment.text[span.start..span.end].to_string(),
                });
            }
        }
        kept.sort_by_key(|e| e.span.start);
        kept
    }
}
