//! Entity extraction and normalization.

mod convictions;
mod metrics;
mod normalize;
mod tagger;

pub use convictions::{parse_conviction, rule_count as conviction_rule_count};
pub use metrics::{score_entities, Counts, EntityScores, EntityTally, LabelScore};
pub use normalize::{normalize, normalize_parts, NormalizationError, NormalizedParts};
pub use tagger::{PatternRule, PatternTagger, RulesError, TaggerStrategy, DEFAULT_RULES, RULES_VERSION};

use crate::model::{Entity, Segment};

/// Runs `tagger` on `seg` and returns sorted, disjoint entities whose
/// surfaces are verbatim slices of the segment. Entities that violate
/// that contract are dropped rather than repaired.
pub fn extract_entities(seg: &Segment, tagger: &dyn TaggerStrategy) -> Vec<Entity> {
    let mut entities: Vec<Entity> = tagger
        .tag(seg)
        .into_iter()
        .filter(|e| seg.text.get(e.span.start..e.span.end) == Some(e.surface.as_str()) && !e.span.is_empty())
        .collect();
    entities.sort_by_key(|e| (e.span.start, e.span.end));
    let mut out: Vec<Entity> = Vec::with_capacity(entities.len());
    for e in entities {
        if out.last().is_none_or(|prev| prev.span.end <= e.span.start) {
            out.push(e);
        }
    }
    out
}
