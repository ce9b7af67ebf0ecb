//! Entity-level scoring. A prediction is correct only when both its span
//! and its label equal a gold entity; a span off by a single token is a
//! false positive plus a false negative.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::model::{Entity, EntityLabel, Span};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

impl Counts {
    pub fn support(&self) -> usize {
        self.true_positives + self.false_negatives
    }

    pub fn precision(&self) -> f64 {
        ratio(self.true_positives, self.true_positives + self.false_positives)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.true_positives, self.support())
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold occurrences.
    pub support: usize,
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityScores {
    pub per_label: BTreeMap<EntityLabel, LabelScore>,
    /// Macro averages over labels with gold support.
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

/// Running tally across many segments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityTally {
    counts: BTreeMap<EntityLabel, Counts>,
}

impl EntityTally {
    /// Adds one segment's comparison.
    pub fn add(&mut self, gold: &[Entity], predicted: &[Entity]) {
        let key = |e: &Entity| (e.label, e.span);
        let gold_set: HashSet<(EntityLabel, Span)> = gold.iter().map(key).collect();
        let pred_set: HashSet<(EntityLabel, Span)> = predicted.iter().map(key).collect();
        for &(label, span) in &pred_set {
            let c = self.counts.entry(label).or_default();
            if gold_set.contains(&(label, span)) {
                c.true_positives += 1;
            } else {
                c.false_positives += 1;
            }
        }
        for &(label, span) in &gold_set {
            if !pred_set.contains(&(label, span)) {
                self.counts.entry(label).or_default().false_negatives += 1;
            }
        }
    }

    pub fn merge(mut self, other: &EntityTally) -> Self {
        for (label, c) in &other.counts {
            let e = self.counts.entry(*label).or_default();
            e.true_positives += c.true_positives;
            e.false_positives += c.false_positives;
            e.false_negatives += c.false_negatives;
        }
        self
    }

    pub fn scores(&self) -> EntityScores {
        let per_label: BTreeMap<_, _> = self
            .counts
            .iter()
            .map(|(&label, c)| {
                (
                    label,
                    LabelScore {
                        precision: c.precision(),
                        recall: c.recall(),
                        f1: c.f1(),
                        support: c.support(),
                        counts: *c,
                    },
                )
            })
            .collect();
        let present: Vec<&LabelScore> = per_label.values().filter(|s| s.support > 0).collect();
        let mean = |f: fn(&LabelScore) -> f64| {
            if present.is_empty() {
                0.0
            } else {
                present.iter().map(|s| f(s)).sum::<f64>() / present.len() as f64
            }
        };
        EntityScores {
            macro_precision: mean(|s| s.precision),
            macro_recall: mean(|s| s.recall),
            macro_f1: mean(|s| s.f1),
            per_label,
        }
    }
}

/// Scores one segment's predictions against its gold entities.
pub fn score_entities(gold: &[Entity], predicted: &[Entity]) -> EntityScores {
    let mut tally = EntityTally::default();
    tally.add(gold, predicted);
    tally.scores()
}
