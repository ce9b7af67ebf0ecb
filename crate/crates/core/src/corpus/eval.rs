use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::synth::GoldPlumitif;
use crate::extractor::{extract_entities, EntityScores, EntityTally, TaggerStrategy};
use crate::model::{Entity, EntityLabel, Span, Summary};
use crate::pipeline::Pipeline;
use crate::segmenter::{segment_partial, MarkerTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("corpus is empty")]
    EmptyCorpus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub documents: usize,
    pub scores: EntityScores,
    /// Gold occurrences per label.
    pub occurrences: BTreeMap<EntityLabel, usize>,
}

/// Moves segment-relative spans to document offsets.
fn in_document(base: usize, entities: &[Entity]) -> Vec<Entity> {
    entities
        .iter()
        .map(|e| Entity { span: Span::new(base + e.span.start, base + e.span.end), ..e.clone() })
        .collect()
}

/// Segments each document with `markers`, tags it with `tagger` and scores
/// the result against the gold entities in document coordinates.
pub fn evaluate_extraction(
    corpus: &[GoldPlumitif],
    tagger: &dyn TaggerStrategy,
    markers: &MarkerTable,
) -> Result<ExtractionReport, EvalError> {
    if corpus.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let tally = corpus
        .par_iter()
        .map(|doc| {
            let gold: Vec<Entity> = doc
                .gold_segments
                .iter()
                .zip(&doc.gold_entities)
                .flat_map(|(s, es)| in_document(s.span.start, es))
                .collect();
            let predicted: Vec<Entity> = segment_partial(&doc.raw, markers)
                .map(|d| {
                    d.segments
                        .iter()
                        .flat_map(|s| in_document(s.span.start, &extract_entities(s, tagger)))
                        .collect()
                })
                .unwrap_or_default();
            let mut t = EntityTally::default();
            t.add(&gold, &predicted);
            t
        })
        .reduce(EntityTally::default, |a, b| a.merge(&b));
    let mut occurrences = BTreeMap::new();
    for doc in corpus {
        for e in doc.gold_entities.iter().flatten() {
            *occurrences.entry(e.label).or_insert(0) += 1;
        }
    }
    Ok(ExtractionReport { documents: corpus.len(), scores: tally.scores(), occurrences })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DistrictRates {
    pub documents: usize,
    /// Documents with at least one extraction error.
    pub extraction_errors: usize,
    /// Documents with at least one generation error.
    pub generation_errors: usize,
    pub ee_rate: f64,
    pub ge_rate: f64,
}

impl DistrictRates {
    fn count(&mut self, s: &Summary) {
        self.documents += 1;
        self.extraction_errors += usize::from(s.report.has_extraction_error());
        self.generation_errors += usize::from(s.report.has_generation_error());
    }

    fn finish(mut self) -> Self {
        let n = self.documents.max(1) as f64;
        self.ee_rate = self.extraction_errors as f64 / n;
        self.ge_rate = self.generation_errors as f64 / n;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRateReport {
    pub districts: BTreeMap<String, DistrictRates>,
    /// Pooled over every document.
    pub total: DistrictRates,
    /// Unweighted mean of district rates.
    pub macro_ee_rate: f64,
    pub macro_ge_rate: f64,
}

/// Per-district error rates from `(district, summary)` pairs.
pub fn tally_summaries<'a>(
    summaries: impl IntoIterator<Item = (&'a str, &'a Summary)>,
) -> Result<ErrorRateReport, EvalError> {
    let mut districts: BTreeMap<String, DistrictRates> = BTreeMap::new();
    let mut total = DistrictRates::default();
    for (district, s) in summaries {
        districts.entry(district.to_string()).or_default().count(s);
        total.count(s);
    }
    if total.documents == 0 {
        return Err(EvalError::EmptyCorpus);
    }
    let districts: BTreeMap<_, _> = districts.into_iter().map(|(k, v)| (k, v.finish())).collect();
    let k = districts.len() as f64;
    Ok(ErrorRateReport {
        macro_ee_rate: districts.values().map(|d| d.ee_rate).sum::<f64>() / k,
        macro_ge_rate: districts.values().map(|d| d.ge_rate).sum::<f64>() / k,
        districts,
        total: total.finish(),
    })
}

/// Runs `pipeline` on every document and reports how many had an extraction
/// or a generation error.
pub fn evaluate_error_rates(corpus: &[GoldPlumitif], pipeline: &Pipeline) -> Result<ErrorRateReport, EvalError> {
    let summaries: Vec<Summary> = corpus.par_iter().map(|d| pipeline.summarize_raw(&d.raw)).collect();
    tally_summaries(corpus.iter().map(|d| d.district.as_str()).zip(&summaries))
}

/// `0.0667` as `"6.7%"`.
pub fn format_rate(rate: f64) -> String {
    format!("{:.1}%", rate * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{synthesize, DistrictProfile};
    use crate::extractor::PatternTagger;
    use crate::model::{GenerationReport, Part, PartReport, PartStatus};

    fn summary(statuses: &[PartStatus]) -> Summary {
        Summary {
            report: GenerationReport {
                parts: statuses.iter().map(|&s| PartReport { part: Part::Charge, charge_index: Some(1), status: s, message: None }).collect(),
                warnings: vec![],
            },
            ..Summary::default()
        }
    }

    #[test]
    fn empty_corpus() {
        let t = PatternTagger::default();
        assert_eq!(evaluate_extraction(&[], &t, &MarkerTable::default()), Err(EvalError::EmptyCorpus));
        assert_eq!(evaluate_error_rates(&[], &Pipeline::default()), Err(EvalError::EmptyCorpus));
    }

    #[test]
    fn a_document_counts_once_per_kind() {
        let both = summary(&[PartStatus::ExtractionError, PartStatus::GenerationError, PartStatus::GenerationError]);
        let ok = summary(&[PartStatus::Ok]);
        let r = tally_summaries([("A", &both), ("A", &ok), ("B", &ok), ("B", &ok)]).unwrap();
        assert_eq!(r.districts["A"].extraction_errors, 1);
        assert_eq!(r.districts["A"].generation_errors, 1);
        assert_eq!(r.total.ee_rate, 0.25);
        assert_eq!(r.macro_ge_rate, 0.25);
    }

    #[test]
    fn rate_format() {
        assert_eq!(format_rate(1.0 / 15.0), "6.7%");
        assert_eq!(format_rate(0.0), "0.0%");
        assert_eq!(format_rate(1.0), "100.0%");
    }

    #[test]
    fn oracle_scores_perfectly_per_document() {
        let docs = synthesize(&DistrictProfile::default(), 2, 10).unwrap();
        for d in &docs {
            let r = evaluate_extraction(std::slice::from_ref(d), &d.oracle(), &MarkerTable::default()).unwrap();
            assert_eq!(r.scores.macro_f1, 1.0);
        }
        let r = evaluate_extraction(&docs, &PatternTagger::default(), &MarkerTable::default()).unwrap();
        let gold: usize = docs.iter().map(|d| d.gold_entities.iter().map(Vec::len).sum::<usize>()).sum();
        assert_eq!(r.occurrences.values().sum::<usize>(), gold);
    }
}
