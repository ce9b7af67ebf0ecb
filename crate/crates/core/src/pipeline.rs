//! Docket text to [`Summary`], end to end.

use std::sync::Arc;

use thiserror::Error;

use crate::ccc::ProvisionStore;
use crate::extractor::{extract_entities, normalize_parts, NormalizationError, NormalizedParts, PatternTagger, TaggerStrategy};
use crate::model::{ModelError, RawPlumitif, SegmentKind, Summary};
use crate::realizer::{DefaultStitcher, PrepositionLexicon, Realizer, RuleTable, StitchStrategy};
use crate::segmenter::{segment_partial, MarkerTable};

pub const DEFAULT_MAX_INPUT_BYTES: usize = 64 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("input is empty")]
    Empty,
    #[error("input is {size} bytes, limit is {limit}")]
    InputTooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Invalid(ModelError),
}

pub struct Pipeline {
    pub markers: MarkerTable,
    pub tagger: Box<dyn TaggerStrategy>,
    pub rules: RuleTable,
    pub lexicon: PrepositionLexicon,
    pub stitcher: Box<dyn StitchStrategy>,
    pub store: Arc<ProvisionStore>,
    pub max_input_bytes: usize,
}

impl Default for Pipeline {
    fn default() -> Self {
        Self::with_store(Arc::new(ProvisionStore::sample().clone()))
    }
}

impl Pipeline {
    /// Bundled markers, rules and strategies over `store`.
    pub fn with_store(store: Arc<ProvisionStore>) -> Self {
        let lexicon = PrepositionLexicon::default();
        Self {
            markers: MarkerTable::default(),
            tagger: Box::new(PatternTagger::default()),
            rules: RuleTable::default(),
            stitcher: Box::new(DefaultStitcher { lexicon: lexicon.clone() }),
            lexicon,
            store,
            max_input_bytes: DEFAULT_MAX_INPUT_BYTES,
        }
    }

    pub fn realizer(&self) -> Realizer<'_> {
        Realizer::new(&self.rules, &self.store, &self.lexicon, self.stitcher.as_ref())
    }

    /// Checks size and content, then summarizes.
    pub fn summarize(&self, text: &str) -> Result<Summary, PipelineError> {
        if text.len() > self.max_input_bytes {
            return Err(PipelineError::InputTooLarge { size: text.len(), limit: self.max_input_bytes });
        }
        let raw = RawPlumitif::new(text).map_err(|e| match e {
            ModelError::EmptyDocument => PipelineError::Empty,
            e => PipelineError::Invalid(e),
        })?;
        Ok(self.summarize_raw(&raw))
    }

    pub fn summarize_raw(&self, raw: &RawPlumitif) -> Summary {
        self.summarize_with(raw, self.tagger.as_ref())
    }

    /// Same as [`Pipeline::summarize_raw`] with another tagger.
    pub fn summarize_with(&self, raw: &RawPlumitif, tagger: &dyn TaggerStrategy) -> Summary {
        self.realizer().realize_parts(&self.normalize_with(raw, tagger))
    }

    pub fn normalize_with(&self, raw: &RawPlumitif, tagger: &dyn TaggerStrategy) -> NormalizedParts {
        match segment_partial(raw, &self.markers) {
            Ok(doc) => {
                let tagged: Vec<_> = doc.segments.iter().map(|s| (s.clone(), extract_entities(s, tagger))).collect();
                normalize_parts(&tagged)
            }
            Err(e) => {
                let fail = |kind| NormalizationError::new(kind, e.to_string());
                NormalizedParts {
                    accused: Err(fail(SegmentKind::Accused)),
                    plaintiff: Err(fail(SegmentKind::Plaintiff)),
                    charges: Err(fail(SegmentKind::Charges)),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Part, PartStatus};

    const DOC: &str = "DISTRICT: QUÉBEC  DOSSIER: 200-01-000001-201\n\
ACC. John Doe\n\
POURS. Directeur des poursuites criminelles et pénales\n\
CHEFS\nCH. 1  C.CR. 266\n     VOIES DE FAIT\n     PLAID. COUPABLE 02/03/2020\n";

    #[test]
    fn summarizes_a_small_docket() {
        let s = Pipeline::default().summarize(DOC).unwrap();
        assert!(!s.report.has_extraction_error() && !s.report.has_generation_error(), "{:?}", s.report);
        assert_eq!(s.accused_paragraph.as_deref(), Some("L'accusé dans ce dossier est John Doe."));
        assert!(s.charge_paragraphs[0].as_deref().unwrap().starts_with("John Doe est accusé de voies de fait."));
    }

    #[test]
    fn input_errors() {
        let p = Pipeline { max_input_bytes: 10, ..Pipeline::default() };
        assert_eq!(p.summarize(DOC), Err(PipelineError::InputTooLarge { size: DOC.len(), limit: 10 }));
        assert_eq!(Pipeline::default().summarize("  \n"), Err(PipelineError::Empty));
        assert!(matches!(Pipeline::default().summarize("ACC. a\u{7}"), Err(PipelineError::Invalid(_))));
    }

    #[test]
    fn missing_and_duplicate_parts_are_extraction_errors() {
        let s = Pipeline::default().summarize("ACC. John Doe\n").unwrap();
        assert_eq!(s.report.status_of(Part::Accused, None), Some(PartStatus::Ok));
        assert_eq!(s.report.status_of(Part::Plaintiff, None), Some(PartStatus::ExtractionError));
        assert_eq!(s.report.status_of(Part::Charges, None), Some(PartStatus::ExtractionError));
        let s = Pipeline::default().summarize("ACC. A B\nACC. C D\n").unwrap();
        assert!(!s.realized_any());
        assert_eq!(s.report.status_of(Part::Accused, None), Some(PartStatus::ExtractionError));
    }
}
