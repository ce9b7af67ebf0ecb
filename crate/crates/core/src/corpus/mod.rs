//! Synthetic corpora and corpus-level evaluation.

mod eval;
mod profile;
mod synth;

pub use eval::{
    evaluate_error_rates, evaluate_extraction, format_rate, tally_summaries, DistrictRates, ErrorRateReport, EvalError,
    ExtractionReport,
};
pub use profile::{district_profiles, profile_by_name, DistrictProfile, ProfileError};
pub use synth::{
    complex_sentence_lines, synthesize, synthesize_document, synthesize_mixed, synthesize_with, test_split, DocumentSpec,
    GoldPlumitif, GoldTagger, Injections, TEST_SPLIT,
};
