//! French text generation from normalized records.

mod case;
pub mod french;
mod sentence;
mod stitch;
mod template;

pub use case::{DefaultRealizer, Realizer, ANONYMOUS_ACCUSED};
pub use sentence::{clause_key, order_convictions, realize_sentence, remaining_custody, signature};
pub use stitch::{
    normalize_title, stitch_title, surface_preposition, DefaultStitcher, FillMask, HeuristicStitcher,
    MaskedModelStitcher, PrepositionLexicon, StitchStrategy, Stitched, DEFAULT_PREPOSITIONS, FALLBACK_PREPOSITION,
    MASK,
};
pub use template::{DecisionLexicon, RuleTable, Template, TemplateError, Values, CLAUSE_KEYS, DEFAULT_TEMPLATES};

use thiserror::Error;

use crate::ccc::CccError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("no sentence rule for {0:?}")]
    NoRule(Vec<String>),
    #[error("edge case: {0}")]
    EdgeCase(String),
    #[error("unknown decision code {0:?}")]
    UnknownCode(String),
    #[error("template {template}: no value for <{slot}>")]
    MissingSlot { template: String, slot: String },
    #[error("no template variant: {0}")]
    NoVariant(String),
    #[error(transparent)]
    Lookup(#[from] CccError),
}
