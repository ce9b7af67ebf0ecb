//! Turns raw Quebec criminal dockets (plumitifs) into French prose summaries.
//!
//! The pipeline has three stages: [`segmenter`] splits a docket into its
//! accused, plaintiff and charges parts, [`extractor`] tags entities and
//! normalizes them into a [`CaseRecord`], and [`realizer`] fills French
//! templates, pulling charge titles from a parsed Criminal Code
//! ([`ccc::ProvisionStore`]). [`corpus`] generates annotated synthetic dockets
//! and runs the evaluation protocols; [`pipeline`] wires everything together.

pub mod ccc;
pub mod corpus;
pub mod extractor;
pub mod model;
pub mod pipeline;
pub mod realizer;
pub mod segmenter;

pub use model::*;
