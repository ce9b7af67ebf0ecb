//! Client for an external fill-mask model served over HTTP.
//!
//! Request body: `{"inputs": "<sentence with <mask>>"}`. Response: a list of
//! `{"token_str": ..., "score": ...}`, the usual inference-server shape.

use std::time::Duration;

use plumitif_core::realizer::FillMask;
use serde::Deserialize;
use ureq::Agent;

#[derive(Debug, Deserialize)]
struct Candidate {
    token_str: String,
    score: f64,
}

pub struct HttpFillMask {
    url: String,
    agent: Agent,
}

impl HttpFillMask {
    pub fn new(url: impl Into<String>) -> Self {
        let agent: Agent = Agent::config_builder().timeout_global(Some(Duration::from_secs(10))).build().into();
        Self { url: url.into(), agent }
    }
}

impl FillMask for HttpFillMask {
    fn fill(&self, masked: &str) -> Result<Vec<(String, f64)>, String> {
        let mut resp = self
            .agent
            .post(&self.url)
            .send_json(serde_json::json!({ "inputs": masked }))
            .map_err(|e| e.to_string())?;
        let candidates: Vec<Candidate> = resp.body_mut().read_json().map_err(|e| e.to_string())?;
        Ok(candidates.into_iter().map(|c| (c.token_str.trim().to_string(), c.score)).collect())
    }
}
