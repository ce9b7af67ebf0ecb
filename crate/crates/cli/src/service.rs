//! HTTP API: `POST /summarize`, `GET /provision/{number}`, `GET /health`.
//!
//! Request bodies are never stored or logged.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use plumitif_core::pipeline::{Pipeline, PipelineError};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummarizeRequest {
    pub text: String,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

pub fn router(pipeline: Arc<Pipeline>) -> Router {
    // JSON escaping can grow the text; the pipeline enforces the real cap.
    let body_limit = pipeline.max_input_bytes.saturating_mul(6).saturating_add(1024);
    Router::new()
        .route("/summarize", post(summarize))
        .route("/provision/{number}", get(provision))
        .route("/health", get(health))
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(pipeline)
}

async fn summarize(State(pipeline): State<Arc<Pipeline>>, body: Bytes) -> Response {
    let req: SummarizeRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed request: {e}")),
    };
    let result = tokio::task::spawn_blocking(move || pipeline.summarize(&req.text)).await;
    match result {
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
        Ok(Err(e @ PipelineError::InputTooLarge { .. })) => error(StatusCode::PAYLOAD_TOO_LARGE, e.to_string()),
        Ok(Err(e)) => error(StatusCode::BAD_REQUEST, e.to_string()),
        Ok(Ok(summary)) if !summary.realized_any() => (
            StatusCode::UNPROCESSABLE_ENTITY,
            Json(json!({ "error": "no part of the docket could be summarized", "report": summary.report })),
        )
            .into_response(),
        Ok(Ok(summary)) => Json(summary).into_response(),
    }
}

async fn provision(State(pipeline): State<Arc<Pipeline>>, Path(number): Path<String>) -> Response {
    match pipeline.store.lookup(&number) {
        Ok(p) => {
            let mut v = p.to_json();
            if let Value::Object(m) = &mut v {
                m.insert("number".into(), Value::String(p.number.clone()));
            }
            Json(v).into_response()
        }
        Err(e) => error(StatusCode::NOT_FOUND, e.to_string()),
    }
}

async fn health(State(pipeline): State<Arc<Pipeline>>) -> Json<Value> {
    Json(json!({ "status": "ok", "provisions": pipeline.store.len() }))
}
