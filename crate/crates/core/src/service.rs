//! HTTP interface: `POST /analyze`, `POST /reparse` and `GET /health`.
//!
//! The server is stateless apart from the grammar, which may load after
//! the listener is up; until then every route answers 503.

use std::net::SocketAddr;
use std::sync::{Arc, OnceLock};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::diagnosis::{analyze_sentence, analyze_text, AnalyzeOptions, SentenceReport};
use crate::grammar::Grammar;

pub const DEFAULT_MAX_BODY: usize = 64 * 1024;

/// Per-request overrides of the server's analysis defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PolicyOverrides {
    pub max_other_omissions: Option<u32>,
    pub determiners_exempt: Option<bool>,
    pub max_edges: Option<usize>,
    pub max_pops: Option<usize>,
}

impl PolicyOverrides {
    pub fn apply(&self, base: AnalyzeOptions) -> AnalyzeOptions {
        let mut o = base;
        if let Some(v) = self.max_other_omissions {
            o.policy.max_other_omissions = v;
        }
        if let Some(v) = self.determiners_exempt {
            o.policy.determiners_exempt = v;
        }
        if let Some(v) = self.max_edges {
            o.budget.max_edges = v;
        }
        if let Some(v) = self.max_pops {
            o.budget.max_pops = v;
        }
        o
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalyzeRequest {
    pub text: String,
    #[serde(default)]
    pub policy: Option<PolicyOverrides>,
    #[serde(default)]
    pub grammar: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReparseRequest {
    pub sentence: String,
    #[serde(default)]
    pub policy: Option<PolicyOverrides>,
    #[serde(default)]
    pub grammar: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalyzeResponse {
    pub sentences: Vec<SentenceReport>,
}

struct Inner {
    grammar: OnceLock<Arc<Grammar>>,
    grammar_id: String,
    defaults: AnalyzeOptions,
    max_body: usize,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

impl AppState {
    /// State whose grammar arrives later through [`AppState::set_grammar`].
    pub fn pending(grammar_id: impl Into<String>, defaults: AnalyzeOptions) -> AppState {
        AppState {
            inner: Arc::new(Inner {
                grammar: OnceLock::new(),
                grammar_id: grammar_id.into(),
                defaults,
                max_body: DEFAULT_MAX_BODY,
            }),
        }
    }

    pub fn ready(grammar_id: impl Into<String>, grammar: Grammar, defaults: AnalyzeOptions) -> AppState {
        let state = AppState::pending(grammar_id, defaults);
        state.set_grammar(grammar);
        state
    }

    /// Installs the grammar. Returns false if one was already installed.
    pub fn set_grammar(&self, grammar: Grammar) -> bool {
        self.inner.grammar.set(Arc::new(grammar)).is_ok()
    }

    pub fn grammar(&self) -> Option<Arc<Grammar>> {
        self.inner.grammar.get().cloned()
    }

    pub fn grammar_id(&self) -> &str {
        &self.inner.grammar_id
    }
}

#[derive(Debug)]
struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn decode<T: for<'de> Deserialize<'de>>(state: &AppState, body: &Bytes) -> Result<T, ApiError> {
    if body.len() > state.inner.max_body {
        return Err(ApiError(
            StatusCode::PAYLOAD_TOO_LARGE,
            format!("body exceeds {} bytes", state.inner.max_body),
        ));
    }
    serde_json::from_slice(body).map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))
}

fn resolve(
    state: &AppState,
    grammar: Option<&str>,
    policy: Option<PolicyOverrides>,
) -> Result<(Arc<Grammar>, AnalyzeOptions), ApiError> {
    if let Some(id) = grammar {
        if id != state.inner.grammar_id {
            return Err(ApiError(StatusCode::UNPROCESSABLE_ENTITY, format!("unknown grammar '{id}'")));
        }
    }
    let g = state
        .grammar()
        .ok_or_else(|| ApiError(StatusCode::SERVICE_UNAVAILABLE, "grammar is loading".into()))?;
    Ok((g, policy.unwrap_or_default().apply(state.inner.defaults)))
}

async fn analyze(State(state): State<AppState>, body: Bytes) -> Result<Json<AnalyzeResponse>, ApiError> {
    let req: AnalyzeRequest = decode(&state, &body)?;
    let (grammar, options) = resolve(&state, req.grammar.as_deref(), req.policy)?;
    let sentences = tokio::task::spawn_blocking(move || analyze_text(&req.text, &grammar, &options))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(AnalyzeResponse { sentences }))
}

async fn reparse(State(state): State<AppState>, body: Bytes) -> Result<Json<SentenceReport>, ApiError> {
    let req: ReparseRequest = decode(&state, &body)?;
    if req.sentence.trim().is_empty() {
        return Err(ApiError(StatusCode::BAD_REQUEST, "sentence is empty".into()));
    }
    let (grammar, options) = resolve(&state, req.grammar.as_deref(), req.policy)?;
    let report = tokio::task::spawn_blocking(move || analyze_sentence(&req.sentence, &grammar, &options))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(report))
}

async fn health(State(state): State<AppState>) -> Response {
    match state.grammar() {
        Some(g) => Json(json!({
            "status": "ok",
            "grammarId": state.grammar_id(),
            "ruleCount": g.rules().len(),
        }))
        .into_response(),
        None => (
            StatusCode::SERVICE_UNAVAILABLE,
            Json(json!({ "status": "loading", "grammarId": state.grammar_id() })),
        )
            .into_response(),
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/analyze", post(analyze))
        .route("/reparse", post(reparse))
        .route("/health", get(health))
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}
