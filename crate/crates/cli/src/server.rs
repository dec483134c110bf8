//! Read-only HTTP search API.
//!
//! `GET /v1/articles?variant=&gene=` returns a [`QueryResponse`];
//! `GET /v1/parse?q=&gene=` returns a [`ParseResponse`]. Errors are
//! `{"error": "..."}` with status 400, or 503 while the index loads.

use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use litvar_core::hgvs::{format_canonical, normalize_ast, parse_loose, VariantAst};
use litvar_core::index::{canonicalize, query, QueryResponse, Resources, SharedIndex};
use serde::{Deserialize, Serialize};

#[derive(Clone)]
pub struct AppState {
    pub index: Arc<SharedIndex>,
    pub resources: Arc<Resources>,
}

#[derive(Debug, Deserialize)]
pub struct ArticlesParams {
    pub variant: Option<String>,
    pub gene: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct ParseParams {
    pub q: Option<String>,
    pub gene: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseResponse {
    pub input: String,
    pub ast: VariantAst,
    pub canonical: String,
    pub keys: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(ErrorBody { error: message.into() })).into_response()
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/articles", get(articles))
        .route("/v1/parse", get(parse))
        .with_state(state)
}

async fn articles(State(state): State<AppState>, Query(params): Query<ArticlesParams>) -> Response {
    let Some(index) = state.index.snapshot() else {
        return error(StatusCode::SERVICE_UNAVAILABLE, "index is loading");
    };
    let variant = params.variant.unwrap_or_default();
    match query(&index, &variant, params.gene.as_deref(), &state.resources) {
        Ok(response) => Json::<QueryResponse>(response).into_response(),
        Err(e) => error(StatusCode::BAD_REQUEST, e.to_string()),
    }
}

async fn parse(State(state): State<AppState>, Query(params): Query<ParseParams>) -> Response {
    let input = params.q.unwrap_or_default().trim().to_string();
    if input.is_empty() {
        return error(StatusCode::BAD_REQUEST, "empty query");
    }
    let res = &state.resources;
    let gene = params
        .gene
        .as_deref()
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .map(|g| res.resolve_gene(g));
    let context = gene.as_deref().and_then(|g| res.transcripts.default_for_gene(g));
    match parse_loose(&input, context) {
        Ok(ast) => {
            let ast = normalize_ast(ast);
            let keys = canonicalize(&ast, gene.as_deref(), res)
                .iter()
                .map(|k| k.render().to_string())
                .collect();
            Json(ParseResponse {
                canonical: format_canonical(&ast),
                input,
                ast,
                keys,
            })
            .into_response()
        }
        Err(e) => error(StatusCode::BAD_REQUEST, e.to_string()),
    }
}
