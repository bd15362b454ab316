//! HTTP API over a [`Studio`].

use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use glyphtex_core::{parse_hex_color, BackgroundColor};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::inputs::SessionInputs;
use crate::pipeline::{GenerateOptions, PipelineError, Session, StageError, Studio};
use crate::provider::ProviderError;
use crate::reshape::ReshapeError;

type Shared = Arc<Studio>;

#[derive(Debug, Deserialize)]
pub struct CreateSession {
    pub concept: String,
    pub word: String,
    pub letter: String,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
pub struct AdjustSession {
    #[serde(default)]
    pub scale: Option<f64>,
    #[serde(default)]
    pub background: Option<String>,
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl ToString) -> Self {
        ApiError { status, body: json!({ "error": message.to_string() }) }
    }

    fn field(mut self, field: &str) -> Self {
        self.body["field"] = json!(field);
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<PipelineError> for ApiError {
    fn from(err: PipelineError) -> Self {
        let message = err.to_string();
        match err {
            PipelineError::InvalidInputs(e) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, &e).field(e.field()),
            PipelineError::InvalidScale(_) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, message).field("scale"),
            PipelineError::UnknownSession(_) => ApiError::new(StatusCode::NOT_FOUND, message),
            PipelineError::NotYetGenerated(_) => ApiError::new(StatusCode::CONFLICT, message),
            PipelineError::GenerationFailed { id, source } => {
                let status = match source {
                    StageError::Provider(ProviderError::ProviderTimeout)
                    | StageError::Reshape(ReshapeError::ReshapeTimeout) => StatusCode::GATEWAY_TIMEOUT,
                    StageError::Reshape(ReshapeError::LayoutError(_)) | StageError::Raster(_) => {
                        StatusCode::UNPROCESSABLE_ENTITY
                    }
                    _ => StatusCode::BAD_GATEWAY,
                };
                let mut e = ApiError::new(status, message);
                e.body["id"] = json!(id);
                e
            }
            PipelineError::Store(_) | PipelineError::Asset(_) | PipelineError::Config(_) => {
                log::error!("{message}");
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, message)
            }
        }
    }
}

fn image_url(id: &str) -> String {
    format!("/api/sessions/{id}/image.png")
}

fn summary(session: &Session) -> Value {
    json!({
        "id": session.meta.id,
        "image_url": image_url(&session.meta.id),
        "scale": session.meta.scale,
        "background": session.meta.background,
    })
}

async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, PipelineError> + Send + 'static,
{
    match tokio::task::spawn_blocking(f).await {
        Ok(result) => result.map_err(ApiError::from),
        Err(join) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, join)),
    }
}

async fn create_session(State(studio): State<Shared>, Json(req): Json<CreateSession>) -> Result<Response, ApiError> {
    let inputs = SessionInputs { concept: req.concept, word: req.word, letter: req.letter };
    let options = GenerateOptions { seed: req.seed, ..Default::default() };
    let session = blocking(move || studio.generate(&inputs, &options)).await?;
    Ok((StatusCode::CREATED, Json(summary(&session))).into_response())
}

async fn adjust_session(
    State(studio): State<Shared>,
    Path(id): Path<String>,
    Json(req): Json<AdjustSession>,
) -> Result<Json<Value>, ApiError> {
    let background: Option<BackgroundColor> = req
        .background
        .as_deref()
        .map(parse_hex_color)
        .transpose()
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e).field("background"))?;
    let session = blocking(move || studio.adjust(&id, req.scale, background)).await?;
    let mut body = summary(&session);
    body.as_object_mut().expect("summary is an object").remove("id");
    Ok(Json(body))
}

async fn session_image(State(studio): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let png = blocking(move || studio.export_png(&id)).await?;
    Ok(([(header::CONTENT_TYPE, "image/png"), (header::CACHE_CONTROL, "no-store")], png).into_response())
}

async fn session_meta(State(studio): State<Shared>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let session = blocking(move || studio.get(&id)).await?;
    let mut body = serde_json::to_value(&session.meta).expect("metadata always serializes");
    body["image_url"] = json!(image_url(&session.meta.id));
    Ok(Json(body))
}

async fn healthz() -> &'static str {
    "ok"
}

pub fn router(studio: Shared) -> Router {
    let static_dir = studio.config().static_dir.clone();
    let api = Router::new()
        .route("/api/healthz", get(healthz))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(session_meta))
        .route("/api/sessions/{id}/adjust", post(adjust_session))
        .route("/api/sessions/{id}/image.png", get(session_image))
        .with_state(studio);
    match static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until Ctrl-C.
pub async fn serve(studio: Shared, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(studio))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
