//! Texture sources: a remote generation service, a local PNG, or the
//! procedural pattern.

use std::path::PathBuf;

use glyphtex_core::{build_prompt, procedural_pattern, resize, Boundary, EmptyConcept, TextureImage};
use serde_json::json;

use crate::config::{ProviderConfig, ProviderMode};
use crate::http_client::{body_excerpt, post_json, PostFailure};
use crate::png_io::decode_png;

#[derive(Debug, Clone, PartialEq)]
pub struct TextureRequest {
    pub concept: String,
    pub prompt: String,
    pub width: u32,
    pub height: u32,
    pub seed: Option<u64>,
}

impl TextureRequest {
    pub fn new(concept: &str, width: u32, height: u32, seed: Option<u64>) -> Result<Self, ProviderError> {
        if width == 0 || height == 0 {
            return Err(ProviderError::InvalidRequest("texture dimensions must be positive".into()));
        }
        let prompt = build_prompt(concept)?;
        Ok(TextureRequest { concept: concept.trim().to_string(), prompt, width, height, seed })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ProviderError {
    #[error("texture service did not answer within the timeout")]
    ProviderTimeout,
    #[error("texture service rejected the request with status {status}: {body}")]
    ProviderRejected { status: u16, body: String },
    #[error("texture service unreachable: {0}")]
    ProviderUnavailable(String),
    #[error("texture is not a decodable PNG: {0}")]
    DecodeError(String),
    #[error("texture file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("invalid texture request: {0}")]
    InvalidRequest(String),
}

impl From<EmptyConcept> for ProviderError {
    fn from(_: EmptyConcept) -> Self {
        ProviderError::InvalidRequest("concept is empty".into())
    }
}

/// Fetches a texture of exactly the requested size. Images of any other
/// size are resampled with wrap-around edges, which keeps tileable textures
/// tileable.
pub fn fetch_texture(request: &TextureRequest, config: &ProviderConfig) -> Result<TextureImage, ProviderError> {
    config.validate().map_err(|e| ProviderError::InvalidRequest(e.to_string()))?;
    let image = match config.mode {
        ProviderMode::Procedural => {
            return Ok(procedural_pattern(request.seed.unwrap_or(0), request.width, request.height));
        }
        ProviderMode::File => {
            let path = config.file_path.clone().expect("validated");
            let bytes = std::fs::read(&path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => ProviderError::FileNotFound(path.clone()),
                _ => ProviderError::DecodeError(format!("{}: {e}", path.display())),
            })?;
            decode_png(&bytes).map_err(|e| ProviderError::DecodeError(e.to_string()))?
        }
        ProviderMode::Remote => fetch_remote(request, config)?,
    };
    fit(image, request.width, request.height)
}

fn fetch_remote(request: &TextureRequest, config: &ProviderConfig) -> Result<TextureImage, ProviderError> {
    let endpoint = config.endpoint.as_deref().expect("validated");
    let token = std::env::var(&config.auth_token_env).ok().filter(|t| !t.is_empty());
    if token.is_none() {
        log::warn!("{} is not set; calling the texture service without credentials", config.auth_token_env);
    }
    let payload = json!({
        "prompt": request.prompt,
        "width": request.width,
        "height": request.height,
        "seed": request.seed,
    });
    log::info!("requesting {}x{} texture from {endpoint}", request.width, request.height);
    let response = post_json(endpoint, &payload, config.timeout(), token.as_deref()).map_err(|f| match f {
        PostFailure::Timeout => ProviderError::ProviderTimeout,
        PostFailure::Transport(msg) => ProviderError::ProviderUnavailable(msg),
    })?;
    if !(200..300).contains(&response.status) {
        return Err(ProviderError::ProviderRejected {
            status: response.status,
            body: body_excerpt(&response.body),
        });
    }
    decode_png(&response.body).map_err(|e| ProviderError::DecodeError(e.to_string()))
}

fn fit(image: TextureImage, width: u32, height: u32) -> Result<TextureImage, ProviderError> {
    if image.width() == width && image.height() == height {
        return Ok(image);
    }
    resize(&image, width, height, Boundary::Wrap).map_err(|e| ProviderError::DecodeError(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn procedural_is_deterministic() {
        let req = TextureRequest::new("TREE", 64, 64, Some(42)).unwrap();
        let cfg = ProviderConfig::procedural();
        let a = fetch_texture(&req, &cfg).unwrap();
        assert_eq!((a.width(), a.height()), (64, 64));
        assert_eq!(a, fetch_texture(&req, &cfg).unwrap());
    }

    #[test]
    fn request_carries_the_prompt() {
        let req = TextureRequest::new("  snow ", 8, 8, None).unwrap();
        assert_eq!(req.prompt, "Seamless repeating pattern of tiny and small snow");
        assert_eq!(req.concept, "snow");
        assert!(matches!(TextureRequest::new(" ", 8, 8, None), Err(ProviderError::InvalidRequest(_))));
    }

    #[test]
    fn missing_file() {
        let req = TextureRequest::new("x", 4, 4, None).unwrap();
        let cfg = ProviderConfig::file("/definitely/not/here.png");
        assert!(matches!(fetch_texture(&req, &cfg), Err(ProviderError::FileNotFound(_))));
    }
}
