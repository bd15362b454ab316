//! Produces the word's outlines: laid out from the font, or fetched from a
//! remote letter-deformation service as SVG.

use glyphtex_core::{layout_word, Contour, FillRule, FontError};
use serde_json::json;

use crate::config::{ReshapeConfig, ReshapeMode};
use crate::http_client::{body_excerpt, post_json, PostFailure};
use crate::inputs::SessionInputs;
use crate::svg_doc::load_svg_document;

/// Pixel size at which the plain layout is produced. The pipeline rescales
/// the shape to the canvas afterwards.
pub const LAYOUT_SIZE_PX: f64 = 256.0;

#[derive(Debug, Clone, PartialEq)]
pub struct TextShape {
    pub contours: Vec<Contour>,
    pub fill_rule: FillRule,
}

#[derive(Debug, thiserror::Error)]
pub enum ReshapeError {
    #[error("reshape service did not answer within the timeout")]
    ReshapeTimeout,
    #[error("reshape service rejected the request with status {status}: {body}")]
    ReshapeRejected { status: u16, body: String },
    #[error("reshape service unreachable: {0}")]
    ReshapeUnavailable(String),
    #[error("reshape service returned unusable SVG: {0}")]
    InvalidSvg(String),
    #[error("cannot lay out word: {0}")]
    LayoutError(String),
}

impl From<FontError> for ReshapeError {
    fn from(e: FontError) -> Self {
        ReshapeError::LayoutError(e.to_string())
    }
}

pub fn reshape_text(
    inputs: &SessionInputs,
    config: &ReshapeConfig,
    font: &[u8],
) -> Result<TextShape, ReshapeError> {
    let shape = match config.mode {
        ReshapeMode::Plain => {
            let layout = layout_word(font, &inputs.word, LAYOUT_SIZE_PX)?;
            TextShape { contours: layout.contours(), fill_rule: FillRule::NonZero }
        }
        ReshapeMode::Remote => fetch_remote(inputs, config)?,
    };
    if shape.contours.is_empty() {
        return Err(ReshapeError::LayoutError("the word has no visible glyphs".into()));
    }
    Ok(shape)
}

fn fetch_remote(inputs: &SessionInputs, config: &ReshapeConfig) -> Result<TextShape, ReshapeError> {
    let endpoint = config
        .endpoint
        .as_deref()
        .ok_or_else(|| ReshapeError::ReshapeUnavailable("no endpoint configured".into()))?;
    let payload = json!({ "concept": inputs.concept, "word": inputs.word, "letter": inputs.letter });
    log::info!("requesting reshaped word from {endpoint}");
    let response = post_json(endpoint, &payload, config.timeout(), None).map_err(|f| match f {
        PostFailure::Timeout => ReshapeError::ReshapeTimeout,
        PostFailure::Transport(msg) => ReshapeError::ReshapeUnavailable(msg),
    })?;
    if !(200..300).contains(&response.status) {
        return Err(ReshapeError::ReshapeRejected { status: response.status, body: body_excerpt(&response.body) });
    }
    let text = String::from_utf8(response.body).map_err(|e| ReshapeError::InvalidSvg(e.to_string()))?;
    let doc = load_svg_document(&text).map_err(|e| ReshapeError::InvalidSvg(e.to_string()))?;
    Ok(TextShape { contours: doc.contours, fill_rule: doc.fill_rule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BUNDLED_FONT;

    #[test]
    fn plain_layout_of_nature() {
        let inputs = SessionInputs::new("TREE", "NATURE", "T").unwrap();
        let shape = reshape_text(&inputs, &ReshapeConfig::plain(), BUNDLED_FONT).unwrap();
        // N, A (2), T, U, R (2), E
        assert_eq!(shape.contours.len(), 8);
    }

    #[test]
    fn blank_word_has_nothing_to_draw() {
        let inputs = SessionInputs { concept: "x".into(), word: "   ".into(), letter: " ".into() };
        assert!(matches!(
            reshape_text(&inputs, &ReshapeConfig::plain(), BUNDLED_FONT),
            Err(ReshapeError::LayoutError(_))
        ));
    }
}
