//! End-to-end orchestration: word outlines → mask, texture → scale → tile →
//! composite, with per-session state persisted through [`SessionStore`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};

use chrono::Utc;
use glyphtex_core::{
    composite, mask_from_alpha, parse_svg_path, rasterize, resample, tile, to_path_data,
    AlphaMask, BackgroundColor, Boundary, BoundingBox, ComposedImage, Contour, FillRule, Point2,
    ScaleFactor, TextureImage,
};

use crate::config::{Config, ConfigError, ProviderMode};
use crate::inputs::{InputError, SessionInputs};
use crate::png_io::{
    decode_composed_png, decode_png, encode_mask_png, encode_png, encode_rgba_png, PngError,
};
use crate::provider::{fetch_texture, ProviderError, TextureRequest};
use crate::reshape::{reshape_text, ReshapeError};
use crate::store::{
    new_session_id, SessionMeta, SessionState, SessionStore, StoreError, COMPOSED_FILE,
    MASK_FILE, OUTLINE_FILE, TEXTURE_FILE, TEXT_FILE,
};

/// Empty border around the text on the canvas, in pixels.
pub const CANVAS_MARGIN: u32 = 8;

/// Why a generation attempt failed after its session was created.
#[derive(Debug, thiserror::Error)]
pub enum StageError {
    #[error(transparent)]
    Reshape(#[from] ReshapeError),
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error("cannot rasterize text: {0}")]
    Raster(String),
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid input: {0}")]
    InvalidInputs(#[from] InputError),
    #[error("generation failed for session {id}: {source}")]
    GenerationFailed {
        id: String,
        #[source]
        source: StageError,
    },
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("scale {0} is outside (0, 1]")]
    InvalidScale(f64),
    #[error("session {0} has no generated image")]
    NotYetGenerated(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("session asset unreadable: {0}")]
    Asset(#[from] PngError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Optional per-call overrides of the configured defaults.
#[derive(Debug, Clone, Default)]
pub struct GenerateOptions {
    pub seed: Option<u64>,
    pub scale: Option<f64>,
    pub background: Option<BackgroundColor>,
}

/// In-memory state of one session.
#[derive(Debug, Clone)]
pub struct Session {
    pub meta: SessionMeta,
    /// Text outline in canvas coordinates.
    pub outline: Vec<Contour>,
    pub texture: Option<TextureImage>,
    pub mask: Option<AlphaMask>,
    pub composed: Option<ComposedImage>,
}

impl Session {
    pub fn scale(&self) -> f64 {
        self.meta.scale
    }

    pub fn background(&self) -> BackgroundColor {
        self.meta.background.parse().unwrap_or(BackgroundColor::WHITE)
    }
}

/// Resamples, tiles and composites. Every composed image the service
/// produces comes from here.
pub fn render(
    texture: &TextureImage,
    mask: &AlphaMask,
    scale: ScaleFactor,
    background: BackgroundColor,
) -> ComposedImage {
    let scaled = resample(texture, scale, Boundary::Wrap).expect("scaled texture is never empty");
    let canvas = tile(&scaled, mask.width(), mask.height());
    composite(mask, &canvas, background).expect("canvas is tiled to the mask size")
}

/// Scales and translates `contours` so the text's longer side spans the
/// canvas minus its margins. Returns the moved contours and canvas size.
pub fn fit_to_canvas(contours: &[Contour], resolution: u32) -> Option<(Vec<Contour>, u32, u32)> {
    let bbox = BoundingBox::of_contours(contours)?;
    let longest = bbox.width().max(bbox.height());
    if longest.is_nan() || longest <= 0.0 || resolution <= 2 * CANVAS_MARGIN {
        return None;
    }
    let margin = f64::from(CANVAS_MARGIN);
    let k = f64::from(resolution - 2 * CANVAS_MARGIN) / longest;
    let side = |extent: f64| {
        if extent >= longest {
            resolution
        } else {
            ((extent * k).ceil() as u32 + 2 * CANVAS_MARGIN).max(1)
        }
    };
    let (w, h) = (side(bbox.width()), side(bbox.height()));
    let min = bbox.min;
    let moved = contours
        .iter()
        .map(|c| c.map(|p| Point2::new((p.x - min.x) * k + margin, (p.y - min.y) * k + margin)))
        .collect();
    Some((moved, w, h))
}

fn fill_rule_name(rule: FillRule) -> &'static str {
    match rule {
        FillRule::NonZero => "nonzero",
        FillRule::EvenOdd => "evenodd",
    }
}

/// Owns the configuration, the session store and the cache of loaded
/// sessions. Operations on one session are serialized; different sessions
/// proceed in parallel.
pub struct Studio {
    config: Config,
    font: Vec<u8>,
    store: SessionStore,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
}

impl Studio {
    pub fn new(config: Config) -> Result<Studio, PipelineError> {
        config.validate()?;
        let font = config.font_bytes()?;
        let store = SessionStore::open(&config.session_dir)?;
        Ok(Studio { config, font, store, sessions: Mutex::new(HashMap::new()) })
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn store(&self) -> &SessionStore {
        &self.store
    }

    fn lock_cache(&self) -> MutexGuard<'_, HashMap<String, Arc<Mutex<Session>>>> {
        self.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn handle(&self, id: &str) -> Result<Arc<Mutex<Session>>, PipelineError> {
        let mut cache = self.lock_cache();
        if let Some(h) = cache.get(id) {
            return Ok(h.clone());
        }
        let session = self.load(id)?;
        let h = Arc::new(Mutex::new(session));
        cache.insert(id.to_string(), h.clone());
        Ok(h)
    }

    fn load(&self, id: &str) -> Result<Session, PipelineError> {
        let meta = self.store.read_meta(id)?.ok_or_else(|| PipelineError::UnknownSession(id.into()))?;
        let mut session = Session { meta, outline: Vec::new(), texture: None, mask: None, composed: None };
        if session.meta.state != SessionState::Ready {
            return Ok(session);
        }
        let read = |name: &str| -> Result<Option<Vec<u8>>, PipelineError> { Ok(self.store.read_file(id, name)?) };
        let (Some(texture), Some(text)) = (read(TEXTURE_FILE)?, read(TEXT_FILE)?) else {
            return Ok(session);
        };
        let texture = decode_png(&texture)?;
        let mask = mask_from_alpha(&decode_png(&text)?);
        let composed = match read(COMPOSED_FILE)? {
            Some(bytes) => decode_composed_png(&bytes)?,
            None => render(&texture, &mask, self.scale_of(&session)?, session.background()),
        };
        if let Some(path) = read(OUTLINE_FILE)? {
            session.outline = parse_svg_path(&String::from_utf8_lossy(&path)).unwrap_or_default();
        }
        session.texture = Some(texture);
        session.mask = Some(mask);
        session.composed = Some(composed);
        Ok(session)
    }

    fn scale_of(&self, session: &Session) -> Result<ScaleFactor, PipelineError> {
        ScaleFactor::new(session.meta.scale).map_err(|_| PipelineError::InvalidScale(session.meta.scale))
    }

    /// Runs the full pipeline for new inputs and persists the session. A
    /// failure after validation still leaves a session record in the
    /// `failed` state carrying the error text.
    pub fn generate(&self, inputs: &SessionInputs, options: &GenerateOptions) -> Result<Session, PipelineError> {
        inputs.validate()?;
        let scale_value = options.scale.unwrap_or(self.config.default_scale);
        let scale = ScaleFactor::new(scale_value).map_err(|_| PipelineError::InvalidScale(scale_value))?;
        let background = options.background.unwrap_or(BackgroundColor::WHITE);
        let seed = match self.config.provider.mode {
            ProviderMode::File => None,
            _ => Some(options.seed.unwrap_or_else(rand::random)),
        };
        let now = Utc::now();
        let mut meta = SessionMeta {
            id: new_session_id(),
            state: SessionState::Ready,
            error: None,
            inputs: inputs.clone(),
            scale: scale.get(),
            background: background.to_string(),
            provider_mode: self.config.provider.mode,
            provider_seed: seed,
            reshape_mode: self.config.reshape.mode,
            fill_rule: fill_rule_name(FillRule::NonZero).into(),
            canvas_width: 0,
            canvas_height: 0,
            created_at: now,
            updated_at: now,
            extra: Default::default(),
        };
        log::info!("session {}: generating {:?}", meta.id, inputs);

        let outcome = self.build(inputs, seed);
        let (outline, fill_rule, mask, texture) = match outcome {
            Ok(parts) => parts,
            Err(source) => {
                log::warn!("session {}: {source}", meta.id);
                meta.state = SessionState::Failed;
                meta.error = Some(source.to_string());
                self.store.write_meta(&meta)?;
                let id = meta.id.clone();
                self.lock_cache().insert(
                    id.clone(),
                    Arc::new(Mutex::new(Session { meta, outline: Vec::new(), texture: None, mask: None, composed: None })),
                );
                return Err(PipelineError::GenerationFailed { id, source });
            }
        };
        meta.fill_rule = fill_rule_name(fill_rule).into();
        meta.canvas_width = mask.width();
        meta.canvas_height = mask.height();
        let composed = render(&texture, &mask, scale, background);

        let id = meta.id.clone();
        self.store.write_file(&id, TEXTURE_FILE, &encode_rgba_png(&texture)?)?;
        self.store.write_file(&id, TEXT_FILE, &encode_rgba_png(&mask.to_alpha_image([0, 0, 0]))?)?;
        self.store.write_file(&id, MASK_FILE, &encode_mask_png(&mask)?)?;
        self.store.write_file(&id, OUTLINE_FILE, to_path_data(&outline).as_bytes())?;
        self.store.write_file(&id, COMPOSED_FILE, &encode_png(&composed)?)?;
        self.store.write_meta(&meta)?;

        let session = Session { meta, outline, texture: Some(texture), mask: Some(mask), composed: Some(composed) };
        self.lock_cache().insert(id, Arc::new(Mutex::new(session.clone())));
        Ok(session)
    }

    #[allow(clippy::type_complexity)]
    fn build(
        &self,
        inputs: &SessionInputs,
        seed: Option<u64>,
    ) -> Result<(Vec<Contour>, FillRule, AlphaMask, TextureImage), StageError> {
        let shape = reshape_text(inputs, &self.config.reshape, &self.font)?;
        let (outline, w, h) = fit_to_canvas(&shape.contours, self.config.raster_resolution)
            .ok_or_else(|| StageError::Raster("text outline has no extent".into()))?;
        let coverage = rasterize(&outline, w, h, shape.fill_rule);
        // The mask is defined by the 8-bit alpha of the text image, so a
        // session reloaded from text.png has exactly the same mask.
        let mask = mask_from_alpha(&coverage.to_alpha_image([0, 0, 0]));
        let size = self.config.texture_size;
        let request = TextureRequest::new(&inputs.concept, size, size, seed)?;
        let texture = fetch_texture(&request, &self.config.provider)?;
        Ok((outline, shape.fill_rule, mask, texture))
    }

    /// Recomposes from the cached texture and mask with a new scale and/or
    /// background. Scale is absolute: the original texture is always the
    /// source.
    pub fn adjust(
        &self,
        id: &str,
        scale: Option<f64>,
        background: Option<BackgroundColor>,
    ) -> Result<Session, PipelineError> {
        let scale = scale
            .map(|s| ScaleFactor::new(s).map_err(|_| PipelineError::InvalidScale(s)))
            .transpose()?;
        let handle = self.handle(id)?;
        let mut session = handle.lock().unwrap_or_else(|e| e.into_inner());
        let (Some(texture), Some(mask)) = (&session.texture, &session.mask) else {
            return Err(PipelineError::NotYetGenerated(id.into()));
        };
        let scale = match scale {
            Some(s) => s,
            None => self.scale_of(&session)?,
        };
        let background = background.unwrap_or_else(|| session.background());
        let composed = render(texture, mask, scale, background);

        let mut meta = session.meta.clone();
        meta.scale = scale.get();
        meta.background = background.to_string();
        meta.updated_at = Utc::now();
        self.store.write_file(id, COMPOSED_FILE, &encode_png(&composed)?)?;
        self.store.write_meta(&meta)?;
        session.meta = meta;
        session.composed = Some(composed);
        Ok(session.clone())
    }

    /// PNG of the current composed image.
    pub fn export_png(&self, id: &str) -> Result<Vec<u8>, PipelineError> {
        let handle = self.handle(id)?;
        let session = handle.lock().unwrap_or_else(|e| e.into_inner());
        let composed = session.composed.as_ref().ok_or_else(|| PipelineError::NotYetGenerated(id.into()))?;
        Ok(encode_png(composed)?)
    }

    pub fn get(&self, id: &str) -> Result<Session, PipelineError> {
        let handle = self.handle(id)?;
        let session = handle.lock().unwrap_or_else(|e| e.into_inner());
        Ok(session.clone())
    }
}
