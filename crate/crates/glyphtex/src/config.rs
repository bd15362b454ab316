//! Service configuration, loaded from TOML.
//!
//! ```toml
//! listen = "127.0.0.1:8080"
//! session_dir = "sessions"
//! # font_path = "fonts/MyFont.ttf"   # defaults to the bundled DejaVu Sans subset
//! raster_resolution = 1024
//! default_scale = 0.5
//! texture_size = 512
//! # static_dir = "web/dist"
//!
//! [provider]
//! mode = "procedural"            # remote | file | procedural
//! # endpoint = "https://example.invalid/generate"
//! auth_token_env = "GLYPHTEX_PROVIDER_TOKEN"
//! timeout_secs = 120
//! # file_path = "texture.png"
//!
//! [reshape]
//! mode = "plain"                 # remote | plain
//! # endpoint = "https://example.invalid/reshape"
//! timeout_secs = 120
//! ```

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

/// DejaVu Sans restricted to printable ASCII.
pub const BUNDLED_FONT: &[u8] = include_bytes!("../assets/DejaVuSans-ascii.ttf");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ProviderMode {
    Remote,
    File,
    #[default]
    Procedural,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProviderConfig {
    pub mode: ProviderMode,
    pub endpoint: Option<String>,
    /// Name of the environment variable holding the bearer token.
    pub auth_token_env: String,
    pub timeout_secs: f64,
    pub file_path: Option<PathBuf>,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig {
            mode: ProviderMode::Procedural,
            endpoint: None,
            auth_token_env: "GLYPHTEX_PROVIDER_TOKEN".into(),
            timeout_secs: 120.0,
            file_path: None,
        }
    }
}

impl ProviderConfig {
    pub fn procedural() -> Self {
        ProviderConfig::default()
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        ProviderConfig { mode: ProviderMode::File, file_path: Some(path.into()), ..Default::default() }
    }

    pub fn remote(endpoint: impl Into<String>) -> Self {
        ProviderConfig { mode: ProviderMode::Remote, endpoint: Some(endpoint.into()), ..Default::default() }
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.timeout_secs.is_finite() && self.timeout_secs > 0.0) {
            return Err(ConfigError::Invalid("provider.timeout_secs must be positive".into()));
        }
        match self.mode {
            ProviderMode::Remote if self.endpoint.is_none() => {
                Err(ConfigError::Invalid("provider.mode = \"remote\" requires provider.endpoint".into()))
            }
            ProviderMode::File if self.file_path.is_none() => {
                Err(ConfigError::Invalid("provider.mode = \"file\" requires provider.file_path".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ReshapeMode {
    Remote,
    #[default]
    Plain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReshapeConfig {
    pub mode: ReshapeMode,
    pub endpoint: Option<String>,
    pub timeout_secs: f64,
}

impl Default for ReshapeConfig {
    fn default() -> Self {
        ReshapeConfig { mode: ReshapeMode::Plain, endpoint: None, timeout_secs: 120.0 }
    }
}

impl ReshapeConfig {
    pub fn plain() -> Self {
        ReshapeConfig::default()
    }

    pub fn remote(endpoint: impl Into<String>) -> Self {
        ReshapeConfig { mode: ReshapeMode::Remote, endpoint: Some(endpoint.into()), ..Default::default() }
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.timeout_secs.is_finite() && self.timeout_secs > 0.0) {
            return Err(ConfigError::Invalid("reshape.timeout_secs must be positive".into()));
        }
        if self.mode == ReshapeMode::Remote && self.endpoint.is_none() {
            return Err(ConfigError::Invalid("reshape.mode = \"remote\" requires reshape.endpoint".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub listen: String,
    pub session_dir: PathBuf,
    pub font_path: Option<PathBuf>,
    /// Longest side of the text canvas in pixels.
    pub raster_resolution: u32,
    pub default_scale: f64,
    /// Side length of the square texture requested from the provider.
    pub texture_size: u32,
    pub static_dir: Option<PathBuf>,
    pub provider: ProviderConfig,
    pub reshape: ReshapeConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            listen: "127.0.0.1:8080".into(),
            session_dir: PathBuf::from("sessions"),
            font_path: None,
            raster_resolution: 1024,
            default_scale: 0.5,
            texture_size: 512,
            static_dir: None,
            provider: ProviderConfig::default(),
            reshape: ReshapeConfig::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, ConfigError> {
        let config: Config = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Loads a config file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        let mut config = Config::from_toml(&text)?;
        if let Some(base) = path.parent() {
            let rebase = |p: &mut PathBuf| {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            };
            rebase(&mut config.session_dir);
            config.font_path.as_mut().map(rebase);
            config.static_dir.as_mut().map(rebase);
            config.provider.file_path.as_mut().map(rebase);
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.raster_resolution < 32 {
            return Err(ConfigError::Invalid("raster_resolution must be at least 32".into()));
        }
        if self.texture_size == 0 {
            return Err(ConfigError::Invalid("texture_size must be positive".into()));
        }
        if !(self.default_scale > 0.0 && self.default_scale <= 1.0) {
            return Err(ConfigError::Invalid("default_scale must lie in (0, 1]".into()));
        }
        self.provider.validate()?;
        self.reshape.validate()
    }

    /// Bytes of the configured font, or the bundled one.
    pub fn font_bytes(&self) -> Result<Vec<u8>, ConfigError> {
        match &self.font_path {
            None => Ok(BUNDLED_FONT.to_vec()),
            Some(path) => std::fs::read(path).map_err(|source| ConfigError::Read { path: path.clone(), source }),
        }
    }
}
