//! Files, networking, sessions and the HTTP service around
//! [`glyphtex_core`].

pub mod config;
mod http_client;
pub mod inputs;
pub mod pipeline;
pub mod png_io;
pub mod provider;
pub mod reshape;
pub mod server;
pub mod store;
pub mod svg_doc;

pub use config::{Config, ProviderConfig, ProviderMode, ReshapeConfig, ReshapeMode};
pub use inputs::{InputError, SessionInputs};
pub use pipeline::{render, GenerateOptions, PipelineError, Session, Studio};
pub use provider::{fetch_texture, ProviderError, TextureRequest};
pub use reshape::{reshape_text, ReshapeError, TextShape};
