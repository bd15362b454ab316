//! On-disk session records: one directory per session holding `meta.json`
//! and the PNG/path assets.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::config::{ProviderMode, ReshapeMode};
use crate::inputs::SessionInputs;

pub const META_FILE: &str = "meta.json";
pub const TEXTURE_FILE: &str = "texture.png";
pub const TEXT_FILE: &str = "text.png";
pub const MASK_FILE: &str = "mask.png";
pub const COMPOSED_FILE: &str = "composed.png";
pub const OUTLINE_FILE: &str = "outline.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SessionState {
    Ready,
    Failed,
}

/// Contents of `meta.json`. Keys not listed here survive rewrites through
/// `extra`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionMeta {
    pub id: String,
    pub state: SessionState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub inputs: SessionInputs,
    pub scale: f64,
    pub background: String,
    pub provider_mode: ProviderMode,
    pub provider_seed: Option<u64>,
    pub reshape_mode: ReshapeMode,
    pub fill_rule: String,
    #[serde(default)]
    pub canvas_width: u32,
    #[serde(default)]
    pub canvas_height: u32,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("session store I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt session metadata in {path}: {source}")]
    Corrupt {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone)]
pub struct SessionStore {
    root: PathBuf,
}

/// 128 random bits as 32 lowercase hex digits.
pub fn new_session_id() -> String {
    format!("{:032x}", rand::random::<u128>())
}

/// Accepts exactly the shape produced by [`new_session_id`], which also
/// keeps ids from escaping the store directory.
pub fn is_valid_id(id: &str) -> bool {
    id.len() == 32 && id.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io { path: path.to_path_buf(), source }
}

impl SessionStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<SessionStore, StoreError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(io_err(&root))?;
        Ok(SessionStore { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn dir(&self, id: &str) -> PathBuf {
        self.root.join(id)
    }

    pub fn exists(&self, id: &str) -> bool {
        is_valid_id(id) && self.dir(id).join(META_FILE).is_file()
    }

    /// Writes through a temporary file and a rename so readers never see a
    /// partial file.
    pub fn write_file(&self, id: &str, name: &str, bytes: &[u8]) -> Result<(), StoreError> {
        let dir = self.dir(id);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let target = dir.join(name);
        let tmp = dir.join(format!(".{name}.tmp"));
        let mut file = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        file.write_all(bytes).map_err(io_err(&tmp))?;
        file.sync_all().map_err(io_err(&tmp))?;
        drop(file);
        fs::rename(&tmp, &target).map_err(io_err(&target))
    }

    pub fn read_file(&self, id: &str, name: &str) -> Result<Option<Vec<u8>>, StoreError> {
        let path = self.dir(id).join(name);
        match fs::read(&path) {
            Ok(bytes) => Ok(Some(bytes)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(StoreError::Io { path, source: e }),
        }
    }

    pub fn write_meta(&self, meta: &SessionMeta) -> Result<(), StoreError> {
        let json = serde_json::to_vec_pretty(meta).expect("metadata always serializes");
        self.write_file(&meta.id, META_FILE, &json)
    }

    pub fn read_meta(&self, id: &str) -> Result<Option<SessionMeta>, StoreError> {
        if !is_valid_id(id) {
            return Ok(None);
        }
        let Some(bytes) = self.read_file(id, META_FILE)? else { return Ok(None) };
        serde_json::from_slice(&bytes)
            .map(Some)
            .map_err(|source| StoreError::Corrupt { path: self.dir(id).join(META_FILE), source })
    }

    pub fn ids(&self) -> Result<Vec<String>, StoreError> {
        let mut ids: Vec<String> = fs::read_dir(&self.root)
            .map_err(io_err(&self.root))?
            .filter_map(|e| e.ok()?.file_name().into_string().ok())
            .filter(|name| self.exists(name))
            .collect();
        ids.sort();
        Ok(ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(id: &str) -> SessionMeta {
        let now = Utc::now();
        SessionMeta {
            id: id.into(),
            state: SessionState::Ready,
            error: None,
            inputs: SessionInputs::new("TREE", "NATURE", "T").unwrap(),
            scale: 0.5,
            background: "#FFFFFF".into(),
            provider_mode: ProviderMode::Procedural,
            provider_seed: Some(42),
            reshape_mode: ReshapeMode::Plain,
            fill_rule: "nonzero".into(),
            canvas_width: 10,
            canvas_height: 10,
            created_at: now,
            updated_at: now,
            extra: Default::default(),
        }
    }

    #[test]
    fn ids_are_128_bit_hex() {
        let a = new_session_id();
        assert!(is_valid_id(&a));
        assert_ne!(a, new_session_id());
        assert!(!is_valid_id("../etc"));
        assert!(!is_valid_id(&a.to_uppercase()));
    }

    #[test]
    fn unknown_keys_survive_a_rewrite() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        let id = new_session_id();
        store.write_meta(&meta(&id)).unwrap();
        let path = dir.path().join(&id).join(META_FILE);
        let mut raw: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        raw["annotation"] = serde_json::json!({"by": "someone"});
        fs::write(&path, serde_json::to_vec(&raw).unwrap()).unwrap();

        let mut loaded = store.read_meta(&id).unwrap().unwrap();
        loaded.scale = 0.25;
        store.write_meta(&loaded).unwrap();
        let raw: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        assert_eq!(raw["annotation"]["by"], "someone");
        assert_eq!(raw["scale"], 0.25);
        assert_eq!(store.ids().unwrap(), vec![id]);
    }

    #[test]
    fn missing_sessions_read_as_none() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        assert!(store.read_meta(&new_session_id()).unwrap().is_none());
        assert!(store.read_meta("nope").unwrap().is_none());
    }
}
