use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use arbor_store::DEFAULT_DRAFT_THRESHOLD;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid value for {key}: {value:?}")]
    Env { key: &'static str, value: String },
}

/// Service configuration. Read from a TOML file, then overridden by the
/// `SOC_ADDR`, `SOC_STORE`, `SOC_DRAFT_THRESHOLD` and `SOC_SHARE_BASE`
/// environment variables.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub addr: SocketAddr,
    /// Directory holding the store journal. Must exist.
    pub store: PathBuf,
    pub draft_threshold: u64,
    /// Submission endpoint of the external board used for share links.
    pub share_base: String,
    /// Origin prefixed to deep links handed out in share links.
    pub public_url: String,
    pub session_ttl_days: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            addr: SocketAddr::from(([127, 0, 0, 1], 8080)),
            store: PathBuf::from("data"),
            draft_threshold: DEFAULT_DRAFT_THRESHOLD,
            share_base: "https://www.reddit.com/submit".into(),
            public_url: "http://127.0.0.1:8080".into(),
            session_ttl_days: 14,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str, path: &Path) -> Result<Config, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse { path: path.to_owned(), message: e.to_string() })
    }

    /// Load `path` (defaults when `None`) and apply overrides from `env`.
    pub fn load(path: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> Result<Config, ConfigError> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|source| ConfigError::Read { path: p.to_owned(), source })?;
                Config::from_toml(&text, p)?
            }
            None => Config::default(),
        };
        config.apply_env(env)?;
        Ok(config)
    }

    pub fn apply_env(&mut self, env: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(v) = env("SOC_ADDR") {
            self.addr = v.parse().map_err(|_| ConfigError::Env { key: "SOC_ADDR", value: v })?;
        }
        if let Some(v) = env("SOC_STORE") {
            self.store = PathBuf::from(v);
        }
        if let Some(v) = env("SOC_DRAFT_THRESHOLD") {
            self.draft_threshold =
                v.parse().map_err(|_| ConfigError::Env { key: "SOC_DRAFT_THRESHOLD", value: v })?;
        }
        if let Some(v) = env("SOC_SHARE_BASE") {
            self.share_base = v;
        }
        Ok(())
    }

    pub fn settings(&self) -> Settings {
        Settings {
            share_base: self.share_base.clone(),
            public_url: self.public_url.trim_end_matches('/').to_string(),
            session_ttl_ms: self.session_ttl_days.saturating_mul(24 * 60 * 60 * 1000),
        }
    }
}

/// The part of the configuration request handlers need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub share_base: String,
    pub public_url: String,
    pub session_ttl_ms: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Config::default().settings()
    }
}
