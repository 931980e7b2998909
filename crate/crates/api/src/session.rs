use std::collections::HashMap;
use std::sync::RwLock;

use arbor_core::{Timestamp, UserId};
use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Session {
    pub token: String,
    pub user: UserId,
    pub expires_at: Timestamp,
}

/// In-memory session table. Sessions do not survive a restart.
#[derive(Debug, Default)]
pub struct Sessions {
    table: RwLock<HashMap<String, Session>>,
}

pub fn new_token() -> String {
    let bytes: [u8; 16] = rand::random();
    URL_SAFE_NO_PAD.encode(bytes)
}

impl Sessions {
    pub fn create(&self, user: UserId, now: Timestamp, ttl_ms: u64) -> Session {
        let session = Session { token: new_token(), user, expires_at: now.saturating_add(ttl_ms) };
        let mut table = self.table.write().unwrap_or_else(|e| e.into_inner());
        table.retain(|_, s| s.expires_at > now);
        table.insert(session.token.clone(), session.clone());
        session
    }

    /// The user behind a live token.
    pub fn resolve(&self, token: &str, now: Timestamp) -> Option<UserId> {
        let table = self.table.read().unwrap_or_else(|e| e.into_inner());
        table.get(token).filter(|s| s.expires_at > now).map(|s| s.user)
    }

    pub fn revoke(&self, token: &str) -> bool {
        self.table.write().unwrap_or_else(|e| e.into_inner()).remove(token).is_some()
    }
}
