//! JSON-over-HTTP service for the argument graph.
//!
//! Everything lives under `/api/v1`, except the statement deep links
//! `/statement/{id}/{slug}`, which are also served at the root. All writes go
//! through one store lock, so any interleaving of requests equals some
//! serial order. Error codes are listed in [`CODES`].

mod config;
mod error;
mod payload;
mod routes;
mod session;

use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use arbor_core::Timestamp;
use arbor_store::{Clock, Store, SystemClock};

pub use config::{Config, ConfigError, Settings};
pub use error::{ApiError, CODES};
pub use payload::{canonical_path, Candidate, StatementPayload, UserPayload};
pub use routes::{compose_share_url, router, Auth, DUPLICATE_REVIEW_SCORE, VIEWED_FORM_HEADER};
pub use session::{Session, Sessions};

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    store: RwLock<Store>,
    sessions: Sessions,
    settings: Settings,
    clock: Arc<dyn Clock>,
}

impl AppState {
    pub fn new(store: Store, settings: Settings) -> AppState {
        AppState::with_clock(store, settings, Arc::new(SystemClock))
    }

    pub fn with_clock(store: Store, settings: Settings, clock: Arc<dyn Clock>) -> AppState {
        AppState {
            inner: Arc::new(Inner {
                store: RwLock::new(store),
                sessions: Sessions::default(),
                settings,
                clock,
            }),
        }
    }

    // Store operations validate before mutating, so a panic cannot leave
    // half a write behind; a poisoned lock is safe to reuse.
    pub fn read(&self) -> RwLockReadGuard<'_, Store> {
        self.inner.store.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn write(&self) -> RwLockWriteGuard<'_, Store> {
        self.inner.store.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn sessions(&self) -> &Sessions {
        &self.inner.sessions
    }

    pub fn settings(&self) -> &Settings {
        &self.inner.settings
    }

    pub fn now(&self) -> Timestamp {
        self.inner.clock.now()
    }
}

/// Serve until interrupted (Ctrl-C or SIGTERM), then return.
pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown_signal()).await
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
    tracing::info!("shutting down");
}
