#![allow(dead_code)]

use std::sync::Arc;

use arbor_api::{router, AppState, Settings};
use arbor_core::UserId;
use arbor_store::{CorpusFile, Store, StoreConfig, TickClock};
use axum::body::Body;
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

pub const PASSWORD: &str = "correct horse battery";

pub fn settings() -> Settings {
    Settings {
        share_base: "https://www.reddit.com/submit".into(),
        public_url: "https://arbor.example".into(),
        session_ttl_ms: 14 * 24 * 60 * 60 * 1000,
    }
}

pub struct TestApp {
    pub state: AppState,
    app: Router,
}

#[derive(Debug)]
pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub text: String,
    pub json: Value,
}

impl Reply {
    pub fn code(&self) -> &str {
        self.json["code"].as_str().unwrap_or("")
    }
}

impl TestApp {
    pub fn new() -> TestApp {
        TestApp::with_settings(settings())
    }

    pub fn with_settings(settings: Settings) -> TestApp {
        let clock = Arc::new(TickClock::starting_at(1_600_000_000_000));
        let store = Store::in_memory_with_clock(StoreConfig::default(), clock.clone());
        TestApp::from_store(store, settings, clock)
    }

    pub fn from_store(store: Store, settings: Settings, clock: Arc<TickClock>) -> TestApp {
        let state = AppState::with_clock(store, settings, clock);
        TestApp { app: router(state.clone()), state }
    }

    pub fn with_corpus(corpus: CorpusFile) -> TestApp {
        let t = TestApp::new();
        t.state.write().import(corpus).unwrap();
        t
    }

    pub async fn send(&self, req: Request<Body>) -> Reply {
        let resp = self.app.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let headers = resp.headers().clone();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        let text = String::from_utf8(bytes.to_vec()).unwrap();
        let json = serde_json::from_str(&text).unwrap_or(Value::Null);
        Reply { status, headers, text, json }
    }

    pub async fn call(&self, method: Method, uri: &str, token: Option<&str>, body: Option<Value>) -> Reply {
        let mut req = Request::builder().method(method).uri(uri);
        if let Some(t) = token {
            req = req.header("authorization", format!("Bearer {t}"));
        }
        let req = match body {
            Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
            None => req.body(Body::empty()),
        };
        self.send(req.unwrap()).await
    }

    pub async fn get(&self, uri: &str, token: Option<&str>) -> Reply {
        self.call(Method::GET, uri, token, None).await
    }

    pub async fn post(&self, uri: &str, token: Option<&str>, body: Value) -> Reply {
        self.call(Method::POST, uri, token, Some(body)).await
    }

    pub async fn put(&self, uri: &str, token: Option<&str>, body: Value) -> Reply {
        self.call(Method::PUT, uri, token, Some(body)).await
    }

    pub async fn delete(&self, uri: &str, token: Option<&str>) -> Reply {
        self.call(Method::DELETE, uri, token, None).await
    }

    /// Register when needed, then log in.
    pub async fn login(&self, username: &str) -> (UserId, String) {
        if self.state.read().user_by_name(username).is_err() {
            let r = self
                .post(
                    "/api/v1/users",
                    None,
                    serde_json::json!({"username": username, "credential": PASSWORD}),
                )
                .await;
            assert_eq!(r.status, StatusCode::CREATED, "{}", r.text);
        }
        let r = self
            .post("/api/v1/sessions", None, serde_json::json!({"username": username, "credential": PASSWORD}))
            .await;
        assert_eq!(r.status, StatusCode::CREATED, "{}", r.text);
        (UserId(r.json["user"]["id"].as_u64().unwrap()), r.json["token"].as_str().unwrap().to_string())
    }

    pub async fn moderator(&self, username: &str) -> (UserId, String) {
        let out = self.login(username).await;
        self.state.write().set_moderator(username, true).unwrap();
        out
    }
}

/// Every object key anywhere in `v`.
pub fn keys(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                out.push(k.clone());
                keys(v, out);
            }
        }
        Value::Array(a) => a.iter().for_each(|v| keys(v, out)),
        _ => {}
    }
}
