//! HTTP JSON API over the regression core.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `GET /health` | | `{status, version, api_version}` |
//! | `GET /datasets` | | builtins, the example generator and uploads |
//! | `POST /example/generate` | example config | handle + preview curves |
//! | `POST /datasets/upload?name=..&feature_unit=..&target_transform=..` | CSV | 201 + handle |
//! | `POST /fit` | fit request | fit report + plot series |
//!
//! Validation problems answer 422, numerically degenerate fits 409 and
//! unknown handles 404. Every body carries `api_version: "1"`.

mod api;
mod error;
mod registry;
mod series;

use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::sync::Arc;
use std::time::Duration;

use axum::extract::DefaultBodyLimit;
use axum::http::HeaderValue;
use axum::routing::{get, post};
use axum::Router;
use tokio::net::TcpListener;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use api::{compute_fit, DatasetHandle, DatasetList, DatasetRef, FitRequest, FitResponse, Health};
pub use error::{ApiError, ErrorBody};
pub use registry::{content_handle, DatasetEntry, EntryKind, Registry};
pub use series::{decimate_axis, decimate_values, Curve, DataPreview, ParityPoint, Partition, PlotSeries, MAX_PREVIEW_POINTS};

pub const API_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub bind: IpAddr,
    pub port: u16,
    /// Maximum request body size in bytes.
    pub upload_limit: usize,
    /// Idle time after which session datasets are dropped.
    pub handle_ttl: Duration,
    /// Allowed CORS origin; `None` allows any.
    pub cors_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: 8080,
            upload_limit: 32 * 1024 * 1024,
            handle_ttl: Duration::from_secs(3600),
            cors_origin: None,
        }
    }
}

#[derive(Clone)]
pub struct AppState {
    pub registry: Arc<Registry>,
}

impl AppState {
    pub fn new(config: &ServiceConfig) -> Self {
        AppState {
            registry: Arc::new(Registry::new(config.handle_ttl)),
        }
    }
}

pub fn router(state: AppState, config: &ServiceConfig) -> Router {
    let cors = match &config.cors_origin {
        Some(origin) => match HeaderValue::from_str(origin) {
            Ok(v) => CorsLayer::new().allow_origin(AllowOrigin::exact(v)),
            Err(_) => CorsLayer::new(),
        },
        None => CorsLayer::new().allow_origin(AllowOrigin::any()),
    }
    .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
    .allow_headers([axum::http::header::CONTENT_TYPE]);

    Router::new()
        .route("/health", get(api::health))
        .route("/datasets", get(api::list_datasets))
        .route("/datasets/upload", post(api::upload_dataset))
        .route("/example/generate", post(api::generate_example))
        .route("/fit", post(api::fit))
        .layer(DefaultBodyLimit::max(config.upload_limit))
        .layer(cors)
        .with_state(state)
}

pub async fn bind(config: &ServiceConfig) -> std::io::Result<TcpListener> {
    TcpListener::bind(SocketAddr::new(config.bind, config.port)).await
}

/// Serves on an already bound listener until `shutdown` resolves.
pub async fn serve<F>(listener: TcpListener, config: &ServiceConfig, shutdown: F) -> std::io::Result<()>
where
    F: std::future::Future<Output = ()> + Send + 'static,
{
    let app = router(AppState::new(config), config);
    tracing::info!(addr = ?listener.local_addr().ok(), "serving");
    axum::serve(listener, app).with_graceful_shutdown(shutdown).await
}
