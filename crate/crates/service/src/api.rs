use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use latentlab_core::datagen::{example_dataset, ExampleConfig};
use latentlab_core::datasets::{load_csv_str, Dataset, DatasetDescriptor, DatasetMetadata, SplitMode, SplitSpec};
use latentlab_core::evaluation::{run_experiment, ExperimentConfig, FitReport};
use latentlab_core::preprocessing::{apply_noise, NoiseSpec};
use latentlab_core::regression::{Hyperparameters, Method};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::registry::{DatasetEntry, EntryKind};
use crate::series::{data_preview, fit_series, DataPreview, PlotSeries};
use crate::{AppState, API_VERSION};

/// Where a fit takes its data from. Exactly one key must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetRef {
    Builtin(String),
    Handle(String),
    Example(ExampleConfig),
}

fn default_split() -> SplitSpec {
    SplitSpec::new(SplitMode::Random, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitRequest {
    pub dataset: DatasetRef,
    #[serde(default = "default_split")]
    pub split: SplitSpec,
    pub method: Method,
    #[serde(default)]
    pub hyperparameters: Hyperparameters,
    #[serde(default)]
    pub standardize: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResponse {
    pub api_version: String,
    pub report: FitReport,
    pub series: PlotSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHandle {
    pub api_version: String,
    pub handle: String,
    pub descriptor: DatasetDescriptor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preview: Option<DataPreview>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetList {
    pub api_version: String,
    pub datasets: Vec<DatasetEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
    pub api_version: String,
}

/// Parses a JSON body with a uniform 422 on any decoding problem.
fn parse_json<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::validation(format!("request body: {e}")))
}

/// Serializes compactly; field order is fixed by the types, so equal
/// values give byte-identical bodies.
fn json_response<T: Serialize>(status: StatusCode, value: &T) -> Response {
    match serde_json::to_vec(value) {
        Ok(bytes) => (status, [(axum::http::header::CONTENT_TYPE, "application/json")], bytes).into_response(),
        Err(e) => ApiError::internal(e.to_string()).into_response(),
    }
}

async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(format!("worker failed: {e}")))?
}

pub async fn health() -> Response {
    json_response(
        StatusCode::OK,
        &Health {
            status: "ok".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            api_version: API_VERSION.into(),
        },
    )
}

pub async fn list_datasets(State(state): State<AppState>) -> Response {
    json_response(
        StatusCode::OK,
        &DatasetList {
            api_version: API_VERSION.into(),
            datasets: state.registry.list(),
        },
    )
}

fn build_example(cfg: &ExampleConfig) -> Result<Dataset, ApiError> {
    let errors = cfg.field_errors();
    if !errors.is_empty() {
        return Err(ApiError::fields(errors));
    }
    Ok(example_dataset(cfg)?)
}

pub async fn generate_example(State(state): State<AppState>, body: Bytes) -> Response {
    let result = async {
        let cfg: ExampleConfig = parse_json(&body)?;
        let ds = blocking(move || build_example(&cfg)).await?;
        let preview = data_preview(&ds);
        let (handle, ds) = state.registry.insert(EntryKind::Generated, ds);
        Ok::<_, ApiError>(DatasetHandle {
            api_version: API_VERSION.into(),
            handle,
            descriptor: ds.descriptor(),
            preview: Some(preview),
        })
    }
    .await;
    match result {
        Ok(h) => json_response(StatusCode::OK, &h),
        Err(e) => e.into_response(),
    }
}

pub async fn upload_dataset(
    State(state): State<AppState>,
    Query(meta): Query<DatasetMetadata>,
    body: Bytes,
) -> Response {
    let result = async {
        let text = String::from_utf8(body.to_vec()).map_err(|_| ApiError::validation("CSV body is not UTF-8"))?;
        let meta = DatasetMetadata {
            name: meta.name.or_else(|| Some("upload".into())),
            ..meta
        };
        let ds = blocking(move || Ok(load_csv_str(&text, &meta)?)).await?;
        let (handle, ds) = state.registry.insert(EntryKind::Upload, ds);
        Ok::<_, ApiError>(DatasetHandle {
            api_version: API_VERSION.into(),
            handle,
            descriptor: ds.descriptor(),
            preview: None,
        })
    }
    .await;
    match result {
        Ok(h) => json_response(StatusCode::CREATED, &h),
        Err(e) => e.into_response(),
    }
}

fn resolve(state: &AppState, dataset: &DatasetRef) -> Result<Arc<Dataset>, ApiError> {
    match dataset {
        DatasetRef::Builtin(name) => state.registry.builtin(name).ok_or_else(|| {
            ApiError::not_found(format!(
                "unknown builtin dataset `{name}` (available: {})",
                state.registry.builtin_names().join(", ")
            ))
        }),
        DatasetRef::Handle(h) => state
            .registry
            .resolve(h)
            .ok_or_else(|| ApiError::not_found(format!("unknown or expired dataset handle `{h}`"))),
        DatasetRef::Example(cfg) => build_example(cfg).map(Arc::new),
    }
}

/// The whole fit pipeline for one request; pure apart from registry reads.
pub fn compute_fit(state: &AppState, req: &FitRequest) -> Result<FitResponse, ApiError> {
    req.split.validate()?;
    req.hyperparameters.validate_for(req.method)?;
    let mut ds = resolve(state, &req.dataset)?;
    if let Some(noise) = &req.noise {
        let (x, y) = apply_noise(ds.x(), ds.y(), noise)?;
        ds = Arc::new(ds.with_data(x, y)?);
    }
    let cfg = ExperimentConfig::new(req.method, req.hyperparameters, req.standardize);
    let report = run_experiment(&ds, &req.split, &cfg)?;
    let series = fit_series(&ds, &report);
    Ok(FitResponse {
        api_version: API_VERSION.into(),
        report,
        series,
    })
}

pub async fn fit(State(state): State<AppState>, body: Bytes) -> Response {
    let result = async {
        let req: FitRequest = parse_json(&body)?;
        blocking(move || compute_fit(&state, &req)).await
    }
    .await;
    match result {
        Ok(r) => json_response(StatusCode::OK, &r),
        Err(e) => e.into_response(),
    }
}
