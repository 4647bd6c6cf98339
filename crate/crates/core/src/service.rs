//! HTTP facade over workspaces and homotopy moves.
//!
//! Workspaces live in memory and are written through to `<dir>/<id>.json`
//! when a directory is configured. Mutations are optimistic: a request may
//! carry the hash it expects (`If-Match` or `expected_hash`), and a stale
//! hash yields 409. Every mutation is logged as the script line that
//! replays it.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::diagram::{slice, Path};
use crate::homotopy::{ContractionDirective, ExpansionDirective, FailureReport};
use crate::render::{emit_svg, emit_text, project, Style};
use crate::workspace::{encode_diagram, ContractArgs, ExpandArgs, Workspace, WorkspaceError};

#[derive(Debug)]
pub struct Store {
    dir: Option<PathBuf>,
    /// Files of workspaces attached from outside `dir`.
    files: RwLock<BTreeMap<String, PathBuf>>,
    workspaces: RwLock<BTreeMap<String, Workspace>>,
    next: RwLock<u64>,
}

impl Store {
    pub fn in_memory() -> Self {
        Store {
            dir: None,
            files: RwLock::default(),
            workspaces: RwLock::default(),
            next: RwLock::new(1),
        }
    }

    /// A store persisting to `dir`, preloaded with every `*.json` workspace
    /// found there (the file stem is the id).
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, WorkspaceError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| WorkspaceError::Io(format!("{}: {e}", dir.display())))?;
        let mut workspaces = BTreeMap::new();
        let entries = std::fs::read_dir(&dir).map_err(|e| WorkspaceError::Io(format!("{}: {e}", dir.display())))?;
        for entry in entries.flatten() {
            let path = entry.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let Some(id) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let bytes = std::fs::read(&path).map_err(|e| WorkspaceError::Io(format!("{}: {e}", path.display())))?;
            workspaces.insert(id.to_owned(), Workspace::load(&bytes)?);
        }
        Ok(Store {
            dir: Some(dir),
            files: RwLock::default(),
            workspaces: RwLock::new(workspaces),
            next: RwLock::new(1),
        })
    }

    pub fn get(&self, id: &str) -> Option<Workspace> {
        self.workspaces.read().expect("store lock").get(id).cloned()
    }

    pub fn ids(&self) -> Vec<String> {
        self.workspaces.read().expect("store lock").keys().cloned().collect()
    }

    /// Serves the workspace stored in `file` under `id`, writing changes
    /// back to that file.
    pub fn attach(&self, id: &str, file: impl Into<PathBuf>) -> Result<(), WorkspaceError> {
        let file = file.into();
        let bytes = std::fs::read(&file).map_err(|e| WorkspaceError::Io(format!("{}: {e}", file.display())))?;
        let w = Workspace::load(&bytes)?;
        self.files.write().expect("store lock").insert(id.to_owned(), file);
        self.workspaces.write().expect("store lock").insert(id.to_owned(), w);
        Ok(())
    }

    fn persist(&self, id: &str, w: &Workspace) -> Result<(), WorkspaceError> {
        let path = match (self.files.read().expect("store lock").get(id), &self.dir) {
            (Some(f), _) => f.clone(),
            (None, Some(dir)) => dir.join(format!("{id}.json")),
            (None, None) => return Ok(()),
        };
        let tmp = path.with_extension("json.tmp");
        let io = |e: std::io::Error| WorkspaceError::Io(format!("{}: {e}", path.display()));
        std::fs::write(&tmp, w.save()).map_err(io)?;
        std::fs::rename(&tmp, &path).map_err(io)
    }

    pub fn create(&self, w: Workspace) -> Result<String, WorkspaceError> {
        let mut map = self.workspaces.write().expect("store lock");
        let mut next = self.next.write().expect("store lock");
        let id = loop {
            let id = format!("ws{}", *next);
            *next += 1;
            if !map.contains_key(&id) {
                break id;
            }
        };
        self.persist(&id, &w)?;
        map.insert(id.clone(), w);
        Ok(id)
    }

    /// Replaces `id` if its hash is still `before`; returns false otherwise.
    fn swap(&self, id: &str, before: &str, w: Workspace) -> Result<bool, WorkspaceError> {
        let mut map = self.workspaces.write().expect("store lock");
        match map.get(id) {
            Some(current) if current.content_hash() == before => {
                self.persist(id, &w)?;
                map.insert(id.to_owned(), w);
                Ok(true)
            }
            _ => Ok(false),
        }
    }
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/workspaces", post(create))
        .route("/workspaces/{id}", get(document))
        .route("/workspaces/{id}/log", get(log))
        .route("/workspaces/{id}/undo", post(undo))
        .route("/workspaces/{id}/diagrams/{name}/slice", get(slice_view))
        .route("/workspaces/{id}/diagrams/{name}/contract", post(contract))
        .route("/workspaces/{id}/diagrams/{name}/expand", post(expand))
        .with_state(store)
}

pub async fn serve(addr: &str, store: Arc<Store>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, reason: &str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            body: json!({"step": 0, "height": null, "reason": reason, "detail": detail.into()}),
        }
    }

    fn report(status: StatusCode, r: FailureReport) -> Self {
        ApiError {
            status,
            body: serde_json::to_value(r).expect("serializable"),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<WorkspaceError> for ApiError {
    fn from(e: WorkspaceError) -> Self {
        let status = match &e {
            WorkspaceError::UnknownDiagram(_) => StatusCode::NOT_FOUND,
            WorkspaceError::NothingToUndo => StatusCode::CONFLICT,
            WorkspaceError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            e if e.exit_code() == 2 => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::report(status, e.report())
    }
}

type ApiResult = Result<Response, ApiError>;

fn etag(hash: &str) -> HeaderValue {
    HeaderValue::from_str(&format!("\"{hash}\"")).expect("hex is a valid header")
}

fn with_etag(hash: &str, body: impl IntoResponse) -> Response {
    let mut r = body.into_response();
    r.headers_mut().insert(header::ETAG, etag(hash));
    r
}

fn lookup(store: &Store, id: &str) -> Result<Workspace, ApiError> {
    store
        .get(id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "UnknownWorkspace", format!("no workspace `{id}`")))
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "MalformedRequest", e.to_string()))
}

async fn create(State(store): State<Arc<Store>>, body: Bytes) -> ApiResult {
    let w = if body.iter().all(u8::is_ascii_whitespace) {
        Workspace::new()
    } else {
        Workspace::load(&body)?
    };
    let hash = w.content_hash();
    let id = store.create(w)?;
    Ok(with_etag(&hash, (StatusCode::CREATED, Json(json!({"id": id, "hash": hash})))))
}

async fn document(State(store): State<Arc<Store>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let w = lookup(&store, &id)?;
    Ok(with_etag(&w.content_hash(), ([(header::CONTENT_TYPE, "application/json")], w.save())))
}

async fn log(State(store): State<Arc<Store>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let w = lookup(&store, &id)?;
    let entries: Vec<Value> = w
        .log
        .iter()
        .map(|e| json!({"command": e.command, "before": e.before, "after": e.after}))
        .collect();
    Ok(with_etag(&w.content_hash(), Json(json!({"entries": entries, "script": w.log_script()}))))
}

#[derive(Debug, Deserialize)]
struct SliceQuery {
    #[serde(default)]
    path: Option<String>,
    #[serde(default)]
    format: Option<String>,
}

async fn slice_view(
    State(store): State<Arc<Store>>,
    UrlPath((id, name)): UrlPath<(String, String)>,
    Query(q): Query<SliceQuery>,
) -> ApiResult {
    let w = lookup(&store, &id)?;
    let path: Path = q
        .path
        .as_deref()
        .unwrap_or("-")
        .parse()
        .map_err(|e: String| ApiError::new(StatusCode::BAD_REQUEST, "MalformedRequest", e))?;
    let d = slice(w.get(&name)?, &path).map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "PathOutOfRange", e.to_string()))?;
    let g = project(&w.signature, &d);
    let hash = w.content_hash();
    match q.format.as_deref().unwrap_or("svg") {
        "svg" => Ok(with_etag(
            &hash,
            ([(header::CONTENT_TYPE, "image/svg+xml")], emit_svg(&w.signature, &g, &Style::default())),
        )),
        "graph" => Ok(with_etag(&hash, Json(serde_json::to_value(&g).expect("serializable")))),
        "text" => Ok(with_etag(&hash, ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], emit_text(&g)))),
        "json" => Ok(with_etag(&hash, Json(encode_diagram(&d)))),
        other => Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "MalformedRequest",
            format!("unknown format `{other}` (expected svg, graph, text or json)"),
        )),
    }
}

/// Fields shared by mutating requests.
#[derive(Debug, Default, Deserialize)]
struct MoveOptions {
    #[serde(default)]
    proof: Option<String>,
    #[serde(default)]
    permissive: bool,
    #[serde(default)]
    expected_hash: Option<String>,
}

#[derive(Debug, Deserialize)]
struct ContractRequest {
    #[serde(flatten)]
    directive: ContractionDirective,
    #[serde(flatten)]
    options: MoveOptions,
}

#[derive(Debug, Deserialize)]
struct ExpandRequest {
    #[serde(flatten)]
    directive: ExpansionDirective,
    #[serde(flatten)]
    options: MoveOptions,
}

fn expected_hash(headers: &HeaderMap, body: Option<&str>) -> Result<Option<String>, ApiError> {
    let header = match headers.get(header::IF_MATCH) {
        Some(v) => Some(
            v.to_str()
                .map_err(|_| ApiError::new(StatusCode::BAD_REQUEST, "MalformedRequest", "If-Match is not ASCII"))?
                .trim()
                .trim_start_matches("W/")
                .trim_matches('"')
                .to_owned(),
        ),
        None => None,
    };
    match (header, body) {
        (Some(h), Some(b)) if h != b => Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "MalformedRequest",
            "If-Match and expected_hash disagree",
        )),
        (Some(h), _) => Ok(Some(h)),
        (None, b) => Ok(b.map(str::to_owned)),
    }
}

fn conflict(expected: &str, found: &str) -> ApiError {
    ApiError {
        status: StatusCode::CONFLICT,
        body: json!({
            "step": 0,
            "height": null,
            "reason": "Conflict",
            "detail": format!("expected workspace hash {expected}, found {found}"),
            "expected": expected,
            "found": found,
        }),
    }
}

/// Applies `f` to the current state of `id` and commits the result if no
/// other writer got there first.
fn mutate(store: &Store, id: &str, expected: Option<String>, f: impl FnOnce(&Workspace) -> Result<Workspace, WorkspaceError>) -> ApiResult {
    let w = lookup(store, id)?;
    let before = w.content_hash();
    if let Some(e) = expected {
        if e != before {
            return Err(conflict(&e, &before));
        }
    }
    let next = f(&w)?;
    if !store.swap(id, &before, next.clone())? {
        let found = lookup(store, id)?.content_hash();
        return Err(conflict(&before, &found));
    }
    let hash = next.content_hash();
    let command = next.log.last().map(|e| e.command.clone());
    Ok(with_etag(&hash, Json(json!({"hash": hash, "before": before, "command": command}))))
}

async fn contract(
    State(store): State<Arc<Store>>,
    UrlPath((id, name)): UrlPath<(String, String)>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult {
    let req: ContractRequest = parse_body(&body)?;
    let expected = expected_hash(&headers, req.options.expected_hash.as_deref())?;
    let args = ContractArgs {
        name,
        path: req.directive.path,
        window: req.directive.window,
        bias: req.directive.bias,
        proof: req.options.proof,
        permissive: req.options.permissive,
    };
    mutate(&store, &id, expected, |w| {
        w.get(&args.name)?;
        w.contract(&args)
    })
}

async fn expand(
    State(store): State<Arc<Store>>,
    UrlPath((id, name)): UrlPath<(String, String)>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult {
    let req: ExpandRequest = parse_body(&body)?;
    let expected = expected_hash(&headers, req.options.expected_hash.as_deref())?;
    let args = ExpandArgs {
        name,
        path: req.directive.path,
        height: req.directive.height,
        split: req.directive.split,
        first: req.directive.first,
        proof: req.options.proof,
        permissive: req.options.permissive,
    };
    mutate(&store, &id, expected, |w| w.expand(&args))
}

async fn undo(State(store): State<Arc<Store>>, UrlPath(id): UrlPath<String>, headers: HeaderMap, body: Bytes) -> ApiResult {
    let options: MoveOptions = if body.iter().all(u8::is_ascii_whitespace) {
        MoveOptions::default()
    } else {
        parse_body(&body)?
    };
    let expected = expected_hash(&headers, options.expected_hash.as_deref())?;
    mutate(&store, &id, expected, Workspace::undo)
}
