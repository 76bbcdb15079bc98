//! HTTP session service over the refinement workflow.
//!
//! Sessions live in memory. Every mutation bumps the session revision by the
//! number of elementary changes it made; a request carrying a stale
//! `If-Match` revision is rejected with 409.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::{Path, State};
use axum::http::header::{CONTENT_TYPE, ETAG, IF_MATCH};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chromacut::coloring::{self, ColoringStatus, Strategy};
use chromacut::constructions;
use chromacut::curvature;
use chromacut::refine::{format_moves, Move, RefinementSession, Schedule};
use chromacut::{Simplex, VertexId};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::layout::spring_layout;

const LAYOUT_SEED: u64 = 0;
const MAX_ANNEAL_STEPS: usize = 100_000;

pub struct Handle {
    pub session: RefinementSession,
    pub construction: String,
    pub revision: u64,
    pub created: u64,
    pub modified: u64,
}

#[derive(Default)]
pub struct Store {
    next: AtomicU64,
    sessions: RwLock<HashMap<String, Arc<Mutex<Handle>>>>,
}

impl Store {
    fn insert(&self, handle: Handle) -> String {
        let id = format!("s{}", self.next.fetch_add(1, Ordering::Relaxed) + 1);
        self.sessions.write().expect("store lock").insert(id.clone(), Arc::new(Mutex::new(handle)));
        id
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Handle>>, ApiError> {
        self.sessions
            .read()
            .expect("store lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no session {id:?}")))
    }
}

pub type AppState = Arc<Store>;

#[derive(Debug)]
pub struct ApiError(pub StatusCode, pub String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn unprocessable(e: impl ToString) -> ApiError {
    ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn reply(revision: u64, body: Value) -> Response {
    ([(ETAG, format!("\"{revision}\""))], Json(body)).into_response()
}

/// Revision named by the `If-Match` header, if any.
fn expected_revision(headers: &HeaderMap) -> Result<Option<u64>, ApiError> {
    let Some(raw) = headers.get(IF_MATCH) else {
        return Ok(None);
    };
    let text = raw.to_str().unwrap_or("").trim().trim_matches('"');
    text.parse()
        .map(Some)
        .map_err(|_| ApiError(StatusCode::BAD_REQUEST, format!("bad If-Match revision {text:?}")))
}

fn ensure_current(wanted: Option<u64>, current: u64) -> Result<(), ApiError> {
    match wanted {
        Some(w) if w != current => {
            Err(ApiError(StatusCode::CONFLICT, format!("revision {w} is stale, current is {current}")))
        }
        _ => Ok(()),
    }
}

fn check_revision(headers: &HeaderMap, current: u64) -> Result<(), ApiError> {
    ensure_current(expected_revision(headers)?, current)
}

fn lock(h: &Arc<Mutex<Handle>>) -> std::sync::MutexGuard<'_, Handle> {
    h.lock().unwrap_or_else(|p| p.into_inner())
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(summary))
        .route("/sessions/{id}/graph", get(graph))
        .route("/sessions/{id}/odd-edges", get(odd_edges))
        .route("/sessions/{id}/cut", post(cut))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/anneal-step", post(anneal_step))
        .route("/sessions/{id}/coloring", get(coloring_view))
        .route("/sessions/{id}/trace", get(trace))
        .route("/sessions/{id}/moves", get(moves))
        .with_state(state)
}

#[derive(Deserialize)]
pub struct CreateRequest {
    pub construction: String,
    #[serde(default)]
    pub strategy: Option<String>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s {
        "cone" => Ok(Strategy::Cone),
        "prism" => Ok(Strategy::Prism),
        _ => Err(format!("unknown strategy {s:?}, expected cone or prism")),
    }
}

/// Host for a construction name: explicit `cone:`/`prism:` names are used
/// as given, anything else is wrapped by the strategy.
pub fn host_for(construction: &str, strategy: Option<&str>) -> Result<constructions::HostComplex, String> {
    if construction.starts_with("cone:") || construction.starts_with("prism:") {
        return constructions::host_by_name(construction).map_err(|e| e.to_string());
    }
    let strategy = parse_strategy(strategy.unwrap_or("cone"))?;
    let g = constructions::by_name(construction).map_err(|e| e.to_string())?;
    coloring::build_host(&g, strategy).map_err(|e| e.to_string())
}

async fn create(State(store): State<AppState>, Json(req): Json<CreateRequest>) -> Result<Response, ApiError> {
    let host = host_for(&req.construction, req.strategy.as_deref()).map_err(unprocessable)?;
    let session = RefinementSession::new(host).map_err(unprocessable)?;
    let t = now();
    let id = store.insert(Handle { session, construction: req.construction, revision: 0, created: t, modified: t });
    let mut resp = reply(0, json!({ "id": id, "revision": 0 }));
    *resp.status_mut() = StatusCode::CREATED;
    Ok(resp)
}

async fn summary(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let h = store.get(&id)?;
    let h = lock(&h);
    let (phi, odd) = h.session.objective();
    Ok(reply(
        h.revision,
        json!({
            "id": id,
            "revision": h.revision,
            "construction": h.construction,
            "created": h.created,
            "modified": h.modified,
            "dim": h.session.dim(),
            "phi": phi,
            "odd_count": odd,
            "cuts": h.session.cut_count(),
        }),
    ))
}

async fn graph(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let h = store.get(&id)?;
    let h = lock(&h);
    let g = h.session.graph();
    let canonical: Value = serde_json::from_str(&g.to_json()).expect("canonical graph json");
    let layout: BTreeMap<String, [f64; 3]> =
        spring_layout(g, LAYOUT_SEED).into_iter().map(|(v, p)| (v.to_string(), p)).collect();
    Ok(reply(
        h.revision,
        json!({
            "revision": h.revision,
            "graph": canonical,
            "boundary": h.session.boundary(),
            "layout": layout,
        }),
    ))
}

fn face_json(face: &Simplex, dist: &BTreeMap<VertexId, usize>) -> Value {
    let d = face.iter().map(|v| dist[v]).max().unwrap_or(0);
    json!({ "face": face, "distance": d })
}

async fn odd_edges(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let h = store.get(&id)?;
    let h = lock(&h);
    let s = &h.session;
    let odd = s.odd();
    let dist = curvature::boundary_distances(s.graph(), s.boundary());
    let faces: Vec<Value> = odd.faces.iter().map(|f| face_json(f, &dist)).collect();
    Ok(reply(
        h.revision,
        json!({ "revision": h.revision, "phi": odd.phi, "odd_count": odd.len(), "faces": faces }),
    ))
}

#[derive(Deserialize)]
pub struct CutRequest {
    pub a: VertexId,
    pub b: VertexId,
}

fn parity_delta(before: &BTreeSet<Simplex>, after: &BTreeSet<Simplex>) -> Value {
    let added: Vec<&Simplex> = after.difference(before).collect();
    let removed: Vec<&Simplex> = before.difference(after).collect();
    json!({ "added": added, "removed": removed })
}

async fn cut(
    State(store): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    Json(req): Json<CutRequest>,
) -> Result<Response, ApiError> {
    let h = store.get(&id)?;
    let mut h = lock(&h);
    check_revision(&headers, h.revision)?;
    let before = h.session.odd().faces;
    let rec = h.session.edge_cut(req.a, req.b).map_err(unprocessable)?;
    h.revision += 1;
    h.modified = now();
    let after = h.session.odd().faces;
    let (phi, odd) = h.session.objective();
    Ok(reply(
        h.revision,
        json!({
            "revision": h.revision,
            "vertex": rec.cuts[0].v,
            "parity_delta": parity_delta(&before, &after),
            "phi": phi,
            "odd_count": odd,
        }),
    ))
}

async fn undo(State(store): State<AppState>, Path(id): Path<String>, headers: HeaderMap) -> Result<Response, ApiError> {
    let h = store.get(&id)?;
    let mut h = lock(&h);
    check_revision(&headers, h.revision)?;
    let before = h.session.odd().faces;
    let rec = h.session.undo().map_err(unprocessable)?;
    h.revision += 1;
    h.modified = now();
    let after = h.session.odd().faces;
    let (phi, odd) = h.session.objective();
    Ok(reply(
        h.revision,
        json!({
            "revision": h.revision,
            "undone": rec.mv.to_string(),
            "parity_delta": parity_delta(&before, &after),
            "phi": phi,
            "odd_count": odd,
        }),
    ))
}

#[derive(Deserialize)]
pub struct AnnealRequest {
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

async fn anneal_step(
    State(store): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    Json(req): Json<AnnealRequest>,
) -> Result<Response, ApiError> {
    if req.n > MAX_ANNEAL_STEPS {
        return Err(unprocessable(format!("at most {MAX_ANNEAL_STEPS} steps per request")));
    }
    let h = store.get(&id)?;
    let wanted = expected_revision(&headers)?;
    let joined = tokio::task::spawn_blocking(move || {
        let mut g = lock(&h);
        ensure_current(wanted, g.revision)?;
        let cuts_before = g.session.cut_count();
        let outcome = g.session.anneal(Schedule { steps: req.n, seed: req.seed, ..Schedule::default() });
        let accepted = g.session.cut_count().abs_diff(cuts_before);
        g.revision += accepted as u64;
        if accepted > 0 {
            g.modified = now();
        }
        let (phi, odd) = g.session.objective();
        Ok::<_, ApiError>((g.revision, json!({
            "revision": g.revision,
            "outcome": outcome.to_string(),
            "accepted": accepted,
            "phi": phi,
            "odd_count": odd,
        })))
    })
    .await
    .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(reply(joined.0, joined.1))
}

async fn coloring_view(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let h = store.get(&id)?;
    let h = lock(&h);
    let s = &h.session;
    let c = coloring::propagate_minimal(s.graph(), s.dim()).map_err(unprocessable)?;
    let body = match &c.status {
        ColoringStatus::Proper => {
            let colors: BTreeMap<String, u32> = c.assignment.iter().map(|(v, k)| (v.to_string(), *k)).collect();
            let used: BTreeSet<u32> = s.boundary().iter().map(|v| c.assignment[v]).collect();
            json!({
                "revision": h.revision,
                "status": "proper",
                "colors": colors,
                "colors_used": c.colors_used,
                "boundary_colors_used": used.len(),
            })
        }
        ColoringStatus::Improper((a, b)) => json!({ "revision": h.revision, "status": "improper", "edge": [a, b] }),
        ColoringStatus::PropagationConflict(witness) => {
            json!({ "revision": h.revision, "status": "conflict", "witness": witness })
        }
    };
    Ok(reply(h.revision, body))
}

async fn trace(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let h = store.get(&id)?;
    let h = lock(&h);
    let points: Vec<Value> =
        h.session.trace().iter().map(|t| json!({ "step": t.step, "phi": t.phi, "odd_count": t.odd })).collect();
    Ok(reply(h.revision, json!({ "revision": h.revision, "trace": points })))
}

/// The move log as a script the CLI's script driver replays.
async fn moves(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let h = store.get(&id)?;
    let h = lock(&h);
    let log: Vec<Move> = h.session.moves();
    let text = format_moves(&log);
    Ok(([(CONTENT_TYPE, "text/plain; charset=utf-8".to_string()), (ETAG, format!("\"{}\"", h.revision))], text)
        .into_response())
}

/// Bind and serve until the process is stopped.
pub async fn serve(port: u16) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(AppState::default())).await?;
    Ok(())
}
