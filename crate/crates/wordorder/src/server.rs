//! HTTP backend for the annotation UI.
//!
//! Accepted annotations are appended to a JSON Lines state file and synced
//! to disk before the response goes out; on start the file is replayed.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use log::{info, warn};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;
use tower_http::cors::{Any, CorsLayer};

use wordorder_core::swap::CorrelationPair;
use wordorder_core::validation::{
    check_annotation, reweight, score, AnnotationRecord, RejectReason, SilverSentence,
    ValidationReport,
};

use crate::records::{write_jsonl, Task};

pub const DEFAULT_LEASE: Duration = Duration::from_secs(15 * 60);

struct Inner {
    tasks: Vec<Task>,
    silver: Vec<SilverSentence>,
    index: HashMap<String, usize>,
    pair_type: Option<CorrelationPair>,
    annotations: Vec<AnnotationRecord>,
    submitted: HashSet<(String, String)>,
    annotated: HashSet<usize>,
    leases: HashMap<usize, (String, Instant)>,
    lease: Duration,
    log: File,
}

#[derive(Clone)]
pub struct AppState(Arc<Mutex<Inner>>);

/// Outcome of replaying a state file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Replay {
    pub records: usize,
    /// Bytes of an incomplete trailing line that were cut off.
    pub truncated_bytes: u64,
}

fn replay(path: &Path) -> anyhow::Result<(Vec<AnnotationRecord>, Replay)> {
    let mut records = Vec::new();
    let mut info = Replay::default();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((records, info)),
        Err(e) => return Err(e).with_context(|| format!("opening {}", path.display())),
    };
    let mut reader = BufReader::new(file);
    let mut good = 0u64;
    let mut line = Vec::new();
    let mut line_no = 0;
    loop {
        line.clear();
        let n = reader.read_until(b'\n', &mut line)?;
        if n == 0 {
            break;
        }
        line_no += 1;
        if line.last() != Some(&b'\n') {
            // A write interrupted before its newline was never acknowledged.
            info.truncated_bytes = n as u64;
            warn!("{}: dropping incomplete last line", path.display());
            break;
        }
        good += n as u64;
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let record: AnnotationRecord = serde_json::from_slice(&line)
            .with_context(|| format!("{} line {line_no}", path.display()))?;
        records.push(record);
    }
    if info.truncated_bytes > 0 {
        let f = OpenOptions::new().write(true).open(path)?;
        f.set_len(good)?;
        f.sync_all()?;
    }
    info.records = records.len();
    Ok((records, info))
}

impl AppState {
    /// Loads `tasks` and replays the state file at `state_path`, creating it
    /// if needed.
    pub fn open(tasks: Vec<Task>, state_path: &Path, lease: Duration) -> anyhow::Result<AppState> {
        let mut index = HashMap::new();
        for (i, t) in tasks.iter().enumerate() {
            if index.insert(t.sent_id.clone(), i).is_some() {
                bail!("task file lists sentence {} twice", t.sent_id);
            }
        }
        let silver = tasks.iter().map(Task::silver_sentence).collect();
        let mut kinds: Vec<_> = tasks.iter().map(|t| t.pair_type).collect();
        kinds.dedup();
        let pair_type = match kinds.as_slice() {
            [one] => Some(*one),
            _ => None,
        };
        let (annotations, replayed) = replay(state_path)?;
        let mut submitted = HashSet::new();
        let mut annotated = HashSet::new();
        for a in &annotations {
            submitted.insert((a.sent_id.clone(), a.annotator_id.clone()));
            if let Some(&i) = index.get(&a.sent_id) {
                annotated.insert(i);
            }
        }
        info!(
            "{} tasks, {} annotations replayed from {}",
            tasks.len(),
            replayed.records,
            state_path.display()
        );
        let log = OpenOptions::new()
            .create(true)
            .append(true)
            .open(state_path)
            .with_context(|| format!("opening {}", state_path.display()))?;
        Ok(AppState(Arc::new(Mutex::new(Inner {
            tasks,
            silver,
            index,
            pair_type,
            annotations,
            submitted,
            annotated,
            leases: HashMap::new(),
            lease,
            log,
        }))))
    }

    /// Current report over every persisted annotation.
    pub async fn report(&self) -> ValidationReport {
        let inner = self.0.lock().await;
        score(inner.pair_type, &inner.silver, &inner.annotations)
    }
}

pub fn read_tasks(path: &Path) -> anyhow::Result<Vec<Task>> {
    let mut text = String::new();
    File::open(path)
        .with_context(|| format!("opening {}", path.display()))?
        .read_to_string(&mut text)?;
    crate::records::read_jsonl(text.as_bytes()).with_context(|| format!("reading {}", path.display()))
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<RejectReason>,
}

fn error(status: StatusCode, message: impl Into<String>, reason: Option<RejectReason>) -> Response {
    (
        status,
        Json(ErrorBody {
            error: message.into(),
            reason,
        }),
    )
        .into_response()
}

#[derive(Debug, Deserialize)]
struct NextQuery {
    annotator: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NextTask {
    pub task: Option<Task>,
    pub position: Option<usize>,
    pub annotated: usize,
    pub total: usize,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub total: usize,
    pub annotated: usize,
    pub remaining: usize,
    pub annotations: usize,
    pub per_annotator: BTreeMap<String, usize>,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

// Hands out unannotated sentences in task order. A sentence given to one
// annotator is leased to them, so concurrent annotators get different
// sentences until the lease runs out.
async fn next_task(State(state): State<AppState>, Query(q): Query<NextQuery>) -> Response {
    let Some(annotator) = q.annotator.filter(|a| !a.trim().is_empty()) else {
        return error(StatusCode::BAD_REQUEST, "missing annotator", None);
    };
    let mut guard = state.0.lock().await;
    let inner = &mut *guard;
    let now = Instant::now();
    let lease = inner.lease;
    inner
        .leases
        .retain(|i, (_, since)| now.duration_since(*since) < lease && !inner.annotated.contains(i));
    let mine = inner
        .leases
        .iter()
        .filter(|(_, (who, _))| *who == annotator)
        .map(|(&i, _)| i)
        .min();
    let pick = mine.or_else(|| {
        (0..inner.tasks.len()).find(|i| {
            !inner.annotated.contains(i)
                && !inner.leases.contains_key(i)
                && !inner
                    .submitted
                    .contains(&(inner.tasks[*i].sent_id.clone(), annotator.clone()))
        })
    });
    if let Some(i) = pick {
        inner.leases.insert(i, (annotator, now));
    }
    Json(NextTask {
        task: pick.map(|i| inner.tasks[i].clone()),
        position: pick.map(|i| i + 1),
        annotated: inner.annotated.len(),
        total: inner.tasks.len(),
    })
    .into_response()
}

async fn post_annotation(State(state): State<AppState>, body: Bytes) -> Response {
    let mut record: AnnotationRecord = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed annotation: {e}"), None),
    };
    if record.annotator_id.trim().is_empty() {
        return error(StatusCode::BAD_REQUEST, "missing annotator_id", None);
    }
    if record.timestamp == 0 {
        record.timestamp = now_ms();
    }
    let mut guard = state.0.lock().await;
    let inner = &mut *guard;
    let task = inner.index.get(&record.sent_id).copied();
    if let Err(reason) = check_annotation(&record, task.map(|i| &inner.silver[i])) {
        let status = match reason {
            RejectReason::UnknownSentence => StatusCode::NOT_FOUND,
            _ => StatusCode::BAD_REQUEST,
        };
        return error(status, format!("rejected: {reason:?}"), Some(reason));
    }
    let key = (record.sent_id.clone(), record.annotator_id.clone());
    if inner.submitted.contains(&key) {
        return error(
            StatusCode::CONFLICT,
            "this annotator already submitted this sentence",
            Some(RejectReason::Duplicate),
        );
    }
    let mut line = Vec::new();
    if let Err(e) = write_jsonl(&mut line, &record) {
        return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string(), None);
    }
    if let Err(e) = inner.log.write_all(&line).and_then(|_| inner.log.sync_data()) {
        return error(
            StatusCode::INTERNAL_SERVER_ERROR,
            format!("could not persist annotation: {e}"),
            None,
        );
    }
    inner.submitted.insert(key);
    if let Some(i) = task {
        inner.annotated.insert(i);
        inner.leases.remove(&i);
    }
    inner.annotations.push(record.clone());
    Json(record).into_response()
}

#[derive(Debug, Deserialize)]
struct ReportQuery {
    zero_swap_fraction: Option<f64>,
}

async fn get_report(State(state): State<AppState>, Query(q): Query<ReportQuery>) -> Response {
    let report = state.report().await;
    match q.zero_swap_fraction {
        None => Json(report).into_response(),
        Some(f0) => match reweight(&report, f0) {
            Ok(r) => Json(r).into_response(),
            Err(e) => error(StatusCode::BAD_REQUEST, e.to_string(), None),
        },
    }
}

async fn get_progress(State(state): State<AppState>) -> Json<Progress> {
    let inner = state.0.lock().await;
    let mut per_annotator = BTreeMap::new();
    for a in &inner.annotations {
        *per_annotator.entry(a.annotator_id.clone()).or_default() += 1;
    }
    Json(Progress {
        total: inner.tasks.len(),
        annotated: inner.annotated.len(),
        remaining: inner.tasks.len() - inner.annotated.len(),
        annotations: inner.annotations.len(),
        per_annotator,
    })
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/tasks/next", get(next_task))
        .route("/api/annotations", post(post_annotation))
        .route("/api/report", get(get_report))
        .route("/api/progress", get(get_progress))
        .layer(
            CorsLayer::new()
                .allow_origin(Any)
                .allow_methods(Any)
                .allow_headers(Any),
        )
        .with_state(state)
}

/// Serves until Ctrl-C.
pub async fn serve(state: AppState, addr: SocketAddr) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

/// Reads an annotation file, skipping lines that do not parse.
pub fn read_state(path: &Path) -> anyhow::Result<Vec<AnnotationRecord>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line) {
            Ok(r) => out.push(r),
            Err(e) => warn!("{} line {}: {e}", path.display(), i + 1),
        }
    }
    Ok(out)
}
