//! REST API for the browser annotation tool.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use anyhow::{bail, Context, Result};
use axum::extract::rejection::JsonRejection;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use comment_lens::category::CategoryLabel;
use comment_lens::corpus::{CommentRecord, Snippet, Store};
use comment_lens::syntax::Language;
use comment_lens::target::TargetLabel;
use log::info;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

/// One line of a session file. A revision replaces the labels of an earlier
/// answer and adds its time to the total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerEvent {
    pub task_id: String,
    pub label: CategoryLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetLabel>,
    pub elapsed_ms: u64,
    #[serde(default)]
    pub revision: bool,
}

/// Current answer of a session to a task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Answer {
    pub label: CategoryLabel,
    pub target: Option<TargetLabel>,
    /// Total time over the first answer and every revision.
    pub elapsed_ms: u64,
    pub revisions: usize,
}

#[derive(Debug, Default)]
struct Session {
    answers: HashMap<String, Answer>,
}

impl Session {
    fn apply(&mut self, e: &AnswerEvent) {
        match self.answers.get_mut(&e.task_id) {
            Some(a) => {
                a.label = e.label;
                a.target = e.target;
                a.elapsed_ms += e.elapsed_ms;
                a.revisions += 1;
            }
            None => {
                self.answers.insert(
                    e.task_id.clone(),
                    Answer {
                        label: e.label,
                        target: e.target,
                        elapsed_ms: e.elapsed_ms,
                        revisions: 0,
                    },
                );
            }
        }
    }
}

pub struct AnnotationState {
    tasks: Vec<CommentRecord>,
    index: HashMap<String, usize>,
    sessions_dir: PathBuf,
    store: Option<Store>,
    /// Guards both the answers and the appends to session files.
    sessions: Mutex<HashMap<String, Session>>,
}

pub fn valid_session_name(s: &str) -> bool {
    !s.is_empty()
        && s.len() <= 64
        && !s.starts_with('.')
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl AnnotationState {
    /// Loads every `<session>.jsonl` file found in `sessions_dir`.
    pub fn open(tasks: Vec<CommentRecord>, sessions_dir: &Path, store: Option<Store>) -> Result<Arc<Self>> {
        let mut index = HashMap::new();
        for (i, t) in tasks.iter().enumerate() {
            if index.insert(t.id.clone(), i).is_some() {
                bail!("duplicate task id `{}`", t.id);
            }
        }
        fs::create_dir_all(sessions_dir).with_context(|| format!("creating {}", sessions_dir.display()))?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(sessions_dir)? {
            let path = entry?.path();
            let Some(name) = path
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(|n| n.strip_suffix(".jsonl"))
            else {
                continue;
            };
            if !valid_session_name(name) {
                continue;
            }
            let mut session = Session::default();
            let file = fs::File::open(&path)?;
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let e: AnswerEvent =
                    serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?;
                if !index.contains_key(&e.task_id) {
                    bail!("{}:{}: unknown task `{}`", path.display(), i + 1, e.task_id);
                }
                session.apply(&e);
            }
            info!("session {name}: {} answers", session.answers.len());
            sessions.insert(name.to_string(), session);
        }
        Ok(Arc::new(AnnotationState {
            tasks,
            index,
            sessions_dir: sessions_dir.to_path_buf(),
            store,
            sessions: Mutex::new(sessions),
        }))
    }

    fn session_path(&self, session: &str) -> PathBuf {
        self.sessions_dir.join(format!("{session}.jsonl"))
    }

    fn view(&self, i: usize, answer: Option<Answer>) -> TaskView {
        let t = &self.tasks[i];
        TaskView {
            task_id: t.id.clone(),
            position: i + 1,
            total: self.tasks.len(),
            project: t.project.clone(),
            path: t.path.clone(),
            language: t.language,
            text: t.text.clone(),
            snippet: t.snippet.clone(),
            highlight: LineRange {
                start_line: t.span.start_line,
                end_line: t.span.end_line,
            },
            menu: CategoryLabel::ALL
                .iter()
                .map(|l| MenuItem {
                    label: l.to_string(),
                    short: l.short().to_string(),
                    guideline: l.guideline().to_string(),
                })
                .collect(),
            targets: TargetLabel::names(),
            context_link: self
                .store
                .as_ref()
                .map(|_| format!("/api/context?task={}", encode_query(&t.id))),
            answer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineRange {
    pub start_line: usize,
    pub end_line: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MenuItem {
    pub label: String,
    pub short: String,
    pub guideline: String,
}

/// What the browser shows for one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskView {
    pub task_id: String,
    /// 1-based position in the task list.
    pub position: usize,
    pub total: usize,
    pub project: String,
    pub path: String,
    pub language: Language,
    pub text: String,
    pub snippet: Snippet,
    /// Lines of the comment within the snippet.
    pub highlight: LineRange,
    pub menu: Vec<MenuItem>,
    pub targets: Vec<String>,
    /// Full source of the file, when a store is attached.
    pub context_link: Option<String>,
    /// The session's current answer, when revisiting a task.
    pub answer: Option<Answer>,
}

fn encode_query(s: &str) -> String {
    s.bytes()
        .map(|b| {
            if b.is_ascii_alphanumeric() || b"-_.~:/".contains(&b) {
                (b as char).to_string()
            } else {
                format!("%{b:02X}")
            }
        })
        .collect()
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

fn check_session(s: &str) -> Result<(), Response> {
    if valid_session_name(s) {
        Ok(())
    } else {
        Err(error(StatusCode::BAD_REQUEST, format!("invalid session name `{s}`")))
    }
}

#[derive(Debug, Deserialize)]
struct SessionQuery {
    session: String,
    task: Option<String>,
}

async fn get_task(State(st): State<Arc<AnnotationState>>, Query(q): Query<SessionQuery>) -> Response {
    if let Err(r) = check_session(&q.session) {
        return r;
    }
    let sessions = st.sessions.lock().expect("session lock");
    let answers = sessions.get(&q.session).map(|s| &s.answers);
    let answer_of = |id: &str| answers.and_then(|a| a.get(id)).cloned();
    match q.task {
        Some(id) => match st.index.get(&id) {
            Some(&i) => Json(st.view(i, answer_of(&id))).into_response(),
            None => error(StatusCode::NOT_FOUND, format!("no task `{id}`")),
        },
        None => match st.tasks.iter().position(|t| answer_of(&t.id).is_none()) {
            Some(i) => Json(st.view(i, None)).into_response(),
            None => StatusCode::NO_CONTENT.into_response(),
        },
    }
}

#[derive(Debug, Deserialize)]
struct AnnotationBody {
    session: String,
    task_id: String,
    label: String,
    #[serde(default)]
    target: Option<String>,
    elapsed_ms: i64,
}

async fn record_answer(
    st: Arc<AnnotationState>,
    body: Result<Json<AnnotationBody>, JsonRejection>,
    revision: bool,
) -> Response {
    let Json(b) = match body {
        Ok(b) => b,
        Err(e) => return error(StatusCode::BAD_REQUEST, e.body_text()),
    };
    if let Err(r) = check_session(&b.session) {
        return r;
    }
    let Ok(label) = CategoryLabel::from_str(&b.label) else {
        return error(StatusCode::BAD_REQUEST, format!("unknown label `{}`", b.label));
    };
    let target = match b.target.as_deref().map(TargetLabel::from_str).transpose() {
        Ok(t) => t,
        Err(_) => return error(StatusCode::BAD_REQUEST, "unknown target"),
    };
    if b.elapsed_ms <= 0 {
        return error(StatusCode::BAD_REQUEST, "elapsed_ms must be positive");
    }
    if !st.index.contains_key(&b.task_id) {
        return error(StatusCode::NOT_FOUND, format!("no task `{}`", b.task_id));
    }
    let mut sessions = st.sessions.lock().expect("session lock");
    let session = sessions.entry(b.session.clone()).or_default();
    let answered = session.answers.contains_key(&b.task_id);
    if answered && !revision {
        return error(StatusCode::CONFLICT, "task already answered; use PUT to revise");
    }
    if !answered && revision {
        return error(StatusCode::NOT_FOUND, "no answer to revise");
    }
    let event = AnswerEvent {
        task_id: b.task_id,
        label,
        target,
        elapsed_ms: b.elapsed_ms as u64,
        revision,
    };
    let line = serde_json::to_string(&event).expect("event serializes") + "\n";
    let written = OpenOptions::new()
        .create(true)
        .append(true)
        .open(st.session_path(&b.session))
        .and_then(|mut f| f.write_all(line.as_bytes()));
    if let Err(e) = written {
        return error(StatusCode::INTERNAL_SERVER_ERROR, format!("cannot save answer: {e}"));
    }
    session.apply(&event);
    let answer = session.answers[&event.task_id].clone();
    let status = if revision { StatusCode::OK } else { StatusCode::CREATED };
    (status, Json(answer)).into_response()
}

async fn post_annotation(
    State(st): State<Arc<AnnotationState>>,
    body: Result<Json<AnnotationBody>, JsonRejection>,
) -> Response {
    record_answer(st, body, false).await
}

async fn put_annotation(
    State(st): State<Arc<AnnotationState>>,
    body: Result<Json<AnnotationBody>, JsonRejection>,
) -> Response {
    record_answer(st, body, true).await
}

#[derive(Debug, Deserialize)]
struct ProgressQuery {
    session: String,
}

async fn progress(State(st): State<Arc<AnnotationState>>, Query(q): Query<ProgressQuery>) -> Response {
    if let Err(r) = check_session(&q.session) {
        return r;
    }
    let sessions = st.sessions.lock().expect("session lock");
    let done = sessions.get(&q.session).map_or(0, |s| s.answers.len());
    Json(json!({ "session": q.session, "done": done, "total": st.tasks.len() })).into_response()
}

#[derive(Debug, Deserialize)]
struct ExportQuery {
    sessions: String,
}

/// Answered tasks as records, one session after another in task order.
async fn export(State(st): State<Arc<AnnotationState>>, Query(q): Query<ExportQuery>) -> Response {
    let names: Vec<&str> = q.sessions.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return error(StatusCode::BAD_REQUEST, "no sessions given");
    }
    for n in &names {
        if let Err(r) = check_session(n) {
            return r;
        }
    }
    let sessions = st.sessions.lock().expect("session lock");
    let mut body = String::new();
    for name in names {
        let Some(s) = sessions.get(name) else {
            continue;
        };
        for t in &st.tasks {
            if let Some(a) = s.answers.get(&t.id) {
                let mut r = t.clone();
                r.category = Some(a.label);
                r.target = a.target;
                r.target_span = None;
                r.annotator = Some(name.to_string());
                r.elapsed_ms = Some(a.elapsed_ms);
                body.push_str(&serde_json::to_string(&r).expect("record serializes"));
                body.push('\n');
            }
        }
    }
    ([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response()
}

#[derive(Debug, Deserialize)]
struct ContextQuery {
    task: String,
}

async fn context(State(st): State<Arc<AnnotationState>>, Query(q): Query<ContextQuery>) -> Response {
    let Some(store) = &st.store else {
        return error(StatusCode::NOT_FOUND, "no store attached");
    };
    let Some(&i) = st.index.get(&q.task) else {
        return error(StatusCode::NOT_FOUND, format!("no task `{}`", q.task));
    };
    let text = store
        .source_path(&st.tasks[i])
        .map_err(|e| e.to_string())
        .and_then(|p| fs::read(&p).map_err(|e| format!("{}: {e}", p.display())));
    match text {
        Ok(bytes) => (
            [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
            String::from_utf8_lossy(&bytes).into_owned(),
        )
            .into_response(),
        Err(e) => error(StatusCode::NOT_FOUND, e),
    }
}

pub fn router(state: Arc<AnnotationState>, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/tasks", get(get_task))
        .route(
            "/api/annotations",
            axum::routing::post(post_annotation).put(put_annotation),
        )
        .route("/api/progress", get(progress))
        .route("/api/export", get(export))
        .route("/api/context", get(context))
        .with_state(state);
    match static_dir {
        Some(d) => api.fallback_service(ServeDir::new(d)),
        None => api,
    }
}
