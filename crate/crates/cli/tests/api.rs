use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use comment_lens::corpus::{CommentRecord, Snippet};
use comment_lens::syntax::{Language, SourceSpan};
use comment_lens_cli::server::{router, AnnotationState, TaskView};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn task(i: usize) -> CommentRecord {
    CommentRecord {
        id: format!("demo:src/A.java:{i}:4"),
        project: "demo".into(),
        path: "src/A.java".into(),
        language: Language::Java,
        span: SourceSpan {
            start_offset: i * 10,
            end_offset: i * 10 + 6,
            start_line: i,
            end_line: i,
            start_col: 4,
            end_col: 10,
        },
        text: format!("comment {i}"),
        target: None,
        target_span: None,
        category: None,
        annotator: None,
        elapsed_ms: None,
        snippet: Snippet {
            first_line: i.saturating_sub(2).max(1),
            lines: vec!["x".into(), format!("// comment {i}"), "y".into()],
        },
    }
}

fn app(dir: &Path, n: usize) -> Router {
    let state = AnnotationState::open((1..=n).map(task).collect(), dir, None).unwrap();
    router(state, None)
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header(header::CONTENT_TYPE, "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn answer(session: &str, task_id: &str, label: &str, ms: i64) -> Value {
    json!({ "session": session, "task_id": task_id, "label": label, "elapsed_ms": ms })
}

#[tokio::test]
async fn task_view_lists_menu_and_highlight() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), 3);
    let (status, body) = call(&app, Method::GET, "/api/tasks?session=s1", None).await;
    assert_eq!(status, StatusCode::OK);
    let view: TaskView = serde_json::from_str(&body).unwrap();
    assert_eq!((view.position, view.total), (1, 3));
    assert_eq!(view.highlight.start_line, 1);
    let labels: Vec<&str> = view.menu.iter().map(|m| m.label.as_str()).collect();
    assert_eq!(labels.len(), 11);
    assert_eq!(labels[0], "Postcondition");
    assert!(view.menu.iter().all(|m| !m.guideline.is_empty()));
    assert_eq!(view.targets, ["Left", "Right", "Parent", "InPlace"]);
    assert!(view.context_link.is_none());
    let (_, other) = call(&app, Method::GET, "/api/tasks?session=s2", None).await;
    let other: TaskView = serde_json::from_str(&other).unwrap();
    assert_eq!(other.menu, view.menu);
}

#[tokio::test]
async fn answers_advance_and_finish() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), 2);
    let id1 = "demo:src/A.java:1:4";
    let (status, _) = call(&app, Method::POST, "/api/annotations", Some(answer("s1", id1, "Po", 1200))).await;
    assert_eq!(status, StatusCode::CREATED);
    let (_, body) = call(&app, Method::GET, "/api/tasks?session=s1", None).await;
    let view: TaskView = serde_json::from_str(&body).unwrap();
    assert_eq!(view.position, 2);
    let (status, _) = call(
        &app,
        Method::POST,
        "/api/annotations",
        Some(answer("s1", &view.task_id, "Directive", 800)),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    let (status, _) = call(&app, Method::GET, "/api/tasks?session=s1", None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (_, body) = call(&app, Method::GET, "/api/progress?session=s1", None).await;
    let p: Value = serde_json::from_str(&body).unwrap();
    assert_eq!((p["done"].as_u64(), p["total"].as_u64()), (Some(2), Some(2)));
}

#[tokio::test]
async fn bad_requests_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), 1);
    let id = "demo:src/A.java:1:4";
    let cases = [
        (answer("s1", id, "Nonsense", 10), StatusCode::BAD_REQUEST),
        (answer("s1", id, "Guide", 0), StatusCode::BAD_REQUEST),
        (answer("s1", id, "Guide", -4), StatusCode::BAD_REQUEST),
        (answer("../x", id, "Guide", 10), StatusCode::BAD_REQUEST),
        (answer("s1", "no-such-task", "Guide", 10), StatusCode::NOT_FOUND),
    ];
    for (body, expected) in cases {
        let (status, _) = call(&app, Method::POST, "/api/annotations", Some(body.clone())).await;
        assert_eq!(status, expected, "{body}");
    }
    let (status, _) = call(&app, Method::POST, "/api/annotations", Some(json!({"session": "s1"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let mut with_target = answer("s1", id, "Guide", 10);
    with_target["target"] = json!("Sideways");
    let (status, _) = call(&app, Method::POST, "/api/annotations", Some(with_target)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, Method::PUT, "/api/annotations", Some(answer("s1", id, "Guide", 10))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, Method::GET, "/api/export", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn duplicate_conflicts_and_revision_accumulates() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), 1);
    let id = "demo:src/A.java:1:4";
    let (status, _) = call(&app, Method::POST, "/api/annotations", Some(answer("s1", id, "Guide", 300))).await;
    assert_eq!(status, StatusCode::CREATED);
    let (status, _) = call(&app, Method::POST, "/api/annotations", Some(answer("s1", id, "Guide", 300))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let mut revised = answer("s1", id, "Interface", 200);
    revised["target"] = json!("Right");
    let (status, _) = call(&app, Method::PUT, "/api/annotations", Some(revised)).await;
    assert_eq!(status, StatusCode::OK);
    let (_, body) = call(&app, Method::GET, "/api/export?sessions=s1", None).await;
    let lines: Vec<CommentRecord> = body.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0].category.unwrap().as_str(), "Interface");
    assert_eq!(lines[0].target.unwrap().as_str(), "Right");
    assert_eq!(lines[0].elapsed_ms, Some(500));
    assert_eq!(lines[0].annotator.as_deref(), Some("s1"));
}

#[tokio::test]
async fn sessions_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let id = "demo:src/A.java:2:4";
    {
        let app = app(dir.path(), 3);
        call(&app, Method::POST, "/api/annotations", Some(answer("alice", id, "Precondition", 900))).await;
    }
    assert!(dir.path().join("alice.jsonl").is_file());
    let app = app(dir.path(), 3);
    let (_, body) = call(&app, Method::GET, "/api/progress?session=alice", None).await;
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["done"], 1);
    let (status, _) = call(&app, Method::POST, "/api/annotations", Some(answer("alice", id, "Guide", 5))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let uri = format!("/api/tasks?session=alice&task={}", id.replace('/', "%2F"));
    let (_, body) = call(&app, Method::GET, &uri, None).await;
    let view: TaskView = serde_json::from_str(&body).unwrap();
    assert_eq!(view.answer.unwrap().elapsed_ms, 900);
}

#[tokio::test]
async fn concurrent_posts_are_serialized() {
    let dir = tempfile::tempdir().unwrap();
    let state: Arc<AnnotationState> = AnnotationState::open((1..=20).map(task).collect(), dir.path(), None).unwrap();
    let app = router(state, None);
    let mut handles = Vec::new();
    for i in 1..=20 {
        let app = app.clone();
        handles.push(tokio::spawn(async move {
            let id = format!("demo:src/A.java:{i}:4");
            call(&app, Method::POST, "/api/annotations", Some(answer("s", &id, "Guide", 10))).await.0
        }));
    }
    for h in handles {
        assert_eq!(h.await.unwrap(), StatusCode::CREATED);
    }
    let text = std::fs::read_to_string(dir.path().join("s.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 20);
    assert!(text.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
}

#[tokio::test]
async fn static_files_and_context() {
    let dir = tempfile::tempdir().unwrap();
    let web = tempfile::tempdir().unwrap();
    std::fs::write(web.path().join("index.html"), "<html>tool</html>").unwrap();
    let state = AnnotationState::open(vec![task(1)], dir.path(), None).unwrap();
    let app = router(state, Some(web.path()));
    let (status, body) = call(&app, Method::GET, "/index.html", None).await;
    assert_eq!((status, body.as_str()), (StatusCode::OK, "<html>tool</html>"));
    let (status, _) = call(&app, Method::GET, "/api/context?task=x", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}
