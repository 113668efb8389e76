use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;
use vdgame_service::api::{router, AppState};
use vdgame_service::Limits;

fn app() -> Router {
    router(AppState::new(Limits::default(), None), None).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json");
    let req = req
        .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn call_json(
    app: &Router,
    method: &str,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Value) {
    let (status, text) = call(app, method, uri, body).await;
    (
        status,
        serde_json::from_str(&text).unwrap_or(Value::String(text)),
    )
}

async fn create(app: &Router, groups: &[&str], rounds: usize) -> String {
    let (status, body) = call_json(
        app,
        "POST",
        "/games",
        Some(json!({ "groups": groups, "rounds": rounds })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["session"].as_str().unwrap().to_owned()
}

#[tokio::test]
async fn single_round_session() {
    let app = app();
    let (status, created) = call_json(
        &app,
        "POST",
        "/games",
        Some(json!({ "groups": ["C2", "C3"], "rounds": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(created["aut"]["order"], 2);
    assert_eq!(created["aut"]["verified"], true);
    assert_eq!(created["remaining_rounds"], 1);
    assert_eq!(created["challenges"], json!(["C3"]));
    assert_eq!(created["graph"]["vertices"].as_array().unwrap().len(), 280);
    let id = created["session"].as_str().unwrap();

    let (status, resp) = call_json(
        &app,
        "POST",
        &format!("/games/{id}/challenge"),
        Some(json!({ "group_index": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{resp}");
    assert_eq!(resp["aut"]["order"], 3);
    assert_eq!(resp["aut"]["verified"], true);
    assert_eq!(resp["remaining_rounds"], 0);
    assert_eq!(resp["status"], "finished");
    let deleted = resp["deleted_vertex"].as_u64().unwrap();
    let tag = created["graph"]["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["id"] == deleted)
        .unwrap();
    assert_eq!(tag["tag"]["role"], "reveal-x");

    let (status, _) = call_json(
        &app,
        "POST",
        &format!("/games/{id}/challenge"),
        Some(json!({ "group_index": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, transcript) = call_json(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(transcript["history"].as_array().unwrap().len(), 1);
    assert_eq!(transcript["history"][0]["deleted_vertex"], deleted);
    assert_eq!(transcript["config"]["groups"], json!(["C2", "C3"]));
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let (status, _) = call_json(&app, "GET", "/games/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call_json(
        &app,
        "POST",
        "/games/nope/challenge",
        Some(json!({ "group_index": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, body) = call_json(
        &app,
        "POST",
        "/games",
        Some(json!({ "groups": ["C2", "Q8"], "rounds": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
    let (status, _) = call_json(
        &app,
        "POST",
        "/games",
        Some(json!({ "groups": ["C2"], "rounds": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call_json(&app, "POST", "/games", Some(json!({ "rounds": 1 }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, body) = call_json(
        &app,
        "POST",
        "/games",
        Some(json!({ "groups": ["C2", "C3", "C2xC2"], "rounds": 4 })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    let (status, _) = call_json(
        &app,
        "POST",
        "/games",
        Some(json!({ "groups": ["C2", "C65"], "rounds": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let id = create(&app, &["C2", "C3"], 1).await;
    let (status, body) = call_json(
        &app,
        "POST",
        &format!("/games/{id}/challenge"),
        Some(json!({ "group_index": 2 })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].as_str().unwrap().contains("bad index"));
    let (_, view) = call_json(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(view["history"].as_array().unwrap().len(), 0);
    assert_eq!(view["status"], "awaiting-challenge");
    let (status, _) = call_json(&app, "GET", &format!("/games/{id}/graph?format=png"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unverified_challenge_reports_order_only() {
    let app = app();
    let id = create(&app, &["C2", "C3"], 1).await;
    let (status, resp) = call_json(
        &app,
        "POST",
        &format!("/games/{id}/challenge?verify=false"),
        Some(json!({ "group_index": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(resp["aut"]["order"], 3);
    assert_eq!(resp["aut"]["verified"], Value::Null);
}

#[tokio::test]
async fn graph_formats_agree_with_vertex_count() {
    let app = app();
    let id = create(&app, &["C2", "C3"], 1).await;
    call_json(
        &app,
        "POST",
        &format!("/games/{id}/challenge"),
        Some(json!({ "group_index": 1 })),
    )
    .await;
    let (status, text) = call(&app, "GET", &format!("/games/{id}/graph?format=json"), None).await;
    assert_eq!(status, StatusCode::OK);
    let graph = vdgame_core::Graph::from_json(&text).unwrap();
    assert_eq!(graph.vertex_count(), 279);
    assert_eq!(graph.to_json(), text);

    let (status, dot) = call(&app, "GET", &format!("/games/{id}/graph?format=dot"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(dot.starts_with("graph G {") && dot.trim_end().ends_with('}'));
    let nodes = dot.lines().filter(|l| l.contains("[shape=")).count();
    let edges = dot.lines().filter(|l| l.contains(" -- ")).count();
    assert_eq!(nodes, 279);
    assert_eq!(edges, graph.edge_count());
}

#[tokio::test]
async fn sessions_are_independent() {
    let app = app();
    let a = create(&app, &["C2", "C3", "C2xC2"], 2).await;
    let b = create(&app, &["C2", "C3", "C2xC2"], 2).await;
    assert_ne!(a, b);
    let (_, ra) = call_json(
        &app,
        "POST",
        &format!("/games/{a}/challenge"),
        Some(json!({ "group_index": 2 })),
    )
    .await;
    let (_, rb) = call_json(
        &app,
        "POST",
        &format!("/games/{b}/challenge"),
        Some(json!({ "group_index": 1 })),
    )
    .await;
    assert_eq!(ra["aut"]["order"], 4);
    assert_eq!(rb["aut"]["order"], 3);
    assert_eq!(ra["remaining_rounds"], 1);
    let (_, va) = call_json(&app, "GET", &format!("/games/{a}"), None).await;
    assert_eq!(va["history"].as_array().unwrap().len(), 1);
    assert_eq!(va["history"][0]["challenge"], 2);
}

#[tokio::test]
async fn snapshots_restore_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState::new(Limits::default(), Some(dir.path().to_owned()));
    let app = router(state, None).unwrap();
    let id = create(&app, &["C2", "C3", "C2xC2"], 2).await;
    call_json(
        &app,
        "POST",
        &format!("/games/{id}/challenge"),
        Some(json!({ "group_index": 2 })),
    )
    .await;
    let (_, before) = call(&app, "GET", &format!("/games/{id}/graph"), None).await;

    let restored = AppState::new(Limits::default(), Some(dir.path().to_owned()));
    assert_eq!(restored.restore().unwrap(), 1);
    let app = router(restored, None).unwrap();
    let (status, after) = call(&app, "GET", &format!("/games/{id}/graph"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(before, after);
    let (_, resp) = call_json(
        &app,
        "POST",
        &format!("/games/{id}/challenge"),
        Some(json!({ "group_index": 1 })),
    )
    .await;
    assert_eq!(resp["aut"]["order"], 3);
    assert_eq!(resp["status"], "finished");
}

#[tokio::test]
async fn cors_headers_present() {
    let app = router(
        AppState::new(Limits::default(), None),
        Some("http://localhost:5173"),
    )
    .unwrap();
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/games")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(
        resp.headers()["access-control-allow-origin"],
        "http://localhost:5173"
    );
}
