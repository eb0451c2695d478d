use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use syncplay::game::cubic_move_bound;
use syncplay::service::{router, SessionStore, StoreConfig};

fn app() -> Router {
    router(Arc::new(SessionStore::new(StoreConfig::default()).unwrap()))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(match body {
            Some(b) => Body::from(b.to_string()),
            None => Body::empty(),
        })
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, v)
}

async fn create(app: &Router, automaton: Value, role: &str) -> Value {
    let (s, v) = call(
        app,
        "POST",
        "/sessions",
        Some(json!({"automaton": automaton, "human_role": role})),
    )
    .await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v
}

#[tokio::test]
async fn builtins_are_listed_and_served() {
    let app = app();
    let (s, v) = call(&app, "GET", "/builtin", None).await;
    assert_eq!(s, StatusCode::OK);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"cerny:n"));
    assert!(names.contains(&"duplication:n"));
    assert!(names.contains(&"qsat:psi0"));
    let (s, doc) = call(&app, "GET", "/builtin/cerny:4", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(doc["n"], 4);
    let (s, e) = call(&app, "GET", "/builtin/nothing:3", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(e["code"], "NOT_FOUND");
}

#[tokio::test]
async fn create_reports_prediction_and_position() {
    let app = app();
    let v = create(&app, json!("cerny:5"), "BOB").await;
    assert_eq!(v["prediction"], "BOB");
    assert_eq!(v["status"], "IN_PROGRESS");
    assert_eq!(v["position"]["mover"], "BOB");
    assert_eq!(v["history"].as_array().unwrap().len(), 1);

    let v = create(&app, json!("cerny:2"), "BOB").await;
    assert_eq!(v["prediction"], "ALICE");
    assert_eq!(v["status"], "ALICE_WON");
    assert_eq!(v["position"]["coins"], json!([1]));

    let doc = json!({"n": 3, "alphabet": ["x", "y"], "delta": {"x": [0, 0, 1], "y": [1, 2, 0]}});
    let v = create(&app, doc, "ALICE").await;
    assert_eq!(v["position"], json!({"coins": [0, 1, 2], "mover": "ALICE"}));
    assert_eq!(v["history"], json!([]));
    assert_eq!(v["strategy_mode"], "EXACT");
}

#[tokio::test]
async fn create_errors_have_codes() {
    let app = app();
    let cases = [
        (
            json!({"automaton": {"n": 2}, "human_role": "ALICE"}),
            StatusCode::BAD_REQUEST,
            "PARSE_ERROR",
        ),
        (
            json!({"automaton": "cerny:5"}),
            StatusCode::BAD_REQUEST,
            "INVALID_REQUEST",
        ),
        (
            json!({"automaton": "cerny:5", "human_role": "CAROL"}),
            StatusCode::BAD_REQUEST,
            "INVALID_REQUEST",
        ),
        (
            json!({"automaton": "cerny:25", "human_role": "ALICE", "strategy_mode": "EXACT"}),
            StatusCode::UNPROCESSABLE_ENTITY,
            "CAPACITY",
        ),
    ];
    for (body, status, code) in cases {
        let (s, v) = call(&app, "POST", "/sessions", Some(body)).await;
        assert_eq!(s, status, "{v}");
        assert_eq!(v["code"], code);
        assert!(v["message"].is_string());
    }
    let req = Request::builder()
        .method("POST")
        .uri("/sessions")
        .body(Body::from("{oops"))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn large_automaton_falls_back_to_pair_mode() {
    let app = app();
    let v = create(&app, json!("cerny:30"), "ALICE").await;
    assert_eq!(v["strategy_mode"], "PAIR");
    assert_eq!(v["prediction"], "BOB");
}

#[tokio::test]
async fn duplication_bob_playing_b_loses_in_ten() {
    let app = app();
    let v = create(&app, json!("duplication:4"), "BOB").await;
    let id = v["id"].as_str().unwrap().to_owned();
    let mut status = v["status"].clone();
    let mut rounds = 0;
    while status == "IN_PROGRESS" {
        let (s, out) = call(
            &app,
            "POST",
            &format!("/sessions/{id}/moves"),
            Some(json!({"letter": "b"})),
        )
        .await;
        assert_eq!(s, StatusCode::OK, "{out}");
        status = out["status"].clone();
        rounds += 1;
        assert!(rounds < 50);
    }
    assert_eq!(status, "ALICE_WON");
    let (_, full) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    let history = full["history"].as_array().unwrap();
    let alice = history.iter().filter(|h| h["mover"] == "ALICE").count();
    assert_eq!(alice, 10);
    assert_eq!(full["position"]["coins"].as_array().unwrap().len(), 1);

    let (s, e) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/moves"),
        Some(json!({"letter": "b"})),
    )
    .await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(e["code"], "SESSION_FINISHED");
}

#[tokio::test]
async fn move_errors_have_codes() {
    let app = app();
    let v = create(&app, json!("cerny:4"), "ALICE").await;
    let id = v["id"].as_str().unwrap().to_owned();
    let uri = format!("/sessions/{id}/moves");
    let (s, e) = call(&app, "POST", &uri, Some(json!({"letter": "q"}))).await;
    assert_eq!(
        (s, e["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("INVALID_LETTER"))
    );
    let (s, e) = call(&app, "POST", &uri, Some(json!({"letter": 7}))).await;
    assert_eq!(
        (s, e["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("INVALID_LETTER"))
    );
    let (s, e) = call(
        &app,
        "POST",
        "/sessions/ffff/moves",
        Some(json!({"letter": "a"})),
    )
    .await;
    assert_eq!(
        (s, e["code"].as_str()),
        (StatusCode::NOT_FOUND, Some("NOT_FOUND"))
    );
    let (s, e) = call(&app, "GET", "/sessions/ffff", None).await;
    assert_eq!(
        (s, e["code"].as_str()),
        (StatusCode::NOT_FOUND, Some("NOT_FOUND"))
    );

    let (s, out) = call(&app, "POST", &uri, Some(json!({"letter": 1}))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(out["human_move"]["letter"], "b");
    assert_eq!(out["engine_move"]["mover"], "BOB");
    assert_eq!(out["position"]["mover"], "ALICE");
    let (_, full) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(full["history"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn game_won_by_the_opening_move() {
    // `a` is constant, so the engine's opening move ends the game before
    // the human Bob gets a turn
    let app = app();
    let v = create(
        &app,
        json!({"n": 3, "alphabet": ["a", "b"], "delta": {"a": [0, 0, 0], "b": [1, 2, 0]}}),
        "BOB",
    )
    .await;
    assert_eq!(v["status"], "ALICE_WON");
    let id = v["id"].as_str().unwrap();
    let (s, e) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/moves"),
        Some(json!({"letter": "a"})),
    )
    .await;
    assert_eq!(
        (s, e["code"].as_str()),
        (StatusCode::CONFLICT, Some("SESSION_FINISHED"))
    );
}

#[tokio::test]
async fn list_sessions_summarizes() {
    let app = app();
    create(&app, json!("cerny:3"), "ALICE").await;
    create(&app, json!("cerny:4"), "BOB").await;
    let (s, v) = call(&app, "GET", "/sessions", None).await;
    assert_eq!(s, StatusCode::OK);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 2);
    assert!(list
        .iter()
        .all(|x| x.get("history").is_none() && x["position"]["coins"].is_array()));
}

#[tokio::test]
async fn arbitrary_bob_loses_within_the_bound() {
    let app = app();
    let doc = json!({"n": 5, "alphabet": ["a", "b"], "delta": {"a": [1, 1, 3, 4, 0], "b": [0, 2, 2, 2, 2]}});
    let v = create(&app, doc, "BOB").await;
    assert_eq!(v["prediction"], "ALICE");
    let id = v["id"].as_str().unwrap().to_owned();
    let mut status = v["status"].clone();
    let mut turn = 0u64;
    while status == "IN_PROGRESS" {
        let letter = ["a", "b", "b", "a"][(turn % 4) as usize];
        let (_, out) = call(
            &app,
            "POST",
            &format!("/sessions/{id}/moves"),
            Some(json!({"letter": letter})),
        )
        .await;
        status = out["status"].clone();
        turn += 1;
    }
    let (_, full) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    let alice = full["history"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|h| h["mover"] == "ALICE")
        .count() as u64;
    assert!(alice <= cubic_move_bound(5));
}

#[tokio::test]
async fn engine_bob_holds_on_cerny5() {
    let app = app();
    let v = create(&app, json!("cerny:5"), "ALICE").await;
    assert_eq!(v["prediction"], "BOB");
    let id = v["id"].as_str().unwrap().to_owned();
    // a bounded probe of 4ⁿ half-moves, alternating Alice's letters
    for i in 0..(4u32.pow(5) / 2) {
        let letter = if i % 3 == 0 { "b" } else { "a" };
        let (s, out) = call(
            &app,
            "POST",
            &format!("/sessions/{id}/moves"),
            Some(json!({"letter": letter})),
        )
        .await;
        assert_eq!(s, StatusCode::OK);
        assert_eq!(out["status"], "IN_PROGRESS");
        assert!(out["position"]["coins"].as_array().unwrap().len() >= 2);
    }
}

#[tokio::test]
async fn unknown_route_is_json_404() {
    let (s, v) = call(&app(), "GET", "/nowhere", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["code"], "NOT_FOUND");
}
