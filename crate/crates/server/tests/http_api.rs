use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use polydots::engine::{BoardSpec, Variant};
use polydots_server::session::replay_events;
use polydots_server::{router, AppState, ServerConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> (Router, AppState) {
    let state = AppState::new(ServerConfig { ai_turn_delay: Duration::ZERO, ..ServerConfig::default() });
    (router(state.clone()), state)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(|b| Body::from(b.to_string())).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    (status, serde_json::from_str(&text).unwrap_or(Value::Null), text)
}

async fn create(app: &Router, w: u32, h: u32, variant: &str, p1: &str, p2: &str) -> (String, Value) {
    let body = json!({"board": {"width": w, "height": h}, "variant": variant, "seats": {"p1": p1, "p2": p2}, "seed": 3});
    let (status, v, text) = call(app, "POST", "/games", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{text}");
    (v["id"].as_str().unwrap().to_string(), v["state"].clone())
}

async fn play(app: &Router, id: &str, from: [i32; 2], to: [i32; 2]) -> (StatusCode, Value) {
    let (s, v, _) = call(app, "POST", &format!("/games/{id}/moves"), Some(json!({"from": from, "to": to}))).await;
    (s, v)
}

#[tokio::test]
async fn create_and_read_sessions() {
    let (app, _) = app();
    let (id, state) = create(&app, 4, 4, "polygons", "human", "greedy").await;
    assert_eq!(id.len(), 32);
    assert_eq!(state["board"], json!({"width": 4, "height": 4}));
    assert_eq!(state["variant"], "polygons");
    assert_eq!(state["to_move"], 1);
    assert_eq!(state["scores"], json!({"p1_halves": 0, "p2_halves": 0}));
    assert_eq!(state["seats"], json!({"p1": "human", "p2": "greedy"}));
    for key in ["segments", "claims", "turns", "doublecrosses"] {
        assert!(state.get(key).is_some(), "{key}");
    }
    let (status, got, _) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(got, state);

    let (other, _) = create(&app, 4, 4, "polygons", "human", "greedy").await;
    assert_ne!(id, other);

    let (status, legal, _) = call(&app, "GET", &format!("/games/{id}/legal"), None).await;
    assert_eq!(status, StatusCode::OK);
    let board = BoardSpec::new(4, 4).unwrap();
    assert_eq!(legal.as_array().unwrap().len(), board.primitive_segments().len());
    assert!(legal[0].get("from").is_some() && legal[0].get("to").is_some());
}

#[tokio::test]
async fn invalid_parameters_are_client_errors() {
    let (app, _) = app();
    let cases = [
        json!({"board": {"width": 1, "height": 1}, "variant": "triangles", "seats": {"p1": "human", "p2": "human"}}),
        json!({"board": {"width": 3, "height": 3}, "variant": "hexagons", "seats": {"p1": "human", "p2": "human"}}),
        json!({"board": {"width": 3, "height": 3}, "variant": "triangles", "seats": {"p1": "robot", "p2": "human"}}),
        json!({"board": {"width": 3}, "variant": "triangles"}),
    ];
    for body in cases {
        let (status, v, _) = call(&app, "POST", "/games", Some(body.clone())).await;
        assert!(status.is_client_error(), "{body} gave {status}");
        assert!(v["error"].is_string());
    }
    let (status, _, _) = call(&app, "GET", "/games/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn exact_against_exact_is_accepted() {
    let (app, _) = app();
    let (id, _) = create(&app, 5, 5, "triangles", "exact", "exact").await;
    assert!(!id.is_empty());
}

#[tokio::test]
async fn claiming_move_keeps_the_same_seat() {
    let (app, _) = app();
    let (id, _) = create(&app, 3, 3, "triangles", "human", "human").await;
    play(&app, &id, [0, 0], [1, 0]).await;
    play(&app, &id, [0, 0], [1, 1]).await;
    let (status, v) = play(&app, &id, [1, 0], [1, 1]).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["outcome"]["extra_turn"], true);
    assert_eq!(v["outcome"]["move"]["player"], 1);
    assert_eq!(v["outcome"]["claims"][0]["area_halves"], 1);
    assert_eq!(v["state"]["to_move"], 1);
    assert_eq!(v["state"]["scores"]["p1_halves"], 1);
}

#[tokio::test]
async fn rejections_use_reason_tokens() {
    let (app, _) = app();
    let (id, _) = create(&app, 3, 3, "triangles", "human", "human").await;
    play(&app, &id, [0, 0], [1, 1]).await;
    let cases = [
        ([0, 1], [1, 0], "conflict"),
        ([0, 0], [1, 1], "duplicate"),
        ([0, 0], [2, 2], "non-primitive"),
        ([2, 2], [3, 3], "out-of-board"),
    ];
    for (from, to, token) in cases {
        let (status, v) = play(&app, &id, from, to).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
        assert_eq!(v["reason"], token);
    }
    let (status, _) = play(&app, &id, [1, 1], [1, 1]).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn moves_after_the_end_are_not_your_turn() {
    let (app, _) = app();
    let (id, _) = create(&app, 2, 2, "triangles", "human", "random").await;
    loop {
        let (_, state, _) = call(&app, "GET", &format!("/games/{id}"), None).await;
        if state["game_over"] == true {
            break;
        }
        let (_, legal, _) = call(&app, "GET", &format!("/games/{id}/legal"), None).await;
        let m = &legal[0];
        let from = [m["from"][0].as_i64().unwrap() as i32, m["from"][1].as_i64().unwrap() as i32];
        let to = [m["to"][0].as_i64().unwrap() as i32, m["to"][1].as_i64().unwrap() as i32];
        let (status, _) = play(&app, &id, from, to).await;
        assert_eq!(status, StatusCode::OK);
    }
    let (status, v) = play(&app, &id, [0, 0], [1, 0]).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["reason"], "not-your-turn");
}

#[tokio::test]
async fn ai_replies_arrive_with_the_human_move() {
    let (app, state) = app();
    let (id, _) = create(&app, 4, 4, "triangles", "human", "double-dealer").await;
    let (status, v) = play(&app, &id, [0, 0], [1, 0]).await;
    assert_eq!(status, StatusCode::OK);
    let events = v["events"].as_array().unwrap();
    assert!(events.len() >= 2);
    assert_eq!(events[0], v["outcome"]);
    let seqs: Vec<u64> = events.iter().map(|e| e["seq"].as_u64().unwrap()).collect();
    assert_eq!(seqs, (1..=events.len() as u64).collect::<Vec<_>>());
    assert_eq!(v["state"]["to_move"], 1);
    assert_eq!(v["state"]["seq"], events.len());
    let log_len = state.with_session(&id, |s| s.events().len()).unwrap();
    assert_eq!(log_len, events.len());
}

#[tokio::test]
async fn ai_in_the_first_seat_opens() {
    let (app, _) = app();
    let (_, state) = create(&app, 3, 3, "polygons", "greedy", "human").await;
    assert_eq!(state["to_move"], 2);
    assert!(!state["segments"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn record_downloads_and_replays() {
    let (app, _) = app();
    let (id, _) = create(&app, 3, 3, "triangles", "human", "greedy").await;
    play(&app, &id, [0, 0], [1, 0]).await;
    play(&app, &id, [2, 2], [1, 2]).await;
    let (status, _, text) = call(&app, "GET", &format!("/games/{id}/record"), None).await;
    assert_eq!(status, StatusCode::OK);
    let replayed = polydots::record::load_record(text.as_bytes()).unwrap();
    let (_, state, _) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(replayed.moves().len(), state["segments"].as_array().unwrap().len());
}

#[tokio::test]
async fn classify_labels_open_regions() {
    let (app, _) = app();
    let (id, _) = create(&app, 4, 4, "polygons", "human", "human").await;
    // A closed square with a hole: its outer face stays open.
    let ring = [([0, 0], [3, 0]), ([3, 0], [3, 3]), ([3, 3], [0, 3]), ([0, 3], [0, 0])];
    let mut turn = 0;
    for (a, b) in ring {
        for (from, to) in unit_steps(a, b) {
            let (status, v) = play(&app, &id, from, to).await;
            assert_eq!(status, StatusCode::OK, "{v}");
            turn += 1;
        }
    }
    assert!(turn > 0);
    let (status, labels, _) = call(&app, "GET", &format!("/games/{id}/classify"), None).await;
    assert_eq!(status, StatusCode::OK);
    // The 3x3 square closed in the polygon variant is claimed on closure.
    assert_eq!(labels.as_array().unwrap().len(), 0);

    let (id, _) = create(&app, 4, 4, "triangles", "human", "human").await;
    for (a, b) in ring {
        for (from, to) in unit_steps(a, b) {
            play(&app, &id, from, to).await;
        }
    }
    let (_, labels, _) = call(&app, "GET", &format!("/games/{id}/classify"), None).await;
    let labels = labels.as_array().unwrap();
    assert_eq!(labels.len(), 1);
    assert_eq!(labels[0]["region"]["area_halves"], 18);
    assert_eq!(labels[0]["region"]["interior_points"], 4);
    assert_eq!(labels[0]["reduction"], "claimable");
    assert_eq!(labels[0]["eye"]["kind"], "not-an-eye");
}

fn unit_steps(a: [i32; 2], b: [i32; 2]) -> Vec<([i32; 2], [i32; 2])> {
    let (dx, dy) = ((b[0] - a[0]).signum(), (b[1] - a[1]).signum());
    let n = (b[0] - a[0]).abs().max((b[1] - a[1]).abs());
    (0..n).map(|i| ([a[0] + i * dx, a[1] + i * dy], [a[0] + (i + 1) * dx, a[1] + (i + 1) * dy])).collect()
}

#[tokio::test]
async fn event_log_replay_matches_state_after_random_play() {
    let (app, state) = app();
    for (variant, v) in [("triangles", Variant::Triangles), ("polygons", Variant::Polygons)] {
        let (id, _) = create(&app, 3, 3, variant, "human", "random").await;
        let mut k = 0usize;
        loop {
            let (_, legal, _) = call(&app, "GET", &format!("/games/{id}/legal"), None).await;
            let legal = legal.as_array().unwrap();
            if legal.is_empty() {
                break;
            }
            let m = &legal[(k * 7) % legal.len()];
            let pt = |p: &Value| [p[0].as_i64().unwrap() as i32, p[1].as_i64().unwrap() as i32];
            let (status, _) = play(&app, &id, pt(&m["from"]), pt(&m["to"])).await;
            assert_eq!(status, StatusCode::OK);
            k += 1;
            let ok = state
                .with_session(&id, |s| {
                    let replayed = replay_events(BoardSpec::new(3, 3).unwrap(), v, s.events()).unwrap();
                    replayed.drawn() == s.state().drawn() && replayed.scores() == s.state().scores()
                })
                .unwrap();
            assert!(ok);
        }
    }
}

#[tokio::test]
async fn concurrent_posts_form_a_linear_history() {
    let (app, state) = app();
    let (id, _) = create(&app, 4, 4, "triangles", "human", "human").await;
    let board = BoardSpec::new(4, 4).unwrap();
    let mut tasks = Vec::new();
    for s in board.primitive_segments() {
        let app = app.clone();
        let id = id.clone();
        tasks.push(tokio::spawn(async move { play(&app, &id, [s.a().x, s.a().y], [s.b().x, s.b().y]).await.0 }));
    }
    let mut accepted = 0;
    for t in tasks {
        if t.await.unwrap() == StatusCode::OK {
            accepted += 1;
        }
    }
    state
        .with_session(&id, |s| {
            assert_eq!(s.events().len(), accepted);
            for (i, e) in s.events().iter().enumerate() {
                assert_eq!(e.seq, i as u64 + 1);
            }
            let replayed = replay_events(board, Variant::Triangles, s.events()).unwrap();
            assert_eq!(replayed.drawn(), s.state().drawn());
        })
        .unwrap();
}
