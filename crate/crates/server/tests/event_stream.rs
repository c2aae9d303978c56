use std::time::Duration;

use futures_util::{SinkExt, StreamExt};
use polydots_server::{router, AppState, ServerConfig};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tokio_tungstenite::tungstenite::Message;

async fn start(delay: Duration) -> String {
    let state = AppState::new(ServerConfig { ai_turn_delay: delay, ..ServerConfig::default() });
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, router(state)).await.unwrap() });
    format!("127.0.0.1:{}", addr.port())
}

async fn http(addr: &str, method: &str, path: &str, body: Option<Value>) -> Value {
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    let body = body.map(|b| b.to_string()).unwrap_or_default();
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    let req = format!(
        "{method} {path} HTTP/1.1\r\nhost: {addr}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(req.as_bytes()).await.unwrap();
    let mut raw = String::new();
    stream.read_to_string(&mut raw).await.unwrap();
    let (_, payload) = raw.split_once("\r\n\r\n").unwrap();
    serde_json::from_str(payload).unwrap()
}

type Socket = tokio_tungstenite::WebSocketStream<tokio_tungstenite::MaybeTlsStream<tokio::net::TcpStream>>;

async fn next_event(ws: &mut Socket) -> Value {
    loop {
        let msg = tokio::time::timeout(Duration::from_secs(20), ws.next()).await.expect("event in time").unwrap().unwrap();
        if let Message::Text(t) = msg {
            return serde_json::from_str(&t).unwrap();
        }
    }
}

#[tokio::test]
async fn move_batches_are_streamed_in_order() {
    let addr = start(Duration::ZERO).await;
    let created = http(
        &addr,
        "POST",
        "/games",
        Some(json!({"board": {"width": 3, "height": 3}, "variant": "triangles", "seats": {"p1": "human", "p2": "greedy"}})),
    )
    .await;
    let id = created["id"].as_str().unwrap();
    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/games/{id}/events")).await.unwrap();
    let mut other = tokio_tungstenite::connect_async(format!("ws://{addr}/games/{id}/events")).await.unwrap().0;

    let reply = http(&addr, "POST", &format!("/games/{id}/moves"), Some(json!({"from": [0, 0], "to": [1, 0]}))).await;
    let batch = reply["events"].as_array().unwrap().clone();
    for expected in &batch {
        let got = next_event(&mut ws).await;
        assert_eq!(&got, expected);
        assert_eq!(next_event(&mut other).await, got);
    }
    let first = &batch[0];
    for key in ["seq", "move", "claims", "extra_turn", "scores", "to_move", "game_over"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    assert_eq!(first["move"], json!({"player": 1, "from": [0, 0], "to": [1, 0]}));
    ws.send(Message::Close(None)).await.ok();
}

#[tokio::test]
async fn resuming_after_a_snapshot_misses_nothing() {
    let addr = start(Duration::ZERO).await;
    let created = http(
        &addr,
        "POST",
        "/games",
        Some(json!({"board": {"width": 3, "height": 3}, "variant": "polygons", "seats": {"p1": "human", "p2": "random"}, "seed": 9})),
    )
    .await;
    let id = created["id"].as_str().unwrap().to_string();
    http(&addr, "POST", &format!("/games/{id}/moves"), Some(json!({"from": [0, 0], "to": [1, 0]}))).await;
    let snapshot = http(&addr, "GET", &format!("/games/{id}"), None).await;
    let seq = snapshot["seq"].as_u64().unwrap();
    assert!(seq >= 2);

    // Everything after seq 1 is replayed, then live events follow.
    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/games/{id}/events?since=1")).await.unwrap();
    for want in 2..=seq {
        assert_eq!(next_event(&mut ws).await["seq"], want);
    }
    let legal = http(&addr, "GET", &format!("/games/{id}/legal"), None).await;
    let m = &legal[0];
    http(&addr, "POST", &format!("/games/{id}/moves"), Some(json!({"from": m["from"], "to": m["to"]}))).await;
    assert_eq!(next_event(&mut ws).await["seq"], seq + 1);
}

#[tokio::test]
async fn ai_against_ai_plays_out_in_the_background() {
    let addr = start(Duration::from_millis(1)).await;
    let created = http(
        &addr,
        "POST",
        "/games",
        Some(json!({"board": {"width": 3, "height": 3}, "variant": "triangles", "seats": {"p1": "greedy", "p2": "double-dealer"}})),
    )
    .await;
    let id = created["id"].as_str().unwrap();
    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/games/{id}/events?since=0")).await.unwrap();
    let mut last_seq = 0;
    loop {
        let e = next_event(&mut ws).await;
        assert_eq!(e["seq"], last_seq + 1);
        last_seq += 1;
        if e["game_over"] == true {
            break;
        }
    }
    let state = http(&addr, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(state["game_over"], true);
    assert_eq!(state["seq"], last_seq);
    assert_eq!(state["scores"]["p1_halves"].as_u64().unwrap() + state["scores"]["p2_halves"].as_u64().unwrap(), 8);
}
