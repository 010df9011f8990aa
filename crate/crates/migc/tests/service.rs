use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use migc::service::{router, AppState};
use migc_core::scenarios::{
    battleship_layouts, battleship_play, bench_target, BattleshipConfig, Game, StopRule,
};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(Arc::new(AppState::default()))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

fn example_one() -> Value {
    json!({
        "dist": {"labels": [1, 2, 3, 4], "probs": [0.1, 0.4, 0.2, 0.3]},
        "qset": {"d": 2, "unconstrained": false, "queries": [
            {"id": 0, "cells": [[0, 1]]},
            {"id": 1, "cells": [[1, 2]]},
            {"id": 2, "cells": [[2, 3]]}
        ]}
    })
}

#[tokio::test]
async fn example_one_session_takes_two_answers() {
    let app = app();
    let (status, created) = call(&app, "POST", "/sessions", Some(example_one())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(created["status"], "asking");
    assert_eq!(created["query"]["query_id"], 0);
    let options = created["query"]["options"].as_array().unwrap();
    assert_eq!(options.len(), 2);
    assert_eq!(options[0]["labels"], json!(["1", "2"]));
    assert_eq!(options[1]["labels"], json!(["3", "4"]));
    let id = created["id"].as_str().unwrap().to_string();

    let uri = format!("/sessions/{id}/answer");
    let (status, first) = call(&app, "POST", &uri, Some(json!({"answer": 0}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(first["status"], "asking");
    let (status, second) = call(&app, "POST", &uri, Some(json!({"answer": 1}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(second["status"], "identified");
    assert_eq!(second["result"]["queries"], 2);
    assert_eq!(second["result"]["label"], "1");

    let (status, again) = call(&app, "POST", &uri, Some(json!({"answer": 0}))).await;
    assert_eq!(status, StatusCode::GONE);
    assert_eq!(again["code"], "SessionComplete");

    let (status, state) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["answers"], json!([0, 1]));
    assert_eq!(state, second);
}

#[tokio::test]
async fn session_errors() {
    let app = app();
    let (status, body) = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({"dist": {"probs": [0.5, 0.4]}, "qset": {"d": 2, "unconstrained": true}})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "MassSumError");

    let infeasible = json!({
        "dist": {"probs": [0.5, 0.25, 0.25]},
        "qset": {"d": 2, "queries": [{"id": 0, "cells": [[0]]}]}
    });
    let (status, body) = call(&app, "POST", "/sessions", Some(infeasible)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "InfeasibleQuerySet");

    let (status, body) = call(&app, "POST", "/sessions", Some(json!({"dist": 1}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "ParseError");

    let (status, body) = call(&app, "GET", "/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "UnknownSession");
    let (status, _) = call(
        &app,
        "POST",
        "/sessions/nope/answer",
        Some(json!({"answer": 0})),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (_, created) = call(&app, "POST", "/sessions", Some(example_one())).await;
    let uri = format!("/sessions/{}/answer", created["id"].as_str().unwrap());
    let (status, body) = call(&app, "POST", &uri, Some(json!({"answer": 2}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "OutOfRangeIndex");
}

#[tokio::test]
async fn empty_answer_cell_is_a_conflict() {
    let app = app();
    let body = json!({
        "dist": {"labels": ["x", "y"], "probs": [0.5, 0.5]},
        "qset": {"d": 3, "queries": [{"id": 0, "cells": [[0], [1], []]}]}
    });
    let (status, created) = call(&app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    let uri = format!("/sessions/{}/answer", created["id"].as_str().unwrap());
    let (status, body) = call(&app, "POST", &uri, Some(json!({"answer": 2}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "ContradictoryAnswer");
    // the session is unharmed
    let (status, body) = call(&app, "POST", &uri, Some(json!({"answer": 1}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["result"]["label"], "y");
}

#[tokio::test]
async fn single_symbol_is_immediately_identified() {
    let app = app();
    let body = json!({"dist": {"labels": ["only"], "probs": [1.0]}, "qset": {"d": 2, "unconstrained": true}});
    let (status, created) = call(&app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(created["status"], "identified");
    assert_eq!(created["result"]["label"], "only");
    assert_eq!(created["result"]["queries"], 0);
}

/// Walks every root-to-leaf path; the number of answers must equal the
/// symbol's code length, and replays must give identical payloads.
#[tokio::test]
async fn answer_counts_equal_code_lengths() {
    let app = app();
    let probs = [0.1, 0.2, 0.3, 0.15, 0.25, 0.05, 0.2, 0.1];
    let total: f64 = probs.iter().sum();
    let probs: Vec<f64> = probs.iter().map(|p| p / total).collect();
    let body = json!({"dist": {"probs": probs}, "qset": {"d": 3, "unconstrained": true}});

    let dist = migc_core::Distribution::from_probs(probs.clone()).unwrap();
    let qset = migc_core::QuerySet::unconstrained(3, dist.len()).unwrap();
    let tree = migc_core::migc_build(&dist, &qset, &Default::default()).unwrap();
    let report = migc_core::expected_length(&tree, &dist, 3).unwrap();

    let mut seen = 0;
    let mut stack: Vec<Vec<u64>> = vec![vec![]];
    while let Some(path) = stack.pop() {
        let mut views = Vec::new();
        for _ in 0..2 {
            let (_, created) = call(&app, "POST", "/sessions", Some(body.clone())).await;
            let uri = format!("/sessions/{}/answer", created["id"].as_str().unwrap());
            let mut last = created;
            for &a in &path {
                let (status, v) = call(&app, "POST", &uri, Some(json!({"answer": a}))).await;
                assert_eq!(status, StatusCode::OK);
                last = v;
            }
            last["id"] = Value::Null;
            views.push(last);
        }
        assert_eq!(views[0], views[1]);
        let view = &views[0];
        if view["status"] == "identified" {
            let symbol = view["result"]["symbol"].as_u64().unwrap() as usize;
            assert_eq!(
                view["result"]["queries"].as_u64().unwrap() as usize,
                path.len()
            );
            assert_eq!(report.per_symbol_lengths[symbol] as usize, path.len());
            seen += 1;
        } else {
            for option in view["query"]["options"].as_array().unwrap() {
                let mut next = path.clone();
                next.push(option["answer"].as_u64().unwrap());
                stack.push(next);
            }
        }
    }
    assert_eq!(seen, probs.len());
}

fn small_config() -> Value {
    json!({"rows": 5, "cols": 5, "fleets": [[3], [2]], "layouts": 3000, "seed": 4, "stop": "identify"})
}

fn core_config() -> BattleshipConfig {
    BattleshipConfig {
        rows: 5,
        cols: 5,
        fleets: vec![vec![3], vec![2]],
        layout_count: 3000,
        seed: 4,
        stop_rule: StopRule::Identify,
        ..BattleshipConfig::default()
    }
}

async fn autoplay(app: &Router, id: &str) -> Vec<(usize, String)> {
    let mut shots = Vec::new();
    loop {
        let (status, rec) = call(
            app,
            "GET",
            &format!("/battleship/{id}/recommendation"),
            None,
        )
        .await;
        assert_eq!(status, StatusCode::OK);
        if rec["kind"] == "done" {
            break;
        }
        let probs: f64 = rec["probabilities"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p.as_f64().unwrap())
            .sum();
        assert!((probs - 1.0).abs() < 1e-9);
        assert!(rec["entropy"].as_f64().unwrap() <= 1.0 + 1e-12);
        let cell = rec["cell"].as_u64().unwrap() as usize;
        let (status, res) = call(
            app,
            "POST",
            &format!("/battleship/{id}/result"),
            Some(json!({"cell": cell})),
        )
        .await;
        assert_eq!(status, StatusCode::OK);
        let remaining = res["remaining"].as_f64().unwrap();
        assert!((res["entropy"].as_f64().unwrap() - remaining.ln() / 3f64.ln()).abs() < 1e-12);
        shots.push((cell, res["answer"].as_str().unwrap().to_string()));

        let (_, heat) = call(app, "GET", &format!("/battleship/{id}/heatmap"), None).await;
        for c in heat["cells"].as_array().unwrap() {
            let s: f64 = c
                .as_array()
                .unwrap()
                .iter()
                .map(|p| p.as_f64().unwrap())
                .sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }
    shots
}

#[tokio::test]
async fn oracle_game_replays_self_play() {
    let app = app();
    let (status, created) = call(
        &app,
        "POST",
        "/battleship",
        Some(json!({"config": small_config(), "mode": "oracle"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        created["board"]["answers"],
        json!(["hit-p1", "hit-p2", "miss"])
    );
    let id = created["id"].as_str().unwrap().to_string();
    let shots = autoplay(&app, &id).await;

    let config = core_config();
    let layouts = battleship_layouts(&config).unwrap();
    let game = Game::new(&layouts);
    let expected = battleship_play(
        &game,
        bench_target(&config, &layouts, &game, 0),
        StopRule::Identify,
    )
    .unwrap();
    let cells: Vec<usize> = shots.iter().map(|s| s.0).collect();
    let expected_cells: Vec<usize> = expected.shots.iter().map(|s| s.cell).collect();
    assert_eq!(cells, expected_cells);

    let (_, state) = call(&app, "GET", &format!("/battleship/{id}"), None).await;
    let trace: Vec<f64> = state["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h.as_f64().unwrap())
        .collect();
    assert_eq!(trace, expected.trace);
    assert_eq!(*trace.last().unwrap(), 0.0);
    assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(state["done"], true);

    let (status, body) = call(
        &app,
        "POST",
        &format!("/battleship/{id}/result"),
        Some(json!({"cell": 0})),
    )
    .await;
    assert_eq!(status, StatusCode::GONE);
    assert_eq!(body["code"], "SessionComplete");
}

#[tokio::test]
async fn advisor_filtering_matches_oracle() {
    let app = app();
    let (_, oracle) = call(
        &app,
        "POST",
        "/battleship",
        Some(json!({"config": small_config(), "mode": "oracle"})),
    )
    .await;
    let oracle_id = oracle["id"].as_str().unwrap().to_string();
    let shots = autoplay(&app, &oracle_id).await;

    let (_, advisor) = call(
        &app,
        "POST",
        "/battleship",
        Some(json!({"config": small_config(), "mode": "advisor"})),
    )
    .await;
    let id = advisor["id"].as_str().unwrap().to_string();
    let uri = format!("/battleship/{id}/result");
    let (status, body) = call(&app, "POST", &uri, Some(json!({"cell": 0}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "MissingAnswer");
    for (cell, answer) in &shots {
        let (status, _) = call(
            &app,
            "POST",
            &uri,
            Some(json!({"cell": cell, "answer": answer})),
        )
        .await;
        assert_eq!(status, StatusCode::OK);
    }
    let (_, a) = call(&app, "GET", &format!("/battleship/{id}"), None).await;
    let (_, o) = call(&app, "GET", &format!("/battleship/{oracle_id}"), None).await;
    assert_eq!(a["trace"], o["trace"]);
    assert_eq!(a["shots"], o["shots"]);
}

#[tokio::test]
async fn battleship_errors() {
    let app = app();
    let (status, body) = call(
        &app,
        "POST",
        "/battleship",
        Some(json!({"config": {"rows": 1, "cols": 3, "fleets": [[4]]}, "mode": "advisor"})),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "ImpossibleFleet");

    let (status, _) = call(&app, "GET", "/battleship/missing/heatmap", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    // one ship of length 3 on a 1x5 strip: three layouts, middle cell always hit
    let strip = json!({"rows": 1, "cols": 5, "fleets": [[3]], "exhaustive": true});
    let (_, created) = call(
        &app,
        "POST",
        "/battleship",
        Some(json!({"config": strip, "mode": "advisor"})),
    )
    .await;
    assert_eq!(created["remaining"], 3);
    let id = created["id"].as_str().unwrap().to_string();
    let (_, rec) = call(
        &app,
        "GET",
        &format!("/battleship/{id}/recommendation"),
        None,
    )
    .await;
    assert_eq!(rec["cell"], 0);
    let uri = format!("/battleship/{id}/result");
    let (status, body) = call(
        &app,
        "POST",
        &uri,
        Some(json!({"cell": 2, "answer": "miss"})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "ContradictoryAnswer");
    let (status, body) = call(
        &app,
        "POST",
        &uri,
        Some(json!({"cell": 2, "answer": "hit-p7"})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "InvalidAnswer");
    let (status, _) = call(
        &app,
        "POST",
        &uri,
        Some(json!({"cell": 2, "answer": "hit-p1"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let (status, body) = call(
        &app,
        "POST",
        &uri,
        Some(json!({"cell": 2, "answer": "hit-p1"})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "CellAlreadyShot");

    let (_, oracle) = call(
        &app,
        "POST",
        "/battleship",
        Some(json!({"config": {"rows": 1, "cols": 5, "fleets": [[3]], "exhaustive": true}, "mode": "oracle"})),
    )
    .await;
    let uri = format!("/battleship/{}/result", oracle["id"].as_str().unwrap());
    let (status, body) = call(
        &app,
        "POST",
        &uri,
        Some(json!({"cell": 2, "answer": "miss"})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "ContradictoryAnswer");
}
