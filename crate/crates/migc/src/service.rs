//! JSON-over-HTTP sessions: interactive MIGC questioning and assisted
//! battleship.
//!
//! Sessions live in memory and are dropped after an idle timeout. Requests
//! on one session are serialized by that session's mutex.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use migc_core::scenarios::battleship::bench_target;
use migc_core::scenarios::{
    battleship_layouts, Advice, BattleshipConfig, BattleshipState, Game, Sampling, StopRule,
};
use migc_core::{migc_build, DecisionTree, Distribution, Node, QuerySet, Question, SearchBudget};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::formats::{DistributionFile, QuerySetFile};

pub const DEFAULT_TTL: Duration = Duration::from_secs(3600);

/// Error body `{code, message}` with its status.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            code: code.to_string(),
            message: message.into(),
        }
    }

    fn not_found(what: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "UnknownSession",
            format!("no such {what}"),
        )
    }

    fn complete() -> Self {
        Self::new(
            StatusCode::GONE,
            "SessionComplete",
            "session is already complete",
        )
    }
}

impl From<migc_core::Error> for ApiError {
    fn from(e: migc_core::Error) -> Self {
        use migc_core::Error as E;
        let status = match &e {
            _ if e.is_infeasible() => StatusCode::UNPROCESSABLE_ENTITY,
            E::ContradictoryAnswer | E::CellAlreadyShot(_) => StatusCode::CONFLICT,
            E::Solved => StatusCode::GONE,
            _ => StatusCode::BAD_REQUEST,
        };
        Self::new(status, e.code(), e.to_string())
    }
}

impl From<crate::Error> for ApiError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Core(c) => c.into(),
            other => Self::new(StatusCode::BAD_REQUEST, other.code(), other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "code": self.code, "message": self.message });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "ParseError", e.to_string()))
}

struct Entry<S> {
    touched: Instant,
    session: Arc<Mutex<S>>,
}

/// Session map with idle expiry.
pub struct Store<S> {
    ttl: Duration,
    map: Mutex<HashMap<String, Entry<S>>>,
}

impl<S> Store<S> {
    pub fn new(ttl: Duration) -> Self {
        Self {
            ttl,
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn insert(&self, session: S) -> String {
        let id = uuid::Uuid::new_v4().to_string();
        let mut map = self.map.lock().unwrap();
        Self::sweep(&mut map, self.ttl);
        map.insert(
            id.clone(),
            Entry {
                touched: Instant::now(),
                session: Arc::new(Mutex::new(session)),
            },
        );
        id
    }

    pub fn get(&self, id: &str) -> Option<Arc<Mutex<S>>> {
        let mut map = self.map.lock().unwrap();
        Self::sweep(&mut map, self.ttl);
        let entry = map.get_mut(id)?;
        entry.touched = Instant::now();
        Some(Arc::clone(&entry.session))
    }

    pub fn len(&self) -> usize {
        let mut map = self.map.lock().unwrap();
        Self::sweep(&mut map, self.ttl);
        map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sweep(map: &mut HashMap<String, Entry<S>>, ttl: Duration) {
        map.retain(|_, e| e.touched.elapsed() < ttl);
    }
}

pub struct QuerySession {
    dist: Distribution,
    qset: QuerySet,
    tree: DecisionTree,
    /// Answers given so far, from the root.
    answers: Vec<usize>,
}

impl QuerySession {
    fn node(&self) -> &Node {
        let mut node = &self.tree.root;
        for &a in &self.answers {
            node = node.child(a).expect("history follows existing edges");
        }
        node
    }

    fn labels(&self, symbols: impl Iterator<Item = usize>) -> Vec<&str> {
        symbols.map(|s| self.dist.label(s)).collect()
    }

    fn query_json(&self, node: &Node) -> Value {
        let Node::Internal { question, children } = node else {
            return Value::Null;
        };
        let here = node.symbols();
        let (query_id, cells) = match question {
            Question::Listed(q) => {
                let cells = self
                    .qset
                    .query(*q)
                    .expect("tree only uses pool queries")
                    .cells()
                    .iter()
                    .map(|c| c.intersection(&here))
                    .collect();
                (Some(*q), cells)
            }
            Question::Partition(cells) => (None, cells.clone()),
        };
        let options: Vec<Value> = cells
            .iter()
            .enumerate()
            .filter(|(a, c)| !c.is_empty() && children.contains_key(a))
            .map(|(a, c)| {
                json!({ "answer": a, "symbols": c.to_vec(), "labels": self.labels(c.iter()) })
            })
            .collect();
        json!({ "query_id": query_id, "options": options })
    }

    fn view(&self, id: &str) -> Value {
        let node = self.node();
        let candidates = node.symbols();
        let (status, result) = match node {
            Node::Leaf(s) => (
                "identified",
                json!({ "symbol": s, "label": self.dist.label(*s), "queries": self.answers.len() }),
            ),
            Node::Internal { .. } => ("asking", Value::Null),
        };
        json!({
            "id": id,
            "status": status,
            "d": self.qset.arity(),
            "query": self.query_json(node),
            "result": result,
            "candidates": candidates.to_vec(),
            "candidate_labels": self.labels(candidates.iter()),
            "answers": self.answers,
            "entropy_bound": self.dist.entropy(f64::from(self.qset.arity())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Oracle,
    Advisor,
}

pub struct BattleshipSession {
    mode: Mode,
    stop_rule: StopRule,
    game: Game,
    state: BattleshipState,
    target: Option<usize>,
    layouts: usize,
}

fn answer_names(players: usize) -> Vec<String> {
    (1..=players)
        .map(|p| format!("hit-p{p}"))
        .chain(std::iter::once("miss".to_string()))
        .collect()
}

impl BattleshipSession {
    fn answer_index(&self, name: &str) -> Result<usize, ApiError> {
        answer_names(self.game.players)
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| {
                ApiError::new(
                    StatusCode::BAD_REQUEST,
                    "InvalidAnswer",
                    format!("unknown answer {name:?}"),
                )
            })
    }

    fn board(&self) -> Value {
        json!({
            "rows": self.game.rows,
            "cols": self.game.cols,
            "players": self.game.players,
            "answers": answer_names(self.game.players),
        })
    }

    fn done(&self) -> bool {
        self.game.advise(&self.state, self.stop_rule) == Advice::Done
    }

    fn view(&self, id: &str) -> Value {
        let names = answer_names(self.game.players);
        let shots: Vec<Value> = self
            .state
            .shots
            .iter()
            .map(|s| json!({ "cell": s.cell, "answer": names[s.answer] }))
            .collect();
        json!({
            "id": id,
            "mode": self.mode,
            "stop": match self.stop_rule { StopRule::Identify => "identify", StopRule::Sink => "sink" },
            "board": self.board(),
            "layouts": self.layouts,
            "distinct_layouts": self.game.boards().len(),
            "remaining": self.state.survivors.len(),
            "entropy": self.state.entropy(),
            "trace": self.state.trace,
            "shots": shots,
            "identified": self.state.is_identified(),
            "done": self.done(),
        })
    }
}

pub struct AppState {
    pub sessions: Store<QuerySession>,
    pub games: Store<BattleshipSession>,
    pub budget: SearchBudget,
}

impl AppState {
    pub fn new(ttl: Duration) -> Self {
        Self {
            sessions: Store::new(ttl),
            games: Store::new(ttl),
            budget: SearchBudget::default(),
        }
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new(DEFAULT_TTL)
    }
}

type Shared = State<Arc<AppState>>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/answer", post(post_answer))
        .route("/battleship", post(create_battleship))
        .route("/battleship/{id}", get(get_battleship))
        .route("/battleship/{id}/recommendation", get(recommendation))
        .route("/battleship/{id}/result", post(report_result))
        .route("/battleship/{id}/heatmap", get(heatmap))
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(addr: std::net::SocketAddr, ttl: Duration) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(AppState::new(ttl)))).await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateSession {
    dist: DistributionFile,
    qset: QuerySetFile,
}

async fn create_session(State(app): Shared, body: Bytes) -> ApiResult {
    let req: CreateSession = parse(&body)?;
    let dist = req.dist.to_distribution()?;
    let qset = req.qset.to_query_set(dist.len())?;
    let tree = migc_build(&dist, &qset, &app.budget)?;
    let session = QuerySession {
        dist,
        qset,
        tree,
        answers: Vec::new(),
    };
    let view = session.view("");
    let id = app.sessions.insert(session);
    Ok(Json(with_id(view, &id)))
}

fn with_id(mut view: Value, id: &str) -> Value {
    view["id"] = json!(id);
    view
}

async fn get_session(State(app): Shared, Path(id): Path<String>) -> ApiResult {
    let session = app
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::not_found("session"))?;
    let session = session.lock().unwrap();
    Ok(Json(session.view(&id)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnswerBody {
    answer: usize,
}

async fn post_answer(State(app): Shared, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let session = app
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::not_found("session"))?;
    let req: AnswerBody = parse(&body)?;
    let mut session = session.lock().unwrap();
    let d = session.qset.arity() as usize;
    if matches!(session.node(), Node::Leaf(_)) {
        return Err(ApiError::complete());
    }
    if req.answer >= d {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "OutOfRangeIndex",
            format!("answer {} is not below {d}", req.answer),
        ));
    }
    if session.node().child(req.answer).is_none() {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "ContradictoryAnswer",
            format!("no remaining candidate gives answer {}", req.answer),
        ));
    }
    session.answers.push(req.answer);
    Ok(Json(session.view(&id)))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ConfigBody {
    rows: usize,
    cols: usize,
    fleets: Vec<Vec<usize>>,
    layouts: usize,
    stop: String,
    seed: u64,
    exhaustive: bool,
}

impl Default for ConfigBody {
    fn default() -> Self {
        let c = BattleshipConfig::default();
        Self {
            rows: c.rows,
            cols: c.cols,
            fleets: c.fleets,
            layouts: c.layout_count,
            stop: "identify".into(),
            seed: c.seed,
            exhaustive: false,
        }
    }
}

impl ConfigBody {
    fn to_config(&self) -> Result<BattleshipConfig, ApiError> {
        let stop_rule = match self.stop.as_str() {
            "identify" => StopRule::Identify,
            "sink" => StopRule::Sink,
            other => {
                return Err(ApiError::new(
                    StatusCode::BAD_REQUEST,
                    "InvalidConfig",
                    format!("unknown stop rule {other:?}"),
                ))
            }
        };
        Ok(BattleshipConfig {
            rows: self.rows,
            cols: self.cols,
            fleets: self.fleets.clone(),
            layout_count: self.layouts,
            stop_rule,
            seed: self.seed,
            sampling: if self.exhaustive {
                Sampling::Exhaustive
            } else {
                Sampling::Random
            },
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateBattleship {
    #[serde(default)]
    config: Option<ConfigBody>,
    #[serde(default = "default_mode")]
    mode: Mode,
}

fn default_mode() -> Mode {
    Mode::Advisor
}

async fn create_battleship(State(app): Shared, body: Bytes) -> ApiResult {
    let req: CreateBattleship = parse(&body)?;
    let config = req.config.unwrap_or_default().to_config()?;
    let mode = req.mode;
    let session = tokio::task::spawn_blocking(move || -> Result<_, ApiError> {
        let layouts = battleship_layouts(&config)?;
        let game = Game::new(&layouts);
        // the same target as game 0 of a benchmark run with this config
        let target = (mode == Mode::Oracle).then(|| bench_target(&config, &layouts, &game, 0));
        let state = game.start();
        Ok(BattleshipSession {
            mode,
            stop_rule: config.stop_rule,
            game,
            state,
            target,
            layouts: layouts.len(),
        })
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))??;
    let view = session.view("");
    let id = app.games.insert(session);
    Ok(Json(with_id(view, &id)))
}

fn game(app: &AppState, id: &str) -> Result<Arc<Mutex<BattleshipSession>>, ApiError> {
    app.games
        .get(id)
        .ok_or_else(|| ApiError::not_found("battleship game"))
}

async fn get_battleship(State(app): Shared, Path(id): Path<String>) -> ApiResult {
    let session = game(&app, &id)?;
    let session = session.lock().unwrap();
    Ok(Json(session.view(&id)))
}

async fn recommendation(State(app): Shared, Path(id): Path<String>) -> ApiResult {
    let session = game(&app, &id)?;
    let s = session.lock().unwrap();
    let names = answer_names(s.game.players);
    let cols = s.game.cols;
    let cell_json = |cell: usize| json!({ "cell": cell, "row": cell / cols, "col": cell % cols });
    let body = match s.game.advise(&s.state, s.stop_rule) {
        Advice::Probe(a) => {
            let mut v = cell_json(a.cell);
            v["kind"] = json!("probe");
            v["probabilities"] = json!(a.probabilities);
            v["answers"] = json!(names);
            v["entropy"] = json!(a.entropy);
            v
        }
        Advice::Finish(cell) => {
            let mut v = cell_json(cell);
            v["kind"] = json!("finish");
            v
        }
        Advice::Done => json!({ "kind": "done", "cell": null }),
    };
    Ok(Json(body))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResultBody {
    cell: usize,
    #[serde(default)]
    answer: Option<String>,
}

async fn report_result(State(app): Shared, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let session = game(&app, &id)?;
    let req: ResultBody = parse(&body)?;
    let mut s = session.lock().unwrap();
    if s.done() {
        return Err(ApiError::complete());
    }
    if req.cell >= s.game.cells() {
        return Err(migc_core::Error::OutOfRangeIndex {
            index: req.cell,
            len: s.game.cells(),
        }
        .into());
    }
    let reported = req
        .answer
        .as_deref()
        .map(|a| s.answer_index(a))
        .transpose()?;
    let answer = match (s.target, reported) {
        (Some(t), reported) => {
            let truth = s.game.boards()[t].answer(req.cell, s.game.players);
            if reported.is_some_and(|r| r != truth) {
                return Err(migc_core::Error::ContradictoryAnswer.into());
            }
            truth
        }
        (None, Some(r)) => r,
        (None, None) => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "MissingAnswer",
                "advisor mode needs the observed answer",
            ))
        }
    };
    let s = &mut *s;
    let entropy = s.game.report(&mut s.state, req.cell, answer)?;
    let mut view = s.view(&id);
    view["cell"] = json!(req.cell);
    view["answer"] = json!(answer_names(s.game.players)[answer]);
    view["entropy"] = json!(entropy);
    Ok(Json(view))
}

async fn heatmap(State(app): Shared, Path(id): Path<String>) -> ApiResult {
    let session = game(&app, &id)?;
    let s = session.lock().unwrap();
    let fired: Vec<usize> = (0..s.game.cells())
        .filter(|&c| s.state.has_fired(c))
        .collect();
    Ok(Json(json!({
        "rows": s.game.rows,
        "cols": s.game.cols,
        "answers": answer_names(s.game.players),
        "cells": s.game.heatmap(&s.state),
        "fired": fired,
        "entropy": s.state.entropy(),
    })))
}
