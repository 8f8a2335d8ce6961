//! Live-session server: one simulation per WebSocket connection.
//!
//! Each connection owns a [`Session`]. Incoming text messages carry one or
//! more newline-delimited JSON commands; the session loop applies them at
//! the next step boundary, integrates in wall-clock time and publishes the
//! latest frame at a fixed cadence.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use droopvessel::session::{ServerMessage, Session, DEFAULT_SCENARIO};
use futures::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::time::MissedTickBehavior;
use tower_http::services::ServeDir;

pub const DEFAULT_PORT: u16 = 8765;
pub const DEFAULT_FRAME_RATE_HZ: f64 = 20.0;
/// Longest wall-clock gap credited to a single tick.
const MAX_TICK_S: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub frame_rate_hz: f64,
    pub ui_dir: Option<PathBuf>,
    pub initial_scenario: String,
}

impl Default for ServeConfig {
    fn default() -> Self {
        ServeConfig {
            frame_rate_hz: DEFAULT_FRAME_RATE_HZ,
            ui_dir: None,
            initial_scenario: DEFAULT_SCENARIO.to_string(),
        }
    }
}

pub fn router(config: ServeConfig) -> Router {
    let ui = config.ui_dir.clone();
    let app = Router::new().route("/ws", get(upgrade)).with_state(config);
    match ui {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

pub async fn serve(listener: TcpListener, config: ServeConfig) -> std::io::Result<()> {
    axum::serve(listener, router(config)).await
}

async fn upgrade(ws: WebSocketUpgrade, State(config): State<ServeConfig>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| session_loop(socket, config))
}

fn line(message: &ServerMessage) -> Message {
    let mut text = message.to_line();
    text.push('\n');
    Message::Text(text.into())
}

async fn session_loop(socket: WebSocket, config: ServeConfig) {
    let (mut tx, mut rx) = socket.split();
    let mut session = match Session::builtin(&config.initial_scenario) {
        Ok(s) => s,
        Err(e) => {
            let _ = tx.send(line(&ServerMessage::error(e))).await;
            return;
        }
    };
    let period = Duration::from_secs_f64(1.0 / config.frame_rate_hz);
    let mut ticker = tokio::time::interval(period);
    ticker.set_missed_tick_behavior(MissedTickBehavior::Delay);
    let mut last = Instant::now();

    loop {
        tokio::select! {
            incoming = rx.next() => match incoming {
                Some(Ok(Message::Text(text))) => {
                    for l in text.lines().filter(|l| !l.trim().is_empty()) {
                        session.submit_line(l);
                    }
                }
                Some(Ok(Message::Binary(_))) => {
                    let _ = tx.send(line(&ServerMessage::error("binary messages are not supported"))).await;
                }
                Some(Ok(Message::Close(_))) | None | Some(Err(_)) => break,
                Some(Ok(_)) => {}
            },
            _ = ticker.tick() => {
                let now = Instant::now();
                let wall_dt = now.duration_since(last).as_secs_f64().min(MAX_TICK_S);
                last = now;
                session.tick(wall_dt);
                let mut outgoing = session.drain_messages();
                outgoing.push(session.frame_message());
                for m in &outgoing {
                    if tx.send(line(m)).await.is_err() {
                        return;
                    }
                }
            }
        }
    }
}
