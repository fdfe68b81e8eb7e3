//! Websocket transport and static file serving.

use std::future::Future;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use futures_util::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::time::{sleep_until, Instant};
use tower_http::services::ServeDir;
use tracing::{debug, info, warn};

use crate::lobby::Lobby;
use crate::protocol::ServerFrame;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub max_sessions: usize,
    /// Directory served at `/` (the browser client), if any.
    pub static_dir: Option<PathBuf>,
    /// Clients are expected to send a frame (usually `ping`) this often.
    pub heartbeat: Duration,
    /// A seat is dropped after this many silent heartbeat periods.
    pub missed_heartbeats: u32,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            max_sessions: 64,
            static_dir: None,
            heartbeat: Duration::from_secs(5),
            missed_heartbeats: 3,
        }
    }
}

#[derive(Clone)]
struct App {
    lobby: Arc<Lobby>,
    timeout: Duration,
}

pub fn router(lobby: Arc<Lobby>, config: &ServerConfig) -> Router {
    let app = App {
        lobby,
        timeout: config.heartbeat * config.missed_heartbeats,
    };
    let router = Router::new()
        .route("/ws", get(upgrade))
        .route("/health", get(|| async { "ok" }))
        .with_state(app);
    match &config.static_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router,
    }
}

async fn upgrade(State(app): State<App>, ws: WebSocketUpgrade) -> Response {
    ws.on_upgrade(move |socket| run_socket(app, socket))
}

fn encode(frame: &ServerFrame) -> Message {
    Message::Text(
        serde_json::to_string(frame)
            .expect("frames always serialize")
            .into(),
    )
}

async fn run_socket(app: App, socket: WebSocket) {
    let mut conn = app.lobby.connect();
    let id = conn.id();
    let mut outbox = conn.take_receiver().expect("fresh connection");
    let mut closing = app.lobby.closing();
    let (mut sink, mut stream) = socket.split();
    let mut deadline = Instant::now() + app.timeout;
    debug!(id, "socket open");

    loop {
        tokio::select! {
            frame = outbox.recv() => {
                let Some(frame) = frame else { break };
                let last = matches!(frame, ServerFrame::Closed { .. });
                if sink.send(encode(&frame)).await.is_err() || last {
                    break;
                }
            }
            msg = stream.next() => {
                match msg {
                    Some(Ok(Message::Text(text))) => {
                        deadline = Instant::now() + app.timeout;
                        conn.handle_text(&text);
                    }
                    Some(Ok(Message::Close(_))) | None => break,
                    Some(Ok(_)) => deadline = Instant::now() + app.timeout,
                    Some(Err(e)) => {
                        debug!(id, "socket error: {e}");
                        break;
                    }
                }
            }
            _ = sleep_until(deadline) => {
                warn!(id, seat = ?conn.seat(), "heartbeat timeout");
                break;
            }
            _ = closing.changed() => {
                while let Ok(frame) = outbox.try_recv() {
                    let _ = sink.send(encode(&frame)).await;
                }
                break;
            }
        }
    }
    drop(conn);
    let _ = sink.close().await;
    debug!(id, "socket closed");
}

/// Serves until `shutdown` resolves, then notifies every client and stops.
pub async fn serve(
    listener: TcpListener,
    lobby: Arc<Lobby>,
    config: ServerConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    let addr = listener.local_addr()?;
    info!(%addr, max_sessions = config.max_sessions, "listening");
    let app = router(Arc::clone(&lobby), &config);
    axum::serve(listener, app)
        .with_graceful_shutdown(async move {
            shutdown.await;
            lobby.shutdown();
        })
        .await
}
