use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use headsup_core::sync::{ClientRequest, Host, LoggedEvent, RequestBody};
use headsup_core::{Action, Seat};
use parking_lot::Mutex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tokio::sync::{mpsc, watch};
use tracing::{debug, info};

use crate::protocol::{controls_for, ClientFrame, RejectCode, ServerFrame, ServiceError};

pub type Outbox = mpsc::UnboundedSender<ServerFrame>;
pub type Inbox = mpsc::UnboundedReceiver<ServerFrame>;

const CODE_ALPHABET: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
pub const CODE_LEN: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    WaitingForPlayers,
    InHand,
    BetweenHands,
    Ended,
}

#[derive(Debug)]
struct SeatBinding {
    name: String,
    token: String,
    conn: Option<(u64, Outbox)>,
}

/// One match and the two connections playing it.
#[derive(Debug)]
pub struct Session {
    code: String,
    host: Host,
    seats: [Option<SeatBinding>; 2],
}

impl Session {
    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn host(&self) -> &Host {
        &self.host
    }

    pub fn phase(&self) -> Phase {
        let state = self.host.state();
        if state.match_state.is_over() && !state.hand_in_progress() {
            Phase::Ended
        } else if state.hand_in_progress() {
            Phase::InHand
        } else if self.seats.iter().all(Option::is_some) {
            Phase::BetweenHands
        } else {
            Phase::WaitingForPlayers
        }
    }

    fn connected(&self) -> usize {
        self.seats
            .iter()
            .filter(|s| s.as_ref().is_some_and(|b| b.conn.is_some()))
            .count()
    }

    fn send(&self, seat: Seat, frame: ServerFrame) {
        if let Some((_, tx)) = self.seats[seat.index()]
            .as_ref()
            .and_then(|b| b.conn.as_ref())
        {
            // A closed outbox means the connection is going away; its drop
            // handler does the cleanup.
            let _ = tx.send(frame);
        }
    }

    fn event_frames(&self, events: &[LoggedEvent], seat: Seat) -> Vec<ServerFrame> {
        let controls = controls_for(self.host.state(), seat);
        events
            .iter()
            .map(|e| ServerFrame::Event {
                event: e.for_seat(seat),
                controls: controls.clone(),
            })
            .collect()
    }

    fn broadcast(&self, events: &[LoggedEvent], except: Option<Seat>) {
        for seat in Seat::BOTH {
            if Some(seat) != except {
                for frame in self.event_frames(events, seat) {
                    self.send(seat, frame);
                }
            }
        }
    }

    fn snapshot_frame(&self, seat: Seat) -> ServerFrame {
        ServerFrame::Snapshot {
            snapshot: self.host.snapshot(seat),
            controls: controls_for(self.host.state(), seat),
        }
    }
}

struct Binding {
    code: String,
    session: Arc<Mutex<Session>>,
    seat: Seat,
}

/// All live sessions, keyed by join code.
pub struct Lobby {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    rng: Mutex<ChaCha8Rng>,
    next_conn: AtomicU64,
    max_sessions: usize,
    closing: watch::Sender<bool>,
}

impl Lobby {
    pub fn new(max_sessions: usize) -> Arc<Lobby> {
        Lobby::with_seed(max_sessions, rand::rng().random())
    }

    /// A lobby whose codes, tokens and default deck seeds are reproducible.
    pub fn with_seed(max_sessions: usize, seed: u64) -> Arc<Lobby> {
        Arc::new(Lobby {
            sessions: Mutex::new(HashMap::new()),
            rng: Mutex::new(ChaCha8Rng::seed_from_u64(seed)),
            next_conn: AtomicU64::new(1),
            max_sessions,
            closing: watch::channel(false).0,
        })
    }

    pub fn connect(self: &Arc<Self>) -> Connection {
        let (tx, rx) = mpsc::unbounded_channel();
        Connection {
            id: self.next_conn.fetch_add(1, Ordering::Relaxed),
            lobby: Arc::clone(self),
            tx,
            rx: Some(rx),
            binding: None,
            auto_ids: 0,
        }
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().len()
    }

    pub fn session(&self, code: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions.lock().get(code).cloned()
    }

    pub fn phase(&self, code: &str) -> Option<Phase> {
        self.session(code).map(|s| s.lock().phase())
    }

    /// Resolves when [`shutdown`](Self::shutdown) is called.
    pub fn closing(&self) -> watch::Receiver<bool> {
        self.closing.subscribe()
    }

    /// Tells every connection the server is going away and drops all sessions.
    pub fn shutdown(&self) {
        let sessions: Vec<_> = self.sessions.lock().drain().map(|(_, s)| s).collect();
        for s in sessions {
            let s = s.lock();
            for seat in Seat::BOTH {
                s.send(
                    seat,
                    ServerFrame::Closed {
                        reason: "server shutting down".into(),
                    },
                );
            }
        }
        self.closing.send_replace(true);
        info!("lobby shut down");
    }

    fn fresh_code(&self, taken: &HashMap<String, Arc<Mutex<Session>>>) -> String {
        let mut rng = self.rng.lock();
        loop {
            let code: String = (0..CODE_LEN)
                .map(|_| CODE_ALPHABET[rng.random_range(0..CODE_ALPHABET.len())] as char)
                .collect();
            if !taken.contains_key(&code) {
                return code;
            }
        }
    }

    fn fresh_token(&self) -> String {
        let bytes: [u8; 16] = self.rng.lock().random();
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// One client's link to the lobby. Frames in go through
/// [`handle`](Self::handle); frames out arrive on the receiver. Dropping the
/// connection frees its seat for a later reconnect.
pub struct Connection {
    id: u64,
    lobby: Arc<Lobby>,
    tx: Outbox,
    rx: Option<Inbox>,
    binding: Option<Binding>,
    auto_ids: u64,
}

impl Connection {
    pub fn id(&self) -> u64 {
        self.id
    }

    /// The outgoing frame stream. Can be taken once.
    pub fn take_receiver(&mut self) -> Option<Inbox> {
        self.rx.take()
    }

    pub fn seat(&self) -> Option<Seat> {
        self.binding.as_ref().map(|b| b.seat)
    }

    pub fn code(&self) -> Option<&str> {
        self.binding.as_ref().map(|b| b.code.as_str())
    }

    fn reply(&self, frame: ServerFrame) {
        let _ = self.tx.send(frame);
    }

    fn error(&self, code: ServiceError, detail: impl Into<String>) {
        self.reply(ServerFrame::Error {
            code,
            detail: detail.into(),
        });
    }

    /// Parses and handles one text frame.
    pub fn handle_text(&mut self, text: &str) {
        match serde_json::from_str::<ClientFrame>(text) {
            Ok(frame) => self.handle(frame),
            Err(e) => self.error(ServiceError::BadFrame, e.to_string()),
        }
    }

    pub fn handle(&mut self, frame: ClientFrame) {
        match frame {
            ClientFrame::Create { config, name } => self.create(config, name),
            ClientFrame::Join { code, name, token } => self.join(&code, name, token),
            ClientFrame::Ping { nonce } => {
                let seq = self
                    .binding
                    .as_ref()
                    .map_or(0, |b| b.session.lock().host.seq());
                self.reply(ServerFrame::Pong { nonce, seq });
            }
            ClientFrame::Resync => match &self.binding {
                Some(b) => self.reply(b.session.lock().snapshot_frame(b.seat)),
                None => self.error(ServiceError::NotJoined, "join a session first"),
            },
            ClientFrame::Action {
                kind,
                amount,
                request_id,
                seq,
            } => match Action::from_parts(kind, amount) {
                Some(action) => self.request(request_id, seq, RequestBody::Action { action }),
                None => self.error(
                    ServiceError::BadFrame,
                    format!(
                        "{kind} {} an amount",
                        if amount.is_some() {
                            "takes no"
                        } else {
                            "needs"
                        }
                    ),
                ),
            },
            ClientFrame::DeclareWinner {
                winner,
                request_id,
                seq,
            } => self.request(request_id, seq, RequestBody::DeclareWinner { winner }),
            ClientFrame::StartHand { request_id, seq } => {
                let id = request_id.unwrap_or_else(|| {
                    self.auto_ids += 1;
                    format!("start-{}-{}", self.id, self.auto_ids)
                });
                self.request(id, seq, RequestBody::StartHand)
            }
        }
    }

    fn create(&mut self, settings: crate::protocol::MatchSettings, name: String) {
        if self.binding.is_some() {
            return self.error(ServiceError::AlreadyJoined, "already in a session");
        }
        let seed = self.lobby.rng.lock().random();
        let mut host = match Host::new(settings.into_config(seed)) {
            Ok(h) => h,
            Err(e) => return self.error(ServiceError::InvalidConfig, e.to_string()),
        };
        let mut sessions = self.lobby.sessions.lock();
        if sessions.len() >= self.lobby.max_sessions {
            return self.error(
                ServiceError::CapacityExceeded,
                format!("{} sessions already running", sessions.len()),
            );
        }
        let code = self.lobby.fresh_code(&sessions);
        let token = self.lobby.fresh_token();
        host.seat_player(Seat::ZERO, &name);
        let session = Session {
            code: code.clone(),
            host,
            seats: [
                Some(SeatBinding {
                    name,
                    token: token.clone(),
                    conn: Some((self.id, self.tx.clone())),
                }),
                None,
            ],
        };
        let snapshot = session.snapshot_frame(Seat::ZERO);
        let session = Arc::new(Mutex::new(session));
        sessions.insert(code.clone(), Arc::clone(&session));
        drop(sessions);
        info!(%code, "session created");
        self.reply(ServerFrame::Created {
            code: code.clone(),
            seat: Seat::ZERO,
            token,
        });
        self.reply(snapshot);
        self.binding = Some(Binding {
            code,
            session,
            seat: Seat::ZERO,
        });
    }

    fn join(&mut self, code: &str, name: String, token: Option<String>) {
        if self.binding.is_some() {
            return self.error(ServiceError::AlreadyJoined, "already in a session");
        }
        let code = code.trim().to_ascii_uppercase();
        let Some(arc) = self.lobby.session(&code) else {
            return self.error(ServiceError::UnknownCode, format!("no session {code:?}"));
        };
        let mut s = arc.lock();
        let reclaim = token.as_deref().and_then(|t| {
            Seat::BOTH
                .into_iter()
                .find(|seat| s.seats[seat.index()].as_ref().is_some_and(|b| b.token == t))
        });
        let (seat, token) = if let Some(seat) = reclaim {
            let binding = s.seats[seat.index()].as_mut().expect("found above");
            if let Some((_, old)) = binding.conn.take() {
                let _ = old.send(ServerFrame::Closed {
                    reason: "seat taken over by a new connection".into(),
                });
            }
            binding.conn = Some((self.id, self.tx.clone()));
            let name = binding.name.clone();
            let token = binding.token.clone();
            let ev = s.host.seat_player(seat, &name);
            s.broadcast(&[ev], Some(seat));
            info!(%code, %seat, "seat reclaimed");
            (seat, token)
        } else if s.phase() == Phase::WaitingForPlayers && s.seats[1].is_none() {
            let token = self.lobby.fresh_token();
            s.seats[1] = Some(SeatBinding {
                name: name.clone(),
                token: token.clone(),
                conn: Some((self.id, self.tx.clone())),
            });
            let ev = s.host.seat_player(Seat::ONE, &name);
            s.broadcast(&[ev], Some(Seat::ONE));
            info!(%code, "second seat taken");
            (Seat::ONE, token)
        } else {
            return self.error(ServiceError::SessionFull, format!("session {code} is full"));
        };
        self.reply(ServerFrame::Joined {
            code: code.clone(),
            seat,
            token,
        });
        self.reply(s.snapshot_frame(seat));
        drop(s);
        self.binding = Some(Binding {
            code,
            session: arc,
            seat,
        });
    }

    fn request(&mut self, request_id: String, seq: Option<u64>, body: RequestBody) {
        let Some(b) = &self.binding else {
            return self.error(ServiceError::NotJoined, "join a session first");
        };
        let mut s = b.session.lock();
        if s.phase() == Phase::Ended {
            let seq = s.host.seq();
            drop(s);
            return self.reply(ServerFrame::Reject {
                reason: RejectCode::SessionEnded,
                seq,
                request_id: Some(request_id),
                detail: "the match is over".into(),
            });
        }
        let before = s.host.seq();
        let request = ClientRequest {
            seat: b.seat,
            request_id: request_id.clone(),
            seq,
            body,
        };
        match s.host.host_apply(&request) {
            Ok(events) if s.host.seq() == before => {
                // A retried request: the original events go back to the
                // sender only.
                debug!(request_id, "duplicate request");
                for frame in s.event_frames(&events, b.seat) {
                    self.reply(frame);
                }
            }
            Ok(events) => {
                s.broadcast(&events, None);
                if s.phase() == Phase::Ended {
                    info!(code = %b.code, "match over");
                }
            }
            Err(reject) => self.reply(ServerFrame::Reject {
                reason: RejectCode::Game(reject.reason),
                seq: reject.seq,
                request_id: Some(request_id),
                detail: reject.detail,
            }),
        }
    }

    fn disconnect(&mut self) {
        let Some(b) = self.binding.take() else {
            return;
        };
        let mut sessions = self.lobby.sessions.lock();
        let mut s = b.session.lock();
        let Some(binding) = s.seats[b.seat.index()].as_mut() else {
            return;
        };
        if binding.conn.as_ref().map(|c| c.0) != Some(self.id) {
            return;
        }
        binding.conn = None;
        let ev = s.host.unseat_player(b.seat);
        s.broadcast(&[ev], Some(b.seat));
        info!(code = %b.code, seat = %b.seat, "seat disconnected");
        if s.connected() == 0 {
            sessions.remove(&b.code);
            info!(code = %b.code, "session closed");
        }
    }
}

impl Drop for Connection {
    fn drop(&mut self) {
        self.disconnect();
    }
}
