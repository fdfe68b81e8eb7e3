//! In-process transport: frames go straight into the lobby and come back on
//! a channel. Used for scripted matches and tests.

use std::sync::Arc;

use headsup_core::{Chips, Seat};
use serde::{Deserialize, Serialize};

use crate::client::{HeadlessClient, LedgerEntry, Policy, RandomPolicy};
use crate::lobby::{Connection, Inbox, Lobby};
use crate::protocol::{ClientFrame, MatchSettings, ServerFrame};

pub struct LocalClient<P> {
    pub conn: Connection,
    inbox: Inbox,
    pub client: HeadlessClient<P>,
    /// Every frame received, when recording is on.
    pub received: Option<Vec<ServerFrame>>,
}

impl<P: Policy> LocalClient<P> {
    pub fn new(lobby: &Arc<Lobby>, client: HeadlessClient<P>) -> LocalClient<P> {
        let mut conn = lobby.connect();
        let inbox = conn.take_receiver().expect("fresh connection");
        LocalClient {
            conn,
            inbox,
            client,
            received: None,
        }
    }

    pub fn record(mut self) -> Self {
        self.received = Some(Vec::new());
        self
    }

    pub fn send(&mut self, frame: ClientFrame) {
        self.conn.handle(frame);
    }

    /// Handles every frame waiting in the inbox. Returns how many there were.
    pub fn pump(&mut self) -> usize {
        let mut n = 0;
        while let Ok(frame) = self.inbox.try_recv() {
            n += 1;
            if let Some(log) = self.received.as_mut() {
                log.push(frame.clone());
            }
            for reply in self.client.on_frame(frame) {
                self.conn.handle(reply);
            }
        }
        n
    }
}

/// Pumps both clients until neither has anything left to read.
pub fn run_until_idle<A: Policy, B: Policy>(
    a: &mut LocalClient<A>,
    b: &mut LocalClient<B>,
) -> usize {
    let mut total = 0;
    loop {
        let n = a.pump() + b.pump();
        if n == 0 {
            return total;
        }
        total += n;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMatchReport {
    pub code: String,
    pub hands: u32,
    pub frames: usize,
    pub final_stacks: [Chips; 2],
    pub ledger: Vec<LedgerEntry>,
    /// Both clients recorded the same settlements, the net changes add up to
    /// the final stacks, and every replica hash equals the host's.
    pub consistent: bool,
    pub problems: Vec<String>,
}

/// Two bots play up to `hands` hands against each other in one session.
pub fn play_local_match(settings: MatchSettings, hands: u32, seed: u64) -> LocalMatchReport {
    let lobby = Lobby::with_seed(1, seed);
    let mut a = LocalClient::new(&lobby, HeadlessClient::new("a", RandomPolicy::new(seed)));
    let mut b = LocalClient::new(
        &lobby,
        HeadlessClient::new("b", RandomPolicy::new(seed.wrapping_add(1))),
    );
    a.client.hand_limit = Some(hands);
    b.client.hand_limit = Some(hands);
    a.send(ClientFrame::Create {
        config: settings,
        name: "a".into(),
    });
    let mut frames = a.pump();
    let code = a.client.code.clone().unwrap_or_default();
    b.send(ClientFrame::Join {
        code: code.clone(),
        name: "b".into(),
        token: None,
    });
    frames += run_until_idle(&mut a, &mut b);

    let mut problems = Vec::new();
    let session = lobby.session(&code);
    let Some(session) = session else {
        problems.push("session vanished".into());
        return LocalMatchReport {
            code,
            hands: 0,
            frames,
            final_stacks: [0, 0],
            ledger: Vec::new(),
            consistent: false,
            problems,
        };
    };
    let session = session.lock();
    let host = session.host();
    let state = host.state();
    for (c, seat) in [
        (&a.client.errors, Seat::ZERO),
        (&b.client.errors, Seat::ONE),
    ] {
        problems.extend(c.iter().map(|e| format!("{seat}: {e}")));
    }
    if a.client.ledger != b.client.ledger {
        problems.push("clients disagree on settlements".into());
    }
    if a.client.ledger.len() as u32 != state.match_state.hands_played {
        problems.push(format!(
            "{} settlements for {} hands",
            a.client.ledger.len(),
            state.match_state.hands_played
        ));
    }
    let start = state.match_state.config.starting_stack as i64;
    for seat in Seat::BOTH {
        let net: i64 = a
            .client
            .ledger
            .iter()
            .map(|e| e.settlement.net[seat.index()])
            .sum();
        if start + net != state.match_state.stacks[seat.index()] as i64 {
            problems.push(format!("{seat}: ledger does not add up to the stack"));
        }
    }
    for (replica, seat) in [
        (a.client.replica(), Seat::ZERO),
        (b.client.replica(), Seat::ONE),
    ] {
        if replica.map(|r| r.hash().to_string()) != Some(host.view_hash(seat)) {
            problems.push(format!("{seat}: replica differs from host"));
        }
    }
    LocalMatchReport {
        code,
        hands: state.match_state.hands_played,
        frames,
        final_stacks: state.match_state.stacks,
        ledger: a.client.ledger.clone(),
        consistent: problems.is_empty(),
        problems,
    }
}
