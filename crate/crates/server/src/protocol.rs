//! JSON frames exchanged with clients. Every frame is an object with a
//! `"type"` field; chips are integers, cards are text codes and hashes are
//! lowercase hex.

use headsup_core::engine::{Declaration, Winner};
use headsup_core::sync::{Event, GameState, RejectReason, Snapshot};
use headsup_core::{Action, ActionKind, ActionSpec, Chips, DeckMode, MatchConfig, Seat};
use serde::{Deserialize, Serialize};

/// Match settings as a client sends them. Missing fields take defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchSettings {
    pub starting_stack: Chips,
    pub small_blind: Chips,
    pub big_blind: Chips,
    pub deck_mode: DeckMode,
    /// Deck seed for digital mode; chosen by the server when absent.
    pub rng_seed: Option<u64>,
}

impl Default for MatchSettings {
    fn default() -> Self {
        MatchSettings {
            starting_stack: 200,
            small_blind: 1,
            big_blind: 2,
            deck_mode: DeckMode::Digital,
            rng_seed: None,
        }
    }
}

impl MatchSettings {
    pub fn into_config(self, fallback_seed: u64) -> MatchConfig {
        MatchConfig {
            starting_stack: self.starting_stack,
            small_blind: self.small_blind,
            big_blind: self.big_blind,
            deck_mode: self.deck_mode,
            rng_seed: self.rng_seed.unwrap_or(fallback_seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientFrame {
    Create {
        #[serde(default)]
        config: MatchSettings,
        name: String,
    },
    /// Takes the open seat, or reclaims a seat when `token` matches.
    Join {
        code: String,
        name: String,
        #[serde(default)]
        token: Option<String>,
    },
    Action {
        kind: ActionKind,
        #[serde(default)]
        amount: Option<Chips>,
        request_id: String,
        #[serde(default)]
        seq: Option<u64>,
    },
    DeclareWinner {
        winner: Declaration,
        request_id: String,
        #[serde(default)]
        seq: Option<u64>,
    },
    StartHand {
        #[serde(default)]
        request_id: Option<String>,
        #[serde(default)]
        seq: Option<u64>,
    },
    /// Asks for a fresh snapshot, e.g. after detecting a gap.
    Resync,
    Ping {
        #[serde(default)]
        nonce: Option<u64>,
    },
}

/// What the receiving seat may do next.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Controls {
    /// Empty unless it is this seat's turn.
    pub legal_actions: Vec<ActionSpec>,
    /// A physical-deck showdown is waiting for this seat's declaration.
    pub can_declare: bool,
    /// This seat may start the next hand.
    pub can_start: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ServiceError {
    BadFrame,
    UnknownCode,
    SessionFull,
    CapacityExceeded,
    InvalidConfig,
    AlreadyJoined,
    NotJoined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectCode {
    SessionEnded,
    #[serde(untagged)]
    Game(RejectReason),
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerFrame {
    Created {
        code: String,
        seat: Seat,
        /// Presented with `join` to reclaim the seat after a disconnect.
        token: String,
    },
    Joined {
        code: String,
        seat: Seat,
        token: String,
    },
    Event {
        #[serde(flatten)]
        event: Event,
        controls: Controls,
    },
    Snapshot {
        #[serde(flatten)]
        snapshot: Snapshot,
        controls: Controls,
    },
    Reject {
        reason: RejectCode,
        seq: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        request_id: Option<String>,
        detail: String,
    },
    Error {
        code: ServiceError,
        detail: String,
    },
    Pong {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nonce: Option<u64>,
        seq: u64,
    },
    Closed {
        reason: String,
    },
}

impl ClientFrame {
    pub fn action(action: Action, request_id: impl Into<String>, seq: Option<u64>) -> ClientFrame {
        ClientFrame::Action {
            kind: action.kind(),
            amount: action.amount(),
            request_id: request_id.into(),
            seq,
        }
    }

    pub fn declare(winner: Winner, request_id: impl Into<String>, seq: Option<u64>) -> ClientFrame {
        ClientFrame::DeclareWinner {
            winner,
            request_id: request_id.into(),
            seq,
        }
    }
}

/// The controls `seat` has in `state`.
pub fn controls_for(state: &GameState, seat: Seat) -> Controls {
    let mut c = Controls::default();
    if state.awaiting_declaration() {
        c.can_declare = state.declarations[seat.index()].is_none();
    } else if state.hand_in_progress() {
        if let Some(hand) = state.hand.as_ref().filter(|h| h.to_act == Some(seat)) {
            c.legal_actions = hand.legal_actions().unwrap_or_default();
        }
    } else {
        let m = &state.match_state;
        c.can_start = state.both_seated() && !m.is_over() && m.next_dealer() == seat;
    }
    c
}
