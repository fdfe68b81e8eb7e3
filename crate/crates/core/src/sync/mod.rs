//! Host-authoritative replication of a two-seat game.
//!
//! The host owns the full [`GameState`], validates every client request
//! against the rules engine and records each accepted change as an
//! [`EventBody`] with a gapless sequence number. Each seat receives its own
//! redacted copy of every event together with the hash of its redacted
//! state, so a replica can prove it holds exactly what the host holds for
//! that seat. A replica that misses an event or disagrees on a hash falls
//! back to a [`Snapshot`].

mod host;
mod replica;

use serde::{Deserialize, Serialize};

use crate::canon::state_hash;
use crate::cards::Card;
use crate::engine::{
    Action, DeckMode, Declaration, EndReason, GameError, HandState, MatchConfig, MatchState,
    Outcome, Seat, Settlement, Terminal,
};

pub use host::{Host, LoggedEvent};
pub use replica::{ApplyOutcome, Replica, ReplicaError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeatInfo {
    pub name: String,
    pub connected: bool,
}

/// Everything that is replicated for one session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub match_state: MatchState,
    /// The current hand, or the last settled one between hands.
    pub hand: Option<HandState>,
    /// Physical-deck showdown claims awaiting agreement.
    pub declarations: [Option<Declaration>; 2],
    pub seats: [Option<SeatInfo>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload")]
pub enum EventBody {
    PlayerJoined {
        seat: Seat,
        name: String,
    },
    PlayerLeft {
        seat: Seat,
    },
    HandStarted {
        hand: Box<HandState>,
    },
    ActionApplied {
        seat: Seat,
        action: Action,
        /// Both hands, present when this action reached a digital showdown.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reveal: Option<[[Card; 2]; 2]>,
    },
    StreetAdvanced {
        dealt: Vec<Card>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reveal: Option<[[Card; 2]; 2]>,
    },
    WinnerDeclared {
        seat: Seat,
        winner: Declaration,
    },
    HandSettled {
        outcome: Outcome,
        settlement: Settlement,
    },
}

impl EventBody {
    pub fn kind(&self) -> &'static str {
        match self {
            EventBody::PlayerJoined { .. } => "PlayerJoined",
            EventBody::PlayerLeft { .. } => "PlayerLeft",
            EventBody::HandStarted { .. } => "HandStarted",
            EventBody::ActionApplied { .. } => "ActionApplied",
            EventBody::StreetAdvanced { .. } => "StreetAdvanced",
            EventBody::WinnerDeclared { .. } => "WinnerDeclared",
            EventBody::HandSettled { .. } => "HandSettled",
        }
    }

    /// The payload as `seat` may see it.
    pub fn redact_for(&self, seat: Seat) -> EventBody {
        match self {
            EventBody::HandStarted { hand } => EventBody::HandStarted {
                hand: Box::new(hand.view_for(seat)),
            },
            other => other.clone(),
        }
    }
}

/// One replicated change as delivered to a seat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    #[serde(flatten)]
    pub body: EventBody,
    /// Hash of the receiving seat's view after this event.
    pub state_hash: String,
}

/// A seat's full view at `seq`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub seq: u64,
    pub state: GameState,
    pub state_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RequestBody {
    Action { action: Action },
    DeclareWinner { winner: Declaration },
    StartHand,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientRequest {
    pub seat: Seat,
    pub request_id: String,
    /// The last sequence number the client had applied when it decided.
    /// When present it must match the host's, otherwise the request is stale.
    #[serde(default)]
    pub seq: Option<u64>,
    pub body: RequestBody,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RejectReason {
    OutOfTurn,
    IllegalAction,
    IllegalAmount,
    StaleSeq,
    NotSeated,
    WaitingForPlayers,
    NoHandInProgress,
    HandInProgress,
    MatchOver,
    NotDeclarable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub reason: RejectReason,
    /// Host sequence number when the request was refused.
    pub seq: u64,
    pub detail: String,
}

impl GameState {
    pub fn new(config: MatchConfig) -> Result<GameState, GameError> {
        Ok(GameState {
            match_state: MatchState::new(config)?,
            hand: None,
            declarations: [None, None],
            seats: [None, None],
        })
    }

    pub fn hand_in_progress(&self) -> bool {
        self.hand.as_ref().is_some_and(|h| !h.is_settled())
    }

    pub fn both_seated(&self) -> bool {
        self.seats.iter().all(Option::is_some)
    }

    /// Waiting for physical-deck showdown declarations.
    pub fn awaiting_declaration(&self) -> bool {
        self.hand.as_ref().is_some_and(|h| {
            !h.is_settled()
                && h.deck_mode == DeckMode::Physical
                && h.terminal == Some(Terminal::EndHand(EndReason::Showdown))
        })
    }

    /// What `seat` is allowed to know.
    pub fn view_for(&self, seat: Seat) -> GameState {
        GameState {
            match_state: self.match_state.redacted(),
            hand: self.hand.as_ref().map(|h| h.view_for(seat)),
            declarations: self.declarations,
            seats: self.seats.clone(),
        }
    }

    pub fn hash(&self) -> String {
        state_hash(self)
    }

    fn hand_mut(&mut self) -> Result<&mut HandState, GameError> {
        self.hand
            .as_mut()
            .filter(|h| !h.is_settled())
            .ok_or(GameError::TerminalState)
    }

    /// The single transition function shared by host and replicas.
    pub fn apply(&self, body: &EventBody) -> Result<GameState, GameError> {
        let mut next = self.clone();
        match body {
            EventBody::PlayerJoined { seat, name } => {
                next.seats[seat.index()] = Some(SeatInfo {
                    name: name.clone(),
                    connected: true,
                });
            }
            EventBody::PlayerLeft { seat } => {
                if let Some(info) = next.seats[seat.index()].as_mut() {
                    info.connected = false;
                }
            }
            EventBody::HandStarted { hand } => {
                if self.hand_in_progress() {
                    return Err(GameError::NotAdvanceable(
                        "a hand is already in progress".into(),
                    ));
                }
                if hand.hand_number != self.match_state.hands_played + 1 {
                    return Err(GameError::NotAdvanceable(format!(
                        "hand {} cannot follow hand {}",
                        hand.hand_number, self.match_state.hands_played
                    )));
                }
                next.hand = Some(hand.as_ref().clone());
                next.declarations = [None, None];
            }
            EventBody::ActionApplied {
                seat,
                action,
                reveal,
            } => {
                let hand = next.hand_mut()?;
                let mut after = hand.apply_action(*seat, *action)?;
                if let Some(holes) = reveal {
                    after = after.reveal(*holes);
                }
                *hand = after;
            }
            EventBody::StreetAdvanced { dealt, reveal } => {
                let hand = next.hand_mut()?;
                let mut after = hand.advance_street_with(dealt)?;
                if let Some(holes) = reveal {
                    after = after.reveal(*holes);
                }
                *hand = after;
            }
            EventBody::WinnerDeclared { seat, winner } => {
                if !self.awaiting_declaration() {
                    return Err(GameError::InvalidDeclaration(
                        "no showdown to declare".into(),
                    ));
                }
                next.declarations[seat.index()] = Some(*winner);
                if let [Some(a), Some(b)] = next.declarations {
                    if a != b {
                        next.declarations = [None, None];
                    }
                }
            }
            EventBody::HandSettled {
                outcome,
                settlement,
            } => {
                let hand = next.hand_mut()?;
                let (after, computed) = hand.settle(outcome)?;
                if computed != *settlement {
                    return Err(GameError::NotSettleable(format!(
                        "settlement {settlement:?} does not match {computed:?}"
                    )));
                }
                next.match_state = next.match_state.record(&after)?;
                next.hand = Some(after);
                next.declarations = [None, None];
            }
        }
        Ok(next)
    }
}
