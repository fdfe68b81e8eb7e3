use std::collections::HashMap;

use super::{
    ClientRequest, Event, EventBody, GameState, Reject, RejectReason, RequestBody, Snapshot,
};
use crate::engine::{GameError, MatchConfig, Seat, Terminal};

/// An accepted change as the host records it: the unredacted body plus the
/// hash of each seat's view after the change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoggedEvent {
    pub seq: u64,
    pub body: EventBody,
    pub hashes: [String; 2],
}

impl LoggedEvent {
    pub fn for_seat(&self, seat: Seat) -> Event {
        Event {
            seq: self.seq,
            body: self.body.redact_for(seat),
            state_hash: self.hashes[seat.index()].clone(),
        }
    }
}

pub type HostResponse = Result<Vec<LoggedEvent>, Reject>;

/// The authority for one session.
#[derive(Debug, Clone)]
pub struct Host {
    state: GameState,
    seq: u64,
    log: Vec<LoggedEvent>,
    responses: HashMap<(Seat, String), HostResponse>,
}

impl Host {
    pub fn new(config: MatchConfig) -> Result<Host, GameError> {
        Ok(Host {
            state: GameState::new(config)?,
            seq: 0,
            log: Vec::new(),
            responses: HashMap::new(),
        })
    }

    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn log(&self) -> &[LoggedEvent] {
        &self.log
    }

    pub fn view_hash(&self, seat: Seat) -> String {
        self.state.view_for(seat).hash()
    }

    pub fn snapshot(&self, seat: Seat) -> Snapshot {
        let state = self.state.view_for(seat);
        Snapshot {
            seq: self.seq,
            state_hash: state.hash(),
            state,
        }
    }

    fn emit(&mut self, body: EventBody) -> LoggedEvent {
        self.state = self
            .state
            .apply(&body)
            .expect("host only emits events it has validated");
        self.seq += 1;
        let event = LoggedEvent {
            seq: self.seq,
            body,
            hashes: Seat::BOTH.map(|s| self.view_hash(s)),
        };
        self.log.push(event.clone());
        event
    }

    pub fn seat_player(&mut self, seat: Seat, name: &str) -> LoggedEvent {
        self.emit(EventBody::PlayerJoined {
            seat,
            name: name.to_string(),
        })
    }

    pub fn unseat_player(&mut self, seat: Seat) -> LoggedEvent {
        self.emit(EventBody::PlayerLeft { seat })
    }

    fn reject(&self, reason: RejectReason, detail: impl Into<String>) -> Reject {
        Reject {
            reason,
            seq: self.seq,
            detail: detail.into(),
        }
    }

    fn reject_game_error(&self, err: GameError) -> Reject {
        let reason = match err {
            GameError::OutOfTurn { .. } => RejectReason::OutOfTurn,
            GameError::IllegalAmount { .. } => RejectReason::IllegalAmount,
            GameError::MatchOver => RejectReason::MatchOver,
            GameError::InvalidDeclaration(_) => RejectReason::NotDeclarable,
            _ => RejectReason::IllegalAction,
        };
        self.reject(reason, err.to_string())
    }

    /// Validates and applies one client request. Replaying a request id
    /// from the same seat returns the original response and changes nothing.
    pub fn host_apply(&mut self, request: &ClientRequest) -> HostResponse {
        let key = (request.seat, request.request_id.clone());
        if let Some(previous) = self.responses.get(&key) {
            return previous.clone();
        }
        let response = self.decide(request);
        self.responses.insert(key, response.clone());
        response
    }

    fn decide(&mut self, request: &ClientRequest) -> HostResponse {
        let seat = request.seat;
        if self.state.seats[seat.index()].is_none() {
            return Err(self.reject(RejectReason::NotSeated, format!("{seat} is empty")));
        }
        if let Some(seen) = request.seq {
            if seen != self.seq {
                return Err(self.reject(
                    RejectReason::StaleSeq,
                    format!("request made at seq {seen}, host is at {}", self.seq),
                ));
            }
        }
        match &request.body {
            RequestBody::StartHand => {
                if !self.state.both_seated() {
                    return Err(self.reject(RejectReason::WaitingForPlayers, "one seat is empty"));
                }
                if self.state.hand_in_progress() {
                    return Err(self.reject(RejectReason::HandInProgress, "hand in progress"));
                }
                let hand = self
                    .state
                    .match_state
                    .start_hand()
                    .map_err(|e| self.reject_game_error(e))?;
                let started = self.emit(EventBody::HandStarted {
                    hand: Box::new(hand),
                });
                let mut events = vec![started];
                self.progress(&mut events);
                Ok(events)
            }
            RequestBody::Action { action } => {
                let Some(hand) = self.state.hand.as_ref().filter(|h| !h.is_settled()) else {
                    return Err(self.reject(RejectReason::NoHandInProgress, "no hand in progress"));
                };
                let after = hand
                    .apply_action(seat, *action)
                    .map_err(|e| self.reject_game_error(e))?;
                let reveal = after.cards_revealed().then(|| after.both_holes()).flatten();
                let applied = self.emit(EventBody::ActionApplied {
                    seat,
                    action: *action,
                    reveal,
                });
                let mut events = vec![applied];
                self.progress(&mut events);
                Ok(events)
            }
            RequestBody::DeclareWinner { winner } => {
                if !self.state.awaiting_declaration() {
                    return Err(self.reject(
                        RejectReason::NotDeclarable,
                        "no physical-deck showdown is waiting for a winner",
                    ));
                }
                let declared = self.emit(EventBody::WinnerDeclared {
                    seat,
                    winner: *winner,
                });
                let mut events = vec![declared];
                if let [Some(a), Some(b)] = self.state.declarations {
                    if a == b {
                        self.settle(crate::engine::Outcome::Declared { winner: a }, &mut events);
                    }
                }
                Ok(events)
            }
        }
    }

    /// Runs everything that needs no player input: dealing the next street
    /// or the rest of an all-in board, and paying out decided hands.
    fn progress(&mut self, events: &mut Vec<LoggedEvent>) {
        loop {
            let Some(hand) = self.state.hand.as_ref().filter(|h| !h.is_settled()) else {
                return;
            };
            if hand.terminal == Some(Terminal::Advance) {
                let dealt = hand.pending_deal();
                let after = hand
                    .advance_street_with(&dealt)
                    .expect("host deals from its own deck");
                let reveal = after.cards_revealed().then(|| after.both_holes()).flatten();
                events.push(self.emit(EventBody::StreetAdvanced { dealt, reveal }));
                continue;
            }
            match hand.resolve_outcome() {
                Some(outcome) => {
                    self.settle(outcome, events);
                    return;
                }
                None => return,
            }
        }
    }

    fn settle(&mut self, outcome: crate::engine::Outcome, events: &mut Vec<LoggedEvent>) {
        let hand = self.state.hand.as_ref().expect("settling requires a hand");
        let (_, settlement) = hand.settle(&outcome).expect("outcome was checked");
        events.push(self.emit(EventBody::HandSettled {
            outcome,
            settlement,
        }));
    }
}
