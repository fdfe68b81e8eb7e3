//! A client without a screen: keeps a replica from the frames it receives
//! and answers with whatever its [`Policy`] decides.

use headsup_core::engine::{Settlement, Winner};
use headsup_core::sync::{ApplyOutcome, GameState, Replica, ReplicaError};
use headsup_core::{Action, ActionKind, Seat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::protocol::{ClientFrame, Controls, RejectCode, ServerFrame};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Act(Action),
    Declare(Winner),
    Start,
}

pub trait Policy {
    /// Called whenever the client is up to date and has something it may do.
    fn decide(&mut self, view: &GameState, seat: Seat, controls: &Controls) -> Option<Decision>;
}

/// The winner both bots agree on in physical-deck mode, since neither can
/// see cards the engine never dealt.
pub fn agreed_winner(hand_number: u32) -> Winner {
    match hand_number % 3 {
        0 => Winner::Chop,
        1 => Winner::Seat(Seat::ZERO),
        _ => Winner::Seat(Seat::ONE),
    }
}

/// Random legal play that seldom folds and only makes minimum wagers, so
/// matches last a while.
pub struct RandomPolicy {
    rng: ChaCha8Rng,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> RandomPolicy {
        RandomPolicy {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Policy for RandomPolicy {
    fn decide(&mut self, view: &GameState, _seat: Seat, controls: &Controls) -> Option<Decision> {
        if controls.can_start {
            return Some(Decision::Start);
        }
        if controls.can_declare {
            return Some(Decision::Declare(agreed_winner(
                view.hand.as_ref()?.hand_number,
            )));
        }
        if controls.legal_actions.is_empty() {
            return None;
        }
        let menu = &controls.legal_actions;
        let find = |kinds: &[ActionKind]| menu.iter().find(|s| kinds.contains(&s.kind)).copied();
        let fold = find(&[ActionKind::Fold]).map(|_| Action::Fold);
        let passive = find(&[ActionKind::Check, ActionKind::Call])
            .map(|s| Action::from_parts(s.kind, None).expect("no amount"));
        let wager = find(&[ActionKind::Bet, ActionKind::Raise])
            .map(|s| Action::from_parts(s.kind, Some(s.min_amount)).expect("amount"));
        let roll = self.rng.random_range(0..10);
        let preferred = match roll {
            0 => fold,
            1..=6 => passive,
            _ => wager,
        };
        let action = preferred.or(passive).or(wager).unwrap_or(Action::Fold);
        Some(Decision::Act(action))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub hand_number: u32,
    pub settlement: Settlement,
}

pub struct HeadlessClient<P> {
    pub name: String,
    pub seat: Option<Seat>,
    pub code: Option<String>,
    pub token: Option<String>,
    replica: Option<Replica>,
    controls: Controls,
    policy: P,
    /// Stop starting hands once this many have been played.
    pub hand_limit: Option<u32>,
    next_id: u64,
    decided_at: Option<u64>,
    resync_requested: bool,
    pub ledger: Vec<LedgerEntry>,
    pub rejects: Vec<RejectCode>,
    pub errors: Vec<String>,
    pub closed: bool,
}

impl<P: Policy> HeadlessClient<P> {
    pub fn new(name: impl Into<String>, policy: P) -> HeadlessClient<P> {
        HeadlessClient {
            name: name.into(),
            seat: None,
            code: None,
            token: None,
            replica: None,
            controls: Controls::default(),
            policy,
            hand_limit: None,
            next_id: 0,
            decided_at: None,
            resync_requested: false,
            ledger: Vec::new(),
            rejects: Vec::new(),
            errors: Vec::new(),
            closed: false,
        }
    }

    pub fn replica(&self) -> Option<&Replica> {
        self.replica.as_ref()
    }

    pub fn controls(&self) -> &Controls {
        &self.controls
    }

    pub fn hands_played(&self) -> u32 {
        self.replica
            .as_ref()
            .map_or(0, |r| r.state().match_state.hands_played)
    }

    fn record_settlement(&mut self, before: u32) {
        let Some(r) = &self.replica else { return };
        let state = r.state();
        if state.match_state.hands_played > before {
            if let Some(hand) = &state.hand {
                if let Some(settlement) = hand.settlement {
                    self.ledger.push(LedgerEntry {
                        hand_number: hand.hand_number,
                        settlement,
                    });
                }
            }
        }
    }

    fn resync(&mut self, out: &mut Vec<ClientFrame>) {
        if !self.resync_requested {
            self.resync_requested = true;
            out.push(ClientFrame::Resync);
        }
    }

    /// Takes in one frame and returns the frames to send back.
    pub fn on_frame(&mut self, frame: ServerFrame) -> Vec<ClientFrame> {
        let mut out = Vec::new();
        match frame {
            ServerFrame::Created { code, seat, token }
            | ServerFrame::Joined { code, seat, token } => {
                self.code = Some(code);
                self.seat = Some(seat);
                self.token = Some(token);
            }
            ServerFrame::Snapshot { snapshot, controls } => {
                let Some(seat) = self.seat else {
                    self.errors.push("snapshot before joining".into());
                    return out;
                };
                let result = match self.replica.as_mut() {
                    Some(r) => r.recover(snapshot).map(|_| ()),
                    None => Replica::from_snapshot(seat, snapshot).map(|r| {
                        self.replica = Some(r);
                    }),
                };
                match result {
                    Ok(()) => {
                        self.resync_requested = false;
                        self.controls = controls;
                        self.decided_at = None;
                    }
                    Err(ReplicaError::StaleSnapshot { .. }) => {}
                    Err(e) => self.errors.push(format!("snapshot: {e}")),
                }
            }
            ServerFrame::Event { event, controls } => {
                let before = self.hands_played();
                let Some(r) = self.replica.as_mut() else {
                    self.resync(&mut out);
                    return out;
                };
                match r.apply(event) {
                    Ok(ApplyOutcome::Duplicate) => {}
                    Ok(ApplyOutcome::Applied(_)) => {
                        self.controls = controls;
                        self.record_settlement(before);
                    }
                    Err(ReplicaError::GapDetected { .. }) | Err(ReplicaError::Diverged) => {
                        self.resync(&mut out)
                    }
                    Err(e) => {
                        self.errors.push(e.to_string());
                        self.resync(&mut out);
                    }
                }
            }
            ServerFrame::Reject { reason, .. } => {
                self.rejects.push(reason);
                self.decided_at = None;
                if reason == RejectCode::SessionEnded {
                    self.closed = true;
                }
            }
            ServerFrame::Error { code, detail } => self.errors.push(format!("{code:?}: {detail}")),
            ServerFrame::Pong { .. } => {}
            ServerFrame::Closed { .. } => self.closed = true,
        }
        if let Some(frame) = self.next_move() {
            out.push(frame);
        }
        out
    }

    fn next_move(&mut self) -> Option<ClientFrame> {
        let seat = self.seat?;
        let r = self.replica.as_ref()?;
        if self.closed || r.needs_snapshot() || self.decided_at == Some(r.seq()) {
            return None;
        }
        let mut controls = self.controls.clone();
        if self.hand_limit.is_some_and(|n| self.hands_played() >= n) {
            controls.can_start = false;
        }
        let seq = r.seq();
        let decision = self.policy.decide(r.state(), seat, &controls)?;
        self.next_id += 1;
        let id = format!("{}-{}", self.name, self.next_id);
        self.decided_at = Some(seq);
        Some(match decision {
            Decision::Act(action) => ClientFrame::action(action, id, Some(seq)),
            Decision::Declare(w) => ClientFrame::declare(w, id, Some(seq)),
            Decision::Start => ClientFrame::StartHand {
                request_id: Some(id),
                seq: Some(seq),
            },
        })
    }
}
