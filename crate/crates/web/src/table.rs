//! A hot-seat table driven by button clicks. Streets and settlements happen
//! on their own; the page only sends actions, declarations and "next hand".

use headsup_core::engine::{Outcome, SettleReason, Settlement, Terminal, Winner};
use headsup_core::{
    Action, ActionKind, ActionSpec, Chips, DeckMode, GameError, HandState, MatchConfig, MatchState,
    Seat,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Between hands; `next_hand` deals.
    Idle,
    Acting,
    /// Physical-deck showdown waiting for the players to name the winner.
    Declare,
    Over,
}

#[derive(Debug, Serialize)]
pub struct TableView {
    pub phase: Phase,
    pub hands_played: u32,
    pub stacks: [Chips; 2],
    pub hand: Option<HandState>,
    pub legal_actions: Vec<ActionSpec>,
    pub last_settlement: Option<Settlement>,
    pub log: Vec<String>,
}

pub struct Table {
    m: MatchState,
    hand: Option<HandState>,
    last: Option<Settlement>,
    log: Vec<String>,
}

fn err(e: GameError) -> String {
    e.to_string()
}

fn cards(c: &[headsup_core::Card]) -> String {
    c.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

impl Table {
    pub fn new(config: MatchConfig) -> Result<Table, String> {
        Ok(Table {
            m: MatchState::new(config).map_err(err)?,
            hand: None,
            last: None,
            log: Vec::new(),
        })
    }

    pub fn phase(&self) -> Phase {
        match &self.hand {
            Some(h) if h.terminal.is_none() => Phase::Acting,
            Some(h) if !h.is_settled() => Phase::Declare,
            _ if self.m.is_over() => Phase::Over,
            _ => Phase::Idle,
        }
    }

    pub fn view(&self) -> TableView {
        let legal_actions = match self.phase() {
            Phase::Acting => self
                .hand
                .as_ref()
                .and_then(|h| h.legal_actions().ok())
                .unwrap_or_default(),
            _ => Vec::new(),
        };
        TableView {
            phase: self.phase(),
            hands_played: self.m.hands_played,
            stacks: self.m.stacks,
            hand: self.hand.clone(),
            legal_actions,
            last_settlement: self.last,
            log: self.log.clone(),
        }
    }

    pub fn next_hand(&mut self) -> Result<(), String> {
        if self.phase() != Phase::Idle {
            return Err(format!("cannot deal now ({:?})", self.phase()));
        }
        let hand = self.m.start_hand().map_err(err)?;
        self.log.push(format!(
            "hand {}: {} deals",
            hand.hand_number, hand.dealer_seat
        ));
        self.hand = Some(hand);
        self.last = None;
        Ok(())
    }

    pub fn act(&mut self, kind: ActionKind, amount: Option<Chips>) -> Result<(), String> {
        let hand = self.hand.as_ref().ok_or("no hand in progress")?;
        let seat = hand.to_act.ok_or("nobody is to act")?;
        let action = Action::from_parts(kind, amount)
            .ok_or_else(|| format!("{kind} needs exactly the right amount fields"))?;
        let next = hand.apply_action(seat, action).map_err(err)?;
        self.log.push(format!("{seat}: {action}"));
        self.hand = Some(next);
        self.progress()
    }

    pub fn declare(&mut self, winner: Winner) -> Result<(), String> {
        if self.phase() != Phase::Declare {
            return Err("no showdown is waiting for a declaration".into());
        }
        self.finish(&Outcome::Declared { winner })
    }

    /// Deals streets and settles whatever the engine can settle alone.
    fn progress(&mut self) -> Result<(), String> {
        loop {
            let hand = self.hand.as_ref().expect("hand present");
            match hand.terminal {
                None => return Ok(()),
                Some(Terminal::Advance) => {
                    let runout = hand.runout_pending();
                    let next = hand.advance_street().map_err(err)?;
                    let prefix = if runout { "run-out " } else { "" };
                    self.log
                        .push(format!("{prefix}{}: {}", next.street, cards(next.board())));
                    self.hand = Some(next);
                }
                Some(Terminal::EndHand(_)) => {
                    return match hand.resolve_outcome() {
                        Some(o) => self.finish(&o),
                        None => Ok(()),
                    };
                }
            }
        }
    }

    fn finish(&mut self, outcome: &Outcome) -> Result<(), String> {
        let hand = self.hand.as_ref().expect("hand present");
        let (settled, s) = hand.settle(outcome).map_err(err)?;
        self.m = self.m.record(&settled).map_err(err)?;
        let how = match s.reason {
            SettleReason::Fold => "fold",
            SettleReason::Showdown => "showdown",
            SettleReason::DeclaredWinner => "declared",
        };
        self.log.push(match s.winner {
            Winner::Seat(w) => format!("{w} wins {} ({how})", s.awarded[w.index()]),
            Winner::Chop => format!("chop {} / {} ({how})", s.awarded[0], s.awarded[1]),
        });
        self.hand = Some(settled);
        self.last = Some(s);
        Ok(())
    }
}

pub fn config(stack: Chips, sb: Chips, bb: Chips, physical: bool, seed: u64) -> MatchConfig {
    MatchConfig {
        starting_stack: stack,
        small_blind: sb,
        big_blind: bb,
        deck_mode: if physical {
            DeckMode::Physical
        } else {
            DeckMode::Digital
        },
        rng_seed: seed,
    }
}

pub fn seat_or_chop(text: &str) -> Result<Winner, String> {
    match text {
        "0" => Ok(Winner::Seat(Seat::ZERO)),
        "1" => Ok(Winner::Seat(Seat::ONE)),
        "chop" => Ok(Winner::Chop),
        other => Err(format!("expected 0, 1 or chop, got {other:?}")),
    }
}
