//! Heads-up no-limit hold'em rules.
//!
//! A hand is a sequence of betting rounds. Each round is a small automaton
//! driven by the actions taken so far in that round: it either hands the
//! turn to the other seat or stops in one of two terminals, [`Terminal::EndHand`]
//! or [`Terminal::Advance`]. All transitions are pure: every operation takes
//! `&self` and returns a new state.

mod hand;
mod settle;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cards::Card;

pub use hand::{HandState, Step};
pub use settle::{Declaration, Outcome, SettleReason, Settlement, Winner};

/// Indivisible chip units.
pub type Chips = u64;

/// One of the two seats at the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Seat(u8);

impl Seat {
    pub const ZERO: Seat = Seat(0);
    pub const ONE: Seat = Seat(1);
    pub const BOTH: [Seat; 2] = [Seat::ZERO, Seat::ONE];

    pub fn new(i: u8) -> Option<Seat> {
        (i < 2).then_some(Seat(i))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn other(self) -> Seat {
        Seat(1 - self.0)
    }
}

impl TryFrom<u8> for Seat {
    type Error = String;

    fn try_from(i: u8) -> Result<Seat, String> {
        Seat::new(i).ok_or_else(|| format!("no such seat: {i}"))
    }
}

impl From<Seat> for u8 {
    fn from(s: Seat) -> u8 {
        s.0
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seat {}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlayerRole {
    /// Posts the small blind, acts first pre-flop and last after.
    Dealer,
    /// Posts the big blind, acts first after the flop.
    Opponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Street {
    Preflop,
    Flop,
    Turn,
    River,
}

impl Street {
    pub fn next(self) -> Option<Street> {
        match self {
            Street::Preflop => Some(Street::Flop),
            Street::Flop => Some(Street::Turn),
            Street::Turn => Some(Street::River),
            Street::River => None,
        }
    }

    /// Community cards visible once this street is reached.
    pub fn board_len(self) -> usize {
        match self {
            Street::Preflop => 0,
            Street::Flop => 3,
            Street::Turn => 4,
            Street::River => 5,
        }
    }
}

impl fmt::Display for Street {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Street::Preflop => "pre-flop",
            Street::Flop => "flop",
            Street::Turn => "turn",
            Street::River => "river",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Check,
    Call,
    Bet,
    Raise,
    Fold,
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionKind::Check => "Check",
            ActionKind::Call => "Call",
            ActionKind::Bet => "Bet",
            ActionKind::Raise => "Raise",
            ActionKind::Fold => "Fold",
        })
    }
}

/// A concrete player action. `Bet` and `Raise` carry the actor's total
/// wager for the street after the action, not the increment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "amount", rename_all = "snake_case")]
pub enum Action {
    Check,
    Call,
    Bet(Chips),
    Raise(Chips),
    Fold,
}

impl Action {
    pub fn kind(self) -> ActionKind {
        match self {
            Action::Check => ActionKind::Check,
            Action::Call => ActionKind::Call,
            Action::Bet(_) => ActionKind::Bet,
            Action::Raise(_) => ActionKind::Raise,
            Action::Fold => ActionKind::Fold,
        }
    }

    pub fn amount(self) -> Option<Chips> {
        match self {
            Action::Bet(a) | Action::Raise(a) => Some(a),
            _ => None,
        }
    }

    /// Builds an action from a kind and optional amount, as received on the
    /// wire. Returns `None` when the amount presence does not match the kind.
    pub fn from_parts(kind: ActionKind, amount: Option<Chips>) -> Option<Action> {
        match (kind, amount) {
            (ActionKind::Check, None) => Some(Action::Check),
            (ActionKind::Call, None) => Some(Action::Call),
            (ActionKind::Fold, None) => Some(Action::Fold),
            (ActionKind::Bet, Some(a)) => Some(Action::Bet(a)),
            (ActionKind::Raise, Some(a)) => Some(Action::Raise(a)),
            _ => None,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Bet(a) => write!(f, "bet {a}"),
            Action::Raise(a) => write!(f, "raise to {a}"),
            other => write!(f, "{}", other.kind().to_string().to_lowercase()),
        }
    }
}

/// One entry of the legal-action menu. The bounds only mean something for
/// `Bet` and `Raise`, where `max_amount` is the all-in total; other kinds
/// carry zero for both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub kind: ActionKind,
    pub min_amount: Chips,
    pub max_amount: Chips,
}

impl ActionSpec {
    pub fn simple(kind: ActionKind) -> ActionSpec {
        ActionSpec {
            kind,
            min_amount: 0,
            max_amount: 0,
        }
    }

    /// Whether `action` is an instance of this spec with an in-bounds amount.
    pub fn admits(&self, action: Action) -> bool {
        action.kind() == self.kind
            && action
                .amount()
                .is_none_or(|a| (self.min_amount..=self.max_amount).contains(&a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeckMode {
    /// Cards are real and invisible to the engine; showdowns are declared.
    Physical,
    /// The engine shuffles and deals from a seeded deck.
    Digital,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchConfig {
    pub starting_stack: Chips,
    pub small_blind: Chips,
    pub big_blind: Chips,
    pub deck_mode: DeckMode,
    pub rng_seed: u64,
}

impl MatchConfig {
    pub fn validate(&self) -> Result<(), GameError> {
        if self.small_blind < 1 {
            return Err(GameError::InvalidConfig(
                "small blind must be at least 1".into(),
            ));
        }
        if self.big_blind < self.small_blind {
            return Err(GameError::InvalidConfig(format!(
                "big blind {} is smaller than small blind {}",
                self.big_blind, self.small_blind
            )));
        }
        if self.starting_stack < self.big_blind {
            return Err(GameError::InvalidConfig(format!(
                "starting stack {} does not cover the big blind {}",
                self.starting_stack, self.big_blind
            )));
        }
        Ok(())
    }
}

/// Match-level state that persists between hands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchState {
    pub config: MatchConfig,
    pub stacks: [Chips; 2],
    pub hands_played: u32,
}

impl MatchState {
    pub fn new(config: MatchConfig) -> Result<MatchState, GameError> {
        config.validate()?;
        Ok(MatchState {
            config,
            stacks: [config.starting_stack; 2],
            hands_played: 0,
        })
    }

    pub fn total_chips(&self) -> Chips {
        2 * self.config.starting_stack
    }

    pub fn is_over(&self) -> bool {
        self.stacks.contains(&0)
    }

    /// Dealer of the next hand: seat 0 on hand 1, alternating after.
    pub fn next_dealer(&self) -> Seat {
        if self.hands_played.is_multiple_of(2) {
            Seat::ZERO
        } else {
            Seat::ONE
        }
    }

    /// Folds a settled hand back into the match.
    pub fn record(&self, hand: &HandState) -> Result<MatchState, GameError> {
        if hand.settlement.is_none() {
            return Err(GameError::NotSettleable("hand has not been settled".into()));
        }
        if hand.hand_number != self.hands_played + 1 {
            return Err(GameError::NotSettleable(format!(
                "hand {} does not follow hand {}",
                hand.hand_number, self.hands_played
            )));
        }
        Ok(MatchState {
            config: self.config,
            stacks: hand.stacks,
            hands_played: hand.hand_number,
        })
    }

    /// The same match with the deck seed hidden.
    pub fn redacted(&self) -> MatchState {
        let mut m = self.clone();
        m.config.rng_seed = 0;
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndReason {
    /// `winner` is the seat that did not fold.
    Fold { winner: Seat },
    /// Betting is complete; the winner is decided by cards or declaration.
    Showdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Terminal {
    EndHand(EndReason),
    Advance,
}

/// The per-hand message panel: everything a player needs beyond the chips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameAnnotations {
    pub hands_played: u32,
    pub current_round: Street,
    pub current_dealer: Seat,
    pub previous_action: Option<String>,
    pub amount_to_call: Chips,
    pub waiting_for: Option<Seat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeatAction {
    pub seat: Seat,
    pub action: Action,
}

/// Cards in digital-deck mode. A seat's hole cards are `None` in a view
/// where they are hidden, and `remaining` is empty outside the host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeckState {
    pub remaining: Vec<Card>,
    pub hole: [Option<[Card; 2]>; 2],
    pub board: Vec<Card>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackLine {
    pub behind: Chips,
    pub committed: Chips,
    pub pot: Chips,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("match is over: a stack is empty")]
    MatchOver,
    #[error("betting round already ended")]
    TerminalState,
    #[error("out of turn: waiting for {expected:?}, got {got}")]
    OutOfTurn { expected: Option<Seat>, got: Seat },
    #[error("illegal action {0}")]
    IllegalAction(ActionKind),
    #[error("illegal amount {amount}: allowed range is [{min}, {max}]")]
    IllegalAmount {
        amount: Chips,
        min: Chips,
        max: Chips,
    },
    #[error("hand cannot advance: {0}")]
    NotAdvanceable(String),
    #[error("hand cannot be settled: {0}")]
    NotSettleable(String),
    #[error("invalid declaration: {0}")]
    InvalidDeclaration(String),
}
