//! Heads-up no-limit hold'em: a pure rules engine, a showdown evaluator,
//! host-authoritative replication of game state between two clients, and a
//! deterministic harness that checks all of it.

pub mod canon;
pub mod cards;
pub mod engine;
pub mod eval;
pub mod sim;
pub mod sync;

pub use cards::Card;
pub use engine::{
    Action, ActionKind, ActionSpec, Chips, DeckMode, GameError, HandState, MatchConfig, MatchState,
    Seat, Street,
};
