//! Awarding the pot once a hand has ended.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::hand::Step;
use super::{Chips, DeckMode, EndReason, GameError, HandState, Seat, Terminal};
use crate::eval::{showdown, ShowdownResult};

/// A hand winner, or a split pot. Encoded as a seat number or `"chop"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winner {
    Seat(Seat),
    Chop,
}

/// What a player claims the showdown result was in physical-deck mode.
pub type Declaration = Winner;

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Winner::Seat(s) => write!(f, "{s}"),
            Winner::Chop => f.write_str("chop"),
        }
    }
}

impl Serialize for Winner {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Winner::Seat(seat) => s.serialize_u8((*seat).into()),
            Winner::Chop => s.serialize_str("chop"),
        }
    }
}

impl<'de> Deserialize<'de> for Winner {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Winner, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Seat(u8),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Seat(i) => Seat::new(i)
                .map(Winner::Seat)
                .ok_or_else(|| serde::de::Error::custom(format!("no such seat: {i}"))),
            Raw::Text(t) if t == "chop" => Ok(Winner::Chop),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a seat number or \"chop\", got {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Outcome {
    FoldWin {
        seat: Seat,
    },
    /// Digital deck: `A` is seat 0, `B` is seat 1.
    Showdown {
        result: ShowdownResult,
    },
    Declared {
        winner: Declaration,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SettleReason {
    Fold,
    Showdown,
    DeclaredWinner,
}

/// How the chips moved at the end of a hand. `awarded` splits everything
/// that was in the middle; `net` is each seat's change over the whole hand
/// and sums to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settlement {
    pub winner: Winner,
    pub reason: SettleReason,
    pub awarded: [Chips; 2],
    pub net: [i64; 2],
}

fn winner_of(result: ShowdownResult) -> Winner {
    match result {
        ShowdownResult::A => Winner::Seat(Seat::ZERO),
        ShowdownResult::B => Winner::Seat(Seat::ONE),
        ShowdownResult::Tie => Winner::Chop,
    }
}

impl HandState {
    /// Compares the two hands on a complete board. Needs both hole cards.
    pub fn showdown_result(&self) -> Option<ShowdownResult> {
        let deck = self.deck.as_ref()?;
        let board: [_; 5] = deck.board.as_slice().try_into().ok()?;
        let [a, b] = self.both_holes()?;
        showdown(&board, &a, &b).ok()
    }

    /// The outcome the engine can decide on its own: a fold, or a digital
    /// showdown with both hands known. Physical showdowns need a declaration.
    pub fn resolve_outcome(&self) -> Option<Outcome> {
        if self.is_settled() {
            return None;
        }
        match self.terminal? {
            Terminal::EndHand(EndReason::Fold { winner }) => {
                Some(Outcome::FoldWin { seat: winner })
            }
            Terminal::EndHand(EndReason::Showdown) if self.deck_mode == DeckMode::Digital => self
                .showdown_result()
                .map(|result| Outcome::Showdown { result }),
            _ => None,
        }
    }

    /// Pays out the pot and every committed chip.
    pub fn settle(&self, outcome: &Outcome) -> Result<(HandState, Settlement), GameError> {
        if self.is_settled() {
            return Err(GameError::NotSettleable("hand already settled".into()));
        }
        let Some(Terminal::EndHand(end)) = self.terminal else {
            return Err(GameError::NotSettleable(format!(
                "hand has not ended (terminal {:?})",
                self.terminal
            )));
        };

        let (winner, reason) = match (end, outcome) {
            (EndReason::Fold { winner }, Outcome::FoldWin { seat }) if winner == *seat => {
                (Winner::Seat(winner), SettleReason::Fold)
            }
            (EndReason::Fold { .. }, _) => {
                return Err(GameError::NotSettleable(format!(
                    "hand ended by a fold, got {outcome:?}"
                )));
            }
            (EndReason::Showdown, Outcome::Showdown { result }) => {
                if self.deck_mode != DeckMode::Digital {
                    return Err(GameError::NotSettleable(
                        "physical-deck showdowns need a declared winner".into(),
                    ));
                }
                let actual = self.showdown_result().ok_or_else(|| {
                    GameError::NotSettleable("hole cards or board not known".into())
                })?;
                if actual != *result {
                    return Err(GameError::InvalidDeclaration(format!(
                        "cards give {actual:?}, not {result:?}"
                    )));
                }
                (winner_of(actual), SettleReason::Showdown)
            }
            (EndReason::Showdown, Outcome::Declared { winner }) => {
                if self.deck_mode != DeckMode::Physical {
                    return Err(GameError::InvalidDeclaration(
                        "digital-deck showdowns are decided by the cards".into(),
                    ));
                }
                (*winner, SettleReason::DeclaredWinner)
            }
            (EndReason::Showdown, Outcome::FoldWin { .. }) => {
                return Err(GameError::NotSettleable("nobody folded".into()));
            }
        };

        let middle = self.pot + self.committed.iter().sum::<Chips>();
        let mut awarded = [0; 2];
        match winner {
            Winner::Seat(s) => awarded[s.index()] = middle,
            Winner::Chop => {
                let opp = self.dealer_seat.other().index();
                awarded = [middle / 2; 2];
                awarded[opp] += middle % 2;
            }
        }

        let mut next = self.clone();
        next.pot = 0;
        next.committed = [0, 0];
        for (stack, won) in next.stacks.iter_mut().zip(awarded) {
            *stack += won;
        }
        let net = [0, 1].map(|i| next.stacks[i] as i64 - self.starting_stacks[i] as i64);
        let settlement = Settlement {
            winner,
            reason,
            awarded,
            net,
        };
        next.settlement = Some(settlement);
        next.to_act = None;
        next.log.push(Step::Settle { outcome: *outcome });
        Ok((next, settlement))
    }
}
