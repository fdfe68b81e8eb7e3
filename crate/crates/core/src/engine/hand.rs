use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    Action, ActionKind, ActionSpec, Chips, DeckMode, DeckState, EndReason, GameAnnotations,
    GameError, MatchConfig, MatchState, Outcome, PlayerRole, Seat, SeatAction, Settlement,
    StackLine, Street, Terminal,
};
use crate::cards::{full_deck, Card};

/// One transition of a hand after the blinds, in the order it happened.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Act { seat: Seat, action: Action },
    Advance { dealt: Vec<Card> },
    Settle { outcome: Outcome },
}

/// Complete state of one hand.
///
/// The serialized field order is the declaration order below and is part of
/// the canonical encoding used for state hashes; do not reorder fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandState {
    pub hand_number: u32,
    pub dealer_seat: Seat,
    pub small_blind: Chips,
    pub big_blind: Chips,
    pub deck_mode: DeckMode,
    /// Stacks before the blinds were posted.
    pub starting_stacks: [Chips; 2],
    /// Chips behind, not yet committed.
    pub stacks: [Chips; 2],
    /// Chips committed on the current street.
    pub committed: [Chips; 2],
    /// Chips collected from completed streets.
    pub pot: Chips,
    pub street: Street,
    pub to_act: Option<Seat>,
    /// Actions on the current street only.
    pub action_history: Vec<SeatAction>,
    pub annotations: GameAnnotations,
    pub deck: Option<DeckState>,
    pub terminal: Option<Terminal>,
    /// Smallest legal raise increment on this street.
    pub min_raise: Chips,
    /// Whether each seat has acted voluntarily on this street.
    pub acted: [bool; 2],
    pub log: Vec<Step>,
    pub settlement: Option<Settlement>,
}

impl MatchState {
    /// Deals the next hand: alternates the dealer, posts blinds and, in
    /// digital mode, shuffles and deals hole cards.
    pub fn start_hand(&self) -> Result<HandState, GameError> {
        if self.is_over() {
            return Err(GameError::MatchOver);
        }
        let cfg = &self.config;
        let hand_number = self.hands_played + 1;
        let dealer = self.next_dealer();
        let opponent = dealer.other();

        let deck = match cfg.deck_mode {
            DeckMode::Physical => None,
            DeckMode::Digital => Some(shuffled_deal(cfg.rng_seed, hand_number, dealer)),
        };

        let mut hand = HandState {
            hand_number,
            dealer_seat: dealer,
            small_blind: cfg.small_blind,
            big_blind: cfg.big_blind,
            deck_mode: cfg.deck_mode,
            starting_stacks: self.stacks,
            stacks: self.stacks,
            committed: [0, 0],
            pot: 0,
            street: Street::Preflop,
            to_act: None,
            action_history: Vec::new(),
            annotations: placeholder_annotations(dealer),
            deck,
            terminal: None,
            min_raise: cfg.big_blind,
            acted: [false, false],
            log: Vec::new(),
            settlement: None,
        };
        hand.post(dealer, cfg.small_blind);
        hand.post(opponent, cfg.big_blind);
        hand.pass_turn(dealer);
        hand.refresh_annotations();
        Ok(hand)
    }
}

fn shuffled_deal(seed: u64, hand_number: u32, dealer: Seat) -> DeckState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(hand_number as u64);
    let mut cards = full_deck();
    cards.shuffle(&mut rng);
    // Alternate starting with the non-dealer.
    let opp = dealer.other().index();
    let mut hole = [None, None];
    hole[opp] = Some([cards[0], cards[2]]);
    hole[dealer.index()] = Some([cards[1], cards[3]]);
    DeckState {
        remaining: cards.split_off(4),
        hole,
        board: Vec::new(),
    }
}

fn placeholder_annotations(dealer: Seat) -> GameAnnotations {
    GameAnnotations {
        hands_played: 0,
        current_round: Street::Preflop,
        current_dealer: dealer,
        previous_action: None,
        amount_to_call: 0,
        waiting_for: None,
    }
}

impl HandState {
    /// A betting round at `street` with nothing committed yet and the given
    /// chips behind. Cards are not modelled. Used to study the post-flop
    /// automaton in isolation.
    pub fn street_root(
        config: &MatchConfig,
        street: Street,
        behind: [Chips; 2],
        pot: Chips,
        dealer: Seat,
    ) -> HandState {
        let mut hand = HandState {
            hand_number: 1,
            dealer_seat: dealer,
            small_blind: config.small_blind,
            big_blind: config.big_blind,
            deck_mode: DeckMode::Physical,
            starting_stacks: behind,
            stacks: behind,
            committed: [0, 0],
            pot,
            street,
            to_act: None,
            action_history: Vec::new(),
            annotations: placeholder_annotations(dealer),
            deck: None,
            terminal: None,
            min_raise: config.big_blind,
            acted: [false, false],
            log: Vec::new(),
            settlement: None,
        };
        let first = if street == Street::Preflop {
            dealer
        } else {
            dealer.other()
        };
        hand.pass_turn(first);
        hand.refresh_annotations();
        hand
    }

    pub fn role_of(&self, seat: Seat) -> PlayerRole {
        if seat == self.dealer_seat {
            PlayerRole::Dealer
        } else {
            PlayerRole::Opponent
        }
    }

    pub fn is_all_in(&self, seat: Seat) -> bool {
        self.stacks[seat.index()] == 0
    }

    pub fn total_chips(&self) -> Chips {
        self.stacks.iter().sum::<Chips>() + self.committed.iter().sum::<Chips>() + self.pot
    }

    pub fn is_settled(&self) -> bool {
        self.settlement.is_some()
    }

    pub fn board(&self) -> &[Card] {
        self.deck.as_ref().map_or(&[], |d| &d.board)
    }

    pub fn hole_cards(&self, seat: Seat) -> Option<[Card; 2]> {
        self.deck.as_ref().and_then(|d| d.hole[seat.index()])
    }

    /// Live chip count per seat.
    pub fn stack_report(&self) -> [StackLine; 2] {
        Seat::BOTH.map(|s| StackLine {
            behind: self.stacks[s.index()],
            committed: self.committed[s.index()],
            pot: self.pot,
        })
    }

    fn to_call(&self, seat: Seat) -> Chips {
        let i = seat.index();
        self.committed[seat.other().index()].saturating_sub(self.committed[i])
    }

    fn post(&mut self, seat: Seat, blind: Chips) {
        let i = seat.index();
        let amount = blind.min(self.stacks[i]);
        self.stacks[i] -= amount;
        self.committed[i] += amount;
    }

    fn needs_action(&self, seat: Seat) -> bool {
        if self.is_all_in(seat) {
            return false;
        }
        if self.to_call(seat) > 0 {
            return true;
        }
        !self.acted[seat.index()] && !self.is_all_in(seat.other())
    }

    /// Hands the turn to `candidate`, or to the other seat, or closes the
    /// round when neither has anything left to decide.
    fn pass_turn(&mut self, candidate: Seat) {
        if self.needs_action(candidate) {
            self.to_act = Some(candidate);
        } else if self.needs_action(candidate.other()) {
            self.to_act = Some(candidate.other());
        } else {
            self.close_street();
        }
    }

    fn close_street(&mut self) {
        // An all-in for less leaves part of the larger wager uncalled.
        let [a, b] = self.committed;
        if a != b {
            let hi = if a > b { 0 } else { 1 };
            let excess = a.abs_diff(b);
            self.committed[hi] -= excess;
            self.stacks[hi] += excess;
        }
        self.to_act = None;
        self.terminal = Some(if self.street == Street::River {
            Terminal::EndHand(EndReason::Showdown)
        } else {
            Terminal::Advance
        });
    }

    fn refresh_annotations(&mut self) {
        let amount_to_call = self
            .to_act
            .map_or(0, |s| self.to_call(s).min(self.stacks[s.index()]));
        self.annotations = GameAnnotations {
            hands_played: self.hand_number,
            current_round: self.street,
            current_dealer: self.dealer_seat,
            previous_action: self.annotations.previous_action.take(),
            amount_to_call,
            waiting_for: self.to_act,
        };
        if self.action_history.is_empty() {
            self.annotations.previous_action = None;
        }
    }

    /// True when the round closed with a seat all-in, so the remaining
    /// board will be dealt without further betting.
    pub fn runout_pending(&self) -> bool {
        self.terminal == Some(Terminal::Advance)
            && (self.is_all_in(Seat::ZERO) || self.is_all_in(Seat::ONE))
    }

    /// The legal-action menu for the seat to act.
    pub fn legal_actions(&self) -> Result<Vec<ActionSpec>, GameError> {
        if self.terminal.is_some() {
            return Err(GameError::TerminalState);
        }
        let seat = self.to_act.ok_or(GameError::TerminalState)?;
        let me = seat.index();
        let them = seat.other().index();
        let to_call = self.to_call(seat);
        let all_in_total = self.stacks[me] + self.committed[me];
        let can_raise = !self.is_all_in(seat.other()) && all_in_total > self.committed[them];

        let mut menu = Vec::with_capacity(3);
        if to_call == 0 {
            menu.push(ActionSpec::simple(ActionKind::Check));
        } else {
            menu.push(ActionSpec::simple(ActionKind::Fold));
            menu.push(ActionSpec::simple(ActionKind::Call));
        }
        if can_raise {
            if self.committed[them] == 0 {
                menu.push(ActionSpec {
                    kind: ActionKind::Bet,
                    min_amount: self.big_blind.min(all_in_total),
                    max_amount: all_in_total,
                });
            } else {
                let full_raise = self.committed[them] + self.min_raise;
                menu.push(ActionSpec {
                    kind: ActionKind::Raise,
                    min_amount: full_raise.min(all_in_total),
                    max_amount: all_in_total,
                });
            }
        }
        Ok(menu)
    }

    /// Applies `action` by `seat` and returns the resulting state.
    pub fn apply_action(&self, seat: Seat, action: Action) -> Result<HandState, GameError> {
        let menu = self.legal_actions()?;
        if self.to_act != Some(seat) {
            return Err(GameError::OutOfTurn {
                expected: self.to_act,
                got: seat,
            });
        }
        let spec = menu
            .iter()
            .find(|s| s.kind == action.kind())
            .ok_or(GameError::IllegalAction(action.kind()))?;
        if !spec.admits(action) {
            return Err(GameError::IllegalAmount {
                amount: action.amount().unwrap_or(0),
                min: spec.min_amount,
                max: spec.max_amount,
            });
        }

        let mut next = self.clone();
        let me = seat.index();
        let them = seat.other().index();
        let description = match action {
            Action::Fold => {
                next.to_act = None;
                next.terminal = Some(Terminal::EndHand(EndReason::Fold {
                    winner: seat.other(),
                }));
                format!("{seat} folds")
            }
            Action::Check => format!("{seat} checks"),
            Action::Call => {
                let paid = self.to_call(seat).min(self.stacks[me]);
                next.stacks[me] -= paid;
                next.committed[me] += paid;
                if next.stacks[me] == 0 {
                    format!("{seat} calls {paid} and is all-in")
                } else {
                    format!("{seat} calls {paid}")
                }
            }
            Action::Bet(total) | Action::Raise(total) => {
                let increment = total - self.committed[them];
                next.min_raise = next.min_raise.max(increment);
                next.stacks[me] -= total - self.committed[me];
                next.committed[me] = total;
                let verb = if action.kind() == ActionKind::Bet {
                    "bets"
                } else {
                    "raises to"
                };
                if next.stacks[me] == 0 {
                    format!("{seat} {verb} {total} and is all-in")
                } else {
                    format!("{seat} {verb} {total}")
                }
            }
        };
        next.acted[me] = true;
        next.action_history.push(SeatAction { seat, action });
        next.log.push(Step::Act { seat, action });
        next.annotations.previous_action = Some(description);
        if next.terminal.is_none() {
            next.pass_turn(seat.other());
        }
        next.refresh_annotations();
        Ok(next)
    }

    /// Cards the next [`advance_street`](Self::advance_street) will deal:
    /// one street's worth normally, the rest of the board on a run-out.
    pub fn pending_deal(&self) -> Vec<Card> {
        let Some(deck) = &self.deck else {
            return Vec::new();
        };
        let Some(next) = self.street.next() else {
            return Vec::new();
        };
        let target = if self.runout_pending() {
            5
        } else {
            next.board_len()
        };
        let n = target.saturating_sub(deck.board.len());
        deck.remaining.iter().take(n).copied().collect()
    }

    /// Moves to the next betting round, dealing from the deck.
    pub fn advance_street(&self) -> Result<HandState, GameError> {
        self.advance_street_with(&self.pending_deal())
    }

    /// Moves to the next betting round using `dealt` as the new community
    /// cards. On a host the cards must be the top of the deck; on a replica
    /// without a deck they are taken as given.
    pub fn advance_street_with(&self, dealt: &[Card]) -> Result<HandState, GameError> {
        if self.terminal != Some(Terminal::Advance) {
            return Err(GameError::NotAdvanceable(format!(
                "terminal is {:?}",
                self.terminal
            )));
        }
        let runout = self.runout_pending();
        let mut next = self.clone();
        next.pot += next.committed.iter().sum::<Chips>();
        next.committed = [0, 0];
        next.action_history.clear();
        next.annotations.previous_action = None;
        next.acted = [false, false];
        next.min_raise = next.big_blind;
        next.terminal = None;
        next.street = if runout {
            Street::River
        } else {
            self.street
                .next()
                .expect("Advance is never reached on the river")
        };

        match next.deck.as_mut() {
            None if !dealt.is_empty() => {
                return Err(GameError::NotAdvanceable(
                    "physical-deck hands are not dealt by the engine".into(),
                ));
            }
            None => {}
            Some(deck) => {
                let needed = next.street.board_len() - deck.board.len();
                if dealt.len() != needed {
                    return Err(GameError::NotAdvanceable(format!(
                        "expected {needed} board cards, got {}",
                        dealt.len()
                    )));
                }
                if !deck.remaining.is_empty() {
                    if !deck.remaining.starts_with(dealt) {
                        return Err(GameError::NotAdvanceable(
                            "dealt cards are not the top of the deck".into(),
                        ));
                    }
                    deck.remaining.drain(..needed);
                }
                deck.board.extend_from_slice(dealt);
            }
        }
        next.log.push(Step::Advance {
            dealt: dealt.to_vec(),
        });

        if runout {
            next.to_act = None;
            next.terminal = Some(Terminal::EndHand(EndReason::Showdown));
        } else {
            next.pass_turn(next.dealer_seat.other());
        }
        next.refresh_annotations();
        Ok(next)
    }

    /// Re-applies logged steps in order.
    pub fn replay(&self, steps: &[Step]) -> Result<HandState, GameError> {
        steps
            .iter()
            .try_fold(self.clone(), |hand, step| match step {
                Step::Act { seat, action } => hand.apply_action(*seat, *action),
                Step::Advance { dealt } => hand.advance_street_with(dealt),
                Step::Settle { outcome } => hand.settle(outcome).map(|(h, _)| h),
            })
    }

    /// Digital-deck showdown reached: both hands are public.
    pub fn cards_revealed(&self) -> bool {
        self.deck_mode == DeckMode::Digital
            && self.terminal == Some(Terminal::EndHand(EndReason::Showdown))
    }

    /// What `seat` is allowed to see: no undealt cards and no opposing hole
    /// cards until a showdown reveals them.
    pub fn view_for(&self, seat: Seat) -> HandState {
        let mut v = self.clone();
        let revealed = v.cards_revealed();
        if let Some(deck) = v.deck.as_mut() {
            deck.remaining.clear();
            if !revealed {
                deck.hole[seat.other().index()] = None;
            }
        }
        v
    }

    /// Installs hole cards made public at showdown.
    pub fn reveal(&self, holes: [[Card; 2]; 2]) -> HandState {
        let mut v = self.clone();
        if let Some(deck) = v.deck.as_mut() {
            deck.hole = holes.map(Some);
        }
        v
    }

    /// Both seats' hole cards, when known.
    pub fn both_holes(&self) -> Option<[[Card; 2]; 2]> {
        Some([self.hole_cards(Seat::ZERO)?, self.hole_cards(Seat::ONE)?])
    }
}
