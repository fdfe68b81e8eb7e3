//! Random legal play over many hands with invariant checks after every step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::policy::random_action;
use crate::canon::state_hash;
use crate::engine::{
    Chips, DeckMode, EndReason, HandState, MatchConfig, MatchState, Outcome, Seat, Terminal, Winner,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FuzzMode {
    Digital,
    Physical,
    /// Alternate deck modes from one match to the next.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub hands: u64,
    pub seed: u64,
    pub mode: FuzzMode,
    pub starting_stack: Chips,
    pub small_blind: Chips,
    pub big_blind: Chips,
}

impl FuzzConfig {
    pub fn new(hands: u64, seed: u64) -> FuzzConfig {
        FuzzConfig {
            hands,
            seed,
            mode: FuzzMode::Mixed,
            starting_stack: 200,
            small_blind: 1,
            big_blind: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Position of the hand in the run, counting from 1.
    pub hand: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub hands: u64,
    pub matches: u64,
    pub actions: u64,
    pub folds: u64,
    pub showdowns: u64,
    pub chops: u64,
    pub runouts: u64,
    pub replays_checked: u64,
    pub violations: Vec<Violation>,
    /// Hash over every final hand state; equal seeds give equal digests.
    pub digest: String,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Run {
    rng: ChaCha8Rng,
    report: FuzzReport,
    digest: Sha256,
    hand_index: u64,
}

impl Run {
    fn fail(&mut self, detail: String) {
        if self.report.violations.len() < 100 {
            self.report.violations.push(Violation {
                hand: self.hand_index,
                detail,
            });
        }
    }

    fn check_state(&mut self, hand: &HandState, total: Chips) {
        if hand.total_chips() != total {
            self.fail(format!("chips {} != {total}", hand.total_chips()));
        }
        if let Some(deck) = &hand.deck {
            let on_board = deck.board.len();
            let expected = hand.street.board_len();
            if on_board != expected {
                self.fail(format!("{on_board} board cards on {:?}", hand.street));
            }
            if deck.remaining.len() + on_board + 4 != 52 {
                self.fail("cards went missing from the deck".into());
            }
        }
        if let Some(seat) = hand.to_act {
            if hand.terminal.is_some() {
                self.fail(format!("terminal state waiting for {seat}"));
            }
            if hand.is_all_in(seat) {
                self.fail(format!("{seat} is all-in but asked to act"));
            }
            let i = seat.index();
            let owed = hand.committed[1 - i]
                .saturating_sub(hand.committed[i])
                .min(hand.stacks[i]);
            if hand.annotations.amount_to_call != owed {
                self.fail(format!(
                    "amount_to_call {} != {owed}",
                    hand.annotations.amount_to_call
                ));
            }
            if hand.annotations.waiting_for != Some(seat) {
                self.fail("waiting_for disagrees with to_act".into());
            }
        } else if hand.terminal.is_none() {
            self.fail("nobody to act in a live round".into());
        }
    }

    fn outcome(&mut self, hand: &HandState) -> Option<Outcome> {
        if let Some(o) = hand.resolve_outcome() {
            return Some(o);
        }
        if hand.terminal == Some(Terminal::EndHand(EndReason::Showdown))
            && hand.deck_mode == DeckMode::Physical
        {
            let winner = match self.rng.random_range(0..5) {
                0 => Winner::Chop,
                1 | 2 => Winner::Seat(Seat::ZERO),
                _ => Winner::Seat(Seat::ONE),
            };
            return Some(Outcome::Declared { winner });
        }
        None
    }

    /// Plays one hand to settlement. Returns the settled hand.
    fn play_hand(&mut self, m: &MatchState) -> Option<HandState> {
        let total = m.total_chips();
        let start = match m.start_hand() {
            Ok(h) => h,
            Err(e) => {
                self.fail(format!("start_hand: {e}"));
                return None;
            }
        };
        self.check_state(&start, total);
        let mut hand = start.clone();
        let mut streets = 0;
        loop {
            match hand.terminal {
                None => {
                    let seat = hand.to_act?;
                    let menu = match hand.legal_actions() {
                        Ok(m) if !m.is_empty() => m,
                        other => {
                            self.fail(format!("no legal actions: {other:?}"));
                            return None;
                        }
                    };
                    let action = random_action(&menu, &mut self.rng);
                    let before = state_hash(&hand);
                    let next = match hand.apply_action(seat, action) {
                        Ok(n) => n,
                        Err(e) => {
                            self.fail(format!("{action:?} from the menu refused: {e}"));
                            return None;
                        }
                    };
                    if state_hash(&hand) != before {
                        self.fail("apply_action changed its input".into());
                    }
                    if hand.apply_action(seat, action).as_ref() != Ok(&next) {
                        self.fail("apply_action is not deterministic".into());
                    }
                    self.report.actions += 1;
                    hand = next;
                }
                Some(Terminal::Advance) => {
                    if hand.runout_pending() {
                        self.report.runouts += 1;
                    }
                    hand = match hand.advance_street() {
                        Ok(h) => h,
                        Err(e) => {
                            self.fail(format!("advance_street: {e}"));
                            return None;
                        }
                    };
                    streets += 1;
                    if streets > 3 {
                        self.fail("more than three street advances".into());
                        return None;
                    }
                }
                Some(Terminal::EndHand(end)) => {
                    let Some(outcome) = self.outcome(&hand) else {
                        self.fail(format!("cannot resolve {end:?}"));
                        return None;
                    };
                    let (settled, s) = match hand.settle(&outcome) {
                        Ok(x) => x,
                        Err(e) => {
                            self.fail(format!("settle: {e}"));
                            return None;
                        }
                    };
                    if s.net.iter().sum::<i64>() != 0 {
                        self.fail(format!("net {:?} does not sum to zero", s.net));
                    }
                    if settled.stacks.iter().sum::<Chips>() != total {
                        self.fail("stacks after settlement lose chips".into());
                    }
                    match end {
                        EndReason::Fold { .. } => self.report.folds += 1,
                        EndReason::Showdown => self.report.showdowns += 1,
                    }
                    if s.winner == Winner::Chop {
                        self.report.chops += 1;
                    }
                    self.check_replay(&start, &settled);
                    return Some(settled);
                }
            }
            self.check_state(&hand, total);
        }
    }

    fn check_replay(&mut self, start: &HandState, settled: &HandState) {
        self.report.replays_checked += 1;
        match start.replay(&settled.log) {
            Ok(r) if state_hash(&r) == state_hash(settled) => {}
            Ok(_) => self.fail("replay reached a different state".into()),
            Err(e) => self.fail(format!("replay failed: {e}")),
        }
    }
}

/// Plays `config.hands` hands, starting a fresh match whenever a stack is
/// emptied. The same config always produces the same report.
pub fn fuzz_matches(config: &FuzzConfig) -> FuzzReport {
    let mut run = Run {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        report: FuzzReport {
            config: *config,
            hands: 0,
            matches: 0,
            actions: 0,
            folds: 0,
            showdowns: 0,
            chops: 0,
            runouts: 0,
            replays_checked: 0,
            violations: Vec::new(),
            digest: String::new(),
        },
        digest: Sha256::new(),
        hand_index: 0,
    };
    let mut current: Option<MatchState> = None;
    let mut last_dealer: Option<Seat> = None;

    while run.hand_index < config.hands {
        let m = match current.take() {
            Some(m) if !m.is_over() => m,
            _ => {
                let deck_mode = match config.mode {
                    FuzzMode::Digital => DeckMode::Digital,
                    FuzzMode::Physical => DeckMode::Physical,
                    FuzzMode::Mixed if run.report.matches.is_multiple_of(2) => DeckMode::Digital,
                    FuzzMode::Mixed => DeckMode::Physical,
                };
                let cfg = MatchConfig {
                    starting_stack: config.starting_stack,
                    small_blind: config.small_blind,
                    big_blind: config.big_blind,
                    deck_mode,
                    rng_seed: run.rng.random(),
                };
                run.report.matches += 1;
                last_dealer = None;
                match MatchState::new(cfg) {
                    Ok(m) => m,
                    Err(e) => {
                        run.fail(format!("bad config: {e}"));
                        break;
                    }
                }
            }
        };
        run.hand_index += 1;
        let Some(settled) = run.play_hand(&m) else {
            // The hand could not finish; start over rather than loop on it.
            continue;
        };
        if last_dealer == Some(settled.dealer_seat) {
            run.fail("dealer did not alternate".into());
        }
        last_dealer = Some(settled.dealer_seat);
        run.digest.update(state_hash(&settled).as_bytes());
        run.report.hands += 1;
        match m.record(&settled) {
            Ok(next) => current = Some(next),
            Err(e) => run.fail(format!("record: {e}")),
        }
    }
    run.report.digest = hex::encode(run.digest.finalize());
    run.report
}
