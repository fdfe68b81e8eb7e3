//! Two players sharing one terminal.

use std::io::{BufRead, Write};

use anyhow::Result;
use headsup_core::engine::{Outcome, Settlement, Terminal, Winner};
use headsup_core::{Chips, DeckMode, HandState, MatchConfig, MatchState, Seat};

use crate::menu::{self, Choice};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandRecord {
    pub hand_number: u32,
    pub settlement: Settlement,
    /// The board was dealt out after an all-in.
    pub runout: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HotSeatSummary {
    pub hands: Vec<HandRecord>,
    pub final_stacks: [Chips; 2],
    pub match_over: bool,
}

struct Console<R, W> {
    input: R,
    out: W,
}

/// Input ran out or a player typed `q`.
struct Quit;

impl<R: BufRead, W: Write> Console<R, W> {
    fn say(&mut self, text: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", text.as_ref())?;
        Ok(())
    }

    fn ask(&mut self, prompt: &str) -> Result<Result<String, Quit>> {
        write!(self.out, "{prompt}")?;
        self.out.flush()?;
        let mut line = String::new();
        if self.input.read_line(&mut line)? == 0 {
            writeln!(self.out)?;
            return Ok(Err(Quit));
        }
        Ok(Ok(line))
    }

    fn take_action(&mut self, hand: &HandState, seat: Seat) -> Result<Result<HandState, Quit>> {
        let menu_items = hand.legal_actions()?;
        for line in menu::table_lines(hand) {
            self.say(line)?;
        }
        if let Some(hole) = hand.hole_cards(seat) {
            self.say(format!("{seat} cards: {}", menu::cards(&hole)))?;
        }
        self.say(format!("{seat} to act:"))?;
        for line in menu::menu_lines(&menu_items, hand.annotations.amount_to_call) {
            self.say(line)?;
        }
        loop {
            let line = match self.ask(&format!("{seat}> "))? {
                Ok(l) => l,
                Err(q) => return Ok(Err(q)),
            };
            let action = match menu::parse_choice(&menu_items, &line) {
                Ok(Choice::Act(a)) => a,
                Ok(Choice::Quit) => return Ok(Err(Quit)),
                Ok(Choice::NeedAmount(spec)) => loop {
                    let prompt = format!("amount [{}, {}]> ", spec.min_amount, spec.max_amount);
                    let text = match self.ask(&prompt)? {
                        Ok(t) => t,
                        Err(q) => return Ok(Err(q)),
                    };
                    match menu::parse_amount(&spec, &text) {
                        Ok(a) => break a,
                        Err(msg) => self.say(msg)?,
                    }
                },
                Err(msg) => {
                    self.say(msg)?;
                    continue;
                }
            };
            match hand.apply_action(seat, action) {
                Ok(next) => return Ok(Ok(next)),
                Err(e) => self.say(e.to_string())?,
            }
        }
    }

    fn declare(&mut self) -> Result<Result<Winner, Quit>> {
        loop {
            let mut said = [Winner::Chop; 2];
            for seat in Seat::BOTH {
                said[seat.index()] = loop {
                    let line = match self.ask(&format!("{seat}, who won? (0, 1, chop)> "))? {
                        Ok(l) => l,
                        Err(q) => return Ok(Err(q)),
                    };
                    match menu::parse_winner(&line) {
                        Ok(w) => break w,
                        Err(msg) => self.say(msg)?,
                    }
                };
            }
            if said[0] == said[1] {
                return Ok(Ok(said[0]));
            }
            self.say(format!(
                "declarations disagree (seat 0: {}, seat 1: {}); declare again",
                said[0], said[1]
            ))?;
        }
    }

    /// Plays one hand to settlement. `None` if a player quit.
    fn play_hand(&mut self, m: &MatchState) -> Result<Option<(HandState, HandRecord)>> {
        let mut hand = m.start_hand()?;
        let dealer = hand.dealer_seat;
        self.say(format!(
            "=== hand {}: {dealer} deals and posts {}, {} posts {} ===",
            hand.hand_number,
            hand.small_blind.min(hand.starting_stacks[dealer.index()]),
            dealer.other(),
            hand.committed[dealer.other().index()]
        ))?;
        let mut runout = false;
        loop {
            match hand.terminal {
                None => {
                    let seat = hand.to_act.expect("a live hand has a seat to act");
                    match self.take_action(&hand, seat)? {
                        Ok(next) => hand = next,
                        Err(Quit) => return Ok(None),
                    }
                }
                Some(Terminal::Advance) => {
                    if hand.runout_pending() && !runout {
                        runout = true;
                        self.say("all-in: running out the board")?;
                    }
                    hand = hand.advance_street()?;
                    if hand.deck_mode == DeckMode::Physical {
                        self.say(format!("-- deal the {} --", hand.street))?;
                    } else {
                        self.say(format!(
                            "-- {}: {} --",
                            hand.street,
                            menu::cards(hand.board())
                        ))?;
                    }
                }
                Some(Terminal::EndHand(_)) => {
                    let outcome = match hand.resolve_outcome() {
                        Some(o) => o,
                        None => match self.declare()? {
                            Ok(winner) => Outcome::Declared { winner },
                            Err(Quit) => return Ok(None),
                        },
                    };
                    if matches!(outcome, Outcome::Showdown { .. }) {
                        for seat in Seat::BOTH {
                            if let Some(line) = menu::shown_hand(&hand, seat) {
                                self.say(line)?;
                            }
                        }
                    }
                    let (settled, settlement) = hand.settle(&outcome)?;
                    self.report(&settled, &settlement)?;
                    let record = HandRecord {
                        hand_number: settled.hand_number,
                        settlement,
                        runout,
                    };
                    return Ok(Some((settled, record)));
                }
            }
        }
    }

    fn report(&mut self, hand: &HandState, s: &Settlement) -> Result<()> {
        let how = match s.reason {
            headsup_core::engine::SettleReason::Fold => "fold",
            headsup_core::engine::SettleReason::Showdown => "showdown",
            headsup_core::engine::SettleReason::DeclaredWinner => "declared",
        };
        match s.winner {
            Winner::Seat(w) => self.say(format!("{w} wins {} ({how})", s.awarded[w.index()]))?,
            Winner::Chop => self.say(format!(
                "pot chopped {} / {} ({how})",
                s.awarded[0], s.awarded[1]
            ))?,
        }
        self.say(format!(
            "net {:+} / {:+} | stacks {} / {}",
            s.net[0], s.net[1], hand.stacks[0], hand.stacks[1]
        ))
    }
}

/// Runs a hot-seat match until a stack is empty, `max_hands` are played, or
/// a player quits (`q` or end of input).
pub fn play_local<R: BufRead, W: Write>(
    config: MatchConfig,
    max_hands: Option<u32>,
    input: R,
    out: W,
) -> Result<HotSeatSummary> {
    let mut m = MatchState::new(config)?;
    let mut console = Console { input, out };
    let mut hands = Vec::new();
    while !m.is_over() && max_hands.is_none_or(|n| m.hands_played < n) {
        let Some((settled, record)) = console.play_hand(&m)? else {
            console.say("quit")?;
            break;
        };
        m = m.record(&settled)?;
        hands.push(record);
    }
    if m.is_over() {
        let winner = if m.stacks[0] > 0 {
            Seat::ZERO
        } else {
            Seat::ONE
        };
        console.say(format!(
            "match over: {winner} has all {} chips",
            m.total_chips()
        ))?;
    }
    Ok(HotSeatSummary {
        hands,
        final_stacks: m.stacks,
        match_over: m.is_over(),
    })
}
