//! Text input and output shared by the terminal front ends.

use headsup_core::engine::Winner;
use headsup_core::eval::evaluate7;
use headsup_core::{Action, ActionKind, ActionSpec, Card, Chips, HandState, Seat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Act(Action),
    /// A wager was picked without an amount.
    NeedAmount(ActionSpec),
    Quit,
}

fn needs_amount(kind: ActionKind) -> bool {
    matches!(kind, ActionKind::Bet | ActionKind::Raise)
}

fn kind_from_word(word: &str) -> Option<ActionKind> {
    Some(match word {
        "f" | "fold" => ActionKind::Fold,
        "k" | "x" | "check" => ActionKind::Check,
        "c" | "call" => ActionKind::Call,
        "b" | "bet" => ActionKind::Bet,
        "r" | "raise" => ActionKind::Raise,
        _ => return None,
    })
}

/// Reads an amount for `spec`: a number, `min`, or `max`/`all`.
pub fn parse_amount(spec: &ActionSpec, text: &str) -> Result<Action, String> {
    let text = text.trim().to_ascii_lowercase();
    let amount: Chips = match text.as_str() {
        "min" => spec.min_amount,
        "max" | "all" | "allin" | "all-in" => spec.max_amount,
        t => t.parse().map_err(|_| {
            format!(
                "not an amount: {t:?}; enter a number in [{}, {}]",
                spec.min_amount, spec.max_amount
            )
        })?,
    };
    let action = Action::from_parts(spec.kind, Some(amount)).expect("wager kinds take amounts");
    if spec.admits(action) {
        Ok(action)
    } else {
        Err(format!(
            "amount {amount} is not allowed; enter a number in [{}, {}]",
            spec.min_amount, spec.max_amount
        ))
    }
}

/// Reads a menu choice: the item number or the action name, optionally
/// followed by an amount (`2 40`, `raise max`).
pub fn parse_choice(menu: &[ActionSpec], line: &str) -> Result<Choice, String> {
    let line = line.trim().to_ascii_lowercase();
    let mut words = line.split_whitespace();
    let Some(first) = words.next() else {
        return Err("enter the number of an action".into());
    };
    if matches!(first, "q" | "quit" | "exit") {
        return Ok(Choice::Quit);
    }
    let spec = match first.parse::<usize>() {
        Ok(n) if (1..=menu.len()).contains(&n) => menu[n - 1],
        Ok(n) => return Err(format!("no action {n}; choose 1 to {}", menu.len())),
        Err(_) => {
            let kind =
                kind_from_word(first).ok_or_else(|| format!("unrecognized input {first:?}"))?;
            *menu.iter().find(|s| s.kind == kind).ok_or_else(|| {
                format!("{} is not available now", kind.to_string().to_lowercase())
            })?
        }
    };
    let rest: Vec<&str> = words.collect();
    if rest.len() > 1 {
        return Err("too many words".into());
    }
    match (needs_amount(spec.kind), rest.first()) {
        (true, None) => Ok(Choice::NeedAmount(spec)),
        (true, Some(text)) => parse_amount(&spec, text).map(Choice::Act),
        (false, None) => Ok(Choice::Act(
            Action::from_parts(spec.kind, None).expect("no amount needed"),
        )),
        (false, Some(_)) => Err(format!(
            "{} takes no amount",
            spec.kind.to_string().to_lowercase()
        )),
    }
}

/// Reads a showdown declaration: `0`, `1` or `chop`.
pub fn parse_winner(line: &str) -> Result<Winner, String> {
    match line.trim().to_ascii_lowercase().as_str() {
        "0" => Ok(Winner::Seat(Seat::ZERO)),
        "1" => Ok(Winner::Seat(Seat::ONE)),
        "chop" | "split" | "c" => Ok(Winner::Chop),
        other => Err(format!("expected 0, 1 or chop, got {other:?}")),
    }
}

pub fn cards(cards: &[Card]) -> String {
    if cards.is_empty() {
        return "-".into();
    }
    cards
        .iter()
        .map(Card::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn menu_lines(menu: &[ActionSpec], to_call: Chips) -> Vec<String> {
    menu.iter()
        .enumerate()
        .map(|(i, s)| {
            let text = match s.kind {
                ActionKind::Call => format!("call {to_call}"),
                k if needs_amount(k) => format!(
                    "{} [{}, {}]",
                    k.to_string().to_lowercase(),
                    s.min_amount,
                    s.max_amount
                ),
                k => k.to_string().to_lowercase(),
            };
            format!("  {}) {text}", i + 1)
        })
        .collect()
}

/// The annotation panel, board and chip counts.
pub fn table_lines(hand: &HandState) -> Vec<String> {
    let a = &hand.annotations;
    let stacks = hand.stack_report();
    let mut lines = vec![format!(
        "hand {} | {} | dealer {} | hands played {} | pot {} | to call {}",
        hand.hand_number,
        a.current_round,
        a.current_dealer,
        a.hands_played,
        hand.pot,
        a.amount_to_call
    )];
    if let Some(seat) = a.waiting_for {
        lines.push(format!("waiting for {seat}"));
    }
    if let Some(prev) = &a.previous_action {
        lines.push(format!("last action: {prev}"));
    }
    lines.push(format!("board: {}", cards(hand.board())));
    lines.push(
        Seat::BOTH
            .map(|s| {
                let l = stacks[s.index()];
                format!("{s}: {} behind, {} in", l.behind, l.committed)
            })
            .join(" | "),
    );
    lines
}

/// `seat 0 shows As Kd (pair [AAK..])` when the cards and a full board are known.
pub fn shown_hand(hand: &HandState, seat: Seat) -> Option<String> {
    let hole = hand.hole_cards(seat)?;
    let board = hand.board();
    let mut line = format!("{seat} shows {}", cards(&hole));
    if board.len() == 5 {
        let mut all = board.to_vec();
        all.extend(hole);
        if let Ok(rank) = evaluate7(&all) {
            line.push_str(&format!(" ({rank})"));
        }
    }
    Some(line)
}
