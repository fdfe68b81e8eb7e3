//! The evaluator and explorer pages, as JSON-in, JSON-out functions.

use headsup_core::cards::parse_cards;
use headsup_core::eval::{evaluate, evaluate7, showdown, HandRank};
use headsup_core::sim::{explore_dfa, StackConfig};
use headsup_core::{Chips, Street};
use serde_json::{json, Value};

fn rank_json(rank: &HandRank) -> Value {
    json!({ "category": rank.category.name(), "text": rank.to_string(), "tiebreak": rank.tiebreak })
}

/// Best hand in 5 or 7 cards written like `As Kd 7c 7h 2s`.
pub fn evaluate_text(text: &str) -> Result<Value, String> {
    let cards = parse_cards(text).map_err(|e| e.to_string())?;
    let rank = match cards.len() {
        5 => evaluate(&cards),
        7 => evaluate7(&cards),
        n => return Err(format!("enter 5 or 7 cards, not {n}")),
    }
    .map_err(|e| e.to_string())?;
    Ok(rank_json(&rank))
}

/// Who wins on `board` between hole pairs `a` and `b`.
pub fn compare_text(board: &str, a: &str, b: &str) -> Result<Value, String> {
    let parse = |s: &str| parse_cards(s).map_err(|e| e.to_string());
    let board: [_; 5] = parse(board)?
        .try_into()
        .map_err(|_| "the board needs 5 cards".to_string())?;
    let a: [_; 2] = parse(a)?
        .try_into()
        .map_err(|_| "hand A needs 2 cards".to_string())?;
    let b: [_; 2] = parse(b)?
        .try_into()
        .map_err(|_| "hand B needs 2 cards".to_string())?;
    let result = showdown(&board, &a, &b).map_err(|e| e.to_string())?;
    let seven = |h: &[_; 2]| evaluate7(&[&board[..], &h[..]].concat()).map_err(|e| e.to_string());
    Ok(json!({
        "result": result,
        "a": rank_json(&seven(&a)?),
        "b": rank_json(&seven(&b)?),
    }))
}

pub fn street_named(name: &str) -> Result<Street, String> {
    Ok(match name {
        "preflop" => Street::Preflop,
        "flop" => Street::Flop,
        "turn" => Street::Turn,
        "river" => Street::River,
        other => return Err(format!("unknown street {other:?}")),
    })
}

/// Walks one betting round. Stacks are in big blinds.
pub fn explore_text(street: &str, stack_bb: Chips, sb: Chips, bb: Chips) -> Result<Value, String> {
    if stack_bb > 200 {
        return Err("keep stacks at 200 big blinds or fewer in the browser".into());
    }
    let report = explore_dfa(
        street_named(street)?,
        &StackConfig::in_big_blinds(stack_bb, sb, bb),
    );
    serde_json::to_value(report).map_err(|e| e.to_string())
}
