//! Poker hand ranking for showdowns.
//!
//! [`evaluate`] works directly on 5 to 7 cards: it builds rank counts and
//! per-suit rank masks once and reads the best category straight off them,
//! without enumerating five-card subsets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cards::{rank_char, Card};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("bad input: {0}")]
    BadInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    HighCard,
    Pair,
    TwoPair,
    Trips,
    Straight,
    Flush,
    FullHouse,
    Quads,
    StraightFlush,
}

impl Category {
    pub const ALL: [Category; 9] = [
        Category::HighCard,
        Category::Pair,
        Category::TwoPair,
        Category::Trips,
        Category::Straight,
        Category::Flush,
        Category::FullHouse,
        Category::Quads,
        Category::StraightFlush,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::HighCard => "high card",
            Category::Pair => "pair",
            Category::TwoPair => "two pair",
            Category::Trips => "three of a kind",
            Category::Straight => "straight",
            Category::Flush => "flush",
            Category::FullHouse => "full house",
            Category::Quads => "four of a kind",
            Category::StraightFlush => "straight flush",
        }
    }
}

/// Strength of the best five-card hand. Ordering is lexicographic on
/// `(category, tiebreak)`; tiebreak ranks are most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HandRank {
    pub category: Category,
    pub tiebreak: Vec<u8>,
}

impl Ord for HandRank {
    fn cmp(&self, other: &Self) -> Ordering {
        self.category
            .cmp(&other.category)
            .then_with(|| self.tiebreak.cmp(&other.tiebreak))
    }
}

impl PartialOrd for HandRank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HandRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.category.name())?;
        let ranks: String = self.tiebreak.iter().map(|&r| rank_char(r)).collect();
        write!(f, " [{ranks}]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShowdownResult {
    /// The first hand (`hole_a`) wins.
    A,
    /// The second hand (`hole_b`) wins.
    B,
    Tie,
}

/// Highest straight contained in a rank mask (bit r set for rank r, ace at
/// bit 14), returning its top rank. The wheel returns 5.
fn best_straight(mask: u16) -> Option<u8> {
    let mask = if mask & (1 << 14) != 0 {
        mask | 0b10
    } else {
        mask
    };
    (5..=14u8).rev().find(|&top| {
        let run = 0b11111u16 << (top - 4);
        mask & run == run
    })
}

fn top_ranks(mask: u16, n: usize) -> Vec<u8> {
    (2..=14u8)
        .rev()
        .filter(|r| mask & (1 << r) != 0)
        .take(n)
        .collect()
}

fn check_distinct(cards: &[Card]) -> Result<(), EvalError> {
    let mut seen = 0u64;
    for c in cards {
        let bit = 1u64 << c.index();
        if seen & bit != 0 {
            return Err(EvalError::BadInput(format!("duplicate card {c}")));
        }
        seen |= bit;
    }
    Ok(())
}

/// Ranks the best five-card hand among 5 to 7 distinct cards.
pub fn evaluate(cards: &[Card]) -> Result<HandRank, EvalError> {
    if !(5..=7).contains(&cards.len()) {
        return Err(EvalError::BadInput(format!(
            "expected 5 to 7 cards, got {}",
            cards.len()
        )));
    }
    check_distinct(cards)?;

    let mut counts = [0u8; 15];
    let mut suit_masks = [0u16; 4];
    let mut suit_counts = [0u8; 4];
    let mut rank_mask = 0u16;
    for c in cards {
        counts[c.rank() as usize] += 1;
        suit_masks[c.suit().index()] |= 1 << c.rank();
        suit_counts[c.suit().index()] += 1;
        rank_mask |= 1 << c.rank();
    }

    // With at most 7 cards only one suit can reach five.
    if let Some(s) = (0..4).find(|&s| suit_counts[s] >= 5) {
        if let Some(top) = best_straight(suit_masks[s]) {
            return Ok(rank(Category::StraightFlush, vec![top]));
        }
    }

    let ranks_with = |n: u8| -> Vec<u8> {
        (2..=14u8)
            .rev()
            .filter(|&r| counts[r as usize] == n)
            .collect()
    };
    let quads = ranks_with(4);
    let trips = ranks_with(3);
    let pairs = ranks_with(2);

    if let Some(&q) = quads.first() {
        let kicker = top_ranks(rank_mask & !(1 << q), 1);
        return Ok(rank(Category::Quads, [vec![q], kicker].concat()));
    }

    if let Some(&t) = trips.first() {
        // A second set of trips can serve as the pair.
        let pair = trips
            .get(1)
            .copied()
            .into_iter()
            .chain(pairs.first().copied())
            .max();
        if let Some(p) = pair {
            return Ok(rank(Category::FullHouse, vec![t, p]));
        }
    }

    if let Some(s) = (0..4).find(|&s| suit_counts[s] >= 5) {
        return Ok(rank(Category::Flush, top_ranks(suit_masks[s], 5)));
    }

    if let Some(top) = best_straight(rank_mask) {
        return Ok(rank(Category::Straight, vec![top]));
    }

    if let Some(&t) = trips.first() {
        let kickers = top_ranks(rank_mask & !(1 << t), 2);
        return Ok(rank(Category::Trips, [vec![t], kickers].concat()));
    }

    if pairs.len() >= 2 {
        let (hi, lo) = (pairs[0], pairs[1]);
        let kicker = top_ranks(rank_mask & !(1 << hi) & !(1 << lo), 1);
        return Ok(rank(Category::TwoPair, [vec![hi, lo], kicker].concat()));
    }

    if let Some(&p) = pairs.first() {
        let kickers = top_ranks(rank_mask & !(1 << p), 3);
        return Ok(rank(Category::Pair, [vec![p], kickers].concat()));
    }

    Ok(rank(Category::HighCard, top_ranks(rank_mask, 5)))
}

fn rank(category: Category, tiebreak: Vec<u8>) -> HandRank {
    HandRank { category, tiebreak }
}

/// Ranks a seven-card hand (two hole cards plus a full board).
pub fn evaluate7(cards: &[Card]) -> Result<HandRank, EvalError> {
    if cards.len() != 7 {
        return Err(EvalError::BadInput(format!(
            "expected 7 cards, got {}",
            cards.len()
        )));
    }
    evaluate(cards)
}

pub fn showdown(
    board: &[Card; 5],
    hole_a: &[Card; 2],
    hole_b: &[Card; 2],
) -> Result<ShowdownResult, EvalError> {
    let all: Vec<Card> = board.iter().chain(hole_a).chain(hole_b).copied().collect();
    check_distinct(&all)?;
    let a = evaluate7(&[&board[..], &hole_a[..]].concat())?;
    let b = evaluate7(&[&board[..], &hole_b[..]].concat())?;
    Ok(match a.cmp(&b) {
        Ordering::Greater => ShowdownResult::A,
        Ordering::Less => ShowdownResult::B,
        Ordering::Equal => ShowdownResult::Tie,
    })
}
