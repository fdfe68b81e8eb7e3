//! A deliberately naive hand classifier used as a test oracle.

use headsup_core::Card;

/// Category index 0 (high card) to 8 (straight flush) plus the ranks that
/// break ties, most significant first.
pub type Score = (u8, Vec<u8>);

pub fn naive5(cards: &[Card]) -> Score {
    let mut ranks: Vec<u8> = cards.iter().map(|c| c.rank()).collect();
    ranks.sort_unstable_by(|a, b| b.cmp(a));
    let flush = cards.iter().all(|c| c.suit() == cards[0].suit());
    let distinct = {
        let mut d = ranks.clone();
        d.dedup();
        d.len() == 5
    };
    let straight_high = if distinct && ranks[0] - ranks[4] == 4 {
        Some(ranks[0])
    } else if ranks == [14, 5, 4, 3, 2] {
        Some(5)
    } else {
        None
    };
    if let Some(high) = straight_high {
        return (if flush { 8 } else { 4 }, vec![high]);
    }
    if flush {
        return (5, ranks);
    }
    let mut groups: Vec<(usize, u8)> = Vec::new();
    for r in &ranks {
        match groups.iter_mut().find(|(_, g)| g == r) {
            Some(g) => g.0 += 1,
            None => groups.push((1, *r)),
        }
    }
    groups.sort_by(|a, b| b.cmp(a));
    let shape: Vec<usize> = groups.iter().map(|g| g.0).collect();
    let cat = match shape.as_slice() {
        [4, 1] => 7,
        [3, 2] => 6,
        [3, 1, 1] => 3,
        [2, 2, 1] => 2,
        [2, 1, 1, 1] => 1,
        _ => 0,
    };
    (cat, groups.iter().map(|g| g.1).collect())
}

pub fn naive7(cards: &[Card]) -> Score {
    let mut best = None;
    for skip_a in 0..7 {
        for skip_b in skip_a + 1..7 {
            let five: Vec<Card> = (0..7)
                .filter(|&i| i != skip_a && i != skip_b)
                .map(|i| cards[i])
                .collect();
            let r = naive5(&five);
            if best.as_ref().is_none_or(|b| r > *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap()
}
