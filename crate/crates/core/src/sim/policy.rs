use rand::Rng;

use crate::engine::{Action, ActionKind, ActionSpec, Chips};

/// Picks a kind uniformly from the menu, then an amount: the minimum, the
/// maximum or anything in between, each a third of the time.
pub fn random_action<R: Rng + ?Sized>(menu: &[ActionSpec], rng: &mut R) -> Action {
    assert!(!menu.is_empty(), "no legal actions to choose from");
    let spec = menu[rng.random_range(0..menu.len())];
    let mut amount = || -> Chips {
        match rng.random_range(0..3) {
            0 => spec.min_amount,
            1 => spec.max_amount,
            _ => rng.random_range(spec.min_amount..=spec.max_amount),
        }
    };
    match spec.kind {
        ActionKind::Check => Action::Check,
        ActionKind::Call => Action::Call,
        ActionKind::Fold => Action::Fold,
        ActionKind::Bet => Action::Bet(amount()),
        ActionKind::Raise => Action::Raise(amount()),
    }
}

/// Like [`random_action`] but folds only when nothing else is allowed,
/// which keeps hands going long enough to reach later streets.
pub fn passive_action<R: Rng + ?Sized>(menu: &[ActionSpec], rng: &mut R) -> Action {
    let keep: Vec<ActionSpec> = menu
        .iter()
        .copied()
        .filter(|s| s.kind != ActionKind::Fold)
        .collect();
    if keep.is_empty() {
        Action::Fold
    } else {
        random_action(&keep, rng)
    }
}
