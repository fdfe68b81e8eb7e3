//! Exhaustive walk of one betting round with bet sizes abstracted to the
//! minimum and the all-in amount.

use serde::{Deserialize, Serialize};

use crate::engine::{
    Action, ActionKind, ActionSpec, Chips, DeckMode, EndReason, GameError, HandState, MatchConfig,
    MatchState, Seat, Street, Terminal,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackConfig {
    /// Chips behind for each seat at the start of the round.
    pub stack: Chips,
    pub small_blind: Chips,
    pub big_blind: Chips,
}

impl StackConfig {
    pub fn in_big_blinds(bbs: Chips, small_blind: Chips, big_blind: Chips) -> StackConfig {
        StackConfig {
            stack: bbs * big_blind,
            small_blind,
            big_blind,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalCounts {
    pub end_hand: u64,
    pub advance: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub check: u64,
    pub call: u64,
    pub bet: u64,
    pub raise: u64,
    pub fold: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplorationReport {
    pub street: Street,
    pub stacks: StackConfig,
    pub states_visited: u64,
    pub terminals: TerminalCounts,
    pub edges: EdgeCounts,
    /// Longest action sequence from the root to a terminal.
    pub max_depth: usize,
    pub violations: Vec<String>,
}

/// Bet sizes tried at each decision: the minimum and the all-in.
fn abstract_actions(menu: &[ActionSpec]) -> Vec<Action> {
    let mut out = Vec::new();
    for spec in menu {
        match spec.kind {
            ActionKind::Check => out.push(Action::Check),
            ActionKind::Call => out.push(Action::Call),
            ActionKind::Fold => out.push(Action::Fold),
            ActionKind::Bet | ActionKind::Raise => {
                let make = |a| {
                    if spec.kind == ActionKind::Bet {
                        Action::Bet(a)
                    } else {
                        Action::Raise(a)
                    }
                };
                out.push(make(spec.min_amount));
                if spec.max_amount != spec.min_amount {
                    out.push(make(spec.max_amount));
                }
            }
        }
    }
    out
}

fn root(street: Street, stacks: &StackConfig) -> Result<HandState, GameError> {
    let config = MatchConfig {
        starting_stack: stacks.stack,
        small_blind: stacks.small_blind,
        big_blind: stacks.big_blind,
        deck_mode: DeckMode::Physical,
        rng_seed: 0,
    };
    match street {
        Street::Preflop => MatchState::new(config)?.start_hand(),
        _ => {
            config.validate()?;
            Ok(HandState::street_root(
                &config,
                street,
                [stacks.stack; 2],
                0,
                Seat::ZERO,
            ))
        }
    }
}

struct Walker {
    report: ExplorationReport,
    total: Chips,
    depth_limit: usize,
}

impl Walker {
    fn violation(&mut self, path: &[Action], what: String) {
        if self.report.violations.len() < 100 {
            self.report
                .violations
                .push(format!("{what} after {path:?}"));
        }
    }

    fn visit(&mut self, hand: &HandState, path: &mut Vec<Action>) {
        self.report.states_visited += 1;
        if hand.total_chips() != self.total {
            self.violation(
                path,
                format!("chips {} != {}", hand.total_chips(), self.total),
            );
        }
        if path.len() > self.depth_limit {
            self.violation(path, "path exceeds the longest possible raise war".into());
            return;
        }

        if let Some(terminal) = hand.terminal {
            self.report.max_depth = self.report.max_depth.max(path.len());
            match terminal {
                Terminal::Advance => self.report.terminals.advance += 1,
                Terminal::EndHand(_) => self.report.terminals.end_hand += 1,
            }
            if terminal == Terminal::EndHand(EndReason::Showdown) && hand.street != Street::River {
                self.violation(path, "showdown before the river".into());
            }
            if hand.legal_actions() != Err(GameError::TerminalState) {
                self.violation(path, "terminal state still offers actions".into());
            }
            return;
        }

        let Some(seat) = hand.to_act else {
            self.violation(path, "non-terminal state with nobody to act".into());
            return;
        };
        if hand.is_all_in(seat) {
            self.violation(path, format!("{seat} is all-in but asked to act"));
        }
        let menu = match hand.legal_actions() {
            Ok(m) if !m.is_empty() => m,
            Ok(_) => {
                self.violation(path, "empty legal-action set".into());
                return;
            }
            Err(e) => {
                self.violation(path, format!("legal_actions failed: {e}"));
                return;
            }
        };
        let all_in = hand.stacks[seat.index()] + hand.committed[seat.index()];
        for spec in &menu {
            if spec.min_amount > spec.max_amount {
                self.violation(path, format!("inverted bounds in {spec:?}"));
            }
            if matches!(spec.kind, ActionKind::Bet | ActionKind::Raise) && spec.max_amount != all_in
            {
                self.violation(
                    path,
                    format!("{spec:?} max is not the all-in total {all_in}"),
                );
            }
        }

        for action in abstract_actions(&menu) {
            let before = hand.committed[seat.index()];
            let next = match hand.apply_action(seat, action) {
                Ok(n) => n,
                Err(e) => {
                    self.violation(path, format!("{action:?} from the menu was refused: {e}"));
                    continue;
                }
            };
            let edges = &mut self.report.edges;
            match action.kind() {
                ActionKind::Check => edges.check += 1,
                ActionKind::Call => edges.call += 1,
                ActionKind::Bet => edges.bet += 1,
                ActionKind::Raise => edges.raise += 1,
                ActionKind::Fold => edges.fold += 1,
            }
            if matches!(action, Action::Bet(_) | Action::Raise(_))
                && next.committed[seat.index()] <= before
            {
                self.violation(path, format!("{action:?} did not increase the wager"));
            }
            path.push(action);
            self.visit(&next, path);
            path.pop();
        }
    }
}

/// Walks every action sequence of one betting round. Violations are
/// collected in the report rather than returned as errors.
pub fn explore_dfa(street: Street, stacks: &StackConfig) -> ExplorationReport {
    let mut report = ExplorationReport {
        street,
        stacks: *stacks,
        states_visited: 0,
        terminals: TerminalCounts::default(),
        edges: EdgeCounts::default(),
        max_depth: 0,
        violations: Vec::new(),
    };
    let hand = match root(street, stacks) {
        Ok(h) => h,
        Err(e) => {
            report.violations.push(format!("cannot build root: {e}"));
            return report;
        }
    };
    let total = hand.total_chips();
    // Every wager adds at least one chip, so no round outlasts this.
    let depth_limit = 2 * total as usize + 4;
    let mut walker = Walker {
        report,
        total,
        depth_limit,
    };
    walker.visit(&hand, &mut Vec::new());
    walker.report
}
