//! The non-interactive subcommands. Each returns a JSON report and whether
//! it found no violations.

use headsup_core::sim::{
    converge_test, explore_dfa, fuzz_matches, ChannelModel, ConvergeConfig, Fault, FaultKind,
    FuzzConfig, FuzzMode, StackConfig,
};
use headsup_core::{Chips, DeckMode, Seat, Street};
use headsup_server::local::play_local_match;
use headsup_server::MatchSettings;
use serde_json::{json, Value};

pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

pub fn explore(
    streets: &[Street],
    stacks_bb: &[Chips],
    small_blind: Chips,
    big_blind: Chips,
) -> Outcome {
    let mut reports = Vec::new();
    let mut violations = 0;
    let mut states = 0;
    for &street in streets {
        for &bbs in stacks_bb {
            let r = explore_dfa(
                street,
                &StackConfig::in_big_blinds(bbs, small_blind, big_blind),
            );
            violations += r.violations.len();
            states += r.states_visited;
            reports.push(r);
        }
    }
    Outcome {
        report: json!({
            "states_visited": states,
            "violations": violations,
            "reports": reports,
        }),
        passed: violations == 0,
    }
}

pub fn fuzz(config: FuzzConfig) -> Outcome {
    let r = fuzz_matches(&config);
    Outcome {
        passed: r.passed(),
        report: serde_json::to_value(&r).expect("report serializes"),
    }
}

pub struct SimulateOptions {
    pub hands: u64,
    pub seed: u64,
    pub duplicate_p: f64,
    pub reorder_window: usize,
    pub max_delay: u64,
    pub deck_mode: DeckMode,
    /// Drop one mid-hand event to seat 1 in each of the first `gaps` sessions.
    pub gaps: u64,
    /// Include per-session hashes.
    pub full: bool,
}

pub fn simulate(o: &SimulateOptions) -> Outcome {
    let channel = ChannelModel {
        max_delay: o.max_delay,
        duplicate_p: o.duplicate_p,
        reorder_window: o.reorder_window,
        seed: o.seed,
    };
    let mut config = ConvergeConfig::new(o.hands, o.seed, channel);
    config.deck_mode = o.deck_mode;
    config.faults = (0..o.gaps)
        .map(|session| Fault {
            session,
            seq: 4,
            seat: Seat::ONE,
            kind: FaultKind::Drop,
        })
        .collect();
    let r = converge_test(&config);
    let sessions = r.sessions.len();
    let agreed = r.sessions.iter().filter(|s| s.converged).count();
    let mut report = serde_json::to_value(&r).expect("report serializes");
    if !o.full {
        report.as_object_mut().expect("object").remove("sessions");
    }
    report["sessions_converged"] = json!(format!("{agreed}/{sessions}"));
    Outcome {
        passed: r.converged,
        report,
    }
}

/// Two bots over the in-process transport.
pub fn simulate_local(settings: MatchSettings, hands: u32, seed: u64) -> Outcome {
    let r = play_local_match(settings, hands, seed);
    Outcome {
        passed: r.consistent && r.hands == hands,
        report: serde_json::to_value(&r).expect("report serializes"),
    }
}

pub fn fuzz_config(
    hands: u64,
    seed: u64,
    mode: FuzzMode,
    stack: Chips,
    sb: Chips,
    bb: Chips,
) -> FuzzConfig {
    FuzzConfig {
        hands,
        seed,
        mode,
        starting_stack: stack,
        small_blind: sb,
        big_blind: bb,
    }
}
