//! End-to-end acceptance checks. Prints one PASS or FAIL line per criterion
//! and exits nonzero if any fails. Expected values come from independent
//! oracles in this file, not from the code under test.

use std::io::Cursor;
use std::process::Command;
use std::time::{Duration, Instant};

use headsup_cli::hotseat::{play_local, HotSeatSummary};
use headsup_core::canon::state_hash;
use headsup_core::cards::{full_deck, parse_cards};
use headsup_core::engine::{SettleReason, Terminal, Winner};
use headsup_core::eval::{evaluate, evaluate7, Category};
use headsup_core::sim::{
    converge_test, explore_dfa, ChannelModel, ConvergeConfig, Fault, FaultKind, StackConfig,
};
use headsup_core::{
    Action, ActionKind, ActionSpec, Card, Chips, DeckMode, HandState, MatchConfig, MatchState,
    Seat, Street,
};
use headsup_server::local::play_local_match;
use headsup_server::MatchSettings;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn headsup(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_headsup"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

// ---------------------------------------------------------------- DFA

#[derive(Default, PartialEq, Debug)]
struct Walk {
    states: u64,
    end_hand: u64,
    advance: u64,
    empty_menus: u64,
    dangling: u64,
}

/// Independent walk with the {min, all-in} amount abstraction.
fn walk(hand: &HandState, w: &mut Walk) {
    w.states += 1;
    match hand.terminal {
        Some(Terminal::EndHand(_)) => return w.end_hand += 1,
        Some(Terminal::Advance) => return w.advance += 1,
        None => {}
    }
    let Some(seat) = hand.to_act else {
        return w.dangling += 1;
    };
    let menu = hand.legal_actions().unwrap_or_default();
    if menu.is_empty() {
        return w.empty_menus += 1;
    }
    for spec in menu {
        let amounts: Vec<Option<Chips>> = match spec.kind {
            ActionKind::Bet | ActionKind::Raise if spec.min_amount == spec.max_amount => {
                vec![Some(spec.min_amount)]
            }
            ActionKind::Bet | ActionKind::Raise => {
                vec![Some(spec.min_amount), Some(spec.max_amount)]
            }
            _ => vec![None],
        };
        for amount in amounts {
            let action = Action::from_parts(spec.kind, amount).unwrap();
            match hand.apply_action(seat, action) {
                Ok(next) => walk(&next, w),
                Err(_) => w.dangling += 1,
            }
        }
    }
}

fn dfa_totality() -> Check {
    let start = Instant::now();
    let mut states = 0;
    for street in [Street::Preflop, Street::Flop, Street::Turn, Street::River] {
        for bbs in [1, 3, 100] {
            let sc = StackConfig::in_big_blinds(bbs, 1, 2);
            let report = explore_dfa(street, &sc);
            ensure(report.violations.is_empty(), || {
                format!(
                    "{street} {bbs}bb: {:?}",
                    &report.violations[..report.violations.len().min(3)]
                )
            })?;
            let config = MatchConfig {
                starting_stack: sc.stack,
                small_blind: 1,
                big_blind: 2,
                deck_mode: DeckMode::Physical,
                rng_seed: 0,
            };
            let root = match street {
                Street::Preflop => MatchState::new(config).unwrap().start_hand().unwrap(),
                _ => HandState::street_root(&config, street, [sc.stack; 2], 0, Seat::ZERO),
            };
            let mut w = Walk::default();
            walk(&root, &mut w);
            ensure(w.empty_menus == 0 && w.dangling == 0, || {
                format!("{street} {bbs}bb: {w:?}")
            })?;
            ensure(
                w.states == report.states_visited
                    && w.end_hand == report.terminals.end_hand
                    && w.advance == report.terminals.advance,
                || format!("{street} {bbs}bb: explorer {report:?} vs walk {w:?}"),
            )?;
            ensure(street != Street::River || w.advance == 0, || {
                "river advanced".into()
            })?;
            states += w.states;
        }
    }
    let (code, out) = headsup(&["explore", "--street", "flop"]);
    let json: Value = serde_json::from_str(&out).map_err(|e| format!("explore output: {e}"))?;
    ensure(code == 0 && json["violations"] == 0, || {
        format!("explore exit {code}")
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{states} states, every path ends in EndHand or Advance, {elapsed:.2?}"
    ))
}

// ---------------------------------------------------------------- fuzz

fn chip_conservation() -> Check {
    let start = Instant::now();
    let (code, out) = headsup(&["fuzz", "--hands", "10000", "--seed", "1"]);
    let elapsed = start.elapsed();
    let json: Value = serde_json::from_str(&out).map_err(|e| format!("fuzz output: {e}"))?;
    let violations = json["violations"].as_array().map_or(usize::MAX, Vec::len);
    ensure(code == 0 && violations == 0, || {
        format!("exit {code}, violations {}", json["violations"])
    })?;
    ensure(json["hands"] == 10000, || {
        format!("hands {}", json["hands"])
    })?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("10000 hands, 0 violations, {elapsed:.2?}"))
}

/// Plays random hands with its own policy and replays each hand's log from
/// the post-blind state.
fn replay_determinism() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hands = 0;
    let mut m = fresh_match(&mut rng);
    while hands < 1000 {
        if m.is_over() {
            m = fresh_match(&mut rng);
        }
        let start = m.start_hand().map_err(|e| e.to_string())?;
        let total = start.total_chips();
        let mut hand = start.clone();
        loop {
            ensure(hand.total_chips() == total, || {
                format!("hand {hands}: chips changed")
            })?;
            match hand.terminal {
                None => {
                    let seat = hand.to_act.unwrap();
                    let menu: Vec<ActionSpec> = hand.legal_actions().unwrap();
                    let spec = menu.choose(&mut rng).unwrap();
                    let amount = matches!(spec.kind, ActionKind::Bet | ActionKind::Raise)
                        .then(|| rng.random_range(spec.min_amount..=spec.max_amount));
                    hand = hand
                        .apply_action(seat, Action::from_parts(spec.kind, amount).unwrap())
                        .map_err(|e| e.to_string())?;
                }
                Some(Terminal::Advance) => {
                    hand = hand.advance_street().map_err(|e| e.to_string())?
                }
                Some(Terminal::EndHand(_)) => {
                    let outcome = hand.resolve_outcome().ok_or("no outcome")?;
                    let (settled, s) = hand.settle(&outcome).map_err(|e| e.to_string())?;
                    ensure(s.net[0] + s.net[1] == 0, || {
                        "net does not sum to zero".into()
                    })?;
                    let replayed = start.replay(&settled.log).map_err(|e| e.to_string())?;
                    let again = start.replay(&settled.log).map_err(|e| e.to_string())?;
                    ensure(replayed == settled && again == settled, || {
                        format!("hand {hands}: replay differs")
                    })?;
                    ensure(state_hash(&replayed) == state_hash(&settled), || {
                        format!("hand {hands}: hash differs")
                    })?;
                    m = m.record(&settled).map_err(|e| e.to_string())?;
                    hands += 1;
                    break;
                }
            }
        }
    }
    let (_, first) = headsup(&["fuzz", "--hands", "1000", "--seed", "9"]);
    let (_, second) = headsup(&["fuzz", "--hands", "1000", "--seed", "9"]);
    ensure(!first.is_empty() && first == second, || {
        "fuzz output differs between runs".into()
    })?;
    Ok("1000 hands replay to identical states and hashes; fuzz output is repeatable".into())
}

fn fresh_match(rng: &mut ChaCha8Rng) -> MatchState {
    MatchState::new(MatchConfig {
        starting_stack: 200,
        small_blind: 1,
        big_blind: 2,
        deck_mode: DeckMode::Digital,
        rng_seed: rng.random(),
    })
    .unwrap()
}

// ---------------------------------------------------------------- evaluator

fn category_index(c: Category) -> u8 {
    Category::ALL.iter().position(|&x| x == c).unwrap() as u8
}

fn evaluator_oracle() -> Check {
    let deck = full_deck();
    let mut counts_fast = [0u64; 9];
    let mut counts_oracle = [0u64; 9];
    for a in 0..52 {
        for b in a + 1..52 {
            for c in b + 1..52 {
                for d in c + 1..52 {
                    for e in d + 1..52 {
                        let hand = [deck[a], deck[b], deck[c], deck[d], deck[e]];
                        counts_fast[category_index(evaluate(&hand).unwrap().category) as usize] +=
                            1;
                        counts_oracle[oracle::naive5(&hand).0 as usize] += 1;
                    }
                }
            }
        }
    }
    let total: u64 = counts_oracle.iter().sum();
    ensure(total == 2_598_960, || format!("enumerated {total}"))?;
    ensure(counts_fast == counts_oracle, || {
        format!("counts {counts_fast:?} vs oracle {counts_oracle:?}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cards = full_deck();
    let mut prev: Option<(Vec<Card>, oracle::Score)> = None;
    for i in 0..100_000 {
        cards.shuffle(&mut rng);
        let seven = &cards[..7];
        let fast = evaluate7(seven).unwrap();
        let slow = oracle::naive7(seven);
        ensure(category_index(fast.category) == slow.0, || {
            format!("draw {i}: {seven:?} {fast} vs {slow:?}")
        })?;
        if let Some((p, pslow)) = &prev {
            let pfast = evaluate7(p).unwrap();
            ensure(fast.cmp(&pfast) == slow.cmp(pslow), || {
                format!("draw {i}: ordering differs")
            })?;
        }
        prev = Some((seven.to_vec(), slow));
    }
    Ok(format!(
        "2598960 five-card hands {counts_oracle:?}; 100000 seven-card draws agree"
    ))
}

// ---------------------------------------------------------------- convergence

fn convergence() -> Check {
    let channel = ChannelModel {
        max_delay: 3,
        duplicate_p: 0.3,
        reorder_window: 4,
        seed: 5,
    };
    let r = converge_test(&ConvergeConfig::new(1000, 5, channel));
    ensure(r.hands >= 1000, || format!("only {} hands", r.hands))?;
    ensure(r.duplicate_events > 0, || "channel never duplicated".into())?;
    for (i, s) in r.sessions.iter().enumerate() {
        ensure(s.host_hashes == s.replica_hashes, || {
            format!("session {i} hashes differ")
        })?;
    }
    ensure(r.converged && r.hash_mismatches == 0, || {
        format!("{:?}", r.errors)
    })?;

    let mut gap = ConvergeConfig::new(50, 6, ChannelModel::perfect(6));
    gap.faults = (0..3)
        .map(|session| Fault {
            session,
            seq: 4,
            seat: Seat::ONE,
            kind: FaultKind::Drop,
        })
        .collect();
    let g = converge_test(&gap);
    ensure(g.gaps_detected > 0 || g.snapshot_requests > 0, || {
        "gap went unnoticed".into()
    })?;
    ensure(g.recoveries >= 3, || format!("{} recoveries", g.recoveries))?;
    for (i, s) in g.sessions.iter().enumerate() {
        ensure(s.host_hashes == s.replica_hashes, || {
            format!("gap session {i} hashes differ")
        })?;
    }
    ensure(g.converged, || format!("{:?}", g.errors))?;

    let (code, out) = headsup(&["simulate", "--dup", "0.3", "--hands", "200"]);
    let json: Value = serde_json::from_str(&out).map_err(|e| format!("simulate output: {e}"))?;
    ensure(code == 0 && json["converged"] == true, || {
        format!("simulate exit {code}")
    })?;
    Ok(format!(
        "{} hands, {} duplicates, {} sessions equal; forced gaps: {} recoveries",
        r.hands,
        r.duplicate_events,
        r.sessions.len(),
        g.recoveries
    ))
}

// ---------------------------------------------------------------- end to end

fn script(config: MatchConfig, lines: &[&str]) -> (HotSeatSummary, String) {
    let input = lines.iter().map(|l| format!("{l}\n")).collect::<String>();
    let mut out = Vec::new();
    let summary = play_local(config, Some(1), Cursor::new(input), &mut out).expect("hot seat runs");
    (summary, String::from_utf8(out).unwrap())
}

fn digital(seed: u64) -> MatchConfig {
    MatchConfig {
        starting_stack: 200,
        small_blind: 1,
        big_blind: 2,
        deck_mode: DeckMode::Digital,
        rng_seed: seed,
    }
}

/// Text after `marker` on the first output line containing it. Prompts do
/// not end in a newline, so markers can sit mid-line.
fn after<'a>(out: &'a str, marker: &str) -> Option<&'a str> {
    out.lines()
        .find_map(|l| l.find(marker).map(|i| &l[i + marker.len()..]))
}

/// Board and both hole pairs as printed at showdown.
fn shown_cards(out: &str) -> Option<(Vec<Card>, [Vec<Card>; 2])> {
    let board = after(out, "-- river: ")?.trim_end_matches(" --");
    let hole = |seat: &str| parse_cards(after(out, &format!("{seat} shows "))?.get(..5)?).ok();
    Some((parse_cards(board).ok()?, [hole("seat 0")?, hole("seat 1")?]))
}

fn oracle_winner(board: &[Card], holes: &[Vec<Card>; 2]) -> Winner {
    let score = |h: &Vec<Card>| oracle::naive7(&[board, h.as_slice()].concat());
    match score(&holes[0]).cmp(&score(&holes[1])) {
        std::cmp::Ordering::Greater => Winner::Seat(Seat::ZERO),
        std::cmp::Ordering::Less => Winner::Seat(Seat::ONE),
        std::cmp::Ordering::Equal => Winner::Chop,
    }
}

const CHECK_DOWN: &[&str] = &[
    "call", "check", "check", "check", "check", "check", "check", "check",
];

fn hot_seat_paths() -> Result<Vec<&'static str>, String> {
    let mut seen = Vec::new();

    let (s, out) = script(digital(1), &["banana", "raise 1", "fold"]);
    let h = s.hands.first().ok_or("fold hand missing")?;
    ensure(h.settlement.reason == SettleReason::Fold, || {
        "no fold win".into()
    })?;
    ensure(out.contains("unrecognized input"), || {
        "malformed text not reported".into()
    })?;
    ensure(out.contains("[4, 200]"), || {
        "illegal amount did not show the range".into()
    })?;
    seen.push("fold-win");

    let (mut showdown, mut chop) = (false, false);
    for seed in 0..5000 {
        let (s, out) = script(digital(seed), CHECK_DOWN);
        let h = s.hands.first().ok_or("check-down hand missing")?;
        ensure(h.settlement.reason == SettleReason::Showdown, || {
            format!("seed {seed}: no showdown")
        })?;
        let (board, holes) =
            shown_cards(&out).ok_or_else(|| format!("seed {seed}: cards not shown"))?;
        let want = oracle_winner(&board, &holes);
        ensure(h.settlement.winner == want, || {
            format!(
                "seed {seed}: {} but oracle says {want}",
                h.settlement.winner
            )
        })?;
        match want {
            Winner::Chop => chop = true,
            Winner::Seat(_) => showdown = true,
        }
        if showdown && chop {
            break;
        }
    }
    ensure(showdown, || "no showdown win found".into())?;
    ensure(chop, || "no chopped board found in 5000 deals".into())?;
    seen.extend(["showdown-win", "chop"]);

    let (s, out) = script(digital(2), &["raise max", "call"]);
    let h = s.hands.first().ok_or("all-in hand missing")?;
    ensure(h.runout && out.contains("running out the board"), || {
        "no run-out".into()
    })?;
    let (board, holes) = shown_cards(&out).ok_or("run-out cards not shown")?;
    ensure(h.settlement.winner == oracle_winner(&board, &holes), || {
        "run-out winner".into()
    })?;
    seen.push("all-in run-out");

    let physical = MatchConfig {
        deck_mode: DeckMode::Physical,
        ..digital(0)
    };
    let mut lines = CHECK_DOWN.to_vec();
    lines.extend(["0", "1", "chop", "chop"]);
    let (s, out) = script(physical, &lines);
    let h = s.hands.first().ok_or("physical hand missing")?;
    ensure(out.contains("declarations disagree"), || {
        "mismatch not reported".into()
    })?;
    ensure(
        h.settlement.winner == Winner::Chop && h.settlement.net == [0, 0],
        || format!("{:?}", h.settlement),
    )?;
    seen.push("declared chop");
    Ok(seen)
}

fn end_to_end() -> Check {
    let settings = MatchSettings {
        starting_stack: 10_000,
        small_blind: 5,
        big_blind: 10,
        deck_mode: DeckMode::Digital,
        rng_seed: Some(3),
    };
    let r = play_local_match(settings, 100, 3);
    ensure(r.hands == 100, || format!("{} hands", r.hands))?;
    ensure(r.consistent, || format!("{:?}", r.problems))?;
    let mut stacks = [10_000i64; 2];
    let mut numbers = Vec::new();
    for e in &r.ledger {
        ensure(e.settlement.net[0] + e.settlement.net[1] == 0, || {
            "ledger net".into()
        })?;
        stacks[0] += e.settlement.net[0];
        stacks[1] += e.settlement.net[1];
        numbers.push(e.hand_number);
    }
    ensure(numbers == (1..=100).collect::<Vec<_>>(), || {
        "ledger hand numbers".into()
    })?;
    ensure(stacks == r.final_stacks.map(|c| c as i64), || {
        format!("ledger {stacks:?} vs stacks {:?}", r.final_stacks)
    })?;
    let paths = hot_seat_paths()?;
    Ok(format!(
        "100 hands, ledger matches stacks {stacks:?}; hot seat: {}",
        paths.join(", ")
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 6] = [
        ("dfa-totality", dfa_totality),
        ("chip-conservation", chip_conservation),
        ("replay-determinism", replay_determinism),
        ("evaluator-oracle", evaluator_oracle),
        ("convergence", convergence),
        ("end-to-end", end_to_end),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{:.2?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
