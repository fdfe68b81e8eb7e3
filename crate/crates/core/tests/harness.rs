use headsup_core::sim::{
    converge_test, explore_dfa, fuzz_matches, ChannelModel, ConvergeConfig, Fault, FaultKind,
    FuzzConfig, StackConfig,
};
use headsup_core::{DeckMode, Seat, Street};

#[test]
fn explorer_is_clean_on_every_street_and_depth() {
    for street in [Street::Preflop, Street::Flop, Street::Turn, Street::River] {
        for bbs in [1, 3, 100] {
            let r = explore_dfa(street, &StackConfig::in_big_blinds(bbs, 1, 2));
            assert!(
                r.violations.is_empty(),
                "{street} {bbs}bb: {:?}",
                r.violations
            );
            assert!(r.terminals.end_hand + r.terminals.advance > 0);
        }
    }
}

#[test]
fn ten_thousand_fuzzed_hands() {
    let r = fuzz_matches(&FuzzConfig::new(10_000, 1));
    assert!(
        r.passed(),
        "{:?}",
        &r.violations[..r.violations.len().min(5)]
    );
    assert_eq!(r.hands, 10_000);
    assert_eq!(r.replays_checked, 10_000);
    assert!(r.chops > 0 && r.runouts > 0);
}

#[test]
fn fuzz_reports_serialize_identically() {
    let a = serde_json::to_string(&fuzz_matches(&FuzzConfig::new(200, 5))).unwrap();
    let b = serde_json::to_string(&fuzz_matches(&FuzzConfig::new(200, 5))).unwrap();
    assert_eq!(a, b);
}

#[test]
fn duplicating_reordering_channel_converges_over_1000_hands() {
    let channel = ChannelModel {
        max_delay: 3,
        duplicate_p: 0.3,
        reorder_window: 4,
        seed: 99,
    };
    for mode in [DeckMode::Digital, DeckMode::Physical] {
        let mut cfg = ConvergeConfig::new(1000, 99, channel);
        cfg.deck_mode = mode;
        let r = converge_test(&cfg);
        assert!(r.converged, "{mode:?}: {:?}", r.errors);
        assert_eq!(r.hands, 1000);
        assert!(r.duplicate_events > 0);
        assert_eq!(r.hash_mismatches + r.apply_failures, 0);
    }
}

#[test]
fn forced_gaps_recover_through_snapshots() {
    let mut cfg = ConvergeConfig::new(100, 4, ChannelModel::faulty(4));
    cfg.faults = (0..10)
        .map(|session| Fault {
            session,
            seq: 4,
            seat: if session % 2 == 0 {
                Seat::ZERO
            } else {
                Seat::ONE
            },
            kind: if session % 3 == 0 {
                FaultKind::Corrupt
            } else {
                FaultKind::Drop
            },
        })
        .collect();
    let r = converge_test(&cfg);
    assert!(r.converged, "{:?}", r.errors);
    assert!(r.snapshot_requests >= 10);
    assert!(r.recoveries >= 10);
}
