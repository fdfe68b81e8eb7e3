use std::sync::Arc;

use headsup_core::sync::{EventBody, GameState};
use headsup_core::{Action, DeckMode, Seat};
use headsup_server::client::{HeadlessClient, Policy, RandomPolicy};
use headsup_server::local::{play_local_match, run_until_idle, LocalClient};
use headsup_server::protocol::{RejectCode, ServiceError};
use headsup_server::{ClientFrame, Lobby, MatchSettings, Phase, ServerFrame};

fn settings(mode: DeckMode) -> MatchSettings {
    MatchSettings {
        starting_stack: 10_000,
        small_blind: 5,
        big_blind: 10,
        deck_mode: mode,
        rng_seed: Some(3),
    }
}

#[test]
fn hundred_hands_digital() {
    let r = play_local_match(settings(DeckMode::Digital), 100, 1);
    assert!(r.consistent, "{:?}", r.problems);
    assert_eq!(r.hands, 100, "{:?}", (r.frames, r.final_stacks));
    assert_eq!(r.ledger.len(), 100);
    assert_eq!(r.final_stacks.iter().sum::<u64>(), 20_000);
}

#[test]
fn hundred_hands_physical() {
    let r = play_local_match(settings(DeckMode::Physical), 100, 2);
    assert!(r.consistent, "{:?}", r.problems);
    assert_eq!(r.hands, 100, "{:?}", (r.frames, r.final_stacks));
}

/// Does nothing; lets a test drive one seat by hand.
struct Idle;

impl Policy for Idle {
    fn decide(
        &mut self,
        _: &GameState,
        _: Seat,
        _: &headsup_server::Controls,
    ) -> Option<headsup_server::client::Decision> {
        None
    }
}

fn pair(lobby: &Arc<Lobby>, mode: DeckMode) -> (LocalClient<Idle>, LocalClient<Idle>, String) {
    let mut a = LocalClient::new(lobby, HeadlessClient::new("a", Idle)).record();
    let mut b = LocalClient::new(lobby, HeadlessClient::new("b", Idle)).record();
    a.send(ClientFrame::Create {
        config: settings(mode),
        name: "a".into(),
    });
    a.pump();
    let code = a.client.code.clone().unwrap();
    assert_eq!(lobby.phase(&code), Some(Phase::WaitingForPlayers));
    b.send(ClientFrame::Join {
        code: code.clone(),
        name: "b".into(),
        token: None,
    });
    run_until_idle(&mut a, &mut b);
    assert_eq!(lobby.phase(&code), Some(Phase::BetweenHands));
    (a, b, code)
}

fn holes_seen(frame: &ServerFrame, seat: Seat) -> Option<bool> {
    let other = seat.other().index();
    match frame {
        ServerFrame::Event { event, .. } => match &event.body {
            EventBody::HandStarted { hand } => Some(hand.deck.as_ref()?.hole[other].is_some()),
            _ => None,
        },
        ServerFrame::Snapshot { snapshot, .. } => {
            let hand = snapshot.state.hand.as_ref()?;
            (!hand.cards_revealed())
                .then(|| hand.deck.as_ref().is_some_and(|d| d.hole[other].is_some()))
        }
        _ => None,
    }
}

#[test]
fn lobby_errors() {
    let lobby = Lobby::with_seed(4, 9);
    let (_a, _b, code) = pair(&lobby, DeckMode::Digital);
    let mut c = LocalClient::new(&lobby, HeadlessClient::new("c", Idle)).record();
    c.send(ClientFrame::Join {
        code: code.clone(),
        name: "c".into(),
        token: None,
    });
    c.send(ClientFrame::Join {
        code: "NOPE00".into(),
        name: "c".into(),
        token: None,
    });
    c.send(ClientFrame::StartHand {
        request_id: None,
        seq: None,
    });
    c.conn.handle_text("{\"type\":\"dance\"}");
    c.pump();
    let codes: Vec<_> = c
        .received
        .unwrap()
        .iter()
        .filter_map(|f| match f {
            ServerFrame::Error { code, .. } => Some(*code),
            _ => None,
        })
        .collect();
    assert_eq!(
        codes,
        [
            ServiceError::SessionFull,
            ServiceError::UnknownCode,
            ServiceError::NotJoined,
            ServiceError::BadFrame
        ]
    );
}

#[test]
fn rejects_go_to_the_sender_only_and_retries_are_idempotent() {
    let lobby = Lobby::with_seed(4, 5);
    let (mut a, mut b, _) = pair(&lobby, DeckMode::Digital);
    a.send(ClientFrame::StartHand {
        request_id: Some("s".into()),
        seq: None,
    });
    run_until_idle(&mut a, &mut b);
    a.received.as_mut().unwrap().clear();
    b.received.as_mut().unwrap().clear();

    // Seat 1 is the big blind; seat 0 acts first.
    b.send(ClientFrame::action(Action::Call, "early", None));
    run_until_idle(&mut a, &mut b);
    assert!(a.received.as_ref().unwrap().is_empty());
    assert!(matches!(
        b.received.as_ref().unwrap()[..],
        [ServerFrame::Reject {
            reason: RejectCode::Game(headsup_core::sync::RejectReason::OutOfTurn),
            ..
        }]
    ));

    let seq = a.client.replica().unwrap().seq();
    a.send(ClientFrame::action(Action::Call, "c1", Some(seq)));
    a.send(ClientFrame::action(Action::Call, "c1", Some(seq)));
    run_until_idle(&mut a, &mut b);
    let host_seq = lobby
        .session(a.client.code.as_ref().unwrap())
        .unwrap()
        .lock()
        .host()
        .seq();
    assert_eq!(host_seq, seq + 1, "the double click produced one event");
    assert_eq!(b.client.replica().unwrap().seq(), host_seq);
}

#[test]
fn no_frame_leaks_the_opponents_cards_and_reconnect_restores_own() {
    let lobby = Lobby::with_seed(4, 6);
    let (mut a, mut b, code) = pair(&lobby, DeckMode::Digital);
    a.send(ClientFrame::StartHand {
        request_id: None,
        seq: None,
    });
    run_until_idle(&mut a, &mut b);
    let own = a
        .client
        .replica()
        .unwrap()
        .state()
        .hand
        .as_ref()
        .unwrap()
        .hole_cards(Seat::ZERO);
    assert!(own.is_some());

    // Seat 0 drops mid-hand and comes back with its token.
    let token = a.client.token.clone().unwrap();
    let frames_a = a.received.take().unwrap();
    drop(a);
    run_until_idle(
        &mut b,
        &mut LocalClient::new(&lobby, HeadlessClient::new("x", Idle)),
    );
    assert_eq!(lobby.phase(&code), Some(Phase::InHand));
    let mut back = LocalClient::new(&lobby, HeadlessClient::new("a", Idle)).record();
    back.send(ClientFrame::Join {
        code: code.clone(),
        name: "a".into(),
        token: Some(token),
    });
    back.pump();
    assert_eq!(back.client.seat, Some(Seat::ZERO));
    let snap = back
        .received
        .as_ref()
        .unwrap()
        .iter()
        .find_map(|f| match f {
            ServerFrame::Snapshot { snapshot, .. } => Some(snapshot.clone()),
            _ => None,
        })
        .unwrap();
    let hand = snap.state.hand.as_ref().unwrap();
    assert_eq!(hand.hole_cards(Seat::ZERO), own);
    assert_eq!(hand.hole_cards(Seat::ONE), None);

    // Play the hand out and check every frame either seat ever saw.
    let mut a = back;
    let mut rounds = 0;
    while lobby.phase(&code) == Some(Phase::InHand) && rounds < 50 {
        for c in [&mut a] {
            if let Some(spec) = c.client.controls().legal_actions.first().copied() {
                let seq = c.client.replica().unwrap().seq();
                let action = if spec.kind == headsup_core::ActionKind::Fold {
                    Action::Call
                } else {
                    Action::from_parts(spec.kind, (spec.max_amount > 0).then_some(spec.min_amount))
                        .unwrap()
                };
                c.send(ClientFrame::action(action, format!("a{rounds}"), Some(seq)));
            }
        }
        if let Some(spec) = b
            .client
            .controls()
            .legal_actions
            .iter()
            .find(|s| s.kind != headsup_core::ActionKind::Fold)
            .copied()
        {
            let seq = b.client.replica().unwrap().seq();
            let action =
                Action::from_parts(spec.kind, (spec.max_amount > 0).then_some(spec.min_amount))
                    .unwrap();
            b.send(ClientFrame::action(action, format!("b{rounds}"), Some(seq)));
        }
        run_until_idle(&mut a, &mut b);
        rounds += 1;
    }
    assert_eq!(lobby.phase(&code), Some(Phase::BetweenHands));
    for (frames, seat) in [
        (
            frames_a
                .iter()
                .chain(a.received.as_ref().unwrap())
                .collect::<Vec<_>>(),
            Seat::ZERO,
        ),
        (b.received.as_ref().unwrap().iter().collect(), Seat::ONE),
    ] {
        assert!(
            frames.iter().all(|f| holes_seen(f, seat) != Some(true)),
            "{seat} saw the other hand"
        );
    }
    // The showdown itself reveals both hands to both seats.
    let shown = b.client.replica().unwrap().state().hand.as_ref().unwrap();
    if shown.settlement.unwrap().reason == headsup_core::engine::SettleReason::Showdown {
        assert!(shown.hole_cards(Seat::ZERO).is_some());
    }
}

#[test]
fn physical_declarations_must_match() {
    let lobby = Lobby::with_seed(4, 8);
    let (mut a, mut b, code) = pair(&lobby, DeckMode::Physical);
    a.send(ClientFrame::StartHand {
        request_id: None,
        seq: None,
    });
    run_until_idle(&mut a, &mut b);
    // Check the hand down.
    for i in 0..8 {
        for c in [&mut a] {
            if let Some(s) = c
                .client
                .controls()
                .legal_actions
                .iter()
                .find(|s| {
                    matches!(
                        s.kind,
                        headsup_core::ActionKind::Check | headsup_core::ActionKind::Call
                    )
                })
                .copied()
            {
                c.send(ClientFrame::action(
                    Action::from_parts(s.kind, None).unwrap(),
                    format!("a{i}"),
                    None,
                ));
            }
        }
        if let Some(s) = b
            .client
            .controls()
            .legal_actions
            .iter()
            .find(|s| {
                matches!(
                    s.kind,
                    headsup_core::ActionKind::Check | headsup_core::ActionKind::Call
                )
            })
            .copied()
        {
            b.send(ClientFrame::action(
                Action::from_parts(s.kind, None).unwrap(),
                format!("b{i}"),
                None,
            ));
        }
        run_until_idle(&mut a, &mut b);
    }
    assert!(a.client.controls().can_declare && b.client.controls().can_declare);
    use headsup_core::engine::Winner;
    a.send(ClientFrame::declare(Winner::Seat(Seat::ZERO), "d1", None));
    b.send(ClientFrame::declare(Winner::Seat(Seat::ONE), "d1", None));
    run_until_idle(&mut a, &mut b);
    assert_eq!(
        lobby.phase(&code),
        Some(Phase::InHand),
        "disagreement settles nothing"
    );
    assert!(a.client.controls().can_declare);
    a.send(ClientFrame::declare(Winner::Chop, "d2", None));
    b.send(ClientFrame::declare(Winner::Chop, "d2", None));
    run_until_idle(&mut a, &mut b);
    assert_eq!(lobby.phase(&code), Some(Phase::BetweenHands));
    assert_eq!(a.client.ledger.len(), 1);
    assert_eq!(a.client.ledger[0].settlement.net, [0, 0]);
}

#[test]
fn ended_session_rejects_requests() {
    let lobby = Lobby::with_seed(4, 10);
    let mut a = LocalClient::new(&lobby, HeadlessClient::new("a", RandomPolicy::new(1)));
    let mut b = LocalClient::new(&lobby, HeadlessClient::new("b", RandomPolicy::new(2)));
    a.send(ClientFrame::Create {
        config: MatchSettings {
            starting_stack: 4,
            small_blind: 1,
            big_blind: 2,
            ..Default::default()
        },
        name: "a".into(),
    });
    a.pump();
    let code = a.client.code.clone().unwrap();
    b.send(ClientFrame::Join {
        code: code.clone(),
        name: "b".into(),
        token: None,
    });
    run_until_idle(&mut a, &mut b);
    assert_eq!(lobby.phase(&code), Some(Phase::Ended));
    let mut probe = LocalClient::new(&lobby, HeadlessClient::new("a", Idle)).record();
    probe.send(ClientFrame::Join {
        code,
        name: "a".into(),
        token: a.client.token.clone(),
    });
    probe.send(ClientFrame::StartHand {
        request_id: None,
        seq: None,
    });
    probe.pump();
    assert!(probe.received.unwrap().iter().any(|f| matches!(
        f,
        ServerFrame::Reject {
            reason: RejectCode::SessionEnded,
            ..
        }
    )));
}
