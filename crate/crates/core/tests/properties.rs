use headsup_core::canon::state_hash;
use headsup_core::cards::full_deck;
use headsup_core::engine::{Outcome, Terminal, Winner};
use headsup_core::eval::{evaluate, showdown, ShowdownResult};
use headsup_core::sim::policy::random_action;
use headsup_core::sync::{ClientRequest, Host, Replica, RequestBody};
use headsup_core::{Card, Chips, DeckMode, HandState, MatchConfig, MatchState, Seat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn distinct_cards(n: usize) -> impl Strategy<Value = Vec<Card>> {
    proptest::sample::subsequence((0..52).collect::<Vec<usize>>(), n)
        .prop_shuffle()
        .prop_map(|idx| idx.into_iter().map(Card::from_index).collect())
}

fn config_strategy() -> impl Strategy<Value = MatchConfig> {
    (1u64..5, 1u64..4, 1u64..300, any::<bool>(), any::<u64>()).prop_map(
        |(sb, bb_mult, stack_bbs, digital, seed)| {
            let bb = sb * bb_mult;
            MatchConfig {
                starting_stack: bb * stack_bbs,
                small_blind: sb,
                big_blind: bb,
                deck_mode: if digital {
                    DeckMode::Digital
                } else {
                    DeckMode::Physical
                },
                rng_seed: seed,
            }
        },
    )
}

/// Plays random legal actions to the end of the hand, checking every step.
fn play_out(start: &HandState, seed: u64) -> Result<HandState, TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = start.total_chips();
    let mut hand = start.clone();
    loop {
        prop_assert_eq!(hand.total_chips(), total);
        match hand.terminal {
            None => {
                let seat = hand.to_act.expect("live round has an actor");
                let menu = hand.legal_actions().unwrap();
                prop_assert!(!menu.is_empty());
                let action = random_action(&menu, &mut rng);
                let before = state_hash(&hand);
                let next = hand.apply_action(seat, action).unwrap();
                prop_assert_eq!(state_hash(&hand), before);
                prop_assert_eq!(&hand.apply_action(seat, action).unwrap(), &next);
                hand = next;
            }
            Some(Terminal::Advance) => hand = hand.advance_street().unwrap(),
            Some(Terminal::EndHand(_)) => {
                let outcome = hand.resolve_outcome().unwrap_or(Outcome::Declared {
                    winner: Winner::Seat(Seat::ONE),
                });
                let (settled, s) = hand.settle(&outcome).unwrap();
                prop_assert_eq!(s.net.iter().sum::<i64>(), 0);
                prop_assert_eq!(settled.stacks.iter().sum::<Chips>(), total);
                return Ok(settled);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn evaluation_ignores_card_order(cards in distinct_cards(7), rot in 0usize..7) {
        let mut turned = cards.clone();
        turned.rotate_left(rot);
        turned.reverse();
        prop_assert_eq!(evaluate(&cards).unwrap(), evaluate(&turned).unwrap());
    }

    #[test]
    fn showdown_is_antisymmetric(cards in distinct_cards(9)) {
        let board: [Card; 5] = cards[..5].try_into().unwrap();
        let a = [cards[5], cards[6]];
        let b = [cards[7], cards[8]];
        let ab = showdown(&board, &a, &b).unwrap();
        let ba = showdown(&board, &b, &a).unwrap();
        let flipped = match ab {
            ShowdownResult::A => ShowdownResult::B,
            ShowdownResult::B => ShowdownResult::A,
            ShowdownResult::Tie => ShowdownResult::Tie,
        };
        prop_assert_eq!(ba, flipped);
    }

    #[test]
    fn ranking_is_transitive(cards in distinct_cards(11)) {
        let hand = |i: usize| {
            let seven: Vec<Card> = cards[..5].iter().chain(&cards[5 + 2 * i..7 + 2 * i]).copied().collect();
            evaluate(&seven).unwrap()
        };
        let (x, y, z) = (hand(0), hand(1), hand(2));
        if x >= y && y >= z {
            prop_assert!(x >= z);
        }
        if x == y {
            prop_assert_eq!(x.cmp(&z), y.cmp(&z));
        }
    }

    #[test]
    fn hands_conserve_chips_and_replay_exactly(cfg in config_strategy(), seed in any::<u64>()) {
        let start = MatchState::new(cfg).unwrap().start_hand().unwrap();
        let settled = play_out(&start, seed)?;
        let replayed = start.replay(&settled.log).unwrap();
        prop_assert_eq!(state_hash(&replayed), state_hash(&settled));
    }

    #[test]
    fn states_round_trip_through_json(cfg in config_strategy(), seed in any::<u64>()) {
        let start = MatchState::new(cfg).unwrap().start_hand().unwrap();
        let settled = play_out(&start, seed)?;
        for h in [&start, &settled] {
            let json = serde_json::to_string(h).unwrap();
            let back: HandState = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&back, h);
            prop_assert_eq!(state_hash(&back), state_hash(h));
        }
    }

    #[test]
    fn replicas_agree_under_any_delivery_order(seed in any::<u64>(), order_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut host = Host::new(MatchConfig {
            starting_stack: 40,
            small_blind: 1,
            big_blind: 2,
            deck_mode: DeckMode::Digital,
            rng_seed: seed,
        }).unwrap();
        let mut replica = Replica::from_snapshot(Seat::ONE, host.snapshot(Seat::ONE)).unwrap();
        host.seat_player(Seat::ZERO, "a");
        host.seat_player(Seat::ONE, "b");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for id in 0..60 {
            let st = host.state();
            let body = match st.hand.as_ref().filter(|_| st.hand_in_progress()) {
                Some(h) => RequestBody::Action { action: random_action(&h.legal_actions().unwrap(), &mut rng) },
                None if st.match_state.is_over() => break,
                None => RequestBody::StartHand,
            };
            let seat = st.hand.as_ref().filter(|_| st.hand_in_progress())
                .and_then(|h| h.to_act)
                .unwrap_or(st.match_state.next_dealer());
            host.host_apply(&ClientRequest { seat, request_id: id.to_string(), seq: None, body }).unwrap();
        }
        let mut events: Vec<_> = host.log().iter().map(|e| e.for_seat(Seat::ONE)).collect();
        events.shuffle(&mut ChaCha8Rng::seed_from_u64(order_seed));
        for e in events {
            let _ = replica.apply(e);
        }
        prop_assert!(!replica.needs_snapshot());
        prop_assert_eq!(replica.hash(), host.view_hash(Seat::ONE));
    }

    #[test]
    fn deck_is_a_permutation(seed in any::<u64>(), hands in 1u32..20) {
        let mut m = MatchState::new(MatchConfig {
            starting_stack: 1000,
            small_blind: 1,
            big_blind: 2,
            deck_mode: DeckMode::Digital,
            rng_seed: seed,
        }).unwrap();
        m.hands_played = hands;
        let h = m.start_hand().unwrap();
        let deck = h.deck.as_ref().unwrap();
        let mut all: Vec<usize> = deck.remaining.iter().map(|c| c.index()).collect();
        for hole in deck.hole.iter().flatten() {
            all.extend(hole.iter().map(|c| c.index()));
        }
        all.sort_unstable();
        prop_assert_eq!(all, full_deck().iter().map(|c| c.index()).collect::<Vec<_>>());
    }
}
