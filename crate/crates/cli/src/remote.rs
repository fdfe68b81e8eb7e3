//! Terminal client for a session on a running server.

use std::time::Duration;

use anyhow::{bail, Context, Result};
use futures_util::{SinkExt, StreamExt};
use headsup_core::sync::GameState;
use headsup_core::Seat;
use headsup_server::client::{Decision, HeadlessClient, LedgerEntry, Policy, RandomPolicy};
use headsup_server::{ClientFrame, Controls, MatchSettings, ServerFrame};
use tokio::io::{AsyncBufReadExt, BufReader};
use tokio_tungstenite::connect_async;
use tokio_tungstenite::tungstenite::Message;
use tracing::debug;

use crate::menu::{self, Choice};

pub enum Entry {
    Create(MatchSettings),
    Join { code: String, token: Option<String> },
}

pub struct RemoteOptions {
    /// Websocket URL, e.g. `ws://127.0.0.1:8080/ws`.
    pub url: String,
    pub name: String,
    /// Play automatically with this seed instead of reading stdin.
    pub bot_seed: Option<u64>,
    /// Stop after this many hands.
    pub hands: Option<u32>,
    pub heartbeat: Duration,
}

pub struct RemoteSummary {
    pub code: Option<String>,
    pub seat: Option<Seat>,
    pub ledger: Vec<LedgerEntry>,
}

/// Either a bot or a person at the keyboard, who answers through stdin.
enum Player {
    Bot(Box<RandomPolicy>),
    Human,
}

impl Policy for Player {
    fn decide(&mut self, view: &GameState, seat: Seat, controls: &Controls) -> Option<Decision> {
        match self {
            Player::Bot(p) => p.decide(view, seat, controls),
            Player::Human => None,
        }
    }
}

fn encode(frame: &ClientFrame) -> Message {
    Message::text(serde_json::to_string(frame).expect("frames always serialize"))
}

/// What the person at the keyboard should see after a frame.
fn render(client: &HeadlessClient<Player>, frame: &ServerFrame, ledger_before: usize) {
    match frame {
        ServerFrame::Created { code, seat, token } => {
            println!("session {code} created; you are {seat}");
            println!("your opponent joins with: headsup join --code {code}");
            println!("reconnect token: {token}");
        }
        ServerFrame::Joined { code, seat, .. } => println!("joined {code} as {seat}"),
        ServerFrame::Reject { reason, detail, .. } => println!("rejected: {reason:?} {detail}"),
        ServerFrame::Error { code, detail } => println!("error: {code:?} {detail}"),
        ServerFrame::Closed { reason } => println!("session closed: {reason}"),
        ServerFrame::Event { event, .. } => {
            debug!(seq = event.seq, kind = event.body.kind(), "event")
        }
        _ => {}
    }
    for entry in &client.ledger[ledger_before..] {
        let s = &entry.settlement;
        println!(
            "hand {} settled: winner {} | net {:+} / {:+}",
            entry.hand_number, s.winner, s.net[0], s.net[1]
        );
    }
    if !matches!(
        frame,
        ServerFrame::Event { .. } | ServerFrame::Snapshot { .. }
    ) {
        return;
    }
    let (Some(replica), Some(seat)) = (client.replica(), client.seat) else {
        return;
    };
    let state = replica.state();
    let controls = client.controls();
    if let Some(hand) = state
        .hand
        .as_ref()
        .filter(|_| !controls.legal_actions.is_empty())
    {
        for line in menu::table_lines(hand) {
            println!("{line}");
        }
        if let Some(hole) = hand.hole_cards(seat) {
            println!("your cards: {}", menu::cards(&hole));
        }
        println!("your move:");
        for line in menu::menu_lines(&controls.legal_actions, hand.annotations.amount_to_call) {
            println!("{line}");
        }
    } else if controls.can_declare {
        println!("showdown: who won? (0, 1, chop)");
    } else if controls.can_start {
        println!("type s to deal the next hand (q quits)");
    }
}

/// Turns a typed line into a frame, or explains why it cannot.
fn from_keyboard(
    client: &HeadlessClient<Player>,
    line: &str,
    id: u64,
) -> Result<Option<ClientFrame>, String> {
    let seq = client.replica().map(|r| r.seq());
    let controls = client.controls();
    let request_id = format!("{}-kbd-{id}", client.name);
    if controls.can_start && matches!(line.trim(), "s" | "start" | "") {
        return Ok(Some(ClientFrame::StartHand {
            request_id: Some(request_id),
            seq,
        }));
    }
    if controls.can_declare {
        let w = menu::parse_winner(line)?;
        return Ok(Some(ClientFrame::declare(w, request_id, seq)));
    }
    if controls.legal_actions.is_empty() {
        return Err("nothing to do yet; waiting for the other seat".into());
    }
    match menu::parse_choice(&controls.legal_actions, line)? {
        Choice::Act(a) => Ok(Some(ClientFrame::action(a, request_id, seq))),
        Choice::NeedAmount(spec) => Err(format!(
            "give an amount too, e.g. `{} {}`; allowed [{}, {}]",
            spec.kind.to_string().to_lowercase(),
            spec.min_amount,
            spec.min_amount,
            spec.max_amount
        )),
        Choice::Quit => Ok(None),
    }
}

fn done(client: &HeadlessClient<Player>, hands: Option<u32>) -> bool {
    if client.closed {
        return true;
    }
    let Some(state) = client.replica().map(|r| r.state()) else {
        return false;
    };
    state.match_state.is_over() && !state.hand_in_progress() && !state.awaiting_declaration()
        || hands.is_some_and(|n| state.match_state.hands_played >= n && !state.hand_in_progress())
}

pub async fn run_remote(opts: RemoteOptions, entry: Entry) -> Result<RemoteSummary> {
    let (mut ws, _) = connect_async(opts.url.as_str())
        .await
        .with_context(|| format!("connecting to {}", opts.url))?;
    let human = opts.bot_seed.is_none();
    let player = opts.bot_seed.map_or(Player::Human, |s| {
        Player::Bot(Box::new(RandomPolicy::new(s)))
    });
    let mut client = HeadlessClient::new(opts.name.clone(), player);
    client.hand_limit = opts.hands;
    let first = match entry {
        Entry::Create(config) => ClientFrame::Create {
            config,
            name: opts.name.clone(),
        },
        Entry::Join { code, token } => ClientFrame::Join {
            code,
            name: opts.name.clone(),
            token,
        },
    };
    ws.send(encode(&first)).await?;

    let mut stdin = BufReader::new(tokio::io::stdin()).lines();
    let mut ping = tokio::time::interval(opts.heartbeat);
    let mut typed = 0u64;
    while !done(&client, opts.hands) {
        tokio::select! {
            msg = ws.next() => {
                let text = match msg {
                    Some(Ok(Message::Text(t))) => t,
                    Some(Ok(Message::Close(_))) | None => break,
                    Some(Ok(_)) => continue,
                    Some(Err(e)) => bail!("connection lost: {e}"),
                };
                let frame: ServerFrame = serde_json::from_str(&text).context("server sent a bad frame")?;
                let ledger_before = client.ledger.len();
                let replies = client.on_frame(frame.clone());
                if human {
                    render(&client, &frame, ledger_before);
                } else if let ServerFrame::Created { code, seat, .. } | ServerFrame::Joined { code, seat, .. } = &frame {
                    println!("session {code}: you are {seat}");
                }
                for reply in replies {
                    ws.send(encode(&reply)).await?;
                }
            }
            line = stdin.next_line(), if human => {
                let Some(line) = line? else { break };
                if matches!(line.trim(), "q" | "quit") {
                    break;
                }
                typed += 1;
                match from_keyboard(&client, &line, typed) {
                    Ok(Some(frame)) => ws.send(encode(&frame)).await?,
                    Ok(None) => break,
                    Err(msg) => println!("{msg}"),
                }
            }
            _ = ping.tick() => ws.send(encode(&ClientFrame::Ping { nonce: None })).await?,
        }
    }
    let _ = ws.close(None).await;
    for e in &client.errors {
        eprintln!("warning: {e}");
    }
    Ok(RemoteSummary {
        code: client.code.clone(),
        seat: client.seat,
        ledger: client.ledger.clone(),
    })
}
