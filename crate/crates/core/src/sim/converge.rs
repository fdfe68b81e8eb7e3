//! A host and two replicas talking over simulated links, with clients that
//! decide from their own replica. Checks that every replica ends on the
//! host's hash for its seat.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::channel::{ChannelModel, SimChannel};
use super::policy::passive_action;
use crate::engine::{Chips, DeckMode, MatchConfig, Seat, Winner};
use crate::sync::{
    ApplyOutcome, ClientRequest, Event, EventBody, Host, LoggedEvent, Replica, ReplicaError,
    RequestBody, Snapshot,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultKind {
    /// The event never reaches the seat.
    Drop,
    /// The event arrives with a different payload.
    Corrupt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    /// Session index, counting from 0.
    pub session: u64,
    pub seq: u64,
    pub seat: Seat,
    pub kind: FaultKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeConfig {
    pub hands: u64,
    pub seed: u64,
    pub channel: ChannelModel,
    pub deck_mode: DeckMode,
    pub starting_stack: Chips,
    pub small_blind: Chips,
    pub big_blind: Chips,
    pub faults: Vec<Fault>,
    /// Ticks a replica waits on a gap before asking for a snapshot.
    pub gap_timeout: u64,
    pub max_ticks: u64,
}

impl ConvergeConfig {
    pub fn new(hands: u64, seed: u64, channel: ChannelModel) -> ConvergeConfig {
        ConvergeConfig {
            hands,
            seed,
            channel,
            deck_mode: DeckMode::Digital,
            starting_stack: 200,
            small_blind: 1,
            big_blind: 2,
            faults: Vec::new(),
            gap_timeout: 2 * channel.max_delay + 4,
            max_ticks: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionReport {
    pub hands: u64,
    pub events: u64,
    pub host_hashes: [String; 2],
    pub replica_hashes: [String; 2],
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: ConvergeConfig,
    pub hands: u64,
    pub events: u64,
    pub ticks: u64,
    pub requests: u64,
    pub rejects: u64,
    pub duplicate_events: u64,
    pub gaps_detected: u64,
    pub hash_mismatches: u64,
    pub apply_failures: u64,
    pub snapshot_requests: u64,
    pub recoveries: u64,
    pub stale_snapshots: u64,
    pub sessions: Vec<SessionReport>,
    pub errors: Vec<String>,
    pub converged: bool,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
enum Downlink {
    Event(Event),
    Snapshot(Snapshot),
    Reject {
        seq: u64,
    },
    /// The host's latest sequence number, sent periodically.
    Heartbeat {
        seq: u64,
    },
}

#[derive(Debug, Clone)]
enum Uplink {
    Request(ClientRequest),
    SnapshotRequest,
}

struct Client {
    seat: Seat,
    replica: Replica,
    rng: ChaCha8Rng,
    next_id: u64,
    /// Replica seq at which the last request was sent.
    decided_at: Option<u64>,
    gap_since: Option<u64>,
    asked_at: Option<u64>,
    /// Highest host seq this client has heard of.
    host_seq: u64,
}

impl Client {
    fn behind(&self) -> bool {
        self.replica.needs_snapshot() || self.host_seq > self.replica.seq()
    }
}

impl Client {
    fn body(&mut self, may_start: bool) -> Option<RequestBody> {
        let st = self.replica.state();
        let seat = self.seat;
        if st.awaiting_declaration() {
            if st.declarations[seat.index()].is_some() {
                return None;
            }
            let hand_number = st.hand.as_ref()?.hand_number;
            let truth = match hand_number % 3 {
                0 => Winner::Chop,
                1 => Winner::Seat(Seat::ZERO),
                _ => Winner::Seat(Seat::ONE),
            };
            // Now and then a player misreads the cards.
            let winner = if self.rng.random_bool(0.2) {
                Winner::Seat(seat)
            } else {
                truth
            };
            return Some(RequestBody::DeclareWinner { winner });
        }
        if st.hand_in_progress() {
            let hand = st.hand.as_ref()?;
            if hand.to_act != Some(seat) {
                return None;
            }
            let menu = hand.legal_actions().ok()?;
            return Some(RequestBody::Action {
                action: passive_action(&menu, &mut self.rng),
            });
        }
        let ms = &st.match_state;
        (may_start && st.both_seated() && !ms.is_over() && ms.next_dealer() == seat)
            .then_some(RequestBody::StartHand)
    }
}

struct Sim<'a> {
    config: &'a ConvergeConfig,
    report: ConvergenceReport,
    now: u64,
}

fn link<T: Clone>(model: ChannelModel, rng: &mut ChaCha8Rng) -> SimChannel<T> {
    SimChannel::new(ChannelModel {
        seed: rng.random(),
        ..model
    })
}

fn corrupt(body: &EventBody, seat: Seat) -> EventBody {
    match body {
        EventBody::PlayerLeft { .. } => EventBody::PlayerJoined {
            seat,
            name: "?".into(),
        },
        _ => EventBody::PlayerLeft { seat: seat.other() },
    }
}

impl Sim<'_> {
    fn error(&mut self, e: String) {
        if self.report.errors.len() < 100 {
            self.report.errors.push(e);
        }
    }

    fn broadcast(
        &mut self,
        session: u64,
        events: &[LoggedEvent],
        down: &mut [SimChannel<Downlink>; 2],
    ) {
        for e in events {
            for seat in Seat::BOTH {
                let fault = self
                    .config
                    .faults
                    .iter()
                    .find(|f| f.session == session && f.seq == e.seq && f.seat == seat);
                let mut ev = e.for_seat(seat);
                match fault.map(|f| f.kind) {
                    Some(FaultKind::Drop) => continue,
                    Some(FaultKind::Corrupt) => ev.body = corrupt(&ev.body, seat),
                    None => {}
                }
                down[seat.index()].send(self.now, Downlink::Event(ev));
            }
        }
    }

    fn receive(&mut self, client: &mut Client, msg: Downlink) {
        match msg {
            Downlink::Event(e) => match client.replica.apply(e) {
                Ok(ApplyOutcome::Applied(_)) => {}
                Ok(ApplyOutcome::Duplicate) => self.report.duplicate_events += 1,
                Err(ReplicaError::GapDetected { .. }) => self.report.gaps_detected += 1,
                Err(ReplicaError::HashMismatch { .. }) => self.report.hash_mismatches += 1,
                Err(ReplicaError::Rejected { .. }) => self.report.apply_failures += 1,
                Err(ReplicaError::Diverged) => {}
                Err(e) => self.error(format!("{}: {e}", client.seat)),
            },
            Downlink::Snapshot(s) => match client.replica.recover(s) {
                Ok(_) => {
                    if client.asked_at.is_some() {
                        self.report.recoveries += 1;
                    }
                    client.asked_at = None;
                    client.gap_since = None;
                }
                Err(ReplicaError::StaleSnapshot { .. }) => self.report.stale_snapshots += 1,
                // A snapshot can only disagree with its own hash if the sim
                // is broken; anything after it in the buffer is re-checked.
                Err(ReplicaError::HashMismatch { .. }) => self.report.hash_mismatches += 1,
                Err(e) => self.error(format!("{} recover: {e}", client.seat)),
            },
            Downlink::Reject { seq } => {
                self.report.rejects += 1;
                client.decided_at = None;
                client.host_seq = client.host_seq.max(seq);
            }
            Downlink::Heartbeat { seq } => client.host_seq = client.host_seq.max(seq),
        }
    }

    fn decide(&mut self, client: &mut Client, may_start: bool, up: &mut SimChannel<Uplink>) {
        if client.behind() {
            let since = *client.gap_since.get_or_insert(self.now);
            let timeout = self.config.gap_timeout;
            let waited = self.now - since >= timeout;
            let can_ask = client.asked_at.is_none_or(|t| self.now - t >= 2 * timeout);
            if waited && can_ask {
                client.asked_at = Some(self.now);
                self.report.snapshot_requests += 1;
                up.send(self.now, Uplink::SnapshotRequest);
            }
            return;
        }
        client.gap_since = None;
        let seq = client.replica.seq();
        if client.decided_at == Some(seq) {
            return;
        }
        if let Some(body) = client.body(may_start) {
            client.next_id += 1;
            client.decided_at = Some(seq);
            self.report.requests += 1;
            up.send(
                self.now,
                Uplink::Request(ClientRequest {
                    seat: client.seat,
                    request_id: format!("{}-{}", client.seat.index(), client.next_id),
                    seq: Some(seq),
                    body,
                }),
            );
        }
    }

    fn session(&mut self, index: u64, quota: u64, rng: &mut ChaCha8Rng) -> Option<SessionReport> {
        let cfg = MatchConfig {
            starting_stack: self.config.starting_stack,
            small_blind: self.config.small_blind,
            big_blind: self.config.big_blind,
            deck_mode: self.config.deck_mode,
            rng_seed: rng.random(),
        };
        let mut host = match Host::new(cfg) {
            Ok(h) => h,
            Err(e) => {
                self.error(format!("host: {e}"));
                return None;
            }
        };
        let model = self.config.channel;
        let mut down = [link(model, rng), link(model, rng)];
        let mut up = [link(model, rng), link(model, rng)];
        let mut clients = Seat::BOTH.map(|seat| Client {
            seat,
            replica: Replica::from_snapshot(seat, host.snapshot(seat))
                .expect("host snapshots are self-consistent"),
            rng: ChaCha8Rng::seed_from_u64(rng.random()),
            next_id: 0,
            decided_at: None,
            gap_since: None,
            asked_at: None,
            host_seq: 0,
        });
        let joined = [
            host.seat_player(Seat::ZERO, "p0"),
            host.seat_player(Seat::ONE, "p1"),
        ];
        self.broadcast(index, &joined, &mut down);

        loop {
            self.now += 1;
            if self.now > self.config.max_ticks {
                self.error(format!(
                    "session {index} did not settle within the tick budget"
                ));
                break;
            }
            for seat in Seat::BOTH {
                for msg in up[seat.index()].deliver(self.now) {
                    match msg {
                        Uplink::Request(req) => match host.host_apply(&req) {
                            Ok(events) => self.broadcast(index, &events, &mut down),
                            Err(r) => {
                                down[seat.index()].send(self.now, Downlink::Reject { seq: r.seq })
                            }
                        },
                        Uplink::SnapshotRequest => down[seat.index()]
                            .send(self.now, Downlink::Snapshot(host.snapshot(seat))),
                    }
                }
            }
            if self.now.is_multiple_of(self.config.gap_timeout.max(1)) {
                for seat in Seat::BOTH {
                    let beat = Downlink::Heartbeat { seq: host.seq() };
                    down[seat.index()].send(self.now, beat);
                }
            }
            for seat in Seat::BOTH {
                for msg in down[seat.index()].deliver(self.now) {
                    self.receive(&mut clients[seat.index()], msg);
                }
            }
            let played = host.state().match_state.hands_played as u64;
            let may_start = played < quota;
            for seat in Seat::BOTH {
                self.decide(&mut clients[seat.index()], may_start, &mut up[seat.index()]);
            }

            let finished = (!may_start || host.state().match_state.is_over())
                && !host.state().hand_in_progress();
            let quiet =
                down.iter().all(SimChannel::is_empty) && up.iter().all(SimChannel::is_empty);
            let caught_up = clients
                .iter()
                .all(|c| c.replica.seq() == host.seq() && !c.replica.needs_snapshot());
            if finished && quiet && caught_up {
                break;
            }
        }

        let host_hashes = Seat::BOTH.map(|s| host.view_hash(s));
        let replica_hashes = clients.each_ref().map(|c| c.replica.hash().to_string());
        let converged =
            host_hashes == replica_hashes && clients.iter().all(|c| c.replica.seq() == host.seq());
        Some(SessionReport {
            hands: host.state().match_state.hands_played as u64,
            events: host.seq(),
            host_hashes,
            replica_hashes,
            converged,
        })
    }
}

/// Plays `config.hands` hands across as many sessions as it takes, a new
/// session starting whenever a match ends.
pub fn converge_test(config: &ConvergeConfig) -> ConvergenceReport {
    let mut sim = Sim {
        config,
        report: ConvergenceReport {
            config: config.clone(),
            hands: 0,
            events: 0,
            ticks: 0,
            requests: 0,
            rejects: 0,
            duplicate_events: 0,
            gaps_detected: 0,
            hash_mismatches: 0,
            apply_failures: 0,
            snapshot_requests: 0,
            recoveries: 0,
            stale_snapshots: 0,
            sessions: Vec::new(),
            errors: Vec::new(),
            converged: false,
        },
        now: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut index = 0;
    while sim.report.hands < config.hands {
        let quota = config.hands - sim.report.hands;
        let Some(s) = sim.session(index, quota, &mut rng) else {
            break;
        };
        index += 1;
        sim.report.hands += s.hands;
        sim.report.events += s.events;
        let stuck = s.hands == 0;
        sim.report.sessions.push(s);
        if stuck || !sim.report.errors.is_empty() {
            break;
        }
    }
    sim.report.ticks = sim.now;
    sim.report.converged = sim.report.errors.is_empty()
        && sim.report.hands >= config.hands
        && sim.report.sessions.iter().all(|s| s.converged);
    sim.report
}
