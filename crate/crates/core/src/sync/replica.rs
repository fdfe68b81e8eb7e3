use std::collections::BTreeMap;

use thiserror::Error;

use super::{Event, GameState, Snapshot};
use crate::engine::{GameError, Seat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplicaError {
    #[error("gap: expected seq {expected}, got {got}")]
    GapDetected { expected: u64, got: u64 },
    #[error("state hash mismatch after seq {seq}")]
    HashMismatch { seq: u64 },
    #[error("event {seq} could not be applied: {source}")]
    Rejected { seq: u64, source: GameError },
    #[error("replica diverged and is waiting for a snapshot")]
    Diverged,
    #[error("snapshot at seq {snapshot} is older than replica at seq {replica}")]
    StaleSnapshot { snapshot: u64, replica: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApplyOutcome {
    /// Number of events applied, including any buffered ones it unblocked.
    Applied(usize),
    /// Already applied; nothing changed.
    Duplicate,
}

/// A client's copy of one seat's view. State only ever changes through
/// [`Replica::apply`] and [`Replica::recover`].
#[derive(Debug, Clone)]
pub struct Replica {
    seat: Seat,
    seq: u64,
    state: GameState,
    hash: String,
    pending: BTreeMap<u64, Event>,
    diverged: bool,
}

impl Replica {
    /// Starts from a snapshot, typically the one received on joining.
    pub fn from_snapshot(seat: Seat, snapshot: Snapshot) -> Result<Replica, ReplicaError> {
        let hash = snapshot.state.hash();
        if hash != snapshot.state_hash {
            return Err(ReplicaError::HashMismatch { seq: snapshot.seq });
        }
        Ok(Replica {
            seat,
            seq: snapshot.seq,
            state: snapshot.state,
            hash,
            pending: BTreeMap::new(),
            diverged: false,
        })
    }

    pub fn seat(&self) -> Seat {
        self.seat
    }

    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn is_diverged(&self) -> bool {
        self.diverged
    }

    /// Events held back because an earlier one has not arrived.
    pub fn buffered(&self) -> usize {
        self.pending.len()
    }

    /// True when only a snapshot can bring this replica up to date: after a
    /// divergence, or while a gap is blocking buffered events.
    pub fn needs_snapshot(&self) -> bool {
        self.diverged || !self.pending.is_empty()
    }

    /// Applies the next event in sequence. Later events are buffered and
    /// reported as a gap; earlier ones are ignored.
    pub fn apply(&mut self, event: Event) -> Result<ApplyOutcome, ReplicaError> {
        if event.seq <= self.seq {
            return Ok(ApplyOutcome::Duplicate);
        }
        if self.diverged {
            self.pending.insert(event.seq, event);
            return Err(ReplicaError::Diverged);
        }
        if event.seq > self.seq + 1 {
            let got = event.seq;
            self.pending.insert(event.seq, event);
            return Err(ReplicaError::GapDetected {
                expected: self.seq + 1,
                got,
            });
        }
        self.apply_next(event)?;
        let drained = self.drain()?;
        Ok(ApplyOutcome::Applied(1 + drained))
    }

    fn apply_next(&mut self, event: Event) -> Result<(), ReplicaError> {
        debug_assert_eq!(event.seq, self.seq + 1);
        let next = match self.state.apply(&event.body) {
            Ok(next) => next,
            Err(source) => {
                self.diverged = true;
                return Err(ReplicaError::Rejected {
                    seq: event.seq,
                    source,
                });
            }
        };
        let hash = next.hash();
        if hash != event.state_hash {
            self.diverged = true;
            return Err(ReplicaError::HashMismatch { seq: event.seq });
        }
        self.state = next;
        self.hash = hash;
        self.seq = event.seq;
        Ok(())
    }

    fn drain(&mut self) -> Result<usize, ReplicaError> {
        let mut applied = 0;
        while let Some(event) = self.pending.remove(&(self.seq + 1)) {
            self.apply_next(event)?;
            applied += 1;
        }
        Ok(applied)
    }

    /// Replaces the state with a snapshot, then applies any buffered events
    /// that follow it. Returns how many buffered events were applied.
    pub fn recover(&mut self, snapshot: Snapshot) -> Result<usize, ReplicaError> {
        if snapshot.seq < self.seq {
            return Err(ReplicaError::StaleSnapshot {
                snapshot: snapshot.seq,
                replica: self.seq,
            });
        }
        let hash = snapshot.state.hash();
        if hash != snapshot.state_hash {
            return Err(ReplicaError::HashMismatch { seq: snapshot.seq });
        }
        self.state = snapshot.state;
        self.hash = hash;
        self.seq = snapshot.seq;
        self.diverged = false;
        let seq = self.seq;
        self.pending.retain(|&s, _| s > seq);
        self.drain()
    }
}
