//! A seeded in-memory link that delays, duplicates and reorders messages.
//! Nothing is lost unless the caller drops it before sending.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    /// Each message is delayed by 0..=max_delay ticks.
    pub max_delay: u64,
    /// Chance that a message is delivered twice.
    pub duplicate_p: f64,
    /// How many ready messages may overtake each other in one tick.
    pub reorder_window: usize,
    pub seed: u64,
}

impl ChannelModel {
    pub fn perfect(seed: u64) -> ChannelModel {
        ChannelModel {
            max_delay: 0,
            duplicate_p: 0.0,
            reorder_window: 1,
            seed,
        }
    }

    pub fn faulty(seed: u64) -> ChannelModel {
        ChannelModel {
            max_delay: 5,
            duplicate_p: 0.1,
            reorder_window: 4,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
struct InFlight<T> {
    due: u64,
    order: u64,
    item: T,
}

#[derive(Debug, Clone)]
pub struct SimChannel<T> {
    model: ChannelModel,
    rng: ChaCha8Rng,
    in_flight: Vec<InFlight<T>>,
    next_order: u64,
    duplicates: u64,
}

impl<T: Clone> SimChannel<T> {
    pub fn new(model: ChannelModel) -> SimChannel<T> {
        SimChannel {
            model,
            rng: ChaCha8Rng::seed_from_u64(model.seed),
            in_flight: Vec::new(),
            next_order: 0,
            duplicates: 0,
        }
    }

    fn enqueue(&mut self, now: u64, item: T) {
        let due = now + self.rng.random_range(0..=self.model.max_delay);
        self.in_flight.push(InFlight {
            due,
            order: self.next_order,
            item,
        });
        self.next_order += 1;
    }

    pub fn send(&mut self, now: u64, item: T) {
        if self.model.duplicate_p > 0.0 && self.rng.random_bool(self.model.duplicate_p) {
            self.duplicates += 1;
            self.enqueue(now, item.clone());
        }
        self.enqueue(now, item);
    }

    /// Everything due by `now`, roughly in send order with bounded overtaking.
    pub fn deliver(&mut self, now: u64) -> Vec<T> {
        let (mut ready, later): (Vec<_>, Vec<_>) =
            self.in_flight.drain(..).partition(|m| m.due <= now);
        self.in_flight = later;
        ready.sort_by_key(|m| (m.due, m.order));
        let window = self.model.reorder_window.max(1);
        let mut out = Vec::with_capacity(ready.len());
        while !ready.is_empty() {
            let pick = self.rng.random_range(0..window.min(ready.len()));
            out.push(ready.remove(pick).item);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.in_flight.is_empty()
    }

    pub fn duplicates(&self) -> u64 {
        self.duplicates
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_channel_is_fifo_and_immediate() {
        let mut c = SimChannel::new(ChannelModel::perfect(0));
        for i in 0..10 {
            c.send(3, i);
        }
        assert_eq!(c.deliver(3), (0..10).collect::<Vec<_>>());
        assert!(c.is_empty());
    }

    #[test]
    fn faulty_channel_delivers_everything_eventually() {
        let mut c = SimChannel::new(ChannelModel::faulty(7));
        for i in 0..200 {
            c.send(i / 10, i);
        }
        let mut got = Vec::new();
        for t in 0..100 {
            got.extend(c.deliver(t));
        }
        assert!(c.is_empty());
        assert_eq!(got.len() as u64, 200 + c.duplicates());
        let mut unique = got.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique, (0..200).collect::<Vec<_>>());
        assert_ne!(got, {
            let mut s = got.clone();
            s.sort();
            s
        });
    }
}
