//! Deterministic checks of the engine and of replication: an exhaustive
//! walk of the betting automaton, random-play fuzzing, and convergence of
//! replicas over unreliable links.

mod channel;
mod converge;
mod explore;
mod fuzz;
pub mod policy;

pub use channel::{ChannelModel, SimChannel};
pub use converge::{
    converge_test, ConvergeConfig, ConvergenceReport, Fault, FaultKind, SessionReport,
};
pub use explore::{explore_dfa, EdgeCounts, ExplorationReport, StackConfig, TerminalCounts};
pub use fuzz::{fuzz_matches, FuzzConfig, FuzzMode, FuzzReport, Violation};
