//! Terminal front ends and report runners behind the `headsup` binary.

pub mod hotseat;
pub mod menu;
pub mod remote;
pub mod runs;
