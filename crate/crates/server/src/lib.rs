//! Session server for two-seat matches. Clients create a session, share its
//! six-character join code, and exchange JSON frames with the server over a
//! websocket or the in-process transport.

pub mod client;
pub mod lobby;
pub mod local;
pub mod protocol;
pub mod ws;

pub use lobby::{Connection, Lobby, Phase};
pub use protocol::{ClientFrame, Controls, MatchSettings, ServerFrame};
pub use ws::{router, serve, ServerConfig};
