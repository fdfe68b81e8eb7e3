//! Canonical encoding and hashing of replicated state.
//!
//! The canonical form is compact JSON produced by serde with struct fields
//! in declaration order and no maps, so identical states always encode to
//! identical bytes. The hash is SHA-256 of those bytes, lowercase hex.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn canonical_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    serde_json::to_vec(value).expect("state types always serialize")
}

pub fn state_hash<T: Serialize>(value: &T) -> String {
    hex::encode(Sha256::digest(canonical_bytes(value)))
}
