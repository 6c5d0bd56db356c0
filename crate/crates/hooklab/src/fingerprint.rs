//! 128-bit fingerprints for grouping multisets and exponent vectors.
//!
//! Grouping keys are SHA-256 digests truncated to 128 bits. A one-byte
//! domain tag keeps hook multisets, degree vectors and class-size vectors
//! from ever sharing a key space. Callers must still confirm equality
//! exactly on fingerprint collision; at 128 bits a collision is
//! astronomically unlikely but the exact check keeps results unconditional.

use sha2::{Digest, Sha256};

/// Domain tag for hook-length multisets.
pub const TAG_HOOKS: u8 = 1;
/// Domain tag for character-degree exponent vectors.
pub const TAG_DEGREE: u8 = 2;
/// Domain tag for conjugacy-class-size exponent vectors.
pub const TAG_CLASS_SIZE: u8 = 3;

pub fn fingerprint_bytes(tag: u8, data: &[u8]) -> u128 {
    let mut hasher = Sha256::new();
    hasher.update([tag]);
    hasher.update(data);
    let digest = hasher.finalize();
    u128::from_le_bytes(digest[..16].try_into().unwrap())
}

pub fn fingerprint_u16s(tag: u8, values: &[u16]) -> u128 {
    let mut bytes = Vec::with_capacity(values.len() * 2);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fingerprint_bytes(tag, &bytes)
}

pub fn fingerprint_u32s(tag: u8, values: &[u32]) -> u128 {
    let mut bytes = Vec::with_capacity(values.len() * 4);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fingerprint_bytes(tag, &bytes)
}
