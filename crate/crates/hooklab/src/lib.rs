#![forbid(unsafe_code)]

pub mod fingerprint;
pub mod partition;
pub mod degree;
pub mod cluster;
pub mod multiplicity;
