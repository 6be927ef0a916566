//! Forward-error-correction toolkit around regular LDPC codes: code
//! construction and encoding over GF(2), layered belief-propagation
//! decoding, an AWGN link simulator with BPSK signalling, iteration-count
//! calibration for early-terminated decoding, and a radio energy model
//! that prices transmit power against decoder work.
//!
//! The crate is deterministic end to end: every randomized component is
//! seeded explicitly and independent random streams are derived per frame,
//! so identical inputs reproduce identical outputs bit for bit.

pub mod channel;
pub mod decoder;
pub mod energy;
pub mod error;
pub mod gf2;
pub mod montecarlo;

pub use error::{Error, Result};
