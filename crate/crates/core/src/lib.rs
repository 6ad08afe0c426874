//! Capacity bounds for discrete memoryless noncausal relay channels.
//!
//! The relay observes its whole received block before transmitting, so the
//! relay input may depend on the entire sequence `y2^n`. This crate computes
//! the classical decode-forward, partial decode-forward, compress-forward and
//! cutset bounds, the Gelfand-Pinsker variants that treat `y2^n` as
//! noncausal side information, and an upper bound that is tight for
//! degraded channels. Bounds are maximized numerically ([`optimizer`]) and
//! the GP decode-forward scheme can be simulated at short blocklengths
//! ([`sim`]).

pub mod bounds;
pub mod channel;
pub mod error;
pub mod optimizer;
pub mod prob;
pub mod sim;
pub mod witness;

pub use bounds::{BoundKind, ObjectiveValue, Term};
pub use channel::{DeterministicMap, NoncausalRelayChannel};
pub use error::{Error, Result};
pub use optimizer::{maximize, maximize_all, BoundResult, SearchConfig};
pub use prob::{Alphabet, CondPmf, JointPmf, Pmf};
pub use witness::Witness;
