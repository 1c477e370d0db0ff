//! Exact and simulated coverage depth for coded DNA storage under random
//! access: expectations, bounds, an exact Markov-chain oracle and a
//! deterministic Monte-Carlo engine.
#![no_std]

extern crate alloc;

pub mod analytic;
pub mod combinatorics;
mod error;
pub mod exactdp;
pub mod montecarlo;
pub mod schemes;

pub use error::{Error, Result};
