//! Resonant k-photon Jaynes-Cummings dynamics for binomial-state fields.
//!
//! The crate builds initial field states ([`states`]), evaluates the exact
//! time evolution and normally ordered field moments ([`dynamics`]), derives
//! higher-order squeezing factors and their rescaled forms ([`squeezing`]),
//! and compares the resulting series ([`analysis`]). The [`cli`] module backs
//! the `bsjcm` binary.

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod numerics;
pub mod series;
pub mod squeezing;
pub mod states;

pub use error::{Error, Result};
pub use series::{SeriesLabel, TimeSeries};
pub use states::{Epsilon, FieldStateSpec, FockAmplitudes, Parity};
