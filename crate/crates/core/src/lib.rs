//! Entropy-stable, well-balanced split-form SBP discretisations of the
//! one-dimensional shallow water equations.

pub mod cli;
pub mod error;
pub mod fluxes;
pub mod limiter;
pub mod physics;
pub mod scenarios;
pub mod semidisc;
pub mod sbp;
pub mod time;

pub use error::{Result, SweError};
