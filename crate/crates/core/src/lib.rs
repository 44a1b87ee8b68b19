//! Exact verification toolkit for Z4-Godeaux surfaces carrying an Enriques
//! involution, the double and bidouble covers behind them, and the quadric
//! cone degenerations.

pub mod error;
pub mod cli;
pub mod cover;
pub mod exact;
pub mod family;
pub mod quadric;
pub mod rep;
pub mod suite;
pub mod report;
pub mod variety;
pub mod wpoly;

pub use error::{Error, Result};
